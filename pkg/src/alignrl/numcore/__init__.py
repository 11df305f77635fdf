"""Minimal dense-tensor core: reverse-mode autodiff, Adam, orthogonal init."""

from .gradcheck import finite_diff_check
from .init import orthogonal_init, zeros_init
from .ops import (
    add, clip, conv2d, div, exp, gather_rows, l2_normalize, log, log_softmax,
    logsumexp, matmul, mean, minimum, mul, pointwise_conv1d, relu, reshape,
    safe_log, softmax, sub, sum, tanh, transpose,
)
from .optim import AdamState, adam_step, clip_grad_norm, zero_grads
from .tensor import GradTape, Tensor, as_tensor, backward, is_grad_enabled, no_grad

__all__ = [
    "Tensor", "GradTape", "no_grad", "is_grad_enabled", "backward", "as_tensor",
    "add", "sub", "mul", "div", "matmul", "transpose", "reshape",
    "relu", "tanh", "exp", "log", "safe_log", "sum", "mean",
    "softmax", "log_softmax", "logsumexp", "l2_normalize",
    "conv2d", "pointwise_conv1d", "gather_rows", "clip", "minimum",
    "AdamState", "adam_step", "zero_grads", "clip_grad_norm",
    "orthogonal_init", "zeros_init", "finite_diff_check",
]
