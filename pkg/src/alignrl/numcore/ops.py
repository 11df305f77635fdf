"""Differentiable operations over :class:`~alignrl.numcore.tensor.Tensor`.

Conventions:
  * every op validates shapes up front and raises
    :class:`~alignrl.errors.DimensionError` naming the offending shapes;
  * backward closures ACCUMULATE into parent grads (additive semantics);
  * ops preserve the input dtype (float32 for training, float64 when the
    caller builds a verification graph).
"""

from __future__ import annotations

import numpy as np

from ..errors import ContractError, DegenerateInputError, DimensionError
from .tensor import Tensor, as_tensor, make_node, require_matching_inner, unbroadcast

__all__ = [
    "add", "sub", "mul", "div", "matmul", "transpose", "reshape",
    "relu", "tanh", "exp", "log", "safe_log", "sum", "mean",
    "softmax", "log_softmax", "logsumexp", "l2_normalize",
    "conv2d", "pointwise_conv1d", "gather_rows", "clip", "minimum",
]


# -- binary elementwise (numpy broadcasting, grads unbroadcast) -------------

def add(a: Tensor, b) -> Tensor:
    b = as_tensor(b, like=a)
    try:
        data = a.data + b.data
    except ValueError:
        raise DimensionError(f"add: incompatible shapes {a.data.shape} and {b.data.shape}")

    def backward_fn(g):
        if a.requires_grad:
            a.accumulate_grad(unbroadcast(g, a.data.shape))
        if b.requires_grad:
            b.accumulate_grad(unbroadcast(g, b.data.shape))

    return make_node(data, (a, b), backward_fn)


def sub(a: Tensor, b) -> Tensor:
    b = as_tensor(b, like=a)
    try:
        data = a.data - b.data
    except ValueError:
        raise DimensionError(f"sub: incompatible shapes {a.data.shape} and {b.data.shape}")

    def backward_fn(g):
        if a.requires_grad:
            a.accumulate_grad(unbroadcast(g, a.data.shape))
        if b.requires_grad:
            b.accumulate_grad(unbroadcast(-g, b.data.shape))

    return make_node(data, (a, b), backward_fn)


def mul(a: Tensor, b) -> Tensor:
    b = as_tensor(b, like=a)
    try:
        data = a.data * b.data
    except ValueError:
        raise DimensionError(f"mul: incompatible shapes {a.data.shape} and {b.data.shape}")

    def backward_fn(g):
        if a.requires_grad:
            a.accumulate_grad(unbroadcast(g * b.data, a.data.shape))
        if b.requires_grad:
            b.accumulate_grad(unbroadcast(g * a.data, b.data.shape))

    return make_node(data, (a, b), backward_fn)


def div(a: Tensor, b) -> Tensor:
    b = as_tensor(b, like=a)
    try:
        data = a.data / b.data
    except ValueError:
        raise DimensionError(f"div: incompatible shapes {a.data.shape} and {b.data.shape}")

    def backward_fn(g):
        if a.requires_grad:
            a.accumulate_grad(unbroadcast(g / b.data, a.data.shape))
        if b.requires_grad:
            b.accumulate_grad(unbroadcast(-g * a.data / (b.data * b.data), b.data.shape))

    return make_node(data, (a, b), backward_fn)


# -- linear algebra ----------------------------------------------------------

def matmul(a: Tensor, b: Tensor) -> Tensor:
    require_matching_inner(a, b)
    data = a.data @ b.data

    def backward_fn(g):
        if a.requires_grad:
            a.accumulate_grad(g @ b.data.T)
        if b.requires_grad:
            b.accumulate_grad(a.data.T @ g)

    return make_node(data, (a, b), backward_fn)


def transpose(a: Tensor) -> Tensor:
    if a.data.ndim != 2:
        raise DimensionError(f"transpose expects a 2-D tensor, got shape {a.data.shape}")
    data = a.data.T.copy()

    def backward_fn(g):
        if a.requires_grad:
            a.accumulate_grad(g.T)

    return make_node(data, (a,), backward_fn)


def reshape(a: Tensor, shape) -> Tensor:
    data = a.data.reshape(shape)

    def backward_fn(g):
        if a.requires_grad:
            a.accumulate_grad(g.reshape(a.data.shape))

    return make_node(data, (a,), backward_fn)


# -- unary elementwise --------------------------------------------------------

def relu(a: Tensor) -> Tensor:
    data = np.maximum(a.data, 0)

    def backward_fn(g):
        if a.requires_grad:
            a.accumulate_grad(g * (a.data > 0))

    return make_node(data, (a,), backward_fn)


def tanh(a: Tensor) -> Tensor:
    data = np.tanh(a.data)

    def backward_fn(g):
        if a.requires_grad:
            a.accumulate_grad(g * (1.0 - data * data))

    return make_node(data, (a,), backward_fn)


def exp(a: Tensor) -> Tensor:
    data = np.exp(a.data)

    def backward_fn(g):
        if a.requires_grad:
            a.accumulate_grad(g * data)

    return make_node(data, (a,), backward_fn)


def log(a: Tensor) -> Tensor:
    data = np.log(a.data)

    def backward_fn(g):
        if a.requires_grad:
            a.accumulate_grad(g / a.data)

    return make_node(data, (a,), backward_fn)


def safe_log(a: Tensor, floor: float = 1e-12) -> Tensor:
    """log(max(a, floor)); gradient is zero where the floor is active."""
    clipped = np.maximum(a.data, floor)
    data = np.log(clipped)

    def backward_fn(g):
        if a.requires_grad:
            a.accumulate_grad(g * (a.data > floor) / clipped)

    return make_node(data, (a,), backward_fn)


# -- reductions ----------------------------------------------------------------

def sum(a: Tensor, axis=None, keepdims: bool = False) -> Tensor:
    data = a.data.sum(axis=axis, keepdims=keepdims)

    def backward_fn(g):
        if not a.requires_grad:
            return
        if axis is None:
            a.accumulate_grad(np.broadcast_to(g, a.data.shape).copy())
        else:
            ge = g if keepdims else np.expand_dims(g, axis)
            a.accumulate_grad(np.broadcast_to(ge, a.data.shape).copy())

    return make_node(data, (a,), backward_fn)


def mean(a: Tensor, axis=None, keepdims: bool = False) -> Tensor:
    n = a.data.size if axis is None else a.data.shape[axis]
    data = a.data.mean(axis=axis, keepdims=keepdims)

    def backward_fn(g):
        if not a.requires_grad:
            return
        if axis is None:
            a.accumulate_grad(np.broadcast_to(g / n, a.data.shape).copy())
        else:
            ge = g if keepdims else np.expand_dims(g, axis)
            a.accumulate_grad(np.broadcast_to(ge / n, a.data.shape).copy())

    return make_node(data, (a,), backward_fn)


# -- normalizations -------------------------------------------------------------

def softmax(x: Tensor, temperature: float = 1.0, axis: int = -1) -> Tensor:
    """Temperature-scaled softmax with max-subtraction for stability."""
    if temperature <= 0:
        raise ContractError(f"softmax temperature must be > 0, got {temperature}")
    z = x.data / temperature
    z = z - z.max(axis=axis, keepdims=True)
    e = np.exp(z)
    data = e / e.sum(axis=axis, keepdims=True)

    def backward_fn(g):
        if x.requires_grad:
            inner = (g * data).sum(axis=axis, keepdims=True)
            x.accumulate_grad(data * (g - inner) / temperature)

    return make_node(data, (x,), backward_fn)


def log_softmax(x: Tensor, temperature: float = 1.0, axis: int = -1) -> Tensor:
    if temperature <= 0:
        raise ContractError(f"log_softmax temperature must be > 0, got {temperature}")
    z = x.data / temperature
    z = z - z.max(axis=axis, keepdims=True)
    lse = np.log(np.exp(z).sum(axis=axis, keepdims=True))
    data = z - lse
    probs = np.exp(data)

    def backward_fn(g):
        if x.requires_grad:
            x.accumulate_grad((g - probs * g.sum(axis=axis, keepdims=True)) / temperature)

    return make_node(data, (x,), backward_fn)


def logsumexp(x: Tensor, axis: int = -1) -> Tensor:
    m = x.data.max(axis=axis, keepdims=True)
    e = np.exp(x.data - m)
    s = e.sum(axis=axis, keepdims=True)
    data = (np.log(s) + m).squeeze(axis)
    softmax_vals = e / s

    def backward_fn(g):
        if x.requires_grad:
            x.accumulate_grad(np.expand_dims(g, axis) * softmax_vals)

    return make_node(data, (x,), backward_fn)


def l2_normalize(v: Tensor, axis: int = -1, eps: float = 1e-12) -> Tensor:
    """v / ||v||2 along ``axis``; raises on a near-zero norm."""
    sq = (v.data * v.data).sum(axis=axis, keepdims=True)
    norm = np.sqrt(sq)
    if np.any(norm <= eps):
        raise DegenerateInputError(f"l2_normalize: input norm <= {eps}")
    data = v.data / norm

    def backward_fn(g):
        if v.requires_grad:
            inner = (g * data).sum(axis=axis, keepdims=True)
            v.accumulate_grad((g - data * inner) / norm)

    return make_node(data, (v,), backward_fn)


# -- convolutions ----------------------------------------------------------------

def conv2d(x: Tensor, kernels: Tensor, stride: int = 1) -> Tensor:
    """Valid (unpadded) 2-D convolution.

    ``x`` is (c_in, h, w) or batched (b, c_in, h, w); ``kernels`` is
    (c_out, c_in, kh, kw).  Output spatial size is floor((h-kh)/stride)+1.
    """
    squeezed = x.data.ndim == 3
    xd = x.data[None] if squeezed else x.data
    kd = kernels.data
    if xd.ndim != 4 or kd.ndim != 4:
        raise DimensionError(f"conv2d: expected (b,c,h,w) and (o,c,kh,kw), got {x.data.shape} and {kd.shape}")
    b, ci, h, w = xd.shape
    co, kci, kh, kw = kd.shape
    if kci != ci:
        raise DimensionError(f"conv2d: input channels {ci} != kernel channels {kci}")
    if kh > h or kw > w:
        raise DimensionError(f"conv2d: kernel {kh}x{kw} larger than input {h}x{w}")
    if stride < 1:
        raise ContractError(f"conv2d stride must be >= 1, got {stride}")

    win = np.lib.stride_tricks.sliding_window_view(xd, (kh, kw), axis=(2, 3))[:, :, ::stride, ::stride]
    ho, wo = win.shape[2], win.shape[3]
    # (b,ci,ho,wo,kh,kw) x (co,ci,kh,kw) -> (b,ho,wo,co)
    out = np.tensordot(win, kd, axes=([1, 4, 5], [1, 2, 3]))
    data = np.ascontiguousarray(out.transpose(0, 3, 1, 2))

    def backward_fn(g):
        gb = g[None] if squeezed else g
        if kernels.requires_grad:
            dk = np.tensordot(gb, win, axes=([0, 2, 3], [0, 2, 3]))
            kernels.accumulate_grad(dk)
        if x.requires_grad:
            # dwin[b,ci,ho,wo,kh,kw] = sum_co g[b,co,ho,wo] * k[co,ci,kh,kw]
            dwin = np.tensordot(gb, kd, axes=([1], [0]))  # (b,ho,wo,ci,kh,kw)
            dx = np.zeros_like(xd)
            for i in range(kh):
                for j in range(kw):
                    dx[:, :, i:i + stride * ho:stride, j:j + stride * wo:stride] += (
                        dwin[:, :, :, :, i, j].transpose(0, 3, 1, 2)
                    )
            x.accumulate_grad(dx[0] if squeezed else dx)

    return make_node(data[0] if squeezed else data, (x, kernels), backward_fn)


def pointwise_conv1d(x: Tensor, kernels: Tensor, bias: Tensor) -> Tensor:
    """1-D convolution with kernel size 1 (a per-position channel mix).

    ``x`` is (c_in, length) or (b, c_in, length); ``kernels`` is
    (c_out, c_in); ``bias`` is (c_out,).  out[o, p] = b[o] + sum_c k[o,c] x[c,p].
    Trainable parameter count is c_out*c_in + c_out.
    """
    squeezed = x.data.ndim == 2
    xd = x.data[None] if squeezed else x.data
    kd, bd = kernels.data, bias.data
    if xd.ndim != 3 or kd.ndim != 2 or bd.ndim != 1:
        raise DimensionError(
            f"pointwise_conv1d: expected (b,c,len), (o,c), (o,), got {x.data.shape}, {kd.shape}, {bd.shape}")
    if kd.shape[1] != xd.shape[1]:
        raise DimensionError(f"pointwise_conv1d: input channels {xd.shape[1]} != kernel channels {kd.shape[1]}")
    if bd.shape[0] != kd.shape[0]:
        raise DimensionError(f"pointwise_conv1d: bias size {bd.shape[0]} != out channels {kd.shape[0]}")

    out = np.tensordot(xd, kd, axes=([1], [1]))  # (b, len, co)
    data = np.ascontiguousarray(out.transpose(0, 2, 1)) + bd[None, :, None]

    def backward_fn(g):
        gb = g[None] if squeezed else g
        if kernels.requires_grad:
            kernels.accumulate_grad(np.tensordot(gb, xd, axes=([0, 2], [0, 2])))
        if bias.requires_grad:
            bias.accumulate_grad(gb.sum(axis=(0, 2)))
        if x.requires_grad:
            dx = np.tensordot(gb, kd, axes=([1], [0])).transpose(0, 2, 1)
            x.accumulate_grad(dx[0] if squeezed else np.ascontiguousarray(dx))

    return make_node(data[0] if squeezed else data, (x, kernels, bias), backward_fn)


# -- indexing / clipping -----------------------------------------------------------

def gather_rows(x: Tensor, index) -> Tensor:
    """out[i] = x[i, index[i]] for a 2-D tensor and integer index vector."""
    idx = np.asarray(index)
    if x.data.ndim != 2 or idx.ndim != 1 or idx.shape[0] != x.data.shape[0]:
        raise DimensionError(f"gather_rows: shapes {x.data.shape} and index {idx.shape} do not align")
    rows = np.arange(x.data.shape[0])
    data = x.data[rows, idx]

    def backward_fn(g):
        if x.requires_grad:
            dx = np.zeros_like(x.data)
            np.add.at(dx, (rows, idx), g)
            x.accumulate_grad(dx)

    return make_node(data, (x,), backward_fn)


def clip(x: Tensor, lo: float, hi: float) -> Tensor:
    """Clamp values to [lo, hi]; gradient flows only through the interior."""
    data = np.clip(x.data, lo, hi)

    def backward_fn(g):
        if x.requires_grad:
            x.accumulate_grad(g * ((x.data > lo) & (x.data < hi)))

    return make_node(data, (x,), backward_fn)


def minimum(a: Tensor, b: Tensor) -> Tensor:
    """Elementwise min; gradient routes to ``a`` on ties."""
    if a.data.shape != b.data.shape:
        raise DimensionError(f"minimum: shapes {a.data.shape} and {b.data.shape} differ")
    take_a = a.data <= b.data
    data = np.where(take_a, a.data, b.data)

    def backward_fn(g):
        if a.requires_grad:
            a.accumulate_grad(g * take_a)
        if b.requires_grad:
            b.accumulate_grad(g * ~take_a)

    return make_node(data, (a, b), backward_fn)
