"""Central finite-difference gradient verification.

Run this on float64 graphs: the check compares the analytic gradient of a
scalar-valued function against central differences and reports the worst
relative error over all coordinates.  A healthy op lands far below 1e-4 in
64-bit mode; a corrupted gradient shows up orders of magnitude above it.
"""

from __future__ import annotations

import numpy as np

from ..errors import ContractError
from .tensor import Tensor, backward

__all__ = ["finite_diff_check"]


def finite_diff_check(f, x: Tensor, eps: float = 1e-5) -> float:
    """Max relative error between analytic and numeric gradients of f at x.

    ``f`` must map a Tensor to a scalar Tensor and be deterministic.  The
    error per coordinate is |analytic - numeric| / max(|analytic|, |numeric|,
    1e-8).
    """
    if not (1e-6 <= eps <= 1e-3):
        raise ContractError(f"finite_diff_check: eps {eps} outside [1e-6, 1e-3]")

    probe = Tensor(x.data.copy(), requires_grad=True)
    loss = f(probe)
    if loss.data.size != 1:
        raise ContractError(f"finite_diff_check: f must return a scalar, got shape {loss.data.shape}")
    backward(loss)
    analytic = probe.grad.copy() if probe.grad is not None else np.zeros_like(probe.data)

    flat = probe.data.reshape(-1)
    numeric = np.zeros_like(flat)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + eps
        f_plus = float(f(probe.detach()).data)
        flat[i] = orig - eps
        f_minus = float(f(probe.detach()).data)
        flat[i] = orig
        numeric[i] = (f_plus - f_minus) / (2.0 * eps)
    numeric = numeric.reshape(probe.data.shape)

    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-8)
    return float(np.max(np.abs(analytic - numeric) / denom))
