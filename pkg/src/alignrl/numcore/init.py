"""Parameter initializers."""

from __future__ import annotations

import numpy as np

from .tensor import Tensor

__all__ = ["orthogonal_init", "zeros_init"]


def _resolve_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def orthogonal_init(shape, gain: float = 1.0, seed=0, dtype=np.float32) -> Tensor:
    """(Semi-)orthogonal initialization.

    For ``rows <= cols`` the rows are orthonormal (W @ W.T == gain^2 * I);
    otherwise the columns are.  Shapes with more than two dims (conv
    kernels) are flattened to (shape[0], prod(rest)) before the QR step.
    Deterministic for a given integer seed.
    """
    rng = _resolve_rng(seed)
    shape = tuple(int(s) for s in shape)
    rows = shape[0]
    cols = int(np.prod(shape[1:]))
    a = rng.standard_normal((rows, cols) if rows >= cols else (cols, rows))
    q, r = np.linalg.qr(a)
    # Fix the sign ambiguity so the distribution is uniform over the group
    # and the result is a deterministic function of the draws.
    q = q * np.sign(np.diag(r))
    if rows < cols:
        q = q.T
    w = (gain * q).reshape(shape).astype(dtype)
    t = Tensor(w, requires_grad=True)
    return t


def zeros_init(shape, dtype=np.float32) -> Tensor:
    return Tensor(np.zeros(shape, dtype=dtype), requires_grad=True)
