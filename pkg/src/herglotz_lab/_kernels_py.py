"""Pure numpy versions of the compiled kernels (import-time fallback)."""

import numpy as np


def atom_sum(positions, weights, zs):
    """Regularized Cauchy sum over point masses.

    Returns ``out[m] = sum_j W_j ((lam_j - z_m)^{-1} - lam_j/(1+lam_j^2))``
    with shape ``(len(zs), n, n)``.
    """
    pos = np.ascontiguousarray(positions, dtype=float)
    W = np.ascontiguousarray(weights, dtype=complex)
    zs = np.ascontiguousarray(zs, dtype=complex)
    n = W.shape[1] if W.ndim == 3 else 1
    if pos.size == 0:
        return np.zeros((zs.size, n, n), dtype=complex)
    reg = pos / (1.0 + pos * pos)
    out = np.empty((zs.size, n, n), dtype=complex)
    flat = W.reshape(pos.size, n * n)
    for m, z in enumerate(zs):
        c = 1.0 / (pos - z) - reg
        out[m] = (c @ flat).reshape(n, n)
    return out
