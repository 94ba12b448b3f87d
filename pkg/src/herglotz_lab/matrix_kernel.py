"""Small dense complex-matrix utilities.

All functions accept scalars or square arrays and return 2-D complex
arrays.  Sizes are expected to stay small (n <= 16), so everything is
plain ``numpy.linalg``.
"""

import numpy as np
from scipy import integrate

from . import config
from .errors import IllConditioned, SpectrumOnCut


def as_cmatrix(M):
    """Coerce a scalar or square array to a 2-D complex array."""
    A = np.asarray(M, dtype=complex)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    return A


def herm(M):
    """Hermitian part (M + M*)/2."""
    M = as_cmatrix(M)
    return 0.5 * (M + M.conj().T)


def imag_part(M):
    """Matrix imaginary part (M - M*)/(2i)."""
    M = as_cmatrix(M)
    return (M - M.conj().T) / 2j


def hermitian_split(M):
    """Return ``(Re M, Im M)`` with ``M = Re M + i Im M``."""
    return herm(M), imag_part(M)


def is_hermitian(H, tol=None):
    tol = config.get("tol_herm") if tol is None else tol
    H = as_cmatrix(H)
    return np.linalg.norm(H - H.conj().T) <= tol * (1.0 + np.linalg.norm(H))


def symmetrize(H):
    return herm(H)


def is_psd(H, tol=None):
    """True iff the smallest eigenvalue is >= -tol (1 + ||H||)."""
    tol = config.get("psd_tol") if tol is None else tol
    H = herm(H)
    if not np.all(np.isfinite(H)):
        return False
    w = np.linalg.eigvalsh(H)
    return bool(w[0] >= -tol * (1.0 + np.linalg.norm(H, 2)))


def min_eig(H):
    return float(np.linalg.eigvalsh(herm(H))[0])


def numerical_rank(H, rel_tol=None, abs_tol=0.0):
    """Number of singular values above ``max(rel_tol * s_max, abs_tol)``."""
    rel_tol = config.get("rank_rel_tol") if rel_tol is None else rel_tol
    s = np.linalg.svd(as_cmatrix(H), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > max(rel_tol * s[0], abs_tol)))


def hermitian_function(H, f):
    """Apply a scalar function to a Hermitian matrix through ``eigh``."""
    w, V = np.linalg.eigh(herm(H))
    return (V * f(w)) @ V.conj().T


def principal_log(M, cut_tol=1e-14, cond_max=1e8):
    """Principal matrix logarithm by eigendecomposition.

    The eigenvalues must avoid the closed negative half-line; each one is
    mapped through the scalar principal branch, so the result has spectrum
    with imaginary parts in (-pi, pi].
    """
    M = as_cmatrix(M)
    w, V = np.linalg.eig(M)
    scale = max(1.0, float(np.max(np.abs(w))))
    for mu in w:
        if abs(mu) <= cut_tol * scale or (
            mu.real < 0 and abs(mu.imag) <= cut_tol * abs(mu)
        ):
            raise SpectrumOnCut(f"eigenvalue {mu} lies on the branch cut (-inf, 0]")
    cond = np.linalg.cond(V)
    if not np.isfinite(cond) or cond > cond_max:
        raise IllConditioned(f"eigenvector condition number {cond:.3g} exceeds {cond_max:g}")
    return V @ np.diag(np.log(w)) @ np.linalg.inv(V)


def matrix_exp(L):
    w, V = np.linalg.eig(as_cmatrix(L))
    return V @ np.diag(np.exp(w)) @ np.linalg.inv(V)


def log_by_quadrature(M, epsabs=1e-11):
    """Logarithm from the resolvent integral over the negative half-line.

    ``ln M = int_{-inf}^0 [(lam - M)^{-1} - lam/(1+lam^2) I] dlam``.  Slow;
    kept as an independent cross-check for small matrices.
    """
    M = as_cmatrix(M)
    n = M.shape[0]
    eye = np.eye(n)

    def integrand(lam):
        R = np.linalg.inv(lam * eye - M) - lam / (1.0 + lam * lam) * eye
        return np.concatenate([R.real.ravel(), R.imag.ravel()])

    # Split at -1 and map (-inf, -1] to (0, 1] via lam = -1/t.
    near, _ = integrate.quad_vec(integrand, -1.0, 0.0, epsabs=epsabs, limit=500)
    far, _ = integrate.quad_vec(
        lambda t: integrand(-1.0 / t) / (t * t), 0.0, 1.0, epsabs=epsabs, limit=500
    )
    v = near + far
    return (v[: n * n] + 1j * v[n * n:]).reshape(n, n)
