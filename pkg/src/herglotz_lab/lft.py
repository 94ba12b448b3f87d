"""The J-unitary group and its linear-fractional action on Herglotz matrices.

A ``2n x 2n`` matrix ``A`` is a member when ``A^* J A = J`` with
``J = [[0, -I], [I, 0]]``.  It acts by

    M_A = (A21 + A22 M)(A11 + A12 M)^{-1}.
"""

import math

import numpy as np

from . import config
from .errors import BadParams, ConditionNotMet, NotMember, SingularPencil
from .herglotz_core import DEFAULT_GRID, HerglotzFunction
from .matrix_kernel import as_cmatrix, hermitian_function, imag_part


def J(n=1):
    """``J_{2n} = [[0, -I], [I, 0]]``."""
    I = np.eye(n)
    Z = np.zeros((n, n))
    return np.block([[Z, -I], [I, Z]]).astype(complex)


class SymplecticMatrix:
    """Member of the group, stored as a full ``2n x 2n`` array."""

    def __init__(self, A, check=True, tol=None):
        A = np.asarray(A, dtype=complex)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] % 2:
            raise BadParams(f"expected a square matrix of even size, got {A.shape}")
        if check and not is_member(A, tol):
            raise NotMember(f"A^*JA - J has norm {membership_residual(A):.3e}")
        self.A = A
        self.n = A.shape[0] // 2

    @classmethod
    def from_blocks(cls, A11, A12, A21, A22, check=True):
        return cls(np.block([[as_cmatrix(A11), as_cmatrix(A12)],
                             [as_cmatrix(A21), as_cmatrix(A22)]]), check)

    @property
    def blocks(self):
        n, A = self.n, self.A
        return A[:n, :n], A[:n, n:], A[n:, :n], A[n:, n:]

    def __matmul__(self, other):
        return SymplecticMatrix(self.A @ other.A, check=False)

    def __repr__(self):
        return f"SymplecticMatrix(n={self.n})"


def _as_array(A):
    return A.A if isinstance(A, SymplecticMatrix) else np.asarray(A, dtype=complex)


def membership_residual(A):
    A = _as_array(A)
    Jn = J(A.shape[0] // 2)
    return float(np.linalg.norm(A.conj().T @ Jn @ A - Jn))


def is_member(A, tol=None):
    """``||A^* J A - J|| <= tol * max(1, ||A||^2)``."""
    A = _as_array(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] % 2:
        return False
    tol = config.get("member_tol") if tol is None else tol
    return membership_residual(A) <= tol * max(1.0, np.linalg.norm(A, 2) ** 2)


def inverse(A):
    """``[[A22^*, -A12^*], [-A21^*, A11^*]]``."""
    A11, A12, A21, A22 = A.blocks
    return SymplecticMatrix.from_blocks(
        A22.conj().T, -A12.conj().T, -A21.conj().T, A11.conj().T, check=False
    )


# -- pointwise action ----------------------------------------------------------

def _pencil_check(D, what, witness=None):
    s = np.linalg.svd(D, compute_uv=False)
    if s[-1] < config.get("pencil_tol") * max(s[0], 1e-300):
        raise SingularPencil(f"{what} is singular (sigma_min = {s[-1]:.3e})", witness)


def apply_pointwise(A, M, witness=None):
    A11, A12, A21, A22 = A.blocks
    M = as_cmatrix(M)
    D = A11 + A12 @ M
    _pencil_check(D, "A11 + A12 M", witness)
    return np.linalg.solve(D.T, (A21 + A22 @ M).T).T


def invert_pointwise(A, MA, witness=None):
    """Recover ``M`` from ``M_A``: ``M = -(A21^* - A11^* M_A)(A22^* - A12^* M_A)^{-1}``."""
    A11, A12, A21, A22 = A.blocks
    MA = as_cmatrix(MA)
    D = A22.conj().T - A12.conj().T @ MA
    _pencil_check(D, "A22^* - A12^* M_A", witness)
    N = -(A21.conj().T - A11.conj().T @ MA)
    return np.linalg.solve(D.T, N.T).T


def identity_residuals(A, M):
    """Residuals of the identities linking ``M`` and ``M_A`` at one point."""
    A11, A12, A21, A22 = A.blocks
    M = as_cmatrix(M)
    n = M.shape[0]
    MA = apply_pointwise(A, M)
    B = np.linalg.inv(A11 + A12 @ M)
    K = A22.conj().T - A12.conj().T @ MA
    Kinv = np.linalg.inv(K)
    return {
        "imag_congruence": float(np.linalg.norm(imag_part(MA) - B.conj().T @ imag_part(M) @ B)),
        "left_inverse": float(np.linalg.norm(K @ (A11 + A12 @ M) - np.eye(n))),
        "inverse_formula": float(np.linalg.norm(invert_pointwise(A, MA) - M)),
        "inverse_imag_congruence": float(
            np.linalg.norm(imag_part(M) - Kinv.conj().T @ imag_part(MA) @ Kinv)
        ),
    }


# -- action on functions -------------------------------------------------------

class TransformedFunction(HerglotzFunction):
    """``z -> M_A(z)`` for a member ``A`` and a Herglotz matrix ``M``."""

    def __init__(self, base, A):
        if base.dim != A.n:
            raise BadParams(f"A acts on {A.n}x{A.n} matrices, function has dim {base.dim}")
        self.base, self.A, self.dim = base, A, base.dim

    def _eval_upper(self, z):
        return apply_pointwise(self.A, self.base._eval_upper(z), witness=z)

    def values(self, zs):
        zs = np.ravel(np.asarray(zs, dtype=complex))
        M = self.base.values(zs)
        A11, A12, A21, A22 = self.A.blocks
        D = A11[None] + A12[None] @ M
        N = A21[None] + A22[None] @ M
        s = np.linalg.svd(D, compute_uv=False)
        bad = s[:, -1] < config.get("pencil_tol") * np.maximum(s[:, 0], 1e-300)
        if np.any(bad):
            z = complex(zs[np.argmax(bad)])
            raise SingularPencil(f"A11 + A12 M(z) is singular at z = {z}", z)
        return np.swapaxes(np.linalg.solve(np.swapaxes(D, 1, 2), np.swapaxes(N, 1, 2)), 1, 2)

    def describe(self):
        return {"kind": "transformed", "base": self.base.describe(), "A": self.A.A.tolist()}


def apply(A, h, grid=None):
    """``M_A`` as a function; the kernel condition is checked on ``grid``."""
    if not is_member(A.A):
        raise NotMember("matrix is not a member of the group")
    f = TransformedFunction(h, A)
    for z in (DEFAULT_GRID if grid is None else grid):
        f(z)  # raises SingularPencil with the witness point
    return f


# -- named members -------------------------------------------------------------

def identity(n=1):
    return SymplecticMatrix(np.eye(2 * n, dtype=complex), check=False)


def J_member(n=1):
    return SymplecticMatrix(J(n), check=False)


def _herm_param(x, n=None):
    X = as_cmatrix(x)
    if n is not None and X.shape[0] == 1 and n > 1:
        X = X[0, 0] * np.eye(n)
    if np.linalg.norm(X - X.conj().T) > 1e-12 * (1 + np.linalg.norm(X)):
        raise BadParams("parameter must be Hermitian")
    return 0.5 * (X + X.conj().T)


def shear(T):
    """``[[I, T], [0, I]]`` with ``T`` Hermitian."""
    T = _herm_param(T)
    n = T.shape[0]
    return SymplecticMatrix.from_blocks(np.eye(n), T, np.zeros((n, n)), np.eye(n))


def lower_shear(S):
    """``[[I, 0], [S, I]]`` with ``S`` Hermitian."""
    S = _herm_param(S)
    n = S.shape[0]
    return SymplecticMatrix.from_blocks(np.eye(n), np.zeros((n, n)), S, np.eye(n))


def unitary(U):
    """``diag(U, U)`` with ``U`` unitary."""
    U = as_cmatrix(U)
    n = U.shape[0]
    if np.linalg.norm(U.conj().T @ U - np.eye(n)) > 1e-10:
        raise BadParams("U must be unitary")
    Z = np.zeros((n, n))
    return SymplecticMatrix.from_blocks(U, Z, Z, U)


def rotation(alpha, beta, n=None):
    """Member relating the extension parameters ``alpha`` and ``beta``.

    ``alpha``, ``beta`` are Hermitian (scalars are promoted to multiples of
    the identity).  For commuting parameters the blocks reduce to
    ``[[cos(beta-alpha), sin(beta-alpha)], [-sin(beta-alpha), cos(beta-alpha)]]``.
    """
    a = _herm_param(alpha, n)
    b = _herm_param(beta, n if n is not None else a.shape[0])
    if a.shape != b.shape:
        a = _herm_param(alpha, b.shape[0])
    if np.ndim(alpha) == 0 and np.ndim(beta) == 0:
        # commuting scalars: drop the unimodular phase e^{i(alpha-beta)}
        t = float(np.real(beta)) - float(np.real(alpha))
        I = np.eye(a.shape[0])
        return SymplecticMatrix.from_blocks(math.cos(t) * I, math.sin(t) * I,
                                            -math.sin(t) * I, math.cos(t) * I)
    ca, sa = hermitian_function(a, np.cos), hermitian_function(a, np.sin)
    cb, sb = hermitian_function(b, np.cos), hermitian_function(b, np.sin)
    ea = hermitian_function(a, lambda w: np.exp(1j * w))
    emb = hermitian_function(b, lambda w: np.exp(-1j * w))
    A11 = emb @ (cb @ ca + sb @ sa) @ ea
    A12 = emb @ (sb @ ca - cb @ sa) @ ea
    A21 = emb @ (cb @ sa - sb @ ca) @ ea
    return SymplecticMatrix.from_blocks(A11, A12, A21, A11)


def _random_hermitian(rng, n, scale=1.0):
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * 0.5 * (X + X.conj().T)


def _random_unitary(rng, n):
    Z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_member(n, seed=0):
    """Product of 3-8 seeded generators (shears, lower shears, unitaries)."""
    if n < 1:
        raise BadParams("n must be >= 1")
    rng = np.random.default_rng(seed)
    A = identity(n)
    for _ in range(int(rng.integers(3, 9))):
        kind = int(rng.integers(0, 3))
        if kind == 0:
            G = shear(_random_hermitian(rng, n, 0.5))
        elif kind == 1:
            G = lower_shear(_random_hermitian(rng, n, 0.5))
        else:
            G = unitary(_random_unitary(rng, n))
        A = A @ G
    return A


def from_spec(spec, n=None):
    """Build a member from a scenario value.

    Accepts a nested list (row-major matrix, complex entries as ``[re, im]``)
    or a dict ``{"name": "J" | "identity" | "rotation" | "shear" |
    "lower_shear" | "unitary" | "random", ...}``.
    """
    from .scenario import parse_matrix

    if isinstance(spec, dict):
        name = spec.get("name")
        if name == "J":
            return J_member(int(spec.get("n", n or 1)))
        if name == "identity":
            return identity(int(spec.get("n", n or 1)))
        if name == "rotation":
            return rotation(parse_matrix(spec["alpha"]), parse_matrix(spec["beta"]), spec.get("n", n))
        if name == "shear":
            return shear(parse_matrix(spec["T"]))
        if name == "lower_shear":
            return lower_shear(parse_matrix(spec["S"]))
        if name == "unitary":
            return unitary(parse_matrix(spec["U"]))
        if name == "random":
            return random_member(int(spec.get("n", n or 1)), int(spec.get("seed", 0)))
        raise BadParams(f"unknown named matrix {name!r}")
    return SymplecticMatrix(parse_matrix(spec))


# -- atoms created by a scalar transformation -----------------------------------

def point_mass_formula(h, a, lam):
    """Mass of the transformed measure at ``lam`` from representation data.

    Requires ``m(lam + i0) = -a11/a12``; the mass is
    ``|a12|^{-2} (d + int domega(l) (l - lam)^{-2})^{-1}`` and zero when
    the integral diverges.
    """
    from .boundary import boundary_limit
    from .errors import Inconclusive
    from .measures import moment_integral

    if h.dim != 1 or a.n != 1:
        raise BadParams("point_mass_formula is scalar only")
    if h.truth is None:
        raise BadParams("point_mass_formula needs representation data")
    a11, a12 = complex(a.A[0, 0]), complex(a.A[0, 1])
    if abs(a12) == 0.0:
        raise ConditionNotMet("a12 = 0: the transformation creates no new atoms")
    target = -a11 / a12
    try:
        bv = boundary_limit(h, lam)
    except Inconclusive as exc:
        raise ConditionNotMet(f"boundary value at {lam} could not be determined: {exc}")
    if bv.divergent or abs(complex(bv.value[0, 0]) - target) > 1e-6:
        got = "divergent" if bv.divergent else complex(bv.value[0, 0])
        raise ConditionNotMet(f"m({lam} + i0) = {got}, need {target}")
    _, D, mu = h.truth
    d = float(np.real(as_cmatrix(D)[0, 0]))
    v = moment_integral(mu, "1/(lambda-c)^2", center=lam, atom_policy="diverge")
    if v.divergent:
        return 0.0
    if v.value is None:
        raise ConditionNotMet(f"moment integral at {lam} was inconclusive")
    total = d + float(np.real(v.value[0, 0]))
    if total <= 0.0:
        return math.inf
    return 1.0 / (abs(a12) ** 2 * total)
