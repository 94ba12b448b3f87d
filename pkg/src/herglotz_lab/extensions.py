"""Perturbations and self-adjoint extensions seen through Weyl functions.

Finite operator models (``H0 = diag(lam_j)`` coupled through ``F``) give
independent oracles for the transformation laws.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import config
from .boundary import total_mass
from .errors import (
    BadParams, ConditionNotMet, Inconclusive, NotIntegrable, NotNormalized, SingularP,
)
from .herglotz_core import DEFAULT_GRID, HerglotzFunction, RepresentationFunction, accelerate
from .lft import apply, rotation, shear
from .matrix_kernel import as_cmatrix, herm, imag_part
from .measures import MatrixMeasure
from .scenario import parse_matrix


def _herm(x, n=None, what="parameter"):
    X = as_cmatrix(x)
    if n is not None and X.shape == (1, 1) and n > 1:
        X = X[0, 0] * np.eye(n)
    if np.linalg.norm(X - X.conj().T) > 1e-12 * (1 + np.linalg.norm(X)):
        raise BadParams(f"{what} must be Hermitian")
    return herm(X)


def _check_normalized(h, tol=1e-8):
    Mi = as_cmatrix(h(1j))
    dev = float(np.linalg.norm(Mi - 1j * np.eye(h.dim)))
    if dev > tol:
        raise NotNormalized(f"M(i) differs from iI by {dev:.3e}")


# -- perturbation laws -----------------------------------------------------------

class CouplingImage(HerglotzFunction):
    """``M (I + (beta - alpha) M)^{-1}`` evaluated directly."""

    def __init__(self, base, delta):
        self.base, self.delta, self.dim = base, as_cmatrix(delta), base.dim

    def _eval_upper(self, z):
        M = as_cmatrix(self.base._eval_upper(z))
        K = np.eye(self.dim) + self.delta @ M
        s = np.linalg.svd(K, compute_uv=False)
        if s[-1] < config.get("pencil_tol") * s[0]:
            from .errors import SingularPencil

            raise SingularPencil(f"I + (beta - alpha) M(z) is singular at z = {z}", z)
        return np.linalg.solve(K.T, M.T).T

    def describe(self):
        return {"kind": "coupling_image", "base": self.base.describe(), "delta": self.delta.tolist()}


def rank_one_image(m_alpha, alpha, beta, check=True):
    """``m_beta = m_alpha / (1 + (beta - alpha) m_alpha)`` for a finite measure."""
    if m_alpha.dim != 1:
        raise BadParams("rank_one_image needs a scalar function")
    if check and total_mass(m_alpha).divergent:
        raise NotIntegrable("m_alpha must come from a finite measure with no linear term")
    return CouplingImage(m_alpha, float(beta) - float(alpha))


@dataclass(frozen=True)
class DiagonalCoupling:
    alpha: tuple

    @property
    def n(self):
        return len(self.alpha)

    def matrix(self):
        return np.diag(np.asarray(self.alpha, dtype=float)).astype(complex)


def finite_rank_image(M_alpha, alpha, beta):
    """``M_beta = M_alpha (I + (beta - alpha) M_alpha)^{-1}`` for diagonal couplings."""
    if not isinstance(alpha, DiagonalCoupling):
        alpha = DiagonalCoupling(tuple(float(a) for a in alpha))
    if not isinstance(beta, DiagonalCoupling):
        beta = DiagonalCoupling(tuple(float(b) for b in beta))
    if alpha.n != M_alpha.dim or beta.n != M_alpha.dim:
        raise BadParams("coupling size must match the function dimension")
    return CouplingImage(M_alpha, beta.matrix() - alpha.matrix())


def coupling_member(alpha, beta):
    """The shear ``[[I, beta - alpha], [0, I]]`` implementing the coupling law."""
    a = np.atleast_1d(np.asarray(alpha, dtype=float))
    b = np.atleast_1d(np.asarray(beta, dtype=float))
    return shear(np.diag(b - a))


def extension_image(M_alpha, alpha, beta, grid=None):
    """Weyl function of the extension with parameter ``beta`` from the one
    with parameter ``alpha`` (both Hermitian, ``U = exp(2 i alpha)``)."""
    _check_normalized(M_alpha)
    n = M_alpha.dim
    a, b = _herm(alpha, n, "alpha"), _herm(beta, n, "beta")
    A = rotation(alpha, beta) if np.ndim(alpha) == 0 and np.ndim(beta) == 0 else rotation(a, b)
    return apply(A, M_alpha, grid)


# -- Krein's formula ---------------------------------------------------------------

@dataclass
class KreinData:
    P_i: np.ndarray

    def __post_init__(self):
        self.P_i = as_cmatrix(self.P_i)
        self.n = self.P_i.shape[0]
        inv = np.linalg.inv(self.P_i)
        dev = float(np.linalg.norm(imag_part(inv) + np.eye(self.n)))
        if dev > 1e-10 * max(1.0, float(np.linalg.norm(inv, 2))):
            raise BadParams(f"Im(P(i)^-1) must equal -I (deviation {dev:.3e})")
        self.re_inv = herm(inv)

    @classmethod
    def from_alpha2(cls, alpha2, n=None):
        """``P(i) = (i/2)(I + U2^{-1})`` with ``U2 = exp(2 i alpha2)``."""
        a = _herm(alpha2, n, "alpha2")
        w, V = np.linalg.eigh(a)
        if np.any(np.abs(np.cos(w)) < 1e-12):
            raise BadParams("alpha2 has an eigenvalue with cos = 0; P(i) would be singular")
        Uinv = (V * np.exp(-2j * w)) @ V.conj().T
        return cls(0.5j * (np.eye(a.shape[0]) + Uinv))

    @classmethod
    def random(cls, n, seed=0):
        rng = np.random.default_rng(seed)
        X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        return cls.from_alpha2(0.5 * (X + X.conj().T) * 0.5, n)


def krein_p_of_z(kd, M1, z):
    """``P(z) = (Re(P(i)^{-1}) - M1(z))^{-1}``."""
    z = complex(z)
    if z.imag == 0:
        raise BadParams("z must be off the real axis")
    K = kd.re_inv - as_cmatrix(M1(z))
    s = np.linalg.svd(K, compute_uv=False)
    if s[-1] < 1e-13 * max(s[0], 1e-300):
        raise SingularP(f"Re(P(i)^-1) - M1(z) is singular at z = {z}")
    return np.linalg.inv(K)


class KreinTransform(HerglotzFunction):
    """``M2 = (P + (I + iP) M1)((I + iP) - P M1)^{-1}`` with ``P = P(i)``."""

    def __init__(self, M1, kd):
        self.M1, self.kd, self.dim = M1, kd, M1.dim
        P = kd.P_i
        self._P, self._Q = P, np.eye(self.dim) + 1j * P

    def _eval_upper(self, z):
        M = as_cmatrix(self.M1._eval_upper(z))
        N = self._P + self._Q @ M
        D = self._Q - self._P @ M
        s = np.linalg.svd(D, compute_uv=False)
        if s[-1] < config.get("pencil_tol") * s[0]:
            from .errors import SingularPencil

            raise SingularPencil(f"(I + iP) - P M1(z) is singular at z = {z}", z)
        return np.linalg.solve(D.T, N.T).T

    def describe(self):
        return {"kind": "krein", "base": self.M1.describe(), "P_i": self.kd.P_i.tolist()}


def krein_transform(M1, kd):
    if kd.n != M1.dim:
        raise BadParams("KreinData size must match M1")
    _check_normalized(M1)
    f = KreinTransform(M1, kd)
    for z in DEFAULT_GRID:
        f(z)
    return f


# -- Friedrichs / Krein detection -----------------------------------------------------

def probe_vectors(n):
    """Basis vectors, pair sums ``e_j + e_k`` and ``e_j + i e_k``."""
    vecs = [np.eye(n)[j].astype(complex) for j in range(n)]
    for j in range(n):
        for k in range(j + 1, n):
            vecs.append(vecs[j] + vecs[k])
            vecs.append(vecs[j] + 1j * vecs[k])
    return vecs


def real_axis_values(h, lams):
    """``M(lam)`` on a gap of the support, read just above the axis.

    The Hermitian part is even in the offset ``delta``, so using
    ``delta = 1e-10 |lam|`` leaves an error of order ``delta^2``.  The
    imaginary part is returned as well to certify that ``lam`` is not in
    the support.
    """
    lams = np.asarray(lams, dtype=float)
    V = h.values(lams + 1j * 1e-10 * np.abs(lams))
    Re = 0.5 * (V + np.conj(np.swapaxes(V, 1, 2)))
    Im = (V - np.conj(np.swapaxes(V, 1, 2))) / 2j
    return Re, Im


@dataclass
class LadderReport:
    direction: str
    points: list
    forms: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    limit: object = None

    @property
    def all_divergent(self):
        return all(v == "divergent" for v in self.verdicts.values())

    @property
    def all_convergent(self):
        return all(v == "convergent" for v in self.verdicts.values())


def extreme_verdict(q, sign):
    """Decide whether a monotone sequence runs to ``sign * inf`` or settles.

    Divergent: the last four increments have the sign ``sign`` and either
    ``|q| > t_ext`` or the increments stop shrinking (ratio >= 0.98).
    Convergent: increments shrink geometrically (ratio <= 0.97) or vanish.
    """
    q = np.asarray(q, dtype=float)
    d = np.diff(q)[-4:]
    scale = max(1.0, abs(q[-1]))
    if np.all(np.abs(d) <= 1e-13 * scale):
        return "convergent", float(q[-1])
    if np.all(np.sign(d) == sign):
        rho = d[1:] / d[:-1]
        if abs(q[-1]) > config.get("t_ext") or np.all(rho >= 0.98):
            return "divergent", None
        if np.all(rho <= 0.97):
            r = float(rho[-1])
            return "convergent", float(q[-1] + d[-1] * r / (1.0 - r))
    tail = np.abs(np.diff(q)[-3:])
    if np.all(tail <= 1e-10 * scale):
        return "convergent", float(q[-1])
    return "inconclusive", None


def _ladder_report(h, direction, k_max):
    ks = np.arange(0, k_max + 1)
    lams = -(2.0 ** ks) if direction == "-inf" else -(2.0 ** -ks)
    Re, Im = real_axis_values(h, lams)
    leak = np.max(np.abs(Im.reshape(len(lams), -1)), axis=1)
    size = 1.0 + np.max(np.abs(Re.reshape(len(lams), -1)), axis=1)
    if np.any(leak > 1e-6 * size):
        raise ConditionNotMet("the measure is not supported in [0, inf): Im M does not vanish on (-inf, 0)")
    sign = -1 if direction == "-inf" else 1
    rep = LadderReport(direction, lams.tolist())
    for j, c in enumerate(probe_vectors(h.dim)):
        q = np.real(np.einsum("i,kij,j->k", c.conj(), Re, c))
        rep.forms[j] = q.tolist()
        rep.verdicts[j], _ = extreme_verdict(q, sign)
    if rep.all_convergent:
        est, err, _ = accelerate(Re, 2.0, 1e-9, order=("aitken", "richardson"))
        if err > 1e-6 * (1.0 + float(np.max(np.abs(est)))):
            # geometric tail estimate entrywise
            d1, d0 = Re[-1] - Re[-2], Re[-2] - Re[-3]
            with np.errstate(all="ignore"):
                r = np.where(np.abs(d0) > 0, d1 / np.where(np.abs(d0) > 0, d0, 1), 0)
            r = np.clip(np.real(r), 0, 0.97)
            est = Re[-1] + d1 * r / (1 - r)
        rep.limit = herm(est)
    return rep


def _decide(rep, what):
    if rep.all_divergent:
        return True
    if all(v in ("divergent", "convergent") for v in rep.verdicts.values()):
        return False
    raise Inconclusive(f"{what}: ladder verdicts {rep.verdicts}")


def friedrichs_test(h, k_max=60, report=False):
    """True when ``(c, M(lam) c) -> -inf`` as ``lam -> -inf`` for every probe ``c``."""
    rep = _ladder_report(h, "-inf", k_max)
    out = _decide(rep, "friedrichs_test")
    return (out, rep) if report else out


def krein_test(h, k_max=60, report=False):
    """True when ``(c, M(lam) c) -> +inf`` as ``lam -> 0-`` for every probe ``c``."""
    rep = _ladder_report(h, "0-", k_max)
    out = _decide(rep, "krein_test")
    return (out, rep) if report else out


@dataclass
class DomainIntersection:
    finite: bool
    limit: object
    report: LadderReport


def domain_intersection_test(h, which="F", k_max=60):
    """Finiteness of ``lim M(lam)`` as ``lam -> -inf`` (F) or ``lam -> 0-`` (K)."""
    if which not in ("F", "K"):
        raise BadParams("which must be 'F' or 'K'")
    rep = _ladder_report(h, "-inf" if which == "F" else "0-", k_max)
    if rep.all_convergent:
        return DomainIntersection(True, rep.limit, rep)
    if any(v == "inconclusive" for v in rep.verdicts.values()):
        raise Inconclusive(f"domain_intersection_test({which}): ladder verdicts {rep.verdicts}")
    return DomainIntersection(False, None, rep)


# -- lower bound for normalized functions --------------------------------------------

def herglotz_lower_bound_check(M, grid, form="quotient"):
    """Lower bound for normalized functions (``Im M(i) = I``).

    ``form="quotient"`` checks ``min eig(Im M(z) / Im z) >= b(z)`` with
    ``b(z) = (max(1, |z|^2) + |Re z|)^{-1}``, which is what the resolvent
    computation gives at every ``z``.  ``form="product"`` checks
    ``min eig(Im z Im M(z)) >= b(z)``; it follows from the quotient form
    when ``Im z >= 1`` and fails below (e.g. ``i (2z)^(1/2) + 1`` at
    ``z = 0.2i``).  A function violating the normalization is reported with
    ``precondition_ok = False`` and ``ok = False``.
    """
    if form not in ("quotient", "product"):
        raise BadParams("form must be 'quotient' or 'product'")
    dev = float(np.linalg.norm(imag_part(M(1j)) - np.eye(M.dim)))
    rows = []
    for z in grid:
        z = complex(z)
        factor = 1.0 / z.imag if form == "quotient" else z.imag
        lhs = float(np.linalg.eigvalsh(factor * imag_part(M(z)))[0])
        bound = 1.0 / (max(1.0, abs(z) ** 2) + abs(z.real))
        rows.append({"z": z, "min_eig": lhs, "bound": bound, "slack": lhs - bound})
    pre = dev <= 1e-8
    ok = pre and all(r["slack"] >= -1e-8 for r in rows)
    return {"precondition_ok": pre, "normalization_deviation": dev, "form": form, "rows": rows, "ok": ok}


# -- finite operator models ---------------------------------------------------------------

@dataclass
class FiniteModel:
    """``H`` (k x k Hermitian) coupled to ``C^n`` through ``F`` (k x n)."""

    H: np.ndarray
    F: np.ndarray

    def __post_init__(self):
        self.H = herm(self.H)
        self.F = np.atleast_2d(np.asarray(self.F, dtype=complex))
        if self.F.shape[0] != self.H.shape[0]:
            raise BadParams("F must have as many rows as H")

    @property
    def n(self):
        return self.F.shape[1]

    def weyl(self, z):
        """``F^* (H - z)^{-1} F``."""
        k = self.H.shape[0]
        return self.F.conj().T @ np.linalg.solve(self.H - complex(z) * np.eye(k), self.F)

    def perturbed(self, T):
        """Model for ``H + F T F^*``."""
        T = _herm(T, self.n, "T")
        return FiniteModel(self.H + self.F @ T @ self.F.conj().T, self.F)

    def function(self):
        return ModelFunction(self)

    def representation(self):
        """Exact representation data of the Weyl function."""
        w, V = np.linalg.eigh(self.H)
        G = V.conj().T @ self.F
        atoms = {}
        for lam, g in zip(w, G):
            W = np.outer(g.conj(), g)
            key = float(lam)
            atoms[key] = atoms.get(key, 0) + W
        C = sum(W * lam / (1 + lam * lam) for lam, W in atoms.items())
        mu = MatrixMeasure(self.n, sorted(atoms.items()))
        return RepresentationFunction(herm(C), np.zeros((self.n, self.n)), mu)


class ModelFunction(HerglotzFunction):
    def __init__(self, model):
        self.model, self.dim = model, model.n

    def _eval_upper(self, z):
        return self.model.weyl(z)

    def values(self, zs):
        zs = np.ravel(np.asarray(zs, dtype=complex))
        w, V = np.linalg.eigh(self.model.H)
        G = V.conj().T @ self.model.F
        R = 1.0 / (w[None, :] - zs[:, None])
        return np.einsum("ki,zk,kj->zij", G.conj(), R, G)

    def describe(self):
        return {"kind": "finite_model", "k": int(self.model.H.shape[0]), "n": self.dim}


def finite_model(positions, F):
    """``H0 = diag(positions)`` with coupling ``F``."""
    return FiniteModel(np.diag(np.asarray(positions, dtype=float)), F)


def scenario_extension(spec, h):
    """Parse ``{"alpha_matrix": ..., "beta_matrix": ...}`` and apply."""
    return extension_image(h, parse_matrix(spec["alpha_matrix"]), parse_matrix(spec["beta_matrix"]))
