"""Herglotz functions: one evaluation interface for closed forms,
representation data, and combinations of the two.

Every concrete class implements ``_eval_upper(z)`` for ``Im z > 0``; the
lower half-plane is reached through ``M(conj z) = M(z)^*``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import config, kernels
from ._quad import quad
from .errors import BadParams, NoConvergence, OnRealAxis
from .matrix_kernel import as_cmatrix, herm, imag_part, is_psd, numerical_rank
from .measures import MatrixMeasure, validate


@dataclass
class EvalResult:
    value: np.ndarray
    z: complex
    condition_estimate: float = 0.0


class HerglotzFunction:
    """Base class.  Subclasses set ``dim`` and implement ``_eval_upper``."""

    dim = 1
    truth = None  # optional (C, D, MatrixMeasure)

    def _eval_upper(self, z):
        raise NotImplementedError

    def _eval_err(self, z):
        """Value and an error/condition estimate at a point of the upper half-plane."""
        return self._eval_upper(z), 0.0

    def __call__(self, z):
        return self.evaluate(z).value

    def evaluate(self, z):
        z = complex(z)
        if z.imag == 0.0:
            raise OnRealAxis(f"z = {z} lies on the real axis; use boundary limits")
        if z.imag > 0:
            v, c = self._eval_err(z)
            return EvalResult(as_cmatrix(v), z, c)
        v, c = self._eval_err(z.conjugate())
        return EvalResult(as_cmatrix(v).conj().T, z, c)

    def values(self, zs):
        """Stack of values at several points, shape ``(len(zs), n, n)``."""
        return np.array([self(z) for z in np.ravel(np.asarray(zs, dtype=complex))])

    def describe(self):
        return {"kind": type(self).__name__}

    def __add__(self, other):
        return SumFunction([self, other])


def evaluate(h, z):
    """Value of ``h`` at ``z`` with a condition estimate."""
    return h.evaluate(z)


class CatalogFunction(HerglotzFunction):
    """Closed-form function supplied by the catalog.

    ``evaluator`` maps an array of points in the upper half-plane to values
    (scalars for ``dim == 1``, else stacked matrices).
    """

    def __init__(self, name, params, evaluator, dim=1, truth=None, notes=""):
        self.name = name
        self.params = dict(params)
        self.evaluator = evaluator
        self.dim = dim
        self.truth = truth
        self.notes = notes

    def _eval_upper(self, z):
        v = self.evaluator(np.array([z]))
        return np.asarray(v, dtype=complex).reshape(self.dim, self.dim)

    def values(self, zs):
        zs = np.ravel(np.asarray(zs, dtype=complex))
        out = np.empty((zs.size, self.dim, self.dim), dtype=complex)
        up = zs.imag > 0
        lo = zs.imag < 0
        if np.any(zs.imag == 0):
            raise OnRealAxis("grid contains real points")
        if np.any(up):
            out[up] = np.asarray(self.evaluator(zs[up]), dtype=complex).reshape(-1, self.dim, self.dim)
        if np.any(lo):
            v = np.asarray(self.evaluator(zs[lo].conj()), dtype=complex).reshape(-1, self.dim, self.dim)
            out[lo] = np.conj(np.swapaxes(v, 1, 2))
        return out

    def describe(self):
        return {"kind": "catalog", "name": self.name, "params": self.params}

    def __repr__(self):
        return f"CatalogFunction({self.name!r}, {self.params})"


def _piece_integral(piece, z, epsabs):
    """``int f(lam) ((lam - z)^{-1} - lam/(1+lam^2)) dlam`` over one piece."""
    x, y = z.real, z.imag
    f = piece.f

    def re(lam):
        d = lam - x
        return float(f(lam)) * (d / (d * d + y * y) - lam / (1.0 + lam * lam))

    def im(lam):
        d = lam - x
        return float(f(lam)) * y / (d * d + y * y)

    a, b = piece.a, piece.b
    L = max(1.0, 20.0 * y)
    cuts = [a]
    for c in (x - L, x, x + L):
        if a < c < b:
            cuts.append(c)
    cuts.append(b)
    total, err = 0j, 0.0
    for lo, hi in zip(cuts, cuts[1:]):
        for part, unit in ((re, 1.0), (im, 1j)):
            v, e = quad(part, lo, hi, epsabs=epsabs, epsrel=1e-11, limit=500)
            total += unit * v
            err += e
    return total, err


class RepresentationFunction(HerglotzFunction):
    """``C + D z + int ((lam - z)^{-1} - lam/(1+lam^2)) dOmega(lam)``."""

    def __init__(self, C, D, measure, check=True):
        self.C = herm(C)
        self.D = herm(D)
        self.measure = measure
        self.dim = measure.dim
        if self.C.shape != (self.dim, self.dim) or self.D.shape != (self.dim, self.dim):
            raise BadParams("C, D and the measure must share one dimension")
        if check:
            if not is_psd(self.D):
                raise BadParams("D must be positive semidefinite")
            validate(measure)
        self.truth = (self.C, self.D, measure)

    def _eval_upper(self, z):
        return self._eval_err(z)[0]

    def _eval_err(self, z):
        mu = self.measure
        P, W = mu.atom_arrays()
        out = self.C + self.D * z
        if P.size:
            out = out + kernels.atom_sum(P, W, np.array([z]))[0]
        if mu.families:
            out = out + mu.tail_correction(z)
        err = mu.tail_error(z) if mu.families else 0.0
        for piece in mu.pieces:
            v, e = _piece_integral(piece, z, 1e-12)
            out = out + v * piece.weight
            err += e * float(np.linalg.norm(piece.weight, 2))
        return out, err

    def values(self, zs):
        zs = np.ravel(np.asarray(zs, dtype=complex))
        if not self.measure.pieces and not self.measure.families and np.all(zs.imag != 0):
            up = np.where(zs.imag > 0, zs, zs.conj())
            P, W = self.measure.atom_arrays()
            v = self.C[None] + self.D[None] * up[:, None, None]
            if P.size:
                v = v + kernels.atom_sum(P, W, up)
            lo = zs.imag < 0
            v[lo] = np.conj(np.swapaxes(v[lo], 1, 2))
            return v
        return super().values(zs)

    def describe(self):
        return {"kind": "representation", "dim": self.dim}


class SumFunction(HerglotzFunction):
    def __init__(self, terms):
        terms = list(terms)
        if not terms:
            raise BadParams("a sum needs at least one term")
        self.dim = terms[0].dim
        if any(t.dim != self.dim for t in terms):
            raise BadParams("all summands must share one dimension")
        self.terms = terms

    def _eval_upper(self, z):
        return sum(as_cmatrix(t._eval_upper(z)) for t in self.terms)

    def _eval_err(self, z):
        parts = [t._eval_err(z) for t in self.terms]
        return sum(as_cmatrix(v) for v, _ in parts), sum(c for _, c in parts)

    def describe(self):
        return {"kind": "sum", "terms": [t.describe() for t in self.terms]}


class DirectSumFunction(HerglotzFunction):
    """Block-diagonal function ``diag(M_1, ..., M_k)``."""

    def __init__(self, blocks):
        self.blocks = list(blocks)
        self.dim = sum(b.dim for b in self.blocks)

    def _eval_upper(self, z):
        out = np.zeros((self.dim, self.dim), dtype=complex)
        i = 0
        for b in self.blocks:
            out[i:i + b.dim, i:i + b.dim] = b._eval_upper(z)
            i += b.dim
        return out

    def describe(self):
        return {"kind": "diag", "blocks": [b.describe() for b in self.blocks]}


class CongruenceFunction(HerglotzFunction):
    """``B^* M(z) B`` for a fixed (possibly rectangular) matrix ``B``."""

    def __init__(self, base, B):
        B = np.atleast_2d(np.asarray(B, dtype=complex))
        if B.shape[0] != base.dim:
            raise BadParams("B must have as many rows as the base function's dimension")
        self.base, self.B, self.dim = base, B, B.shape[1]

    def _eval_upper(self, z):
        return self.B.conj().T @ as_cmatrix(self.base._eval_upper(z)) @ self.B

    def _eval_err(self, z):
        v, c = self.base._eval_err(z)
        B = self.B
        return B.conj().T @ as_cmatrix(v) @ B, c * float(np.linalg.norm(B, 2)) ** 2

    def describe(self):
        return {"kind": "congruence", "base": self.base.describe(), "B": self.B.tolist()}


class ScalarFunction(HerglotzFunction):
    """Wrap a plain callable ``z -> value`` defined on the upper half-plane."""

    def __init__(self, func, dim=1, name="function"):
        self.func, self.dim, self.name = func, dim, name

    def _eval_upper(self, z):
        return self.func(z)

    def describe(self):
        return {"kind": "callable", "name": self.name}


def affine(C, D):
    C = as_cmatrix(C)
    return RepresentationFunction(C, D, MatrixMeasure(C.shape[0]))


# -- representation data ---------------------------------------------------

def extract_C(h):
    """``Re M(i)``."""
    return herm(h(1j))


def accelerate(seq, ratio=2.0, tol=None, order=("richardson", "aitken")):
    """Limit of a ladder ``s_0, s_1, ...`` with geometric step ``ratio``.

    Candidates are two-level Richardson (removing h and h^2 terms for
    ``h = ratio^{-k}``) and repeated Aitken extrapolation (for an unknown
    rate).  Returns ``(estimate, error, method)``; the first candidate in
    ``order`` whose last-step change is below ``tol`` wins, else the one with
    the smallest change.
    """
    s = np.asarray(seq)
    cands = {}
    if s.shape[0] >= 4:
        r1 = (ratio * s[1:] - s[:-1]) / (ratio - 1.0)
        r2 = (ratio ** 2 * r1[1:] - r1[:-1]) / (ratio ** 2 - 1.0)
        cands["richardson"] = r2
    if s.shape[0] >= 5:
        cands["aitken"] = _aitken(_aitken(s))
    cands["raw"] = s
    best = None
    for name in list(order) + ["raw"]:
        if name not in cands:
            continue
        t = cands[name]
        if t.shape[0] < 2:
            continue
        est = t[-1]
        err = float(np.max(np.abs(t[-1] - t[-2])))
        if not np.isfinite(err):
            continue
        scale = 1.0 + float(np.max(np.abs(est)))
        if tol is not None and err <= tol * scale:
            return est, err, name
        if best is None or err < best[1]:
            best = (est, err, name)
    if best is None:
        return s[-1], math.inf, "raw"
    return best


def _aitken(s):
    """One sweep of Aitken's delta-squared process (elementwise)."""
    s = np.asarray(s)
    if s.shape[0] < 3:
        return s
    d2 = s[2:] - 2 * s[1:-1] + s[:-2]
    scale = np.maximum(np.abs(s[2:]), 1e-300)
    safe = np.abs(d2) > 1e-13 * scale
    with np.errstate(all="ignore"):
        acc = s[2:] - (s[2:] - s[1:-1]) ** 2 / np.where(safe, d2, 1.0)
    return np.where(safe, acc, s[2:])


def extract_D(h, k_min=4, k_max=24):
    """``lim Im M(i eta)/eta`` along ``eta = 2^k``, accelerated; PSD."""
    etas = 2.0 ** np.arange(k_min, k_max + 1)
    seq = np.array([imag_part(h(1j * eta)) / eta for eta in etas])
    tol = config.get("d_cauchy")
    est, err, _ = accelerate(seq, 2.0, tol, order=("richardson", "aitken"))
    if err > tol * (1.0 + float(np.max(np.abs(est)))):
        raise NoConvergence(f"D ladder not Cauchy at {tol:g} (last change {err:.3g})")
    D = herm(est)
    # clean roundoff-level entries so that D = 0 is reported exactly
    D[np.abs(D) < 10 * tol] = 0.0
    if not is_psd(D, 1e-8):
        raise NoConvergence("extrapolated D is not positive semidefinite")
    return D


# -- verification ------------------------------------------------------------

DEFAULT_GRID = tuple(
    complex(x, y) for y in (0.125, 1.0, 8.0) for x in (-2.0, -0.5, 0.0, 0.5, 2.0)
)


@dataclass
class HerglotzReport:
    points: list
    min_eigs: list
    psd: list
    ranks: list
    common_rank: object
    rank_constant: bool
    ok: bool
    failures: list = field(default_factory=list)


def imag_rank(H):
    """Rank of an imaginary part with a floor at roundoff level."""
    return numerical_rank(H, config.get("rank_rel_tol"), 1e-12 * (1.0 + np.linalg.norm(H, 2)))


def verify_herglotz(h, grid=None):
    """Check ``Im M(z) >= 0`` on a grid and constancy of its rank."""
    grid = list(DEFAULT_GRID if grid is None else grid)
    if not grid or any(complex(z).imag <= 0 for z in grid):
        raise BadParams("verification grid must be nonempty and inside the upper half-plane")
    mins, psd, ranks, failures = [], [], [], []
    for z in grid:
        M = h(z)
        I = imag_part(M)
        w = np.linalg.eigvalsh(I)
        ok = is_psd(I, config.get("psd_tol"))
        mins.append(float(w[0]))
        psd.append(ok)
        ranks.append(imag_rank(I))
        if not ok:
            failures.append(f"Im M({z}) has eigenvalue {w[0]:.3e}")
    constant = len(set(ranks)) == 1
    if not constant:
        failures.append(f"rank of Im M varies over the grid: {sorted(set(ranks))}")
    return HerglotzReport(
        points=grid, min_eigs=mins, psd=psd, ranks=ranks,
        common_rank=ranks[0] if constant else None, rank_constant=constant,
        ok=all(psd) and constant, failures=failures,
    )
