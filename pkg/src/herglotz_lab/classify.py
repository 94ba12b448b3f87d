"""Spectral-type tags, exponential data and reconstruction from two spectra."""

import math
from dataclasses import dataclass, field

import numpy as np

from . import config
from ._parallel import pmap
from .boundary import BoundaryProfile, boundary_limit, eps_ladder, point_mass, profile_point
from .errors import (
    BadParams, Inconclusive, InterlacingViolation, NoConvergence,
    NormalizationInsufficient, NumericalFailure, SingularM, ZeroEncountered,
)
from .herglotz_core import CatalogFunction, accelerate
from .lft import J_member, apply
from .matrix_kernel import herm, imag_part, numerical_rank, principal_log
from .measures import MatrixMeasure


@dataclass(frozen=True)
class SpectralTag:
    kind: str  # AC, PP, SC, S, NONE, INCONCLUSIVE
    rank: int = 0
    divergent: bool = False
    detail: str = ""

    def __str__(self):
        return f"{self.kind}({self.rank})" if self.kind in ("AC", "PP") else self.kind


def limit_rank(H, err=0.0):
    """Number of eigenvalues of an extrapolated PSD limit that stand above
    both the absolute floor and the extrapolation error ``err``."""
    w = np.linalg.eigvalsh(herm(H))
    floor = max(config.get("ac_abs_tol") * (1.0 + float(np.max(np.abs(w)))), 1e-6 * float(w[-1]), err)
    return int(np.sum(w > floor))


def classify_point(h, lam):
    """Tag ``lam`` as PP(r), AC(r), SC, S, NONE or INCONCLUSIVE.

    Atoms are detected first through ``eps Im M(lam + i eps)``, so a point
    carrying an atom is PP even though ``Im M`` blows up there.
    """
    lam = float(lam)
    pp_zero = False
    try:
        W = point_mass(h, lam)
        if np.max(np.linalg.eigvalsh(W)) > config.get("pp_tol"):
            r = numerical_rank(W, 1e-6, config.get("pp_tol"))
            return SpectralTag("PP", r, True, "atom")
        pp_zero = True
    except NoConvergence:
        pass
    try:
        bv = boundary_limit(h, lam, part="imag")
    except Inconclusive as exc:
        return SpectralTag("INCONCLUSIVE", detail=str(exc))
    if bv.divergent:
        return SpectralTag("SC" if pp_zero else "S", 0, True, "trace of Im M diverges")
    r = limit_rank(bv.value, bv.extrapolation_error)
    return SpectralTag("AC", r) if r else SpectralTag("NONE")


def _classified_point(h, lam):
    bv, rank = profile_point(h, lam)
    return bv, rank, classify_point(h, lam)


def scan_support(h, grid):
    """Classify every grid point; returns a BoundaryProfile with tags."""
    grid = [float(x) for x in grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise BadParams("grid must be strictly increasing")
    res = pmap(lambda x: _classified_point(h, x), grid)
    prof = BoundaryProfile(grid, [r[0] for r in res], [r[1] for r in res], [r[2] for r in res])
    return prof


def _gap_atoms(h, a, b, ma, mb, depth=3):
    """Atoms of a scalar function inside ``(a, b)``, both ends off the support.

    Off the support ``m`` is real and strictly increasing, so a drop
    ``m(b) < m(a)`` means the support meets ``(a, b)``.  A drop from a
    positive to a negative value brackets a zero of ``-1/m``, which sits
    exactly at an atom.
    """
    from scipy.optimize import brentq

    delta = 1e-13 * (1.0 + max(abs(a), abs(b)))

    def re_m(x):
        return float(h(x + 1j * delta)[0, 0].real)

    if mb >= ma:
        return []
    if ma > 0 > mb:
        try:
            x0 = brentq(lambda x: float((-1.0 / h(x + 1j * delta)[0, 0]).real), a, b, xtol=1e-14)
        except (ValueError, ZeroDivisionError):
            x0 = None
        if x0 is not None and classify_point(h, x0).kind == "PP":
            return [x0]
    if depth == 0:
        return []
    xs = np.linspace(a, b, 9)
    ms = [ma] + [re_m(x) for x in xs[1:-1]] + [mb]
    out = []
    for x1, x2, m1, m2 in zip(xs, xs[1:], ms, ms[1:]):
        out += _gap_atoms(h, x1, x2, m1, m2, depth - 1)
    return out


def refine_atoms(h, profile):
    """Insert atoms that fall between grid points of a scalar profile.

    Returns a new profile whose grid also holds every located atom, tagged
    PP.  Matrix profiles are returned unchanged.
    """
    if h.dim != 1:
        return profile
    found = []
    rows = list(zip(profile.grid, profile.values, profile.tags))
    for (a, va, ta), (b, vb, tb) in zip(rows, rows[1:]):
        if ta.kind != "NONE" or tb.kind != "NONE":
            continue
        found += _gap_atoms(h, a, b, float(va.value[0, 0].real), float(vb.value[0, 0].real))
    if not found:
        return profile
    extra = pmap(lambda x: _classified_point(h, x), found)
    merged = sorted(
        list(zip(profile.grid, profile.values, profile.ranks, profile.tags))
        + [(x, r[0], r[1], r[2]) for x, r in zip(found, extra)],
        key=lambda row: row[0],
    )
    return BoundaryProfile(*(list(col) for col in zip(*merged)))


def support_summary(profile):
    """``{tag string: [lambda, ...]}`` for a scanned profile."""
    out = {}
    for lam, t in zip(profile.grid, profile.tags):
        out.setdefault(str(t), []).append(lam)
    return out


# -- rank invariance under the group action -----------------------------------

@dataclass
class InvarianceReport:
    checked: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def _imag_rank(h, lam):
    try:
        bv = boundary_limit(h, lam, part="imag")
    except NumericalFailure:
        return None
    return None if bv.divergent else limit_rank(bv.value, bv.extrapolation_error)


def ad_invariance(h, A, grid):
    """Compare ``rank Im M(lam+i0)`` and ``rank Im M_A(lam+i0)`` pointwise."""
    hA = apply(A, h)
    rep = InvarianceReport()

    def one(lam):
        a, b = _imag_rank(h, lam), _imag_rank(hA, lam)
        if a is None or b is None:
            return lam, None, None
        return lam, a, b

    for lam, r, rA in pmap(one, [float(x) for x in grid]):
        if r is None:
            rep.skipped.append(lam)
        else:
            rep.checked.append((lam, r, rA))
            if r != rA:
                rep.violations.append((lam, r, rA))
    return rep


# -- exponential representation -------------------------------------------------

@dataclass
class XiValue:
    value: float
    raw: float
    clamp_distance: float


def xi_scalar(h, lam, detail=False):
    """``pi^{-1} arg m(lam + i0)`` clamped to ``[0, 1]``."""
    if h.dim != 1:
        raise BadParams("xi_scalar needs a scalar function")
    eps = eps_ladder()
    m = h.values(float(lam) + 1j * eps)[:, 0, 0]
    if np.any(np.abs(m) < 1e-300):
        raise ZeroEncountered(f"m vanishes on the ladder at lambda={lam}")
    seq = np.angle(m) / math.pi
    # arguments live in [0, 1]; roundoff can leave -0 just below the real axis
    seq = np.where(seq < -0.5, seq + 2.0, seq)
    est, err, _ = accelerate(seq, 2.0, 1e-8)
    if err > 1e-6:
        raise NoConvergence(f"xi ladder at lambda={lam} did not converge (change {err:.3g})")
    raw = float(est)
    val = min(1.0, max(0.0, raw))
    out = XiValue(val, raw, abs(val - raw))
    return out if detail else out.value


def _xi_of_value(M):
    M = np.asarray(M)
    s = np.linalg.svd(M, compute_uv=False)
    if s[-1] <= 1e-14 * max(s[0], 1e-300):
        raise SingularM("M is singular on the ladder")
    return imag_part(principal_log(M)) / math.pi


def xi_matrix(h, lam, detail=False):
    """``pi^{-1} Im ln M(lam + i0)`` with eigenvalues clipped to ``[0, 1]``.

    With ``detail=True`` returns ``(Xi, clamp_distance)`` where the distance
    measures how far the unclipped eigenvalues left ``[0, 1]``.
    """
    eps = eps_ladder()
    V = h.values(float(lam) + 1j * eps)
    seq = np.array([_xi_of_value(M) for M in V])
    est, err, _ = accelerate(seq, 2.0, 1e-8)
    if err > 1e-6:
        raise NoConvergence(f"Xi ladder at lambda={lam} did not converge (change {err:.3g})")
    w, U = np.linalg.eigh(herm(est))
    wc = np.clip(w, 0.0, 1.0)
    X = (U * wc) @ U.conj().T
    return (X, float(np.max(np.abs(w - wc)))) if detail else X


def xi_duality_check(h, grid, tol=1e-5):
    """``Xi_J + Xi = I`` with ``J`` acting by ``M -> -M^{-1}``."""
    hJ = apply(J_member(h.dim), h)
    rows = []
    for lam in grid:
        X = xi_matrix(h, lam)
        XJ = xi_matrix(hJ, lam)
        res = float(np.linalg.norm(X + XJ - np.eye(h.dim)))
        rows.append({"lambda": float(lam), "residual": res, "ok": res <= tol})
    return {"rows": rows, "ok": all(r["ok"] for r in rows)}


def singular_iff_characteristic(h, grid, tol=1e-3):
    """Tabulate ``xi in {0, 1}`` against the spectral tag at each point."""
    rows = []
    for lam in grid:
        xi = xi_scalar(h, lam)
        rows.append({
            "lambda": float(lam),
            "xi": xi,
            "characteristic": min(abs(xi), abs(1.0 - xi)) <= tol,
            "tag": str(classify_point(h, lam)),
        })
    return rows


# -- reconstruction from two spectra -----------------------------------------------

@dataclass
class TwoSpectra:
    """Poles of ``m`` and poles of ``m_a`` (the zeros of ``m + a11/a12``).

    ``normalization`` is one of ``{"kind": "total_mass", "value": w}``,
    ``{"kind": "value", "z0": z0, "value": m(z0)}`` or
    ``{"kind": "catalog", "name": ..., "params": {...}}``.
    """

    poles: list
    zeros: list
    normalization: dict


def check_interlacing(poles, zeros):
    pts = sorted([(float(p), "p") for p in poles] + [(float(q), "z") for q in zeros])
    if len(set(x for x, _ in pts)) != len(pts):
        raise InterlacingViolation("poles and zeros must be distinct")
    if any(a[1] == b[1] for a, b in zip(pts, pts[1:])):
        raise InterlacingViolation("poles and zeros do not interlace")
    return pts


def _xi_intervals(pts):
    """Intervals where ``F = m + a11/a12`` is negative (xi = 1)."""
    out = []
    if pts and pts[0][1] == "z":
        out.append((-math.inf, pts[0][0]))
    for (x, kx), (y, ky) in zip(pts, pts[1:]):
        if kx == "p" and ky == "z":
            out.append((x, y))
    if pts and pts[-1][1] == "p":
        out.append((pts[-1][0], math.inf))
    return out


def _base_factor(intervals):
    """Constant ``K0`` with ``F0(z) = K0 prod(z - zero) / prod(z - pole)``."""
    K0 = 1.0
    for a, b in intervals:
        if math.isinf(a):
            K0 /= math.sqrt(1 + b * b)
        elif math.isinf(b):
            K0 *= -math.sqrt(1 + a * a)
        else:
            K0 *= math.sqrt((1 + a * a) / (1 + b * b))
    return K0


class RationalHerglotz(CatalogFunction):
    """``m(z) = K prod(z - q) / prod(z - p) - shift``."""

    def __init__(self, K, zeros, poles, shift, name="two_spectra"):
        self.K, self.zeros, self.poles, self.shift = float(K), list(zeros), list(poles), complex(shift)
        super().__init__(name, {"K": self.K}, self._ev, 1, None)
        self.truth = self._representation()

    def _ev(self, z):
        z = np.asarray(z, dtype=complex)
        v = np.full(z.shape, self.K, dtype=complex)
        for q in self.zeros:
            v = v * (z - q)
        for p in self.poles:
            v = v / (z - p)
        return v - self.shift

    def residue_weight(self, p):
        """Mass of the atom at pole ``p`` (minus the residue)."""
        r = self.K
        for q in self.zeros:
            r *= p - q
        for p2 in self.poles:
            if p2 != p:
                r /= p - p2
        return -r

    def _representation(self):
        atoms = [(p, np.array([[self.residue_weight(p)]])) for p in self.poles]
        D = self.K if len(self.zeros) == len(self.poles) + 1 else 0.0
        C = float(np.real(self._ev(np.array([1j]))[0]))
        return np.array([[C]]), np.array([[D]]), MatrixMeasure(1, atoms)


def borg_reconstruct(data, a):
    """Herglotz ``m`` whose poles are ``data.poles`` and whose transform ``m_a``
    has poles at ``data.zeros``."""
    if a.n != 1:
        raise BadParams("reconstruction is scalar only")
    a11, a12 = complex(a.A[0, 0]), complex(a.A[0, 1])
    if abs(a12) == 0 or abs((a11 / a12).imag) > 1e-12:
        raise BadParams("need a12 != 0 and a real ratio a11/a12")
    shift = (a11 / a12).real
    pts = check_interlacing(data.poles, data.zeros)
    K0 = _base_factor(_xi_intervals(pts))
    zeros = sorted(float(q) for q in data.zeros)
    poles = sorted(float(p) for p in data.poles)
    base = RationalHerglotz(K0, zeros, poles, 0.0)

    norm = dict(data.normalization or {})
    kind = norm.get("kind")
    if kind == "catalog":
        from . import catalog

        f = catalog.function(norm["name"], **norm.get("params", {}))
        norm = {"kind": "value", "z0": 1j, "value": complex(f(1j)[0, 0])}
        kind = "value"
    if kind == "value":
        z0 = complex(norm["z0"])
        if z0.imag <= 0:
            raise NormalizationInsufficient("z0 must lie in the upper half-plane")
        ratio = (complex(norm["value"]) + shift) / complex(base._ev(np.array([z0]))[0])
        if ratio.real <= 0 or abs(ratio.imag) > 1e-8 * abs(ratio):
            raise NormalizationInsufficient(
                f"m(z0) is inconsistent with the spectra (scale factor {ratio})"
            )
        scale = ratio.real
    elif kind == "total_mass":
        total = sum(base.residue_weight(p) for p in poles)
        if len(zeros) > len(poles) or total <= 0:
            raise NormalizationInsufficient("total mass does not fix the scale for these spectra")
        scale = float(norm["value"]) / total
    else:
        raise NormalizationInsufficient("need total_mass, value at z0, or a catalog reference")
    return RationalHerglotz(K0 * scale, zeros, poles, shift)
