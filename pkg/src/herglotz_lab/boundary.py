"""Boundary values on the real axis and recovery of the measure.

Every limit is taken along the ladder ``eps_k = scale * 2^-k``, k = 4..20,
followed by two-level Richardson extrapolation (with an Aitken fallback for
fractional-power behaviour near edges of the support).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import config
from ._parallel import pmap
from .errors import DivergentBoundary, Inconclusive, NoConvergence
from .herglotz_core import accelerate
from .matrix_kernel import herm, imag_part, is_psd
from .measures import IntegralVerdict

K_MIN, K_MAX = 4, 20


def eps_ladder(scale=1.0):
    return scale * 2.0 ** -np.arange(K_MIN, K_MAX + 1)


@dataclass
class BoundaryValue:
    lam: float
    value: object  # ndarray, or None when divergent
    divergent: bool
    epsilon_ladder: list = field(default_factory=list)
    extrapolation_error: float = 0.0
    method: str = ""


def _herm_stack(V):
    return 0.5 * (V + np.conj(np.swapaxes(V, -1, -2)))


def _imag_stack(V):
    return (V - np.conj(np.swapaxes(V, -1, -2))) / 2j


def ladder_values(h, lam, scale=1.0):
    eps = eps_ladder(scale)
    return eps, h.values(lam + 1j * eps)


def growth_verdict(seq, t_div=None, positive=False):
    """Detect divergence of a ladder sequence (last steps).

    Divergent when the size grows monotonically over the last three steps
    and either exceeds ``t_div`` or grows by a factor >= 1.3 per step
    (power-law blow-up), or when its increments stop shrinking (logarithmic
    blow-up).  ``positive=True`` reads a scalar trace that must run to +inf.
    """
    t_div = config.get("t_div") if t_div is None else t_div
    s = np.asarray(seq)
    if positive:
        mags = np.real(s)
    else:
        mags = np.max(np.abs(s.reshape(s.shape[0], -1)), axis=1)
    last = mags[-4:]
    if not np.all(np.diff(last) > 0):
        return False
    if last[-1] > t_div:
        return True
    ratios = last[1:] / np.maximum(np.abs(last[:-1]), 1e-300)
    if np.all(last[:-1] > 0) and np.all(ratios >= 1.3):
        return True
    d = np.diff(s, axis=0).reshape(s.shape[0] - 1, -1)
    dn = np.max(np.abs(d), axis=1)[-4:]
    if np.all(dn > 1e-3) and np.all(dn[1:] >= 0.9 * dn[:-1]):
        return True
    return False


def _limit(eps, seq, lam, tol=None, positive=False, what="boundary value"):
    tol = config.get("bv_tol") if tol is None else tol
    if growth_verdict(seq, positive=positive):
        return BoundaryValue(lam, None, True, list(zip(eps, seq)), math.inf, "divergent")
    est, err, method = accelerate(seq, 2.0, tol)
    if err > tol * (1.0 + float(np.max(np.abs(est)))):
        raise Inconclusive(f"{what} at lambda={lam}: neither converged (change {err:.3g}) nor diverged")
    return BoundaryValue(lam, est, False, list(zip(eps, seq)), err, method)


def boundary_limit(h, lam, part="full", scale=1.0):
    """``M(lam + i0)`` (``part='full'``) or ``Im M(lam + i0)`` (``part='imag'``)."""
    lam = float(lam)
    eps, V = ladder_values(h, lam, scale)
    if part == "imag":
        S = _imag_stack(V)
        tr = np.real(np.trace(S, axis1=1, axis2=2))
        if growth_verdict(tr, positive=True):
            return BoundaryValue(lam, None, True, list(zip(eps, S)), math.inf, "divergent")
        return _limit(eps, S, lam, what="Im boundary value")
    return _limit(eps, V, lam)


def ac_density(h, lam):
    """``pi^{-1} Im M(lam + i0)``."""
    bv = boundary_limit(h, lam, part="imag")
    if bv.divergent:
        raise DivergentBoundary(f"Im M diverges at lambda={lam}")
    rho = herm(bv.value) / math.pi
    if not is_psd(rho, 1e-8):
        raise NoConvergence(f"extrapolated density at lambda={lam} is not PSD")
    return rho


def point_mass(h, lam):
    """``lim eps Im M(lam + i eps)``."""
    lam = float(lam)
    eps, V = ladder_values(h, lam)
    S = eps[:, None, None] * _imag_stack(V)
    est, err, _ = accelerate(S, 2.0, config.get("bv_tol"))
    if err > config.get("bv_tol") * (1.0 + float(np.max(np.abs(est)))):
        raise NoConvergence(f"point-mass ladder at lambda={lam} did not converge (change {err:.3g})")
    W = herm(est)
    if not is_psd(W, 1e-8):
        raise NoConvergence(f"extrapolated point mass at lambda={lam} is not PSD")
    return W


def real_part_vanishing(h, lam, tol=1e-6):
    """Check ``eps Re M(lam + i eps) -> 0``."""
    eps, V = ladder_values(h, float(lam))
    S = eps[:, None, None] * _herm_stack(V)
    est, _, _ = accelerate(S, 2.0, config.get("bv_tol"))
    return bool(np.max(np.abs(est)) <= tol)


def total_mass(h, k_max=40):
    """``sup_eta eta |m(i eta)|`` for a scalar function, as an IntegralVerdict."""
    if h.dim != 1:
        raise ValueError("total_mass needs a scalar function")
    etas = 2.0 ** np.arange(0, k_max + 1)
    t = np.abs(h.values(1j * etas)[:, 0, 0]) * etas
    evidence = {"eta": etas.tolist(), "eta_abs_m": t.tolist(), "sup": float(np.max(t))}
    if growth_verdict(t, positive=True):
        return IntegralVerdict(None, True, evidence)
    est, err, _ = accelerate(t, 2.0, 1e-10, order=("aitken", "richardson"))
    evidence["extrapolation_error"] = err
    if err > 1e-6 * (1.0 + abs(est)):
        return IntegralVerdict(None, False, evidence, inconclusive=True)
    return IntegralVerdict(float(max(est, np.max(t))), False, evidence)


# -- Stieltjes inversion -----------------------------------------------------

_GL_X, _GL_W = np.polynomial.legendre.leggauss(24)


def _gl_nodes(a, b):
    half = 0.5 * (b - a)
    return a + half * (_GL_X + 1.0), half * _GL_W


def _leg_integrals(h, x, eps, top):
    """``int_{eps_k}^{top} Herm M(x + i y) dy`` for every ladder value."""
    edges = list(eps[::-1])  # increasing
    y = edges[-1]
    while y < top:
        nxt = min(2.0 * y, top)
        edges.append(nxt)
        y = nxt
    nodes, weights, owner = [], [], []
    for i, (a, b) in enumerate(zip(edges, edges[1:])):
        t, w = _gl_nodes(a, b)
        nodes.append(t)
        weights.append(w)
        owner.append(np.full(t.size, i))
    nodes, weights, owner = map(np.concatenate, (nodes, weights, owner))
    V = _herm_stack(h.values(x + 1j * nodes))
    shell = np.zeros((len(edges) - 1,) + V.shape[1:], dtype=complex)
    np.add.at(shell, owner, weights[:, None, None] * V)
    # cumulative integral from each ladder epsilon (edges[j]) up to top
    tail = np.cumsum(shell[::-1], axis=0)[::-1]
    n_eps = len(eps)
    return tail[:n_eps][::-1]  # align with eps (decreasing)


def _top_integral(h, l1, l2, top):
    width = l2 - l1
    pieces = max(1, int(math.ceil(2.0 * width / top)))
    edges = np.linspace(l1, l2, pieces + 1)
    nodes, weights = zip(*(_gl_nodes(a, b) for a, b in zip(edges, edges[1:])))
    nodes, weights = np.concatenate(nodes), np.concatenate(weights)
    V = _imag_stack(h.values(nodes + 1j * top))
    return np.tensordot(weights, V, axes=(0, 0))


def stieltjes_interval(h, l1, l2, top=1.0):
    """``(1/2) Omega({l1}) + (1/2) Omega({l2}) + Omega((l1, l2))``.

    At each ladder value ``eps`` the integral of ``Im M(lam + i eps)`` over
    ``[l1, l2]`` is computed by moving the path to the upper edges of the
    rectangle ``[l1, l2] x [eps, top]`` (Cauchy's theorem), which keeps the
    integrand smooth; the resulting sequence is then extrapolated to
    ``eps = 0``.
    """
    l1, l2 = float(l1), float(l2)
    if not l1 < l2:
        raise ValueError("stieltjes_interval needs l1 < l2")
    eps = eps_ladder()
    left = _leg_integrals(h, l1, eps, top)
    right = _leg_integrals(h, l2, eps, top)
    mid = _top_integral(h, l1, l2, top)
    seq = (mid[None] + left - right) / math.pi
    tol = config.get("bv_tol")
    est, err, _ = accelerate(seq, 2.0, tol)
    if err > 10 * tol * (1.0 + float(np.max(np.abs(est)))):
        raise NoConvergence(f"interval mass on [{l1}, {l2}] did not converge (change {err:.3g})")
    return herm(est)


def endpoint_atoms(h, l1, l2, tol=None):
    """Point masses found at the interval ends (reported with half weight)."""
    tol = config.get("pp_tol") if tol is None else tol
    out = {}
    for e in (l1, l2):
        try:
            W = point_mass(h, e)
        except NoConvergence:
            continue
        if np.max(np.abs(W)) > tol:
            out[e] = W
    return out


# -- profiles ----------------------------------------------------------------

@dataclass
class BoundaryProfile:
    grid: list
    values: list
    ranks: list
    tags: list

    def divergent(self):
        return [v is None or v.divergent for v in self.values]

    def to_csv(self, fh):
        from .io_utils import fmt

        n = None
        for v in self.values:
            if v is not None and v.value is not None:
                n = np.asarray(v.value).shape[0]
                break
        n = n or 1
        cols = ["lambda"]
        cols += [f"re_M{j + 1}{k + 1}" for j in range(n) for k in range(n)]
        cols += [f"im_M{j + 1}{k + 1}" for j in range(n) for k in range(n)]
        cols += ["divergent", "rank", "tag"]
        fh.write(",".join(cols) + "\n")
        for lam, v, r, t in zip(self.grid, self.values, self.ranks, self.tags):
            if v is not None and v.value is not None:
                M = np.asarray(v.value)
                nums = [fmt(x) for x in M.real.ravel()] + [fmt(x) for x in M.imag.ravel()]
                div = "false"
            else:
                nums = ["nan"] * (2 * n * n)
                div = "true" if (v is not None and v.divergent) else "false"
            fh.write(",".join([fmt(lam)] + nums + [div, "" if r is None else str(r), str(t)]) + "\n")


def profile_point(h, lam):
    """Boundary value, Im-rank and divergence flag at one point."""
    try:
        bv = boundary_limit(h, lam)
    except Inconclusive:
        bv = None
    if bv is not None and not bv.divergent:
        w = np.linalg.eigvalsh(imag_part(bv.value))
        top = float(np.max(np.abs(w)))
        floor = max(1e-12 * (1.0 + top), config.get("rank_rel_tol") * top, bv.extrapolation_error)
        return bv, int(np.sum(w > floor))
    return bv, None


def boundary_profile(h, grid):
    grid = [float(x) for x in grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly increasing")
    res = pmap(lambda x: profile_point(h, x), grid)
    return BoundaryProfile(grid, [r[0] for r in res], [r[1] for r in res], [""] * len(grid))
