"""Nonnegative matrix-valued measures built from atoms and ac pieces.

A measure is a finite list of point masses, optional infinite arithmetic
families of equal point masses (truncated for evaluation, with analytic
tail terms), and absolutely continuous pieces of the form
``f(lam) W dlam`` with a scalar profile ``f >= 0`` and a constant PSD
matrix ``W``.  Every profile records its power-law exponent at each end
of its interval, which lets the divergence questions be answered from
exponents instead of truncation alone.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from ._quad import quad

from . import config
from .errors import AtomOnSingularity, BadParams, NotIntegrable, NotPSD
from .matrix_kernel import as_cmatrix, herm, is_psd

LAMBDA_MAX = 1.0e4


def _psd_matrix(W, n=None, what="weight"):
    W = as_cmatrix(W)
    if n is not None and W.shape != (n, n):
        raise BadParams(f"{what} has shape {W.shape}, expected {(n, n)}")
    return herm(W)


@dataclass(frozen=True)
class Atom:
    position: float
    weight: np.ndarray


@dataclass(frozen=True)
class AtomFamily:
    """Point masses ``weight`` at ``first + step * k`` for k = 0, 1, 2, ..."""

    first: float
    step: float
    weight: np.ndarray

    def positions(self, lam_max=LAMBDA_MAX):
        count = int(math.floor((lam_max - abs(self.first)) / abs(self.step))) + 1
        count = max(count, 0)
        return self.first + self.step * np.arange(count)

    def hurwitz_shift(self, lam_max=LAMBDA_MAX):
        # discarded positions are step * (k + c) for k = N, N+1, ...
        N = self.positions(lam_max).size
        return N + self.first / self.step

    def tail(self, z, lam_max=LAMBDA_MAX):
        """Sum of the regularized Cauchy kernel over the discarded atoms."""
        q = self.hurwitz_shift(lam_max)
        s = self.step
        z = complex(z)
        val = (
            z * s ** -2 * special.zeta(2, q)
            + (1 + z * z) * s ** -3 * special.zeta(3, q)
            + z ** 3 * s ** -4 * special.zeta(4, q)
        )
        return val * self.weight

    def tail_error(self, z, lam_max=LAMBDA_MAX):
        q = self.hurwitz_shift(lam_max)
        z = abs(complex(z))
        bound = (z ** 4 + z * z + 1) * abs(self.step) ** -5 * special.zeta(5, q)
        return float(bound * np.linalg.norm(self.weight, 2))


@dataclass(frozen=True)
class AcPiece:
    """Density ``f(lam) * weight`` on ``[a, b]`` (either end may be infinite).

    ``left_exp`` / ``right_exp`` describe ``f`` near the ends: ``|lam - e|^s``
    at a finite end ``e`` and ``|lam|^s`` at an infinite end.  ``None`` means
    unknown, in which case divergence questions fall back on the ladder.
    """

    a: float
    b: float
    f: object
    weight: np.ndarray
    left_exp: object = 0.0
    right_exp: object = 0.0
    label: dict = field(default_factory=dict)

    def density(self, lam):
        return np.asarray(self.f(np.asarray(lam, dtype=float)), dtype=float)

    def exponent_at(self, end):
        return self.left_exp if end == self.a else self.right_exp


def _interp_exponent(a, b, origin, p, end):
    if math.isinf(end):
        return p
    return p if end == origin else 0.0


def constant_piece(a, b, value, weight):
    value = float(value)
    if value < 0:
        raise NotPSD(f"negative constant density {value}")
    return AcPiece(
        a, b, lambda lam, v=value: np.full(np.shape(lam), v), weight, 0.0, 0.0,
        {"kind": "constant", "params": {"value": value}},
    )


def power_piece(a, b, coef, exponent, origin, weight):
    """Density ``coef * |lam - origin|^exponent``."""
    coef, p, origin = float(coef), float(exponent), float(origin)
    if coef < 0:
        raise NotPSD(f"negative density coefficient {coef}")
    if a < origin < b:
        raise BadParams("power density origin must not lie inside the interval")

    def f(lam, c=coef, p=p, o=origin):
        return c * np.abs(lam - o) ** p

    return AcPiece(
        a, b, f, weight,
        _interp_exponent(a, b, origin, p, a), _interp_exponent(a, b, origin, p, b),
        {"kind": "power", "params": {"coef": coef, "exponent": p, "origin": origin}},
    )


def samples_piece(lams, values, weight):
    lams = np.asarray(lams, dtype=float)
    values = np.asarray(values, dtype=float)
    if lams.ndim != 1 or lams.size < 2 or lams.shape != values.shape:
        raise BadParams("samples need matching 1-D arrays of length >= 2")
    if np.any(np.diff(lams) <= 0):
        raise BadParams("sample abscissae must be strictly increasing")
    if np.any(values < 0):
        raise NotPSD("negative sampled density value")

    def f(lam, x=lams, y=values):
        return np.interp(lam, x, y)

    return AcPiece(
        float(lams[0]), float(lams[-1]), f, weight, 0.0, 0.0,
        {"kind": "samples", "params": {"lambda": lams.tolist(), "values": values.tolist()}},
    )


def function_piece(a, b, f, weight, left_exp=None, right_exp=None, label=None):
    return AcPiece(a, b, f, weight, left_exp, right_exp, label or {"kind": "function"})


class MatrixMeasure:
    """Atoms, atom families and ac pieces sharing one matrix dimension."""

    def __init__(self, dim, atoms=(), pieces=(), families=(), lam_max=LAMBDA_MAX):
        self.dim = int(dim)
        n = self.dim
        at = [Atom(float(p), _psd_matrix(W, n, "atom weight")) for p, W in atoms]
        at.sort(key=lambda x: x.position)
        for x, y in zip(at, at[1:]):
            if x.position == y.position:
                raise BadParams(f"duplicate atom position {x.position}")
        self.atoms = tuple(at)
        self.pieces = tuple(
            AcPiece(float(p.a), float(p.b), p.f, _psd_matrix(p.weight, n, "piece weight"),
                    p.left_exp, p.right_exp, p.label)
            for p in pieces
        )
        for p in self.pieces:
            if not p.a < p.b:
                raise BadParams(f"empty ac interval [{p.a}, {p.b}]")
        self.families = tuple(
            AtomFamily(float(f.first), float(f.step), _psd_matrix(f.weight, n, "family weight"))
            for f in families
        )
        for f in self.families:
            if f.step == 0 or f.first * f.step < 0:
                raise BadParams("atom family needs a nonzero step pointing away from the origin")
        self.lam_max = float(lam_max)
        self._cache = None

    # -- atoms ---------------------------------------------------------
    def atom_arrays(self):
        """Positions and weights of explicit plus materialized family atoms."""
        if self._cache is None:
            pos = [a.position for a in self.atoms]
            W = [a.weight for a in self.atoms]
            for f in self.families:
                p = f.positions(self.lam_max)
                pos.extend(p.tolist())
                W.extend([f.weight] * p.size)
            n = self.dim
            if pos:
                order = np.argsort(pos, kind="stable")
                P = np.asarray(pos, dtype=float)[order]
                Wa = np.asarray(W, dtype=complex).reshape(len(pos), n, n)[order]
            else:
                P = np.zeros(0)
                Wa = np.zeros((0, n, n), dtype=complex)
            self._cache = (P, Wa)
        return self._cache

    def tail_correction(self, z):
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for f in self.families:
            out += f.tail(z, self.lam_max)
        return out

    def tail_error(self, z):
        return sum(f.tail_error(z, self.lam_max) for f in self.families)

    def is_zero(self):
        return not self.atoms and not self.pieces and not self.families

    def support_in(self, lo, hi=math.inf):
        """True iff every atom and piece lies in ``[lo, hi]``."""
        for a in self.atoms:
            if np.any(a.weight) and not lo <= a.position <= hi:
                return False
        for p in self.pieces:
            if np.any(p.weight) and (p.a < lo or p.b > hi):
                return False
        for f in self.families:
            lo_f = f.first if f.step > 0 else -math.inf
            hi_f = f.first if f.step < 0 else math.inf
            if lo_f < lo or hi_f > hi:
                return False
        return True

    def density_at(self, lam):
        """Sum of the ac densities at an interior point of their pieces."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for p in self.pieces:
            if p.a < lam < p.b:
                out += float(p.density(lam)) * p.weight
        return out

    def atom_at(self, lam):
        P, W = self.atom_arrays()
        hit = np.nonzero(P == float(lam))[0]
        return W[hit[0]].copy() if hit.size else np.zeros((self.dim, self.dim), dtype=complex)

    def interval_mass(self, l1, l2):
        """``Omega((l1, l2)) + (Omega({l1}) + Omega({l2}))/2`` for finite ends."""
        P, W = self.atom_arrays()
        out = W[(P > l1) & (P < l2)].sum(axis=0) if P.size else 0
        out = out + 0.5 * (self.atom_at(l1) + self.atom_at(l2))
        for p in self.pieces:
            lo, hi = max(l1, p.a), min(l2, p.b)
            if lo < hi:
                out = out + quad(lambda x: float(p.density(x)), lo, hi, limit=400, epsabs=1e-13)[0] * p.weight
        return herm(np.asarray(out, dtype=complex).reshape(self.dim, self.dim))

    def quadratic(self, c):
        """Scalar measure ``(c, Omega c)``."""
        c = np.asarray(c, dtype=complex).ravel()

        def q(W):
            return np.array([[np.real(c.conj() @ W @ c)]])

        return MatrixMeasure(
            1,
            [(a.position, q(a.weight)) for a in self.atoms],
            [AcPiece(p.a, p.b, p.f, q(p.weight), p.left_exp, p.right_exp, p.label)
             for p in self.pieces],
            [AtomFamily(f.first, f.step, q(f.weight)) for f in self.families],
            self.lam_max,
        )

    def __repr__(self):
        return (f"MatrixMeasure(dim={self.dim}, atoms={len(self.atoms)}, "
                f"families={len(self.families)}, pieces={len(self.pieces)})")


def trace_measure(mu):
    """Scalar measure whose weights are the traces of ``mu``'s weights."""

    def tr(W):
        return np.array([[np.real(np.trace(W))]])

    return MatrixMeasure(
        1,
        [(a.position, tr(a.weight)) for a in mu.atoms],
        [AcPiece(p.a, p.b, p.f, tr(p.weight), p.left_exp, p.right_exp, p.label)
         for p in mu.pieces],
        [AtomFamily(f.first, f.step, tr(f.weight)) for f in mu.families],
        mu.lam_max,
    )


def direct_sum(measures):
    """Block-diagonal measure from a list of measures."""
    dims = [m.dim for m in measures]
    n = sum(dims)
    atoms, pieces, families = {}, [], []
    off = 0
    for m in measures:
        d = m.dim

        def embed(W, off=off, d=d):
            E = np.zeros((n, n), dtype=complex)
            E[off:off + d, off:off + d] = W
            return E

        for a in m.atoms:
            atoms[a.position] = atoms.get(a.position, 0) + embed(a.weight)
        for p in m.pieces:
            pieces.append(AcPiece(p.a, p.b, p.f, embed(p.weight), p.left_exp, p.right_exp, p.label))
        for f in m.families:
            families.append(AtomFamily(f.first, f.step, embed(f.weight)))
        off += d
    lam_max = min([m.lam_max for m in measures] or [LAMBDA_MAX])
    return MatrixMeasure(n, sorted(atoms.items()), pieces, families, lam_max)


# -- weights -------------------------------------------------------------

@dataclass(frozen=True)
class Weight:
    """Integrand weight ``w(lam)`` with its singular points and tail exponent."""

    func: object
    singular: tuple = ()  # ((point, exponent), ...)
    inf_exp: float = 0.0
    name: str = "custom"

    def __call__(self, lam):
        return self.func(lam)

    def exponent_at(self, point):
        for p, e in self.singular:
            if p == point:
                return e
        return 0.0


def weight_by_name(name, center=None):
    if name in ("1/lambda", "inv"):
        return Weight(lambda x: 1.0 / x, ((0.0, -1.0),), -1.0, "1/lambda")
    if name in ("lambda/(1+lambda^2)", "reg"):
        return Weight(lambda x: x / (1.0 + x * x), (), -1.0, "lambda/(1+lambda^2)")
    if name in ("1/(1+lambda^2)", "norm"):
        return Weight(lambda x: 1.0 / (1.0 + x * x), (), -2.0, "1/(1+lambda^2)")
    if name in ("1",):
        return Weight(lambda x: np.ones_like(np.asarray(x, dtype=float)), (), 0.0, "1")
    if name in ("1/(lambda-c)^2", "inv_sq_shift"):
        if center is None:
            raise BadParams("weight 1/(lambda-c)^2 needs a center")
        c = float(center)
        return Weight(lambda x: 1.0 / (x - c) ** 2, ((c, -2.0),), -2.0, "1/(lambda-c)^2")
    raise BadParams(f"unknown weight {name!r}")


# -- verdicts --------------------------------------------------------------

@dataclass
class IntegralVerdict:
    """Outcome of a possibly divergent integral.

    ``divergent_weight`` is the PSD matrix summing the weights of all
    divergent contributions: the integral of ``(c, dOmega c) w`` diverges
    exactly for the directions ``c`` with ``(c, divergent_weight c) > 0``.
    """

    value: object
    divergent: bool
    evidence: dict = field(default_factory=dict)
    inconclusive: bool = False
    divergent_weight: object = None

    def diverges_for(self, c):
        if self.divergent_weight is None:
            return self.divergent
        c = np.asarray(c, dtype=complex).ravel()
        q = float(np.real(c.conj() @ self.divergent_weight @ c))
        return q > 1e-12 * max(1.0, float(np.linalg.norm(self.divergent_weight)))

    def diverges_for_all(self):
        if self.divergent_weight is None:
            return self.divergent
        D = herm(self.divergent_weight)
        return bool(np.linalg.eigvalsh(D)[0] > 1e-12 * max(1.0, np.linalg.norm(D)))

    def converges_for_all(self):
        if self.inconclusive:
            return False
        if self.divergent_weight is None:
            return not self.divergent
        return not np.any(np.abs(self.divergent_weight) > 0)


def ladder_verdict(values, delta_div=None, delta_conv=None):
    """Classify a ladder of partial integrals ``I_1, I_2, ...``.

    The first test uses the ratios of successive increments: a geometric
    decay with ratio below 0.97 is convergent, increments that do not shrink
    (ratio above 0.98) with a common sign are divergent.  Otherwise the
    absolute thresholds decide.  Returns ``(verdict, estimate)`` with
    verdict in {"convergent", "divergent", "inconclusive"}.
    """
    delta_div = config.get("delta_div") if delta_div is None else delta_div
    delta_conv = config.get("delta_conv") if delta_conv is None else delta_conv
    v = np.asarray(values, dtype=float)
    d = np.diff(v)
    if d.size < 4:
        return "inconclusive", None
    last = d[-4:]
    scale = max(1.0, abs(v[-1]))
    if np.all(np.abs(d[-3:]) < delta_conv * scale):
        return "convergent", float(v[-1])
    if np.all(last > 0) or np.all(last < 0):
        rho = last[1:] / last[:-1]
        if np.all(rho >= 0.98):
            return "divergent", None
        if np.all(rho <= 0.97) and np.all(rho > 0):
            r = float(rho[-1])
            return "convergent", float(v[-1] + d[-1] * r / (1.0 - r))
    if np.all(d[-3:] > delta_div):
        return "divergent", None
    return "inconclusive", None


def _piece_ladder(piece, weight, start, direction, k_max=20):
    """Partial integrals of ``f w`` towards an infinite end or a singular point.

    ``direction='inf'`` integrates over ``[R, R 2^k]`` (or the mirror image);
    ``direction=('to', e)`` integrates over shells shrinking onto ``e``.
    """
    g = lambda x: float(piece.density(x) * weight(x))
    vals, acc = [], 0.0
    if direction == "+inf" or direction == "-inf":
        sgn = 1.0 if direction == "+inf" else -1.0
        R = max(1.0, abs(start))
        lo = R
        for k in range(1, k_max + 1):
            hi = R * 2.0 ** k
            acc += quad(lambda t: g(sgn * t), lo, hi, limit=200)[0]
            vals.append(acc)
            lo = hi
    else:
        e, R = direction[1], start
        h0 = abs(R - e)
        sgn = 1.0 if R > e else -1.0
        lo = h0
        for k in range(1, k_max + 1):
            hi = h0 * 2.0 ** -k
            acc += quad(lambda t: g(e + sgn * t), hi, lo, limit=200)[0]
            vals.append(acc)
            lo = hi
    return vals


def _end_verdict(piece, weight, end, inner):
    """Decide convergence of ``int f w`` at one end of a sub-interval."""
    if math.isinf(end):
        fe = piece.right_exp if end > 0 else piece.left_exp
        direction = "+inf" if end > 0 else "-inf"
        evidence = _piece_ladder(piece, weight, inner, direction)
        if fe is not None:
            return (fe + weight.inf_exp >= -1.0), evidence
    else:
        fe = piece.exponent_at(end) if end in (piece.a, piece.b) else 0.0
        we = weight.exponent_at(end)
        if we == 0.0 and fe is not None and fe > -1.0:
            return False, []
        evidence = _piece_ladder(piece, weight, inner, ("to", end))
        if fe is not None:
            return (fe + we <= -1.0), evidence
    verdict, _ = ladder_verdict(evidence)
    if verdict == "inconclusive":
        return None, evidence
    return verdict == "divergent", evidence


def _quad_piece(piece, weight, a, b, singular_inside):
    g = lambda x: float(piece.density(x) * weight(x))
    cuts = [a] + sorted(singular_inside) + [b]
    total = 0.0
    for lo, hi in zip(cuts, cuts[1:]):
        if math.isinf(lo) and math.isinf(hi):
            total += quad(g, -math.inf, 0.0, limit=400)[0]
            total += quad(g, 0.0, math.inf, limit=400)[0]
        elif math.isinf(lo) or math.isinf(hi):
            # finite part first, then the tail, to keep the peak resolved
            if math.isinf(hi):
                m = max(lo + 1.0, 2.0 * abs(lo) + 1.0)
                total += quad(g, lo, m, limit=400)[0]
                total += quad(g, m, math.inf, limit=400)[0]
            else:
                m = min(hi - 1.0, -2.0 * abs(hi) - 1.0)
                total += quad(g, m, hi, limit=400)[0]
                total += quad(g, -math.inf, m, limit=400)[0]
        else:
            total += quad(g, lo, hi, limit=400, epsabs=config.get("quad_abs"))[0]
    return total


def _family_sum(fam, weight, a, b, lam_max):
    """Sum of ``w`` over a family's atoms inside [a, b]; None when divergent."""
    s = fam.step
    # index range of atoms inside [a, b]
    if s > 0:
        k_lo = max(0, math.ceil((a - fam.first) / s)) if not math.isinf(a) else 0
        k_hi = math.floor((b - fam.first) / s) if not math.isinf(b) else math.inf
    else:
        k_lo = max(0, math.ceil((b - fam.first) / s)) if not math.isinf(b) else 0
        k_hi = math.floor((a - fam.first) / s) if not math.isinf(a) else math.inf
    if k_hi != math.inf and k_hi < k_lo:
        return 0.0, False
    for p, _ in weight.singular:
        k = (p - fam.first) / s
        if k >= k_lo and k <= k_hi and abs(k - round(k)) < 1e-12:
            raise AtomOnSingularity(f"family atom at weight singularity {p}")
    if k_hi == math.inf:
        if weight.inf_exp >= -1.0:
            return None, True
        K = max(k_lo, 10 ** 6)
        ks = np.arange(k_lo, K)
        head = float(np.sum(weight(fam.first + s * ks)))
        tail = quad(lambda t: float(weight(fam.first + s * t)), K - 0.5, math.inf,
                              limit=200)[0]
        return head + tail, False
    ks = np.arange(k_lo, k_hi + 1)
    return float(np.sum(weight(fam.first + s * ks))), False


def moment_integral(mu, weight, interval=(-math.inf, math.inf), center=None,
                    atom_policy="raise"):
    """Integral of ``w(lam) dOmega(lam)`` over a closed interval.

    ``weight`` is a :class:`Weight` or a name ("1/lambda",
    "lambda/(1+lambda^2)", "1/(lambda-c)^2", "1/(1+lambda^2)", "1").
    Atoms are summed exactly; ac pieces use adaptive quadrature.  Divergence
    is read off the power-law exponents when they are declared, and from the
    truncation ladder otherwise.  ``atom_policy='diverge'`` turns an atom at
    a weight singularity into a divergent contribution instead of an error.
    """
    if not isinstance(weight, Weight):
        weight = weight_by_name(weight, center)
    a, b = float(interval[0]), float(interval[1])
    if not a < b:
        raise BadParams("interval must satisfy a < b")
    n = mu.dim
    value = np.zeros((n, n), dtype=complex)
    div_w = np.zeros((n, n), dtype=complex)
    evidence = {}
    inconclusive = False
    sing_pts = [p for p, _ in weight.singular]

    for at in mu.atoms:
        if a <= at.position <= b:
            if at.position in sing_pts:
                if atom_policy == "diverge":
                    div_w += at.weight
                    continue
                raise AtomOnSingularity(f"atom at {at.position} sits on a weight singularity")
            value += at.weight * float(weight(at.position))

    for i, fam in enumerate(mu.families):
        try:
            s, div = _family_sum(fam, weight, a, b, mu.lam_max)
        except AtomOnSingularity:
            if atom_policy == "diverge":
                div_w += fam.weight
                continue
            raise
        if div:
            div_w += fam.weight
            evidence[f"family{i}"] = "infinite family against non-decaying weight"
        else:
            value += s * fam.weight

    for i, piece in enumerate(mu.pieces):
        lo, hi = max(a, piece.a), min(b, piece.b)
        if not lo < hi:
            continue
        inside = sorted(p for p in sing_pts if lo < p < hi)
        cuts = [lo] + inside + [hi]
        div = False
        for s0, s1 in zip(cuts, cuts[1:]):
            for e, other in ((s0, s1), (s1, s0)):
                if not (math.isinf(e) or e in sing_pts or e in (piece.a, piece.b)):
                    continue
                if math.isinf(e):
                    inner = 0.0 if math.isinf(other) else other
                else:
                    gap = 1.0 if math.isinf(other) else min(1.0, 0.5 * abs(other - e))
                    inner = e + math.copysign(gap, other - e)
                verdict, ev = _end_verdict(piece, weight, e, inner)
                if ev:
                    evidence[f"piece{i}@{e}"] = ev
                if verdict is None:
                    inconclusive = True
                elif verdict:
                    div = True
        if div:
            div_w += piece.weight
        elif not inconclusive:
            value += piece.weight * _quad_piece(piece, weight, lo, hi, inside)

    divergent = bool(np.any(np.abs(div_w) > 0))
    return IntegralVerdict(
        value=None if (divergent or inconclusive) else herm(value),
        divergent=divergent,
        evidence=evidence,
        inconclusive=inconclusive and not divergent,
        divergent_weight=herm(div_w),
    )


@dataclass
class ValidationReport:
    normalization: np.ndarray
    ok: bool
    messages: list


def validate(mu):
    """Check PSD weights and integrability against ``1/(1+lam^2)``.

    Returns the normalization matrix ``int dOmega/(1+lam^2)``.
    """
    tol = config.get("psd_tol")
    for a in mu.atoms:
        if not is_psd(a.weight, tol):
            raise NotPSD(f"atom at {a.position} has a non-PSD weight")
    for i, f in enumerate(mu.families):
        if not is_psd(f.weight, tol):
            raise NotPSD(f"atom family {i} has a non-PSD weight")
    for i, p in enumerate(mu.pieces):
        if not is_psd(p.weight, tol):
            raise NotPSD(f"ac piece {i} on [{p.a}, {p.b}] has a non-PSD weight")
        lo = p.a if not math.isinf(p.a) else -50.0
        hi = p.b if not math.isinf(p.b) else 50.0
        xs = np.linspace(lo, hi, 41)[1:-1]
        if np.any(p.density(xs) < 0):
            raise NotPSD(f"ac piece {i} on [{p.a}, {p.b}] has negative density values")
    v = moment_integral(mu, "1/(1+lambda^2)")
    if v.divergent or v.inconclusive:
        which = [k for k in v.evidence] or ["tail"]
        raise NotIntegrable(f"int dOmega/(1+lambda^2) is not finite ({', '.join(which)})")
    return ValidationReport(v.value, True, [])


CLASS_TAGS = ("N1", "N0", "N0_F", "N0_K", "N0_FK", "N0_Fperp", "N0_Kperp", "N0_FKperp")


def probe_vectors(n):
    """Basis vectors and pair sums used to report quadratic-form checks."""
    eye = np.eye(n)
    vecs = [eye[j] for j in range(n)]
    for j in range(n):
        for k in range(j + 1, n):
            vecs.append(eye[j] + eye[k])
    return vecs


def class_membership(mu, tag, R=1.0):
    """Membership of ``mu`` in one of the measure classes.

    "For all c" conditions are decided exactly through the divergent-weight
    matrix of each integral (positive definite means divergence in every
    direction, zero means convergence in every direction).
    """
    if tag not in CLASS_TAGS:
        raise BadParams(f"unknown class tag {tag!r}")
    validate(mu)
    total = moment_integral(mu, "1")
    if tag == "N1":
        return total.converges_for_all()
    in_n0 = total.diverges_for_all()
    if tag == "N0" or not in_n0:
        return in_n0
    if not mu.support_in(0.0):
        return False
    w = weight_by_name("1/lambda")
    far = moment_integral(mu, w, (R, math.inf))
    near = moment_integral(mu, w, (0.0, R), atom_policy="diverge")
    if far.inconclusive or near.inconclusive:
        from .errors import Inconclusive

        raise Inconclusive(f"moment test inconclusive for class {tag}")
    f_all, k_all = far.diverges_for_all(), near.diverges_for_all()
    f_none, k_none = far.converges_for_all(), near.converges_for_all()
    return {
        "N0_F": f_all,
        "N0_K": k_all,
        "N0_FK": f_all and k_all,
        "N0_Fperp": f_none,
        "N0_Kperp": k_none,
        "N0_FKperp": f_none and k_none,
    }[tag]
