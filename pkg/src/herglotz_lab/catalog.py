"""Closed-form Herglotz functions paired with their exact representation data.

Each entry has an evaluator on the upper half-plane and, where known, the
triple ``(C, D, Omega)``.  Infinite atom families are stored as
:class:`~herglotz_lab.measures.AtomFamily` objects; they are truncated at
``|lam| <= 1e4`` for evaluation with analytic tail terms.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadParams, NoTruthData, UnknownName
from .herglotz_core import CatalogFunction
from .measures import (
    AtomFamily,
    MatrixMeasure,
    constant_piece,
    function_piece,
    power_piece,
)

EULER_GAMMA = 0.57721566490153286060651209008240243

# Bernoulli numbers B_2 ... B_14 for the digamma asymptotic series
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6)


def digamma(z):
    """Digamma on arrays of complex points away from the poles.

    Shift upwards with ``psi(z) = psi(z + 1) - 1/z`` until ``Re z >= 10``,
    then apply the asymptotic expansion.
    """
    w = np.array(z, dtype=complex, ndmin=1)
    acc = np.zeros_like(w)
    while True:
        low = w.real < 10.0
        if not np.any(low):
            break
        acc[low] -= 1.0 / w[low]
        w[low] += 1.0
    inv2 = 1.0 / (w * w)
    series = np.zeros_like(w)
    p = inv2.copy()
    for k, b in enumerate(_BERNOULLI, start=1):
        series += b / (2 * k) * p
        p = p * inv2
    return acc + np.log(w) - 0.5 / w - series


def tan_upper(z):
    """``tan z`` for ``Im z > 0`` through ``q = exp(2iz)``."""
    e = np.expm1(2j * np.asarray(z, dtype=complex))
    return -1j * e / (e + 2.0)


def cot_upper(z):
    e = np.expm1(2j * np.asarray(z, dtype=complex))
    return 1j * (e + 2.0) / e


def _scalar(x):
    return np.array([[x]], dtype=complex)


def _digamma_constant(N=10 ** 6):
    """``-gamma + sum_{n>=0} (1/(n+1) - n/(1+n^2))`` by partial sums plus tail."""
    from scipy import special

    n = np.arange(N, dtype=float)
    head = np.sum((1.0 - n) / ((n + 1.0) * (1.0 + n * n)))
    tail = -special.zeta(2, N) + 2 * special.zeta(3, N) - special.zeta(4, N)
    return -EULER_GAMMA + float(head + tail)


@dataclass
class CatalogEntry:
    name: str
    params: dict
    evaluator: object
    truth: object = None  # (C, D, MatrixMeasure) or None
    notes: str = ""
    function: object = field(default=None, repr=False)

    def __post_init__(self):
        if self.function is None:
            self.function = CatalogFunction(self.name, self.params, self.evaluator, 1,
                                            self.truth, self.notes)

    def __call__(self, z):
        return self.function(z)


def _num(params, key, default=None):
    if key not in params:
        if default is None:
            raise BadParams(f"missing parameter {key!r}")
        return float(default)
    try:
        v = float(params[key])
    except (TypeError, ValueError):
        raise BadParams(f"parameter {key!r} must be a real number") from None
    if not math.isfinite(v):
        raise BadParams(f"parameter {key!r} must be finite")
    return v


def _affine(p):
    c, d = _num(p, "c", 0.0), _num(p, "d", 1.0)
    if d < 0:
        raise BadParams("affine needs d >= 0")
    return (lambda z: c + d * z), (_scalar(c), _scalar(d), MatrixMeasure(1)), "c + d z"


def _const_imag(p):
    c, d = _num(p, "c", 0.0), _num(p, "d", 1.0)
    if d <= 0:
        raise BadParams("const_imag needs d > 0")
    mu = MatrixMeasure(1, pieces=[constant_piece(-math.inf, math.inf, d / math.pi, 1)])
    return (lambda z: np.full(np.shape(z), c + 1j * d)), (_scalar(c), _scalar(0), mu), "c + i d"


def _neg_recip(p):
    mu = MatrixMeasure(1, atoms=[(0.0, 1)])
    return (lambda z: -1.0 / z), (_scalar(0), _scalar(0), mu), "-1/z"


def _log(p):
    mu = MatrixMeasure(1, pieces=[constant_piece(-math.inf, 0.0, 1.0, 1)])
    return np.log, (_scalar(0), _scalar(0), mu), "principal log, cut on (-inf, 0]"


def _log_neg_recip(p):
    mu = MatrixMeasure(1, pieces=[constant_piece(0.0, math.inf, 1.0, 1)])
    return (lambda z: np.log(-1.0 / z)), (_scalar(0), _scalar(0), mu), "ln(-1/z) = i pi - ln z"


def _power_r(p):
    r = _num(p, "r", 0.5)
    if not 0 < r < 1:
        raise BadParams("power_r needs 0 < r < 1")
    mu = MatrixMeasure(1, pieces=[power_piece(-math.inf, 0.0, math.sin(r * math.pi) / math.pi, r, 0.0, 1)])
    C = math.cos(r * math.pi / 2)
    return (lambda z: np.power(z, r)), (_scalar(C), _scalar(0), mu), "principal z^r"


def _neg_power_r(p):
    r = _num(p, "r", 0.5)
    if not 0 < r < 1:
        raise BadParams("neg_power_r needs 0 < r < 1")
    mu = MatrixMeasure(1, pieces=[power_piece(-math.inf, 0.0, math.sin(r * math.pi) / math.pi, -r, 0.0, 1)])
    C = -math.cos(r * math.pi / 2)
    return (lambda z: -np.power(z, -r)), (_scalar(C), _scalar(0), mu), "-z^(-r)"


def _tan(p):
    fams = [AtomFamily(math.pi / 2, math.pi, _scalar(1)), AtomFamily(-math.pi / 2, -math.pi, _scalar(1))]
    mu = MatrixMeasure(1, families=fams)
    return tan_upper, (_scalar(0), _scalar(0), mu), "unit atoms at (k + 1/2) pi"


def _neg_cot(p):
    fams = [AtomFamily(0.0, math.pi, _scalar(1)), AtomFamily(-math.pi, -math.pi, _scalar(1))]
    mu = MatrixMeasure(1, families=fams)
    return (lambda z: -cot_upper(z)), (_scalar(0), _scalar(0), mu), "unit atoms at k pi"


def _digamma(p):
    mu = MatrixMeasure(1, families=[AtomFamily(0.0, -1.0, _scalar(1))])
    C = _digamma_constant()
    return digamma, (_scalar(C), _scalar(0), mu), "unit atoms at 0, -1, -2, ..."


def _mobius_atom(p):
    l1, l2 = _num(p, "lambda1", 1.0), _num(p, "lambda2", 2.0)
    if not l1 < l2:
        raise BadParams("mobius_atom needs lambda1 < lambda2")
    mu = MatrixMeasure(1, atoms=[(l1, l2 - l1)])
    C = (1 + l1 * l2) / (1 + l1 * l1)
    return (lambda z: (z - l2) / (z - l1)), (_scalar(C), _scalar(0), mu), "(z - l2)/(z - l1)"


def _mobius_log(p):
    l1, l2 = _num(p, "lambda1", 0.0), _num(p, "lambda2", 1.0)
    if not l1 < l2:
        raise BadParams("mobius_log needs lambda1 < lambda2")
    mu = MatrixMeasure(1, pieces=[constant_piece(l1, l2, 1.0, 1)])
    C = 0.5 * math.log((1 + l2 * l2) / (1 + l1 * l1))
    return (lambda z: np.log((z - l2) / (z - l1))), (_scalar(C), _scalar(0), mu), "ln((z - l2)/(z - l1))"


def _halfline_parts(alpha):
    s, c = math.sin(alpha), math.cos(alpha)

    def ev(z):
        w = 1j * np.sqrt(z)
        return (-s + c * w) / (c + s * w)

    def dens(lam):
        lam = np.asarray(lam, dtype=float)
        return np.sqrt(lam) / (math.pi * (c * c + s * s * lam))

    left = -0.5 if abs(c) < 1e-15 else 0.5
    right = 0.5 if abs(s) < 1e-15 else -0.5
    atoms = []
    if 0 < alpha < math.pi / 2 and abs(c) > 1e-15:
        cot = c / s
        atoms.append((-cot * cot, _scalar(2 * cot / (s * s))))
    piece = function_piece(0.0, math.inf, dens, 1, left, right,
                           {"kind": "halfline", "params": {"alpha": alpha}})
    mu = MatrixMeasure(1, atoms=atoms, pieces=[piece])
    C = float(np.real(ev(np.array([1j]))[0]))
    return ev, (_scalar(C), _scalar(0), mu)


def _halfline_m(p):
    alpha = _num(p, "alpha", 0.0)
    if not 0 <= alpha < math.pi:
        raise BadParams("halfline_m needs 0 <= alpha < pi")
    ev, truth = _halfline_parts(alpha)
    return ev, truth, "(-sin a + cos a i z^(1/2)) / (cos a + sin a i z^(1/2)), Im z^(1/2) > 0"


def _halfline_dirichlet(p):
    ev, truth = _halfline_parts(0.0)
    return ev, truth, "i z^(1/2)"


def _krein_m1_eval(z):
    return 1j * np.sqrt(2.0 * np.asarray(z, dtype=complex)) + 1.0


def _kreinB_M1(p):
    piece = power_piece(0.0, math.inf, math.sqrt(2.0) / math.pi, 0.5, 0.0, 1)
    mu = MatrixMeasure(1, pieces=[piece])
    return _krein_m1_eval, (_scalar(0), _scalar(0), mu), "i (2z)^(1/2) + 1, value i at z = i"


def _alpha2(p):
    a = _num(p, "alpha2", 0.0)
    return a


def _kreinB_M2(p):
    a = _alpha2(p)
    ca, sa = math.cos(a), math.sin(a)

    def ev(z):
        m1 = _krein_m1_eval(z)
        return (ca + sa * m1) / (sa - ca * m1)

    return ev, None, "(cos a2 + sin a2 M1)/(sin a2 - cos a2 M1)"


def _kreinB_P(p):
    a = _alpha2(p)
    if abs(math.cos(a)) < 1e-12:
        raise BadParams("kreinB_P needs cos(alpha2) != 0")
    t = math.tan(a)

    def ev(z):
        return -1.0 / (1.0 - t + 1j * np.sqrt(2.0 * np.asarray(z, dtype=complex)))

    return ev, None, "-(1 - tan a2 + i (2z)^(1/2))^(-1)"


def _mu_r(p):
    r = _num(p, "r", 0.5)
    if not -1 < r < 1:
        raise BadParams("mu_r needs -1 < r < 1")
    piece = power_piece(0.0, math.inf, 2 / math.pi * math.cos(r * math.pi / 2), r, 0.0, 1)
    mu = MatrixMeasure(1, pieces=[piece])
    if r == 0:
        def ev(z):
            return -2 / math.pi * np.log(-np.asarray(z, dtype=complex))
    else:
        cot, sin = 1 / math.tan(r * math.pi / 2), math.sin(r * math.pi / 2)

        def ev(z):
            return cot - np.power(-np.asarray(z, dtype=complex), r) / sin
    return ev, (_scalar(0), _scalar(0), mu), "measure (2/pi) cos(r pi/2) lam^r on [0, inf)"


_BUILDERS = {
    "affine": (_affine, {"c": 0.0, "d": 1.0}),
    "const_imag": (_const_imag, {"c": 0.0, "d": 1.0}),
    "neg_recip": (_neg_recip, {}),
    "log": (_log, {}),
    "log_neg_recip": (_log_neg_recip, {}),
    "power_r": (_power_r, {"r": 0.5}),
    "neg_power_r": (_neg_power_r, {"r": 0.5}),
    "tan": (_tan, {}),
    "neg_cot": (_neg_cot, {}),
    "digamma": (_digamma, {}),
    "mobius_atom": (_mobius_atom, {"lambda1": 1.0, "lambda2": 2.0}),
    "mobius_log": (_mobius_log, {"lambda1": 0.0, "lambda2": 1.0}),
    "halfline_m": (_halfline_m, {"alpha": 0.0}),
    "halfline_dirichlet": (_halfline_dirichlet, {}),
    "kreinB_M1": (_kreinB_M1, {}),
    "kreinB_M2": (_kreinB_M2, {"alpha2": 0.0}),
    "kreinB_P": (_kreinB_P, {"alpha2": 0.0}),
    "mu_r": (_mu_r, {"r": 0.5}),
}

NAMES = tuple(_BUILDERS)


def lookup(name, params=None):
    """Catalog entry ``name`` with parameters merged over the defaults."""
    if name not in _BUILDERS:
        raise UnknownName(f"unknown catalog entry {name!r}")
    builder, defaults = _BUILDERS[name]
    params = dict(params or {})
    extra = set(params) - set(defaults)
    if extra:
        raise BadParams(f"{name} does not take parameter(s) {sorted(extra)}")
    merged = {**defaults, **params}
    evaluator, truth, notes = builder(merged)
    return CatalogEntry(name, merged, evaluator, truth, notes)


def function(name, **params):
    """Shortcut: the Herglotz function of a catalog entry."""
    return lookup(name, params).function


def reference_measure(name, params=None):
    entry = lookup(name, params)
    if entry.truth is None:
        raise NoTruthData(f"catalog entry {name!r} has no stated measure")
    return entry.truth[2]


def describe_all():
    rows = []
    for name in NAMES:
        builder, defaults = _BUILDERS[name]
        _, truth, notes = builder(dict(defaults))
        rows.append({"name": name, "params": defaults, "truth": truth is not None, "notes": notes})
    return rows
