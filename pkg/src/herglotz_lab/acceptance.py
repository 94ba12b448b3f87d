"""End-to-end acceptance checks, shared by ``herglotz-lab selftest`` and the
test suite.  Each check returns a :class:`CheckResult` with the worst
measured deviation next to the tolerance it was held to."""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import boundary, catalog, classify, extensions, lft
from . import herglotz_core as hc
from .errors import NumericalFailure
from .measures import moment_integral


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float
    tol: float
    detail: list = field(default_factory=list)
    seconds: float = 0.0

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<28} worst={self.worst:.3e} tol={self.tol:.0e} ({self.seconds:.1f}s)"


class _Tracker:
    def __init__(self, name, tol):
        self.name, self.tol, self.worst, self.detail, self.ok = name, tol, 0.0, [], True

    def record(self, label, err, tol=None):
        tol = self.tol if tol is None else tol
        err = float(err)
        # report in units of the main tolerance so mixed tolerances compare
        self.worst = max(self.worst, err * self.tol / tol)
        if not err <= tol:
            self.ok = False
            self.detail.append(f"{label}: {err:.3e} > {tol:.0e}")

    def fail(self, label):
        self.ok = False
        self.detail.append(label)

    def result(self, t0):
        return CheckResult(self.name, self.ok, self.worst, self.tol, self.detail, time.perf_counter() - t0)


def _upper_points(k, seed):
    rng = np.random.default_rng(seed)
    return [complex(x, y) for x, y in zip(rng.uniform(-3, 3, k), rng.uniform(0.1, 3, k))]


# -- 1 ------------------------------------------------------------------------------

INVERSION_ENTRIES = [
    ("const_imag", {"d": 1.0}),
    ("neg_recip", {}),
    ("tan", {}),
    ("neg_cot", {}),
    ("digamma", {}),
    ("halfline_m", {"alpha": 0.0}),
    ("halfline_m", {"alpha": math.pi / 4}),
    ("halfline_m", {"alpha": math.pi / 2}),
    ("halfline_m", {"alpha": 3 * math.pi / 4}),
    ("mobius_atom", {}),
    ("mobius_log", {}),
]


def _density_points(mu):
    pts = []
    for p in mu.pieces:
        lo = p.a if math.isfinite(p.a) else -6.0
        hi = p.b if math.isfinite(p.b) else (lo + 6.0 if math.isfinite(p.a) else 6.0)
        pad = 0.05 * (hi - lo)
        pts.extend(np.linspace(lo + pad, hi - pad, 20).tolist())
    return pts


def _atom_points(mu, limit=12.0):
    P, _ = mu.atom_arrays()
    return [float(x) for x in P if abs(x) <= limit][:8]


def _intervals(mu):
    out = [(-2.5, 2.5), (0.25, 0.75), (-4.0, 1.0)]
    P, _ = mu.atom_arrays()
    if P.size:
        out.append((float(P[0]) - 0.5, float(P[0])))  # atom at an endpoint, half weight
    return out


def check_inversion():
    t0 = time.perf_counter()
    tr = _Tracker("inversion_vs_truth", 1e-4)
    for name, params in INVERSION_ENTRIES:
        h = catalog.function(name, **params)
        mu = catalog.reference_measure(name, params)
        tag = f"{name}{params or ''}"
        for lam in _atom_points(mu):
            tr.record(f"{tag} atom at {lam}", abs(boundary.point_mass(h, lam)[0, 0] - mu.atom_at(lam)[0, 0]))
        for lam in _density_points(mu):
            exact = float(np.real(mu.density_at(lam)[0, 0]))
            got = float(np.real(boundary.ac_density(h, lam)[0, 0]))
            tr.record(f"{tag} density at {lam:.4g}", abs(got - exact) / max(abs(exact), 1e-300))
        for l1, l2 in _intervals(mu):
            exact = mu.interval_mass(l1, l2)[0, 0]
            tr.record(f"{tag} mass of [{l1}, {l2}]", abs(boundary.stieltjes_interval(h, l1, l2)[0, 0] - exact))
    return tr.result(t0)


# -- 2 ------------------------------------------------------------------------------

def check_krein_example():
    t0 = time.perf_counter()
    tr = _Tracker("krein_example", 1e-10)
    M1 = catalog.function("kreinB_M1")
    pts = _upper_points(10, 2)
    for a2 in (0.0, math.pi / 4, 1.0):
        kd = extensions.KreinData.from_alpha2(a2)
        M2 = extensions.krein_transform(M1, kd)
        ref = catalog.function("kreinB_M2", alpha2=a2)
        P = catalog.function("kreinB_P", alpha2=a2)
        for z in pts:
            tr.record(f"M2 alpha2={a2} z={z}", abs(M2(z)[0, 0] - ref(z)[0, 0]))
            tr.record(f"P alpha2={a2} z={z}", abs(extensions.krein_p_of_z(kd, M1, z)[0, 0] - P(z)[0, 0]))
        tr.record(f"Im P(i)^-1 alpha2={a2}", abs(np.linalg.inv(kd.P_i)[0, 0].imag + 1.0))
    return tr.result(t0)


# -- 3 ------------------------------------------------------------------------------

def _random_upper_matrix(rng, n):
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Y = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (X + X.conj().T) + 1j * (Y @ Y.conj().T + 0.1 * np.eye(n))


def check_lft_algebra():
    t0 = time.perf_counter()
    tr = _Tracker("lft_algebra", 1e-10)
    rng = np.random.default_rng(7)
    for n in (1, 2, 3):
        for k in range(50):
            A = lft.random_member(n, 1000 * n + 2 * k)
            B = lft.random_member(n, 1000 * n + 2 * k + 1)
            M = _random_upper_matrix(rng, n)
            lhs = lft.apply_pointwise(A, lft.apply_pointwise(B, M))
            rhs = lft.apply_pointwise(A @ B, M)
            tr.record(f"composition n={n} pair {k}", np.linalg.norm(lhs - rhs))
            for key, res in lft.identity_residuals(A, M).items():
                tr.record(f"{key} n={n} pair {k}", res)
    return tr.result(t0)


# -- 4 ------------------------------------------------------------------------------

def invariance_functions():
    """Two 2x2 test functions with ac parts of rank 1 and 2."""
    ml = lambda a, b: catalog.function("mobius_log", lambda1=a, lambda2=b)
    h1 = hc.DirectSumFunction([ml(-2.0, -0.5), ml(0.5, 2.0)])
    B = np.array([[1.0, 0.4], [-0.3, 0.8]])
    h2 = hc.CongruenceFunction(hc.DirectSumFunction([ml(-1.0, 1.0), ml(0.0, 2.0)]), B)
    return [h1, h2]


INVARIANCE_GRID = np.linspace(-2.93, 2.89, 40).tolist()


def check_rank_invariance():
    t0 = time.perf_counter()
    tr = _Tracker("rank_invariance", 0.5)  # count of violations; must be 0
    checked = 0
    for i, h in enumerate(invariance_functions()):
        for seed in range(10):
            A = lft.random_member(2, 500 + seed)
            rep = classify.ad_invariance(h, A, INVARIANCE_GRID)
            checked += len(rep.checked)
            tr.record(f"function {i} seed {seed} violations", len(rep.violations))
            for v in rep.violations:
                tr.detail.append(f"function {i} seed {seed}: lambda={v[0]:.4g} ranks {v[1]} vs {v[2]}")
    tr.detail.insert(0, f"{checked} point comparisons")
    if checked == 0:
        tr.fail("no comparable points")
    return tr.result(t0)


# -- 5 ------------------------------------------------------------------------------

def check_friedrichs_krein():
    t0 = time.perf_counter()
    tr = _Tracker("friedrichs_krein", 1e-4)
    for r in (-0.5, 0.0, 0.5):
        h = catalog.function("mu_r", r=r)
        if extensions.friedrichs_test(h) != (r >= 0):
            tr.fail(f"friedrichs_test wrong for r={r}")
        if extensions.krein_test(h) != (r <= 0):
            tr.fail(f"krein_test wrong for r={r}")
        di = extensions.domain_intersection_test(h, "F")
        if di.finite != (r < 0):
            tr.fail(f"domain_intersection_test(F) wrong for r={r}")
        if di.finite:
            mu = catalog.reference_measure("mu_r", {"r": r})
            v = moment_integral(mu, "lambda/(1+lambda^2)")
            if v.value is None:
                tr.fail(f"quadrature oracle failed for r={r}")
            else:
                tr.record(f"F-limit r={r}", abs(di.limit[0, 0] + v.value[0, 0]))
    return tr.result(t0)


# -- 6 ------------------------------------------------------------------------------

def check_perturbation_laws():
    t0 = time.perf_counter()
    tr = _Tracker("perturbation_laws", 1e-10)
    rng = np.random.default_rng(11)
    pts = _upper_points(10, 6)
    for trial in range(4):
        k = int(rng.integers(2, 6))
        lams = np.sort(rng.uniform(-3, 3, k))
        f = rng.normal(size=(k, 1))
        model = extensions.finite_model(lams, f)
        t = float(rng.uniform(-2, 2))
        img = extensions.rank_one_image(model.function(), 0.3, 0.3 + t)
        pert = model.perturbed(t)
        for z in pts:
            tr.record(f"rank one trial {trial} z={z}", abs(img(z)[0, 0] - pert.weyl(z)[0, 0]))
        F = rng.normal(size=(k, 2)) + 1j * rng.normal(size=(k, 2))
        model2 = extensions.finite_model(lams, F)
        a, b = rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2)
        img2 = extensions.finite_rank_image(model2.function(), a, b)
        pert2 = model2.perturbed(np.diag(b - a))
        for z in pts:
            tr.record(f"finite rank trial {trial} z={z}", np.linalg.norm(img2(z) - pert2.weyl(z)))
    return tr.result(t0)


# -- 7 ------------------------------------------------------------------------------

def check_exponential_representation():
    t0 = time.perf_counter()
    tr = _Tracker("exponential_representation", 1e-5)
    nr = catalog.function("neg_recip")
    grid_pos = np.linspace(0.3, 6.0, 10).tolist()
    grid_neg = np.linspace(-6.0, -0.3, 10).tolist()
    for lam in grid_pos:
        tr.record(f"xi neg_recip {lam:.3g}", abs(classify.xi_scalar(nr, lam) - 1.0))
    for lam in grid_neg:
        tr.record(f"xi neg_recip {lam:.3g}", abs(classify.xi_scalar(nr, lam)))
    for r in (0.25, 0.5, 0.75):
        pr = catalog.function("power_r", r=r)
        for lam in grid_neg:
            tr.record(f"xi power_r r={r} {lam:.3g}", abs(classify.xi_scalar(pr, lam) - r))
    grid20 = grid_neg + grid_pos
    J = lft.J_member(1)
    for name, params in (("neg_recip", {}), ("power_r", {"r": 0.5}), ("const_imag", {"d": 1.0}), ("log", {})):
        h = catalog.function(name, **params)
        hJ = lft.apply(J, h)
        for lam in grid20:
            tr.record(f"scalar duality {name} {lam:.3g}",
                      abs(classify.xi_scalar(h, lam) + classify.xi_scalar(hJ, lam) - 1.0))
    U = np.array([[1, 1j], [1j, 1]]) / math.sqrt(2)
    mats = [
        hc.DirectSumFunction([nr, catalog.function("power_r", r=0.5)]),
        hc.CongruenceFunction(hc.DirectSumFunction([catalog.function("log"), nr]), U),
    ]
    for i, h in enumerate(mats):
        rep = classify.xi_duality_check(h, grid20, tol=1e-5)
        for row in rep["rows"]:
            tr.record(f"matrix duality {i} {row['lambda']:.3g}", row["residual"])
        for lam in grid20:
            _, clamp = classify.xi_matrix(h, lam, detail=True)
            tr.record(f"Xi bounds {i} {lam:.3g}", clamp, 1e-6)
    return tr.result(t0)


# -- 8 ------------------------------------------------------------------------------

def seeded_rational(seed):
    """``m = c + sum w_j / (lam_j - z)`` with up to three atoms, plus the
    zeros of ``m + 1`` found from the numerator polynomial."""
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, 4))
    lams = np.sort(rng.uniform(-3, 3, k))
    w = rng.uniform(0.2, 2.0, k)
    c = float(rng.uniform(-0.5, 0.5))

    def m(z):
        return c + np.sum(w / (lams - z))

    lin = [np.poly1d([-1.0, l]) for l in lams]

    def prod(polys):
        out = np.poly1d([1.0])
        for p in polys:
            out = out * p
        return out

    num = (c + 1.0) * prod(lin)
    for j in range(k):
        num = num + w[j] * prod(lin[:j] + lin[j + 1:])
    zeros = np.sort(np.real(np.roots(num.coeffs)))
    return m, lams.tolist(), zeros.tolist()


def check_two_spectra():
    t0 = time.perf_counter()
    tr = _Tracker("two_spectra_roundtrip", 1e-8)
    a = lft.shear(1.0)
    for seed in (1, 2, 3):
        m, poles, zeros = seeded_rational(seed)
        data = classify.TwoSpectra(poles, zeros, {"kind": "value", "z0": 1j, "value": m(1j)})
        rec = classify.borg_reconstruct(data, a)
        for z in _upper_points(5, 100 + seed):
            tr.record(f"seed {seed} z={z}", abs(rec(z)[0, 0] - m(z)))
    return tr.result(t0)


# -- 9 ------------------------------------------------------------------------------

def normalized_model(positions, F):
    """Finite model rescaled so that ``Im M(i) = I``."""
    model = extensions.finite_model(positions, F)
    N = model.weyl(1j).imag if model.n == 1 else (model.weyl(1j) - model.weyl(1j).conj().T) / 2j
    w, V = np.linalg.eigh(np.atleast_2d(N))
    S = (V / np.sqrt(w)) @ V.conj().T
    return extensions.FiniteModel(model.H, model.F @ S)


LOWER_BOUND_GRID = [complex(x, y) for y in (0.2, 1.0, 3.0) for x in (-2.0, -0.5, 0.0, 0.7, 2.5)]


def check_lower_bound():
    t0 = time.perf_counter()
    tr = _Tracker("lower_bound", 1e-8)
    models = [
        catalog.function("kreinB_M1"),
        normalized_model([-1.0, 2.0], [[1.0], [1.0]]).function(),
        normalized_model([-2.0, 0.0, 1.5], [[1.0, 0.0], [0.5, 1.0], [0.0, 1.0]]).function(),
    ]
    for i, M in enumerate(models):
        rep = extensions.herglotz_lower_bound_check(M, LOWER_BOUND_GRID)
        if not rep["precondition_ok"]:
            tr.fail(f"model {i} is not normalized")
        for row in rep["rows"]:
            tr.record(f"model {i} z={row['z']}", max(0.0, -row["slack"]))
        # the product form is implied where Im z >= 1
        upper = [z for z in LOWER_BOUND_GRID if z.imag >= 1.0]
        for row in extensions.herglotz_lower_bound_check(M, upper, form="product")["rows"]:
            tr.record(f"model {i} product form z={row['z']}", max(0.0, -row["slack"]))
    return tr.result(t0)


# -- 10 ------------------------------------------------------------------------------

def suite_functions():
    """Every catalog entry (default parameters) and every transformed function used above."""
    out = [(f"catalog:{n}", catalog.function(n)) for n in catalog.NAMES]
    out += [(f"halfline_m alpha={a:.3g}", catalog.function("halfline_m", alpha=a))
            for a in (math.pi / 4, math.pi / 2, 3 * math.pi / 4)]
    nr = catalog.function("neg_recip")
    out.append(("J(neg_recip)", lft.apply(lft.J_member(1), nr)))
    out.append(("shear(neg_recip)", lft.apply(lft.shear(1.0), nr)))
    out.append(("rotation(halfline_dirichlet)", lft.apply(lft.rotation(0.0, math.pi / 3),
                                                          catalog.function("halfline_dirichlet"))))
    for i, h in enumerate(invariance_functions()):
        out.append((f"invariance function {i}", h))
        out.append((f"random member on invariance function {i}", lft.apply(lft.random_member(2, 500), h)))
    M1 = catalog.function("kreinB_M1")
    for a2 in (0.0, math.pi / 4, 1.0):
        out.append((f"krein alpha2={a2}", extensions.krein_transform(M1, extensions.KreinData.from_alpha2(a2))))
    return out


def check_global_properties():
    t0 = time.perf_counter()
    tr = _Tracker("global_properties", 1e-6)
    for name, h in suite_functions():
        try:
            rep = hc.verify_herglotz(h)
        except NumericalFailure as exc:
            tr.fail(f"{name}: {exc}")
            continue
        if not rep.ok:
            tr.fail(f"{name}: {rep.failures}")
        for z in hc.DEFAULT_GRID:
            tr.record(f"{name} reflection at {z}", np.linalg.norm(h(z.conjugate()) - h(z).conj().T))
        truth = getattr(h, "truth", None)
        if truth is not None:
            C, D, mu = truth
            rep_f = hc.RepresentationFunction(C, D, mu)
            for z in hc.DEFAULT_GRID:
                tr.record(f"{name} representation at {z}", np.linalg.norm(rep_f(z) - h(z)))
    return tr.result(t0)


CHECKS = {
    "inversion_vs_truth": check_inversion,
    "krein_example": check_krein_example,
    "lft_algebra": check_lft_algebra,
    "rank_invariance": check_rank_invariance,
    "friedrichs_krein": check_friedrichs_krein,
    "perturbation_laws": check_perturbation_laws,
    "exponential_representation": check_exponential_representation,
    "two_spectra_roundtrip": check_two_spectra,
    "lower_bound": check_lower_bound,
    "global_properties": check_global_properties,
}


def run(filter_name=None):
    names = [n for n in CHECKS if filter_name is None or filter_name in n]
    results = []
    for n in names:
        t0 = time.perf_counter()
        try:
            results.append(CHECKS[n]())
        except Exception as exc:  # a crash is a failed check, reported as such
            results.append(CheckResult(n, False, math.inf, 0.0, [f"{type(exc).__name__}: {exc}"],
                                       time.perf_counter() - t0))
    return results
