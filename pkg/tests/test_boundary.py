import io
import math

import numpy as np
import pytest

from herglotz_lab import boundary, catalog
from herglotz_lab.errors import DivergentBoundary
from herglotz_lab.herglotz_core import affine


def test_boundary_value_off_support():
    bv = boundary.boundary_limit(catalog.function("neg_recip"), 1.0)
    assert not bv.divergent and abs(bv.value[0, 0] + 1.0) < 1e-9


def test_boundary_value_at_pole_diverges():
    assert boundary.boundary_limit(catalog.function("neg_recip"), 0.0).divergent


def test_boundary_value_on_ac_support():
    bv = boundary.boundary_limit(catalog.function("halfline_dirichlet"), 4.0)
    assert abs(bv.value[0, 0] - 2j) < 1e-8


@pytest.mark.parametrize("h, l1, l2, expected", [
    (catalog.function("neg_cot"), -1.0, 1.0, 1.0),
    (catalog.function("const_imag"), 0.0, math.pi, 1.0),
    (affine(0.0, 1.0), -2.0, 3.0, 0.0),
])
def test_stieltjes_interval(h, l1, l2, expected):
    assert abs(boundary.stieltjes_interval(h, l1, l2)[0, 0] - expected) < 1e-6


def test_stieltjes_interval_multiple_atoms():
    # tan has unit atoms at pi/2 and 3 pi/2; digamma at 0, -1, -2
    assert abs(boundary.stieltjes_interval(catalog.function("tan"), math.pi / 2, 3 * math.pi / 2 + 0.1)[0, 0] - 1.5) < 1e-6
    assert abs(boundary.stieltjes_interval(catalog.function("digamma"), -2.5, 0.5)[0, 0] - 3.0) < 1e-6


def test_stieltjes_against_reference_measure():
    h = catalog.function("halfline_m", alpha=math.pi / 4)
    mu = catalog.reference_measure("halfline_m", {"alpha": math.pi / 4})
    for l1, l2 in ((-2.0, 0.5), (0.5, 3.0)):
        assert abs(boundary.stieltjes_interval(h, l1, l2)[0, 0] - mu.interval_mass(l1, l2)[0, 0]) < 1e-6


@pytest.mark.parametrize("h, lam, expected", [
    (catalog.function("halfline_dirichlet"), 4.0, 2.0 / math.pi),
    (catalog.function("const_imag"), 0.0, 1.0 / math.pi),
    (catalog.function("neg_recip"), 1.0, 0.0),
])
def test_ac_density(h, lam, expected):
    assert abs(boundary.ac_density(h, lam)[0, 0] - expected) < 1e-7


def test_ac_density_at_atom_diverges():
    with pytest.raises(DivergentBoundary):
        boundary.ac_density(catalog.function("neg_recip"), 0.0)


@pytest.mark.parametrize("h, lam, expected", [
    (catalog.function("tan"), math.pi / 2, 1.0),
    (catalog.function("digamma"), 0.0, 1.0),
    (catalog.function("halfline_dirichlet"), 1.0, 0.0),
])
def test_point_mass(h, lam, expected):
    assert abs(boundary.point_mass(h, lam)[0, 0] - expected) < 1e-7


def test_total_mass():
    v = boundary.total_mass(catalog.function("neg_recip"))
    assert not v.divergent and abs(v.value - 1.0) < 1e-9
    assert boundary.total_mass(affine(0.0, 1.0)).divergent
    mob = catalog.function("mobius_atom", lambda1=1.0, lambda2=2.0) + affine(-1.0, 0.0)
    v = boundary.total_mass(mob)
    assert abs(v.value - 1.0) < 1e-9


@pytest.mark.parametrize("h, lam", [
    (catalog.function("neg_recip"), 0.0),
    (catalog.function("tan"), math.pi / 2),
    (catalog.function("digamma"), -3.0),
])
def test_real_part_vanishes(h, lam):
    assert boundary.real_part_vanishing(h, lam)


def test_endpoint_atoms():
    ends = boundary.endpoint_atoms(catalog.function("neg_cot"), 0.0, 1.0)
    assert list(ends) == [0.0] and abs(ends[0.0][0, 0] - 1.0) < 1e-7


def test_eps_ladder_shape():
    eps = boundary.eps_ladder()
    assert eps.size == boundary.K_MAX - boundary.K_MIN + 1
    np.testing.assert_allclose(eps[1:] / eps[:-1], 0.5)


def test_growth_verdict():
    assert boundary.growth_verdict(2.0 ** np.arange(10), positive=True)
    assert not boundary.growth_verdict(1 + 2.0 ** -np.arange(10), positive=True)


def test_profile_csv_is_stable():
    prof = boundary.boundary_profile(catalog.function("neg_recip"), [-1.0, 0.0, 1.0])
    a, b = io.StringIO(), io.StringIO()
    prof.to_csv(a)
    prof.to_csv(b)
    assert a.getvalue() == b.getvalue()
    lines = a.getvalue().splitlines()
    assert lines[0] == "lambda,re_M11,im_M11,divergent,rank,tag"
    assert lines[2].startswith("0,nan,nan,true")
