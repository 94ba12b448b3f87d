import math

import numpy as np
import pytest

from herglotz_lab import boundary, catalog
from herglotz_lab.errors import BadParams, NoTruthData, UnknownName


def test_power_half_boundary_value():
    bv = boundary.boundary_limit(catalog.function("power_r", r=0.5), -4.0)
    assert abs(bv.value[0, 0] - 2j) < 1e-7


def test_mobius_atom_at_zero():
    bv = boundary.boundary_limit(catalog.function("mobius_atom", lambda1=1.0, lambda2=2.0), 0.0)
    assert abs(bv.value[0, 0] - 2.0) < 1e-7


def test_krein_m1_at_half():
    bv = boundary.boundary_limit(catalog.function("kreinB_M1"), 0.5)
    assert abs(bv.value[0, 0] - (1 + 1j)) < 1e-7
    assert abs(catalog.function("kreinB_M1")(1j)[0, 0] - 1j) < 1e-15


def test_tan_atoms():
    mu = catalog.reference_measure("tan")
    P, W = mu.atom_arrays()
    near = P[np.abs(P) < 20]
    expected = [(n + 0.5) * math.pi for n in range(-6, 6)]
    np.testing.assert_allclose(near, expected, atol=1e-12)
    assert np.all(W[:, 0, 0] == 1.0)


def test_halfline_density_at_right_angle():
    mu = catalog.reference_measure("halfline_m", {"alpha": math.pi / 2})
    for lam in (0.25, 1.0, 9.0):
        assert abs(mu.density_at(lam)[0, 0] - lam ** -0.5 / math.pi) < 1e-12


def test_halfline_atom_at_quarter_angle():
    mu = catalog.reference_measure("halfline_m", {"alpha": math.pi / 4})
    P, W = mu.atom_arrays()
    assert P.size == 1 and abs(P[0] + 1.0) < 1e-15
    assert abs(W[0, 0, 0] - 4.0) < 1e-12
    # confirmed against numerical inversion of the closed form
    assert abs(boundary.point_mass(catalog.function("halfline_m", alpha=math.pi / 4), -1.0)[0, 0] - 4.0) < 1e-7


@pytest.mark.parametrize("name", catalog.NAMES)
def test_truth_data_matches_closed_form(name):
    entry = catalog.lookup(name)
    if entry.truth is None:
        pytest.skip("no measure")
    from herglotz_lab.herglotz_core import RepresentationFunction

    rep = RepresentationFunction(*entry.truth, check=False)
    for z in (1j, 0.7 + 0.4j, -2 + 2j):
        assert abs(rep(z)[0, 0] - entry(z)[0, 0]) < 1e-6 * (1 + abs(entry(z)[0, 0]))


def test_errors():
    with pytest.raises(UnknownName):
        catalog.lookup("nope")
    with pytest.raises(BadParams):
        catalog.lookup("tan", {"r": 1})
    with pytest.raises(NoTruthData):
        catalog.reference_measure("kreinB_P")
