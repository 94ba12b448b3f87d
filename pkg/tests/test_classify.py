import math

import numpy as np
import pytest

from herglotz_lab import catalog, classify, lft
from herglotz_lab.errors import InterlacingViolation
from herglotz_lab.herglotz_core import DirectSumFunction, affine


@pytest.mark.parametrize("h, lam, tag", [
    (catalog.function("tan"), math.pi / 2, "PP(1)"),
    (catalog.function("halfline_dirichlet"), 4.0, "AC(1)"),
    (catalog.function("neg_recip"), 5.0, "NONE"),
])
def test_classify_point(h, lam, tag):
    assert str(classify.classify_point(h, lam)) == tag


def test_scan_diagonal_example():
    h = DirectSumFunction([catalog.function("const_imag"), catalog.function("neg_recip")])
    tags = [str(t) for t in classify.scan_support(h, [-1.0, 0.0, 1.0]).tags]
    # the origin carries an atom of the second block, which is read as PP
    assert tags == ["AC(1)", "PP(1)", "AC(1)"]


def test_scan_linear_function_is_empty():
    prof = classify.scan_support(affine(0.0, 1.0), [-3.0, 0.0, 2.0])
    assert all(t.kind == "NONE" for t in prof.tags)


def test_scan_halfline_quarter_angle():
    h = catalog.function("halfline_m", alpha=math.pi / 4)
    tags = [str(t) for t in classify.scan_support(h, [-2.0, -1.0, 1.0]).tags]
    assert tags == ["NONE", "PP(1)", "AC(1)"]


def test_refine_locates_tan_atoms():
    h = catalog.function("tan")
    prof = classify.refine_atoms(h, classify.scan_support(h, np.linspace(-5, 5, 101).tolist()))
    atoms = [x for x, t in zip(prof.grid, prof.tags) if t.kind == "PP"]
    np.testing.assert_allclose(atoms, [-1.5 * math.pi, -0.5 * math.pi, 0.5 * math.pi, 1.5 * math.pi], atol=1e-12)


def test_invariance_identity_and_rotation():
    h = catalog.function("halfline_dirichlet")
    grid = [-2.0, -0.5, 0.5, 1.0, 3.0]
    assert classify.ad_invariance(h, lft.identity(1), grid).ok
    rep = classify.ad_invariance(h, lft.rotation(0.0, math.pi / 3), grid)
    assert rep.ok
    assert [r for lam, r, _ in rep.checked if lam > 0] == [1, 1, 1]


@pytest.mark.parametrize("h, lam, expected", [
    (catalog.function("neg_recip"), 1.0, 1.0),
    (catalog.function("neg_recip"), -1.0, 0.0),
    (catalog.function("power_r", r=0.5), -4.0, 0.5),
])
def test_xi_scalar(h, lam, expected):
    assert abs(classify.xi_scalar(h, lam) - expected) < 1e-8


def test_xi_matrix():
    h = DirectSumFunction([catalog.function("neg_recip"), catalog.function("neg_recip")])
    np.testing.assert_allclose(classify.xi_matrix(h, 1.0), np.eye(2), atol=1e-8)
    c = DirectSumFunction([catalog.function("const_imag"), catalog.function("const_imag")])
    np.testing.assert_allclose(classify.xi_matrix(c, 0.3), 0.5 * np.eye(2), atol=1e-8)


def test_xi_duality():
    h = DirectSumFunction([catalog.function("power_r", r=0.5), catalog.function("neg_recip")])
    assert classify.xi_duality_check(h, [-1.0, 1.0, 2.5])["ok"]
    hJ = lft.apply(lft.J_member(1), catalog.function("neg_recip"))
    assert abs(classify.xi_scalar(hJ, 1.0)) < 1e-8


@pytest.mark.parametrize("name", ["tan", "neg_cot"])
def test_xi_characteristic_for_atoms(name):
    rows = classify.singular_iff_characteristic(catalog.function(name), [-2.0, -0.7, 0.4, 1.0, 2.2])
    assert all(r["characteristic"] for r in rows)


def test_xi_of_constant_is_half():
    rows = classify.singular_iff_characteristic(catalog.function("const_imag"), [-1.0, 0.5])
    assert all(abs(r["xi"] - 0.5) < 1e-8 and not r["characteristic"] for r in rows)


def test_borg_value_normalization():
    data = classify.TwoSpectra([0.0], [1.0], {"kind": "value", "z0": 1j, "value": 1j})
    m = classify.borg_reconstruct(data, lft.shear(1.0))
    assert abs(m(2j)[0, 0] - 0.5j) < 1e-8


def test_borg_total_mass_normalization():
    data = classify.TwoSpectra([0.0], [1.0], {"kind": "total_mass", "value": 1.0})
    m = classify.borg_reconstruct(data, lft.shear(1.0))
    for z in (2j, 1 + 1j):
        assert abs(m(z)[0, 0] + 1 / z) < 1e-8


def test_borg_interlacing_violation():
    data = classify.TwoSpectra([0.0, 1.0], [2.0, 3.0], {"kind": "total_mass", "value": 1.0})
    with pytest.raises(InterlacingViolation):
        classify.borg_reconstruct(data, lft.shear(1.0))
