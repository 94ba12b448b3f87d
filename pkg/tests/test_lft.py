import math

import numpy as np
import pytest

from herglotz_lab import catalog, lft
from herglotz_lab.errors import ConditionNotMet, NotMember, SingularPencil
from herglotz_lab.herglotz_core import ScalarFunction, affine

from conftest import upper_points


def test_membership():
    assert lft.is_member(np.eye(4))
    assert lft.is_member(lft.J(2))
    assert not lft.is_member(np.diag([2.0, 1.0, 1.0, 1.0]))
    with pytest.raises(NotMember):
        lft.SymplecticMatrix(np.diag([2.0, 1.0, 1.0, 1.0]))


def test_inverse():
    np.testing.assert_allclose(lft.inverse(lft.identity(2)).A, np.eye(4))
    np.testing.assert_allclose(lft.inverse(lft.J_member(2)).A, -lft.J(2))
    A = lft.random_member(3, seed=7)
    assert np.max(np.abs((lft.inverse(A) @ A).A - np.eye(6))) < 1e-12


@pytest.mark.parametrize("n, seed", [(1, 0), (2, 1), (3, 5)])
def test_random_member_is_member(n, seed):
    assert lft.is_member(lft.random_member(n, seed).A)


def test_apply_identity_and_J():
    M = np.array([[1 + 1j, 0.2], [0.2, 2j]])
    np.testing.assert_allclose(lft.apply_pointwise(lft.identity(2), M), M)
    np.testing.assert_allclose(lft.apply_pointwise(lft.J_member(2), 1j * np.eye(2)), 1j * np.eye(2))


def test_shear_of_neg_recip():
    # m/(1 + m) for m = -1/z equals -1/(z - 1)
    a = lft.shear(1.0)
    m = catalog.function("neg_recip")
    v = lft.apply_pointwise(a, m(2j))[0, 0]
    assert abs(v - (1 + 2j) / 5) < 1e-15


def test_rotation_with_equal_angles_is_identity():
    np.testing.assert_allclose(lft.rotation(0.4, 0.4).A, np.eye(2), atol=1e-15)
    a = np.array([[0.3, 0.1], [0.1, -0.2]])
    np.testing.assert_allclose(lft.rotation(a, a).A, np.eye(4), atol=1e-14)


def test_J_on_z():
    hJ = lft.apply(lft.J_member(1), affine(0.0, 1.0))
    for z in upper_points():
        assert abs(hJ(z)[0, 0] + 1 / z) < 1e-14


def test_composition_law():
    h = catalog.function("halfline_m", alpha=0.3)
    A, B = lft.random_member(1, 11), lft.random_member(1, 12)
    lhs = lft.apply(A, lft.apply(B, h))
    rhs = lft.apply(A @ B, h)
    grid = [complex(x, y) for x in np.linspace(-2, 2, 5) for y in (0.2, 0.7, 1.5, 3.0, 6.0)]
    assert max(abs(lhs(z)[0, 0] - rhs(z)[0, 0]) for z in grid) < 1e-10


def test_round_trip_and_identities():
    rng = np.random.default_rng(0)
    A = lft.random_member(2, 3)
    X = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    M = 0.5 * (X + X.conj().T) + 1j * (np.eye(2) + 0.1 * (X @ X.conj().T))
    res = lft.identity_residuals(A, M)
    assert max(res.values()) < 1e-10
    np.testing.assert_allclose(lft.invert_pointwise(lft.identity(2), M), M)


def test_singular_pencil_reports_witness():
    # for the shear [[1, 1], [0, 1]], A11 + A12 m vanishes at m = -1
    h = ScalarFunction(lambda z: 1j)
    A = lft.shear(1.0)
    with pytest.raises(SingularPencil) as info:
        lft.apply_pointwise(A, np.array([[-1.0 + 0j]]), witness=2j)
    assert info.value.witness == 2j
    assert lft.apply(A, h)(1j).shape == (1, 1)


def test_point_mass_formula():
    assert abs(lft.point_mass_formula(affine(0.0, 1.0), lft.J_member(1), 0.0) - 1.0) < 1e-9
    with pytest.raises(ConditionNotMet):
        lft.point_mass_formula(affine(0.0, 1.0), lft.J_member(1), 1.0)
    w = lft.point_mass_formula(catalog.function("neg_recip"), lft.shear(1.0), 1.0)
    assert abs(w - 1.0) < 1e-9


def test_from_spec():
    assert lft.from_spec({"name": "J"}, 2).n == 2
    np.testing.assert_allclose(lft.from_spec([[1, 2], [0, 1]]).A, [[1, 2], [0, 1]])
    np.testing.assert_allclose(lft.from_spec({"name": "random", "seed": 4}, 2).A, lft.random_member(2, 4).A)
