import math

import numpy as np
import pytest
from scipy.integrate import quad

from herglotz_lab import catalog, extensions as ext, lft
from herglotz_lab.errors import NotIntegrable, NotNormalized
from herglotz_lab.herglotz_core import DirectSumFunction, affine, verify_herglotz
from herglotz_lab.matrix_kernel import imag_part, is_psd

from conftest import upper_points


def two_atoms():
    return ext.finite_model([0.0, 1.0], np.full((2, 1), math.sqrt(0.5))).function()


def test_rank_one_same_parameter_is_identity():
    m = two_atoms()
    img = ext.rank_one_image(m, 0.3, 0.3)
    for z in upper_points():
        assert abs(img(z)[0, 0] - m(z)[0, 0]) < 1e-15


def test_rank_one_against_eigendecomposition():
    f = np.full(2, math.sqrt(0.5))
    w, V = np.linalg.eigh(np.diag([0.0, 1.0]) + np.outer(f, f))
    g = V.T @ f
    expected = np.sum(g * g / (w - 1j))
    assert abs(ext.rank_one_image(two_atoms(), 0.0, 1.0)(1j)[0, 0] - expected) < 1e-10


def test_rank_one_composition():
    m = two_atoms()
    two_step = ext.rank_one_image(ext.rank_one_image(m, 0.0, 0.7, check=False), 0.7, -0.4, check=False)
    one_step = ext.rank_one_image(m, 0.0, -0.4)
    for z in upper_points():
        assert abs(two_step(z)[0, 0] - one_step(z)[0, 0]) < 1e-12


def test_rank_one_needs_finite_measure():
    with pytest.raises(NotIntegrable):
        ext.rank_one_image(affine(0.0, 1.0), 0.0, 1.0)


def test_finite_rank_blockwise_and_consistent():
    m1, m2 = two_atoms(), ext.finite_model([-1.0, 2.0, 3.0], np.full((3, 1), 0.5)).function()
    M = DirectSumFunction([m1, m2])
    same = ext.finite_rank_image(M, [0.2, 0.1], [0.2, 0.1])
    img = ext.finite_rank_image(M, [0.0, 0.0], [1.0, 0.0])
    via_lft = lft.apply(ext.coupling_member([0.0, 0.0], [1.0, 0.0]), M)
    r1 = ext.rank_one_image(m1, 0.0, 1.0)
    for z in upper_points():
        np.testing.assert_allclose(same(z), M(z), atol=1e-15)
        V = img(z)
        assert abs(V[0, 0] - r1(z)[0, 0]) < 1e-12
        assert abs(V[1, 1] - m2(z)[0, 0]) < 1e-12
        assert abs(V[0, 1]) < 1e-15
        assert np.max(np.abs(V - via_lft(z))) < 1e-12


def test_woodbury_oracle():
    rng = np.random.default_rng(2)
    F = rng.normal(size=(5, 2)) + 1j * rng.normal(size=(5, 2))
    model = ext.FiniteModel(np.diag(rng.normal(size=5)), F)
    T = np.array([[0.5, 0.2], [0.2, -0.3]])
    direct = model.perturbed(T).function()
    law = ext.CouplingImage(model.function(), T)
    for z in upper_points():
        assert np.max(np.abs(direct(z) - law(z))) < 1e-10


def test_extension_image_identity_and_quarter_turn():
    m = affine(0.0, 1.0)
    same = ext.extension_image(m, 0.4, 0.4)
    turned = ext.extension_image(m, 0.0, math.pi / 2)
    for z in upper_points():
        assert abs(same(z)[0, 0] - z) < 1e-14
        assert abs(turned(z)[0, 0] + 1 / z) < 1e-14


def test_extension_image_scalar_formula():
    rng = np.random.default_rng(5)
    m = catalog.function("kreinB_M1")
    for a, b in rng.uniform(-1.5, 1.5, size=(4, 2)):
        t = b - a
        img = ext.extension_image(m, a, b)
        for z in upper_points(5, int(1000 * abs(a))):
            v = m(z)[0, 0]
            expected = (-math.sin(t) + math.cos(t) * v) / (math.cos(t) + math.sin(t) * v)
            assert abs(img(z)[0, 0] - expected) < 1e-12


def test_extension_image_needs_normalization():
    with pytest.raises(NotNormalized):
        ext.extension_image(affine(0.0, 2.0), 0.0, 1.0)


@pytest.mark.parametrize("r, friedrichs, krein", [(-0.5, False, True), (0.0, True, True), (0.5, True, False)])
def test_friedrichs_krein_family(r, friedrichs, krein):
    h = catalog.function("mu_r", r=r)
    assert ext.friedrichs_test(h) is friedrichs
    assert ext.krein_test(h) is krein


def test_domain_intersection_limit_by_quadrature():
    r = -0.5
    res = ext.domain_intersection_test(catalog.function("mu_r", r=r), "F")
    assert res.finite
    c = (2 / math.pi) * math.cos(r * math.pi / 2)
    f = lambda lam: c * lam ** r * lam / (1 + lam * lam)
    expected = -(quad(f, 0, 1)[0] + quad(f, 1, math.inf)[0])
    assert abs(complex(np.asarray(res.limit).ravel()[0]) - expected) < 1e-4
    assert not ext.domain_intersection_test(catalog.function("mu_r", r=0.5), "F").finite


def test_krein_p_closed_form():
    kd = ext.KreinData.from_alpha2(0.0, 1)
    z = 0.5j
    expected = -1.0 / (1 + 1j * np.sqrt(2 * z))
    assert abs(ext.krein_p_of_z(kd, catalog.function("kreinB_M1"), z)[0, 0] - expected) < 1e-12


def test_krein_data_imag_inverse():
    for n, seed in ((1, 0), (2, 1), (3, 2)):
        kd = ext.KreinData.random(n, seed)
        inv = np.linalg.inv(kd.P_i)
        assert np.max(np.abs(imag_part(inv) + np.eye(n))) < 1e-10 * max(1.0, np.linalg.norm(inv, 2))


def test_krein_p_is_herglotz():
    M1 = DirectSumFunction([catalog.function("kreinB_M1"), catalog.function("neg_recip")])
    kd = ext.KreinData.random(2, 4)
    for z in upper_points():
        assert is_psd(imag_part(ext.krein_p_of_z(kd, M1, z)), 1e-12)


def test_krein_transform_closed_form():
    m1 = catalog.function("kreinB_M1")
    for a2 in (0.0, math.pi / 4, 1.0):
        M2 = ext.krein_transform(m1, ext.KreinData.from_alpha2(a2, 1))
        ref = catalog.function("kreinB_M2", alpha2=a2)
        for z in upper_points():
            assert abs(M2(z)[0, 0] - ref(z)[0, 0]) < 1e-10


def test_krein_transform_identity_data():
    kd = ext.KreinData(1j * np.eye(2))
    M1 = DirectSumFunction([catalog.function("kreinB_M1"), catalog.function("neg_recip")])
    assert verify_herglotz(ext.krein_transform(M1, kd)).ok


def test_krein_transform_matches_extension_image():
    M1 = DirectSumFunction([catalog.function("kreinB_M1"), catalog.function("neg_recip")])
    a2 = np.array([[0.3, 0.1], [0.1, -0.4]])
    M2 = ext.krein_transform(M1, ext.KreinData.from_alpha2(a2))
    img = ext.extension_image(M1, math.pi / 2 * np.eye(2), a2)
    for z in upper_points():
        assert np.max(np.abs(M2(z) - img(z))) < 1e-10


def test_lower_bound():
    m1 = catalog.function("kreinB_M1")
    assert ext.herglotz_lower_bound_check(m1, [1j])["ok"]
    positions = [-1.0, 2.0]
    F = np.ones((2, 1))
    mu_norm = sum(1 / (1 + p * p) for p in positions)
    model = ext.finite_model(positions, F / math.sqrt(mu_norm)).representation()
    rep = ext.herglotz_lower_bound_check(model, [2j])
    assert rep["ok"] and abs(rep["rows"][0]["bound"] - 0.25) < 1e-15
    bad = ext.herglotz_lower_bound_check(ext.finite_model([0.0], [[0.1]]).function(), [1j])
    assert not bad["precondition_ok"] and not bad["ok"]
