import math

import numpy as np
import pytest

from herglotz_lab import catalog
from herglotz_lab.errors import OnRealAxis
from herglotz_lab.herglotz_core import (
    DirectSumFunction, HerglotzFunction, RepresentationFunction, affine, extract_C, extract_D,
    verify_herglotz,
)
from herglotz_lab.measures import MatrixMeasure


def test_evaluate_closed_forms():
    assert abs(catalog.function("neg_recip")(1j)[0, 0] - 1j) < 1e-15
    assert abs(affine(0.0, 2.0)(1j)[0, 0] - 2j) < 1e-15
    # tan(i) = i tanh(1)
    assert abs(catalog.function("tan")(1j)[0, 0] - 0.7615941559557649j) < 1e-14


def test_lower_half_plane_reflection():
    h = catalog.function("log")
    z = 0.3 + 0.7j
    assert abs(h(z.conjugate())[0, 0] - np.conj(h(z)[0, 0])) < 1e-15


def test_real_axis_rejected():
    with pytest.raises(OnRealAxis):
        catalog.function("tan")(1.0)


def test_representation_agrees_with_closed_form():
    mu = MatrixMeasure(1, atoms=[(0.0, 1.0)])
    h = RepresentationFunction(0.0, 0.0, mu)
    for z in (1j, 2 + 0.5j, -1 + 3j):
        assert abs(h(z)[0, 0] + 1 / z) < 1e-14


@pytest.mark.parametrize("name, params, expected", [
    ("const_imag", {"c": 3.0, "d": 1.0}, 3.0),
    ("neg_recip", {}, 0.0),
])
def test_extract_C(name, params, expected):
    assert abs(extract_C(catalog.function(name, **params))[0, 0] - expected) < 1e-14


def test_extract_C_matrix():
    h = DirectSumFunction([affine(0.0, 1.0), catalog.function("neg_recip")])
    np.testing.assert_allclose(extract_C(h), 0, atol=1e-15)


def test_extract_D():
    assert abs(extract_D(affine(0.0, 2.0))[0, 0] - 2.0) < 1e-8
    assert extract_D(catalog.function("neg_recip"))[0, 0] == 0
    h = DirectSumFunction([affine(0.0, 1.0), affine(0.0, 1.0)]) + DirectSumFunction(
        [catalog.function("neg_recip"), affine(0.0, 0.0)])
    np.testing.assert_allclose(extract_D(h), np.eye(2), atol=1e-8)


def test_verify_constant_kernel_rank_one():
    h = DirectSumFunction([catalog.function("const_imag"), affine(5.0, 0.0)])
    rep = verify_herglotz(h)
    assert rep.ok and rep.common_rank == 1


def test_verify_tan_rank_one():
    rep = verify_herglotz(catalog.function("tan"))
    assert rep.ok and rep.common_rank == 1


class _NotHerglotz(HerglotzFunction):
    dim = 2

    def _eval_upper(self, z):
        return np.array([[z, 1.0], [1.0, -1.0 / z]])


def test_verify_matches_eigenvalue_oracle():
    h = _NotHerglotz()
    grid = [1j, 2j, 0.5 + 0.1j, -1 + 0.3j]
    rep = verify_herglotz(h, grid)
    oracle = []
    for z in grid:
        M = h(z)
        oracle.append(np.linalg.eigvalsh((M - M.conj().T) / 2j)[0] >= -1e-12)
    assert rep.psd == oracle
    assert rep.ok == (all(oracle) and len(set(rep.ranks)) == 1)
