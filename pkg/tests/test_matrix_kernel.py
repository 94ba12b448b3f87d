import numpy as np
import pytest

from herglotz_lab.errors import SpectrumOnCut
from herglotz_lab.matrix_kernel import (
    hermitian_split, is_psd, log_by_quadrature, matrix_exp, numerical_rank, principal_log,
)


def test_split_of_imaginary_identity():
    re, im = hermitian_split(1j * np.eye(2))
    np.testing.assert_allclose(re, 0, atol=0)
    np.testing.assert_allclose(im, np.eye(2))


def test_split_of_upper_triangular():
    re, im = hermitian_split(np.array([[1, 1j], [0, 1]]))
    np.testing.assert_allclose(re, [[1, 0.5j], [-0.5j, 1]])
    np.testing.assert_allclose(im, [[0, 0.5], [0.5, 0]])


def test_split_recombines():
    rng = np.random.default_rng(3)
    M = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    re, im = hermitian_split(M)
    assert np.max(np.abs(re + 1j * im - M)) < 1e-15


@pytest.mark.parametrize("H, expected", [
    (np.eye(3), True),
    (np.diag([1.0, -1.0]), False),
    (np.array([[2.0, 1.0], [1.0, 2.0]]), True),
])
def test_is_psd(H, expected):
    assert is_psd(H) is expected


@pytest.mark.parametrize("H, rel, expected", [
    (np.zeros((2, 2)), None, 0),
    (np.diag([1.0, 1e-16]), 1e-8, 1),
    (np.diag([1.0, 2.0, 3.0]), None, 3),
])
def test_numerical_rank(H, rel, expected):
    assert numerical_rank(H, rel) == expected


def test_log_of_identity_and_diagonal():
    np.testing.assert_allclose(principal_log(np.eye(2)), 0, atol=1e-15)
    np.testing.assert_allclose(principal_log(np.diag([np.e, np.e ** 2])), np.diag([1, 2]), atol=1e-14)


def test_log_of_i():
    assert abs(principal_log(1j)[0, 0] - 0.5j * np.pi) < 1e-15


def test_log_rejects_negative_axis():
    with pytest.raises(SpectrumOnCut):
        principal_log(np.diag([1.0, -2.0]))


def test_log_matches_quadrature():
    M = np.array([[1 + 1j, 0.3], [0.1, 2 + 0.5j]])
    assert np.max(np.abs(principal_log(M) - log_by_quadrature(M))) < 1e-6


def test_exp_inverts_log():
    M = np.array([[1 + 1j, 0.3], [0.1, 2 + 0.5j]])
    assert np.max(np.abs(matrix_exp(principal_log(M)) - M)) < 1e-13
