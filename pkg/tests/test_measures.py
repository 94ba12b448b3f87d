import math

import numpy as np
import pytest

from herglotz_lab import catalog
from herglotz_lab.errors import NotPSD
from herglotz_lab.measures import (
    MatrixMeasure, class_membership, constant_piece, moment_integral, trace_measure, validate,
)


def test_normalization_of_unit_atom():
    mu = MatrixMeasure(1, atoms=[(0.0, 1.0)])
    assert abs(validate(mu).normalization[0, 0] - 1.0) < 1e-15


def test_truncated_tan_atoms_normalization():
    # sum over |n| <= N of 1/(1 + ((n + 1/2) pi)^2) is finite and increasing in N
    vals = []
    for N in (5, 50, 500):
        mu = MatrixMeasure(1, atoms=[((n + 0.5) * math.pi, 1.0) for n in range(-N - 1, N + 1)])
        vals.append(float(validate(mu).normalization[0, 0].real))
    assert vals[0] < vals[1] < vals[2] < 1.0
    # limit is tanh(1) = Im tan(i)
    assert abs(vals[2] - math.tanh(1.0)) < 2e-3


def test_non_psd_atom_weight():
    with pytest.raises(NotPSD):
        validate(MatrixMeasure(2, atoms=[(0.0, np.diag([1.0, -1.0]))]))


def test_trace_measure():
    mu = MatrixMeasure(2, atoms=[(0.0, np.diag([1.0, 2.0]))])
    assert trace_measure(mu).atoms[0].weight[0, 0] == 3.0
    assert trace_measure(MatrixMeasure(2)).is_zero()
    ac = MatrixMeasure(2, pieces=[constant_piece(0.0, 1.0, 1.0, np.eye(2))])
    assert abs(trace_measure(ac).density_at(0.5)[0, 0] - 2.0) < 1e-15


def test_inverse_moment_divergence():
    far = moment_integral(catalog.reference_measure("mu_r", {"r": 0.5}), "1/lambda", (1.0, math.inf))
    assert far.divergent
    far = moment_integral(catalog.reference_measure("mu_r", {"r": -0.5}), "1/lambda", (1.0, math.inf))
    assert not far.divergent and not far.inconclusive


def test_inverse_moment_of_single_atom():
    v = moment_integral(MatrixMeasure(1, atoms=[(2.0, 1.0)]), "1/lambda", (0.0, math.inf))
    assert abs(v.value[0, 0] - 0.5) < 1e-15


def test_class_membership():
    half = catalog.reference_measure("mu_r", {"r": 0.5})
    assert class_membership(half, "N0_F")
    assert not class_membership(half, "N0_K")
    assert class_membership(catalog.reference_measure("mu_r", {"r": 0.0}), "N0_FK")
    assert not class_membership(MatrixMeasure(1, atoms=[(-1.0, 1.0)]), "N0_F")


def test_interval_mass_counts_endpoints_half():
    mu = MatrixMeasure(1, atoms=[(0.0, 2.0), (1.0, 4.0)],
                       pieces=[constant_piece(0.0, 1.0, 3.0, 1.0)])
    assert abs(mu.interval_mass(0.0, 1.0)[0, 0] - (1.0 + 2.0 + 3.0)) < 1e-12
