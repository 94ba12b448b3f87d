import numpy as np
import pytest

from herglotz_lab import _kernels_py, kernels


def data(k, n, m, seed=0):
    rng = np.random.default_rng(seed)
    G = rng.normal(size=(k, n, n)) + 1j * rng.normal(size=(k, n, n))
    W = G @ np.conj(np.swapaxes(G, 1, 2))
    return rng.uniform(-5, 5, k), W, rng.uniform(-6, 6, m) + 1j * rng.uniform(0.01, 2, m)


def test_fallback_matches_direct_sum():
    pos, W, zs = data(4, 2, 3)
    out = _kernels_py.atom_sum(pos, W, zs)
    for m, z in enumerate(zs):
        direct = sum(Wj * (1 / (p - z) - p / (1 + p * p)) for p, Wj in zip(pos, W))
        assert np.max(np.abs(out[m] - direct)) < 1e-13


@pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernel not built")
@pytest.mark.parametrize("k, n, m", [(1, 1, 1), (30, 1, 50), (20, 3, 10), (0, 2, 4)])
def test_compiled_matches_fallback(k, n, m):
    from herglotz_lab import _kernels

    pos, W, zs = data(k, n, m, seed=k + n)
    a = _kernels.atom_sum(pos, W, zs)
    b = _kernels_py.atom_sum(pos, W, zs)
    assert a.shape == b.shape == (m, n, n)
    assert np.max(np.abs(a - b), initial=0.0) < 1e-12 * (1 + np.max(np.abs(b), initial=0.0))
