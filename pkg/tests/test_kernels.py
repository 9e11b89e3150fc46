import numpy as np
import pytest

from toric_embed import _kernels

BACKENDS = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])


def naive_points(A, b, lo, hi):
    grids = np.meshgrid(*[np.arange(l, h + 1) for l, h in zip(lo, hi)], indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    return pts[(pts @ np.asarray(A).T >= b).all(axis=1)]


@pytest.mark.parametrize("backend", BACKENDS)
def test_lattice_points_matches_naive_scan(backend):
    rng = np.random.default_rng(3)
    for _ in range(20):
        d = int(rng.integers(2, 5))
        A = rng.integers(-3, 4, size=(d + 3, d))
        b = -rng.integers(1, 8, size=d + 3)
        lo, hi = np.full(d, -4), np.full(d, 4)
        got = _kernels.lattice_points_in(A, b, lo, hi, backend=backend)
        want = naive_points(A, b, lo, hi)
        assert sorted(map(tuple, got)) == sorted(map(tuple, want))


@pytest.mark.parametrize("backend", BACKENDS)
def test_torus_scan_counts(backend):
    # (x1 - x2)^2 x3 vanishes with its log-derivatives on x1 = x2
    exps = np.array([[2, 0, 1], [1, 1, 1], [0, 2, 1]])
    coeffs = np.array([1, -2, 1])
    count, hits = _kernels.torus_scan(exps, coeffs, 5, backend=backend)
    assert count == 16
    assert all(h[0] == h[1] for h in hits)
    fermat = np.eye(3, dtype=np.int64) * 3
    assert _kernels.torus_scan(fermat, np.ones(3), 7, backend=backend)[0] == 0


def test_backends_agree():
    if not _kernels.HAVE_NUMBA:
        pytest.skip("numba unavailable")
    rng = np.random.default_rng(11)
    exps = rng.integers(0, 5, size=(6, 4))
    coeffs = rng.integers(1, 7, size=6)
    a = _kernels.torus_scan(exps, coeffs, 7, max_hits=50, backend="numpy")
    b = _kernels.torus_scan(exps, coeffs, 7, max_hits=50, backend="numba")
    assert a[0] == b[0]
    assert np.array_equal(a[1], b[1])
    M = rng.integers(-20, 20, size=(6, 9))
    assert _kernels.rank_mod_p(M, 101, backend="numpy") == _kernels.rank_mod_p(M, 101, backend="numba")


@pytest.mark.parametrize("backend", BACKENDS)
def test_rank_mod_p(backend):
    assert _kernels.rank_mod_p([[1, 2], [2, 4]], 7, backend=backend) == 1
    assert _kernels.rank_mod_p([[1, 2], [3, 4]], 2, backend=backend) == 1
    assert _kernels.rank_mod_p([[2**70, 1], [0, 1]], 3, backend=backend) == 2


def test_unknown_backend():
    with pytest.raises(ValueError):
        _kernels.rank_mod_p([[1]], 5, backend="cuda")
