import numpy as np
import pytest

from nomad.manifold import partition_to_Q
from nomad.snmf import SnmfConfig, cp_rank_sweep, snmf


class TestSnmf:
    def test_rank_one_cp_matrix_exact(self, rng):
        v = np.abs(rng.normal(size=8))
        a = np.outer(v, v)
        res = snmf(a, SnmfConfig(r=1, seed=0))
        assert res.rel_error <= 1e-6
        assert np.all(res.Y >= 0)

    def test_identity_full_rank(self):
        res = snmf(np.eye(4), SnmfConfig(r=4, max_iter=5000, seed=1))
        assert res.rel_error <= 1e-4

    def test_factor_nonnegative_always(self, rng):
        a = rng.normal(size=(6, 6))
        a = a + a.T
        res = snmf(a, SnmfConfig(r=3, max_iter=200, seed=2))
        assert np.all(res.Y >= 0)

    def test_reported_error_matches_recomputation(self, rng):
        a = np.abs(rng.normal(size=(7, 7)))
        a = (a + a.T) / 2
        res = snmf(a, SnmfConfig(r=4, max_iter=300, seed=3))
        recomputed = np.linalg.norm(a - res.Y @ res.Y.T) / np.linalg.norm(a)
        assert recomputed == pytest.approx(res.rel_error, rel=1e-12, abs=1e-15)

    def test_rank_exceeding_n_rejected(self):
        with pytest.raises(ValueError):
            snmf(np.eye(3), SnmfConfig(r=4))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SnmfConfig(r=0)
        with pytest.raises(ValueError):
            SnmfConfig(r=2, sigma=0.0)

    def test_hard_clustering_matrix_exact_at_k(self):
        labels = np.repeat([0, 1, 2], 5)
        q = partition_to_Q(labels).a
        res = snmf(q, SnmfConfig(r=3, max_iter=3000, seed=4))
        assert res.rel_error <= 1e-4


class TestCpRankSweep:
    def test_uniform_matrix_rank_one_exact(self):
        e = np.full((6, 6), 1 / 6)
        rows = cp_rank_sweep(e, [1], n_seeds=3, max_iter=500)
        assert rows[0]["mean"] <= 1e-6

    def test_uniform_matrix_overparameterized_tail(self):
        # redundant factor columns drain at a 1/iteration rate, so extra
        # rank converges to the same matrix but far more slowly
        e = np.full((6, 6), 1 / 6)
        rows = cp_rank_sweep(e, [2], n_seeds=3, max_iter=2000)
        assert rows[0]["mean"] <= 5e-4

    def test_sweep_shape_and_keys(self, rng):
        a = np.abs(rng.normal(size=(8, 8)))
        a = (a + a.T) / 2
        rows = cp_rank_sweep(a, [2, 4], n_seeds=4, max_iter=100)
        assert [r["r"] for r in rows] == [2, 4]
        for row in rows:
            assert set(row) == {"r", "mean", "std", "median"}
            assert row["std"] >= 0

    def test_statistical_monotonicity_in_rank(self, rng):
        # larger factor rank cannot do statistically worse on the CP inputs
        # the sweep is meant for (kernels are doubly nonnegative)
        b = rng.random((10, 6)) * (rng.random((10, 6)) > 0.4)
        a = b @ b.T
        rows = cp_rank_sweep(a, [2, 4, 6, 8], n_seeds=6, max_iter=2000)
        for lo, hi in zip(rows, rows[1:]):
            assert hi["mean"] <= lo["mean"] + 2 * max(lo["std"], hi["std"]) + 1e-12
