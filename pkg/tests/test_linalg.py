import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nomad.linalg import (
    EigPair,
    SymMatrix,
    gramian,
    lanczos_extreme,
    min_eigenvalue,
    neg_half_sqdist,
    project_out_ones,
)

from conftest import jacobi_spectrum


class TestSymMatrix:
    def test_symmetrizes_and_freezes(self):
        m = SymMatrix(np.array([[1.0, 2.0], [2.0, 5.0]]))
        assert m.n == 2
        assert np.array_equal(m.a, m.a.T)
        with pytest.raises(ValueError):
            m.a[0, 0] = 7.0

    def test_warns_on_large_asymmetry(self):
        with pytest.warns(UserWarning, match="asymmetry"):
            SymMatrix(np.array([[1.0, 2.0], [2.1, 1.0]]))

    def test_rejects_nonsquare_and_nonfinite(self):
        with pytest.raises(ValueError):
            SymMatrix(np.zeros((2, 3)))
        with pytest.raises(ValueError, match=r"\(0, 1\)"):
            SymMatrix(np.array([[1.0, np.nan], [np.nan, 1.0]]))


class TestGramian:
    def test_two_points_on_a_line(self):
        d = gramian([[1.0], [-1.0]])
        assert np.allclose(d.a, [[1, -1], [-1, 1]])

    def test_identity_points(self):
        d = gramian(np.eye(3))
        assert np.allclose(d.a, np.eye(3))

    def test_four_point_ring_is_circulant(self):
        ang = np.pi / 2 * np.arange(4)
        pts = np.column_stack([np.cos(ang), np.sin(ang)])
        d = gramian(pts)
        # oracle: cos of pairwise angle differences
        expected = np.cos(ang[:, None] - ang[None, :])
        assert np.allclose(d.a, expected, atol=1e-12)
        assert np.allclose(d.a[0], [1, 0, -1, 0], atol=1e-12)

    def test_rejects_nonfinite_with_index(self):
        with pytest.raises(ValueError, match="point 1"):
            gramian([[0.0], [np.inf]])

    def test_gramian_is_psd(self, rng):
        x = rng.normal(size=(20, 5))
        d = gramian(x)
        assert min_eigenvalue(d) >= -1e-10 * np.linalg.norm(d.a)


class TestNegHalfSqdist:
    def test_identical_points(self):
        m = neg_half_sqdist([[2.0, 3.0], [2.0, 3.0]])
        assert np.allclose(m.a, 0.0)

    def test_two_points(self):
        m = neg_half_sqdist([[1.0], [-1.0]])
        assert np.allclose(m.a, [[0, -2], [-2, 0]])

    def test_trace_identity_on_feasible_q(self, rng):
        # for Q with Q1 = 1: tr(MQ) = tr(DQ) - tr(D)
        x = rng.normal(size=(8, 3))
        d = gramian(x).a
        m = neg_half_sqdist(x).a
        # random symmetric Q with rows summing to one
        q = rng.random((8, 8))
        q = (q + q.T) / 2
        q += np.eye(8) * 1.0
        q /= q.sum(axis=1, keepdims=True)
        # symmetrize again while keeping row sums via Sinkhorn-style balancing
        for _ in range(200):
            q = (q + q.T) / 2
            q /= q.sum(axis=1, keepdims=True)
        assert np.allclose(q.sum(axis=1), 1.0, atol=1e-10)
        lhs = np.sum(m * q)
        rhs = np.sum(d * q) - np.trace(d)
        assert np.isclose(lhs, rhs, rtol=1e-9)


class TestProjectOutOnes:
    def test_rank_one_ones_matrix_annihilated(self):
        e = np.full((6, 6), 1 / 6)
        assert np.allclose(project_out_ones(e).a, 0.0, atol=1e-14)

    def test_identity(self):
        n = 5
        r = project_out_ones(np.eye(n))
        assert np.allclose(r.a, np.eye(n) - np.full((n, n), 1 / n))

    def test_row_sums_vanish(self, rng):
        m = rng.normal(size=(5, 5))
        m = m + m.T
        r = project_out_ones(m).a
        assert np.abs(r @ np.ones(5)).max() <= 1e-12 * max(np.abs(m).max(), 1.0)

    @given(st.integers(min_value=2, max_value=9), st.integers(0, 2**31))
    @settings(max_examples=25, deadline=None)
    def test_idempotent(self, n, seed):
        m = np.random.default_rng(seed).normal(size=(n, n))
        m = m + m.T
        once = project_out_ones(m).a
        twice = project_out_ones(once).a
        scale = max(np.abs(once).max(), 1e-12)
        assert np.abs(once - twice).max() <= 1e-12 * scale


class TestLanczos:
    def test_diag_largest_and_smallest(self):
        a = np.diag([1.0, 2.0, 3.0])
        top = lanczos_extreme(lambda x: a @ x, 3, "largest", tol=1e-12, seed=0)
        assert isinstance(top, EigPair)
        assert top.value == pytest.approx(3.0, abs=1e-9)
        assert abs(abs(top.vector[2]) - 1.0) < 1e-6
        bottom = lanczos_extreme(lambda x: a @ x, 3, "smallest", tol=1e-12, seed=0)
        assert bottom.value == pytest.approx(1.0, abs=1e-9)

    def test_unit_norm_and_measured_residual(self, rng):
        a = rng.normal(size=(10, 10))
        a = a + a.T
        pair = lanczos_extreme(lambda x: a @ x, 10, "largest", tol=1e-10, seed=3)
        assert np.linalg.norm(pair.vector) == pytest.approx(1.0, abs=1e-12)
        measured = np.linalg.norm(a @ pair.vector - pair.value * pair.vector)
        assert measured == pytest.approx(pair.residual, rel=1e-8, abs=1e-12)

    def test_deterministic_for_fixed_seed(self, rng):
        a = rng.normal(size=(15, 15))
        a = a + a.T
        p1 = lanczos_extreme(lambda x: a @ x, 15, "largest", tol=1e-9, seed=11)
        p2 = lanczos_extreme(lambda x: a @ x, 15, "largest", tol=1e-9, seed=11)
        assert p1.value == p2.value
        assert np.array_equal(p1.vector, p2.vector)

    def test_deflated_ring_operator(self):
        # 4-point ring Gramian, negated and deflated: smallest algebraic -2
        ang = np.pi / 2 * np.arange(4)
        pts = np.column_stack([np.cos(ang), np.sin(ang)])
        d = gramian(pts).a
        neg = project_out_ones(-d).a
        pair = lanczos_extreme(lambda x: neg @ x, 4, "smallest", tol=1e-12, seed=0)
        w, v = jacobi_spectrum(neg)
        assert pair.value == pytest.approx(w[0], abs=1e-9)
        assert pair.value == pytest.approx(-2.0, abs=1e-9)
        assert abs(pair.vector @ np.ones(4)) < 1e-8

    @pytest.mark.parametrize("n", [2, 5, 8, 12])
    @pytest.mark.parametrize("which", ["largest", "smallest"])
    def test_agrees_with_jacobi_oracle(self, n, which, rng):
        a = rng.normal(size=(n, n))
        a = a + a.T
        w, _ = jacobi_spectrum(a)
        want = w[-1] if which == "largest" else w[0]
        pair = lanczos_extreme(lambda x: a @ x, n, which, tol=1e-11, seed=7)
        assert pair.value == pytest.approx(want, abs=1e-8 * max(1, abs(want)))

    def test_non_convergence_flagged(self, rng):
        a = rng.normal(size=(40, 40))
        a = a + a.T
        pair = lanczos_extreme(lambda x: a @ x, 40, "largest", tol=1e-14, max_iter=3, seed=0)
        assert not pair.converged
        assert pair.residual > 0

    def test_invalid_args(self):
        with pytest.raises(ValueError):
            lanczos_extreme(lambda x: x, 3, "middle")
        with pytest.raises(ValueError):
            lanczos_extreme(lambda x: x, 3, "largest", tol=0.0)


class TestMinEigenvalue:
    def test_identity(self):
        assert min_eigenvalue(np.eye(4)) == pytest.approx(1.0, abs=1e-9)

    def test_ones_projector(self):
        e = np.full((4, 4), 0.25)
        assert min_eigenvalue(e) == pytest.approx(0.0, abs=1e-9)

    def test_gram_matrix_nonnegative(self, rng):
        y = rng.normal(size=(6, 9))
        g = y.T @ y
        assert min_eigenvalue(g) >= -1e-10 * np.linalg.norm(g)
