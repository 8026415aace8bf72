import numpy as np
import pytest

from nomad.rings import (
    active_mode_count,
    cone_geometry_check,
    cp_diagnostics,
    fourier_profile,
    lp_feasibility_check,
    neighborhood_width,
)


def circulant(row):
    row = np.asarray(row, dtype=float)
    return np.array([np.roll(row, i) for i in range(len(row))])


class TestFourierProfile:
    def test_uniform_matrix_single_mode(self):
        prof = fourier_profile(np.full((6, 6), 1 / 6))
        want = np.zeros(6)
        want[0] = 1.0
        assert np.allclose(prof.q, want, atol=1e-12)
        assert prof.circulant_residual <= 1e-15

    def test_identity_all_modes(self):
        prof = fourier_profile(np.eye(4))
        assert np.allclose(prof.q, 1.0, atol=1e-12)

    def test_hand_derived_ring_solution(self):
        q4 = circulant([0.5, 0.25, 0.0, 0.25])
        prof = fourier_profile(q4)
        assert np.allclose(prof.q, [1.0, 0.5, 0.0, 0.5], atol=1e-12)
        assert prof.imag_residual <= 1e-12

    def test_round_trip_reconstruction(self, rng):
        # circulant PSD matrix from a nonnegative spectrum
        n = 16
        spec = np.abs(rng.normal(size=n))
        spec[0] = 1.0
        f = np.exp(-2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n) / np.sqrt(n)
        qmat = (f @ np.diag(spec) @ f.conj().T).real
        prof = fourier_profile(qmat)
        assert prof.circulant_residual <= 1e-10
        recon = np.array([np.roll(prof.diag_values, i) for i in range(n)])
        assert np.abs(recon - qmat).max() <= 1e-9 * np.abs(qmat).max()

    def test_noncirculant_reports_residual(self):
        q = np.diag([1.0, 2.0, 3.0, 4.0])
        prof = fourier_profile(q)
        assert prof.circulant_residual > 0.5


class TestLpFeasibility:
    def test_ring4_solution_passes_with_tight_offset(self):
        prof = fourier_profile(circulant([0.5, 0.25, 0.0, 0.25]))
        out = lp_feasibility_check(prof, K=2.0, tol=1e-6)
        assert out["passed"]
        assert 2 in out["tight_offsets"]

    def test_budget_violation_reported(self):
        prof = fourier_profile(circulant([0.5, 0.25, 0.0, 0.25]))
        out = lp_feasibility_check(prof, K=3.0, tol=1e-3)
        assert not out["passed"]
        assert out["margins"]["trace_budget"] < -0.5

    def test_negative_eigenvalue_detected(self):
        # circulant with a negative Fourier mode
        n = 8
        row = np.zeros(n)
        row[0] = 0.5
        row[1] = row[-1] = -0.25
        prof = fourier_profile(circulant(row))
        out = lp_feasibility_check(prof, K=prof.q.sum(), tol=1e-3)
        assert out["margins"]["entrywise_nonneg"] < -1e-2


class TestConeGeometry:
    def test_rank_one_uniform(self):
        out = cone_geometry_check(np.full((5, 5), 0.2))
        assert out["passed"] and out["cosine_std"] <= 1e-12

    def test_identity_orthonormal_frame(self):
        out = cone_geometry_check(np.eye(6))
        assert out["passed"]
        assert out["cosine_mean"] == pytest.approx(1 / np.sqrt(6), abs=1e-9)

    def test_circulant_psd_equal_angles(self, rng):
        n = 32
        spec = np.abs(rng.normal(size=n)) + 0.1
        spec[0] = 1.0
        f = np.exp(-2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n) / np.sqrt(n)
        qmat = (f @ np.diag(spec) @ f.conj().T).real
        out = cone_geometry_check(qmat, tol=1e-6)
        assert out["passed"]

    def test_noncirculant_fails(self):
        q = np.diag([1.0, 1.0, 4.0]) / 2.0
        out = cone_geometry_check(q, tol=1e-3)
        assert not out["passed"]


class TestNeighborhoodWidth:
    def test_identity_width_one(self):
        for frac in (0.05, 0.5, 1.0):
            assert neighborhood_width(np.eye(7), frac)["mean_width"] == 1.0

    def test_uniform_width_n(self):
        assert neighborhood_width(np.full((9, 9), 1 / 9), 0.1)["mean_width"] == 9.0

    def test_banded_width(self):
        q = circulant([0.5, 0.2, 0.01, 0.0, 0.0, 0.0, 0.01, 0.2])
        out = neighborhood_width(q, 0.1)
        assert out["mean_width"] == 3.0


class TestCpDiagnostics:
    def test_uniform_small_k(self):
        out = cp_diagnostics(np.full((4, 4), 0.25), K=1.0)
        assert out["applicable_regime"] == "small-K"
        assert out["diag_value_check"]

    def test_large_k_diag_dominant(self):
        # circulant, K = 3 >= n/2 on n=4: diag 0.75, off-row sum 0.25
        q = circulant([0.75, 0.125, 0.0, 0.125])
        out = cp_diagnostics(q, K=3.0)
        assert out["applicable_regime"] == "large-K"
        assert out["diag_dominant"]
        assert out["diag_value_check"]

    def test_mid_regime_uncovered(self):
        q = circulant([0.25, 0.2, 0.175, 0.175, 0.2])  # n=5, K=1.25... mid
        out = cp_diagnostics(q, K=2.0)
        assert out["applicable_regime"] == "uncovered"


def test_active_mode_count_thresholds():
    prof = fourier_profile(circulant([0.5, 0.25, 0.0, 0.25]))
    assert active_mode_count(prof, 1e-3) == 3
    assert active_mode_count(prof, 0.9) == 1
