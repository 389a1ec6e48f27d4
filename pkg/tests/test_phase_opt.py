"""Smoothed minimax objective, analytic gradient, and phase optimizer tests."""

import numpy as np
import pytest

from ncim import (
    FrameConfig,
    PhaseSolverOptions,
    TransformPlan,
    build_frame,
    encode_indices,
    optimize_phases,
    pairwise_sample_power,
    random_frame,
    random_payload,
    small_config,
    smoothed_gradient,
    smoothed_objective,
)

LIGHT = PhaseSolverOptions(restarts=2, n_stages=3, max_iters=80,
                           gradient_tolerance=1e-4)


def true_peak(phases, support, cfg):
    """Independent maximum via the pairwise expansion at every sample."""
    return max(
        pairwise_sample_power(phases, support, n, cfg) for n in range(cfg.n_samples)
    )


def fd_gradient(phases, support, tau, cfg, step=1e-6):
    grad = np.empty(phases.size)
    for i in range(phases.size):
        hi = phases.copy()
        lo = phases.copy()
        hi[i] += step
        lo[i] -= step
        grad[i] = (
            smoothed_objective(hi, support, tau, cfg)
            - smoothed_objective(lo, support, tau, cfg)
        ) / (2 * step)
    return grad


class TestSmoothedObjective:
    def test_brackets_true_maximum(self):
        cfg = small_config()
        rng = np.random.default_rng(5)
        bk = cfg.n_active_total
        for _ in range(20):
            frame = random_frame(rng, cfg)
            phases = rng.uniform(0, 2 * np.pi, bk)
            peak = true_peak(phases, frame.support, cfg)
            for tau in (10.0, 1.0, 0.05):
                val = smoothed_objective(phases, frame.support, tau, cfg)
                assert peak - 1e-9 <= val <= peak + tau * np.log(cfg.n_samples) + 1e-9

    def test_small_tau_approaches_maximum(self):
        cfg = small_config()
        rng = np.random.default_rng(8)
        frame = random_frame(rng, cfg)
        phases = rng.uniform(0, 2 * np.pi, cfg.n_active_total)
        peak = true_peak(phases, frame.support, cfg)
        val = smoothed_objective(phases, frame.support, 1e-4, cfg)
        assert val == pytest.approx(peak, abs=1e-2)

    def test_zero_phases_dominated_by_first_sample(self):
        cfg = small_config()
        frame = random_frame(np.random.default_rng(0), cfg)
        bk = cfg.n_active_total
        val = smoothed_objective(np.zeros(bk), frame.support, 1.0, cfg)
        assert val >= bk**2

    def test_rejects_nonpositive_tau(self):
        cfg = small_config()
        frame = random_frame(np.random.default_rng(0), cfg)
        with pytest.raises(ValueError):
            smoothed_objective(np.zeros(4), frame.support, 0.0, cfg)


class TestSmoothedGradient:
    def test_single_carrier_gradient_is_zero(self):
        cfg = FrameConfig(8, 1, 8, 1)
        support = np.array([3])
        for tau in (0.1, 1.0, 10.0):
            grad = smoothed_gradient(np.array([1.2]), support, tau, cfg)
            assert np.allclose(grad, 0.0, atol=1e-12)

    def test_matches_central_differences(self):
        cfg = small_config()
        rng = np.random.default_rng(3)
        bk = cfg.n_active_total
        for _ in range(30):
            frame = random_frame(rng, cfg)
            phases = rng.uniform(0, 2 * np.pi, bk)
            tau = float(rng.uniform(0.5, 20.0))
            analytic = smoothed_gradient(phases, frame.support, tau, cfg)
            numeric = fd_gradient(phases, frame.support, tau, cfg)
            scale = max(1.0, np.max(np.abs(numeric)))
            assert np.max(np.abs(analytic - numeric)) / scale <= 1e-5

    def test_matches_central_differences_main_config(self):
        from ncim import default_config

        cfg = default_config()
        rng = np.random.default_rng(4)
        frame = random_frame(rng, cfg)
        phases = rng.uniform(0, 2 * np.pi, cfg.n_active_total)
        tau = 5.0
        analytic = smoothed_gradient(phases, frame.support, tau, cfg)
        numeric = fd_gradient(phases, frame.support, tau, cfg)
        scale = max(1.0, np.max(np.abs(numeric)))
        assert np.max(np.abs(analytic - numeric)) / scale <= 1e-5

    def test_pairwise_derivative_structure(self):
        # d/dphi_i of the sample power is an odd pairwise sine sum, so equal
        # phases at a two-carrier support give antisymmetric gradients
        cfg = FrameConfig(16, 2, 8, 1)
        support = np.array([2, 11])
        for tau in (0.5, 3.0):
            grad = smoothed_gradient(np.array([0.7, 0.7]), support, tau, cfg)
            assert grad[0] == pytest.approx(-grad[1], abs=1e-10)


class TestOptimizePhases:
    def test_single_active_pair_matches_grid_oracle(self):
        cfg = FrameConfig(16, 2, 8, 1)  # two active carriers
        pattern = np.array([[3], [6]])
        frame = build_frame(pattern, cfg)
        # 1-D oracle over the phase difference
        deltas = np.linspace(0, 2 * np.pi, 10_000, endpoint=False)
        plan = TransformPlan.from_config(cfg)
        steer = plan.steering(frame.support)
        ts = steer @ np.stack([np.ones_like(deltas), np.exp(1j * deltas)])
        grid_best = np.min(np.max(np.abs(ts) ** 2, axis=0)) / cfg.mean_power
        phases, report = optimize_phases(frame, LIGHT, rng=0)
        assert report.papr <= grid_best * (1 + 1e-3)
        assert report.papr >= grid_best - 1e-2

    def test_single_carrier_has_unit_papr(self):
        cfg = FrameConfig(8, 1, 8, 1)
        frame = build_frame(np.array([[5]]), cfg)
        _, report = optimize_phases(frame, LIGHT, rng=0)
        assert report.papr == pytest.approx(1.0, rel=1e-9)

    def test_never_worse_than_constant_loading(self):
        cfg = small_config()
        rng = np.random.default_rng(6)
        for seed in range(5):
            frame = random_frame(rng, cfg)
            _, report = optimize_phases(frame, LIGHT, rng=seed)
            assert report.papr <= cfg.n_active_total + 1e-9

    def test_returned_angles_feasible(self):
        cfg = small_config()
        frame = random_frame(np.random.default_rng(12), cfg)
        phases, _ = optimize_phases(frame, LIGHT, rng=1)
        assert np.all(phases >= 0.0)
        assert np.all(phases < 2 * np.pi)

    def test_shift_invariance_of_objective(self):
        cfg = small_config()
        rng = np.random.default_rng(21)
        frame = random_frame(rng, cfg)
        phases = rng.uniform(0, 2 * np.pi, cfg.n_active_total)
        base = true_peak(phases, frame.support, cfg)
        shifted = true_peak(phases + 1.234, frame.support, cfg)
        assert shifted == pytest.approx(base, abs=1e-9)

    def test_deterministic_given_seed(self):
        cfg = small_config()
        frame = random_frame(np.random.default_rng(30), cfg)
        p1, r1 = optimize_phases(frame, LIGHT, rng=99)
        p2, r2 = optimize_phases(frame, LIGHT, rng=99)
        assert np.array_equal(p1, p2)
        assert r1.papr == r2.papr

    def test_report_records_options_and_restart(self):
        cfg = small_config()
        frame = random_frame(np.random.default_rng(31), cfg)
        _, report = optimize_phases(frame, LIGHT, rng=2)
        assert report.details["options"]["restarts"] == LIGHT.restarts
        assert 0 <= report.details["restart"] < LIGHT.restarts
        assert report.objective == report.papr

    def test_schedule_validation(self):
        with pytest.raises(ValueError):
            PhaseSolverOptions(temperature_schedule=(1.0, 2.0)).schedule(4)
        with pytest.raises(ValueError):
            PhaseSolverOptions(temperature_schedule=(1.0, -0.5)).schedule(4)
        taus = PhaseSolverOptions().schedule(24)
        assert taus[0] == pytest.approx(24**2 / 10)
        assert taus[-1] == pytest.approx(24**2 * 1e-4)
        assert np.all(np.diff(taus) < 0)
