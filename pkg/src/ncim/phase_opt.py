"""Per-frame phase loading by smoothed minimax descent.

The peak of the oversampled signal is minimized over the active-carrier
phases.  The non-smooth max over samples is replaced by a log-sum-exp
surrogate whose temperature is annealed toward zero; each stage runs
gradient descent with an Armijo backtracking line search.  The first phase
is pinned to zero throughout (only pairwise phase differences matter, so a
common shift is a null direction).
"""

import time
from dataclasses import dataclass, asdict

import numpy as np

from .config import FrameConfig
from .frames import Frame
from .report import SolverReport
from .validation import wrap_angles


@dataclass
class PhaseSolverOptions:
    """Knobs of the annealed descent; defaults suit desk-scale runs."""

    restarts: int = 4
    n_stages: int = 5
    max_iters: int = 500
    gradient_tolerance: float = 1e-6
    temperature_start: float | None = None  # default: BK**2 / 10
    temperature_end: float | None = None  # default: BK**2 * 1e-4
    temperature_schedule: tuple | None = None  # explicit override
    armijo: float = 1e-4
    initial_step: float = 1.0
    min_step: float = 1e-14

    def schedule(self, n_active_total: int) -> np.ndarray:
        if self.temperature_schedule is not None:
            taus = np.asarray(self.temperature_schedule, dtype=np.float64)
        else:
            bk2 = float(n_active_total) ** 2
            start = self.temperature_start if self.temperature_start is not None else bk2 / 10.0
            end = self.temperature_end if self.temperature_end is not None else bk2 * 1e-4
            taus = np.geomspace(start, end, self.n_stages)
        if np.any(taus <= 0) or (taus.size > 1 and np.any(np.diff(taus) >= 0)):
            raise ValueError("temperature schedule must be strictly decreasing and positive")
        return taus


def _power_profiles(angles: np.ndarray, supports: np.ndarray, config: FrameConfig):
    """Unit loadings -> (loading z, spectrum sum S, per-sample power profile |S|^2).

    ``angles``/``supports`` are (rows, BK); profiles are (rows, n_samples)
    with profile values equal to N * |x_t|**2 of the unit-amplitude frame.
    """
    n_samp = config.n_samples
    z = np.exp(1j * angles)
    x = np.zeros((angles.shape[0], config.n_subcarriers), dtype=np.complex128)
    x[np.arange(angles.shape[0])[:, None], supports] = z
    s = n_samp * np.fft.ifft(x, n=n_samp, axis=1)
    return z, s, np.abs(s) ** 2


def _lse(profiles: np.ndarray, tau: float) -> np.ndarray:
    m = profiles.max(axis=1)
    return m + tau * np.log(np.exp((profiles - m[:, None]) / tau).sum(axis=1))


def _value(angles, supports, tau, config):
    return _lse(_power_profiles(angles, supports, config)[2], tau)


def _value_and_grad(angles, supports, tau, config, pin_gauge=False):
    z, s, g = _power_profiles(angles, supports, config)
    m = g.max(axis=1)
    e = np.exp((g - m[:, None]) / tau)
    zsum = e.sum(axis=1)
    val = m + tau * np.log(zsum)
    w = e / zsum[:, None]
    t = config.n_samples * np.fft.ifft(w * np.conj(s), n=config.n_samples, axis=1)
    rows = np.arange(angles.shape[0])[:, None]
    grad = -2.0 * np.imag(z * t[rows, supports])
    if pin_gauge:
        grad[:, 0] = 0.0
    return val, grad


def smoothed_objective(phases, support, tau: float, config: FrameConfig) -> float:
    """Log-sum-exp surrogate of the per-sample power peak.

    Brackets the true peak: ``max_n <= value <= max_n + tau*log(n_samples)``.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    angles = np.asarray(phases, dtype=np.float64)[None, :]
    supports = np.asarray(support, dtype=np.int64)[None, :]
    return float(_value(angles, supports, tau, config)[0])


def smoothed_gradient(phases, support, tau: float, config: FrameConfig) -> np.ndarray:
    """Gradient of :func:`smoothed_objective` with respect to the phases."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    angles = np.asarray(phases, dtype=np.float64)[None, :]
    supports = np.asarray(support, dtype=np.int64)[None, :]
    _, grad = _value_and_grad(angles, supports, tau, config)
    return grad[0]


def anneal_batch(angles0: np.ndarray, supports: np.ndarray, config: FrameConfig,
                 opts: PhaseSolverOptions):
    """Run the annealed descent on a batch of rows.

    Each row is one (start point, support) pair; rows are independent and the
    result per row does not depend on which other rows share the batch.
    Returns (best_angles, best_peak, iterations, converged) where
    ``best_peak`` is the true (unsmoothed) peak of the per-sample power
    profile seen at any stage boundary, including the start.
    """
    angles0 = np.asarray(angles0, dtype=np.float64)
    supports = np.asarray(supports, dtype=np.int64)
    n_rows, bk = angles0.shape
    taus = opts.schedule(bk)

    phi = wrap_angles(angles0)
    best_peak = _power_profiles(phi, supports, config)[2].max(axis=1)
    best_phi = phi.copy()
    iters = np.zeros(n_rows, dtype=np.int64)
    stage_conv = np.ones(n_rows, dtype=bool)

    for tau in taus:
        active = np.arange(n_rows)
        stage_conv = np.zeros(n_rows, dtype=bool)
        for _ in range(opts.max_iters):
            sup_a = supports[active]
            val, grad = _value_and_grad(phi[active], sup_a, tau, config, pin_gauge=True)
            ginf = np.abs(grad).max(axis=1)
            keep = ginf > opts.gradient_tolerance
            stage_conv[active[~keep]] = True
            if not keep.all():
                active = active[keep]
                if active.size == 0:
                    break
                sup_a = sup_a[keep]
                val = val[keep]
                grad = grad[keep]
            iters[active] += 1
            gsq = np.einsum("ij,ij->i", grad, grad)
            step = np.full(active.size, opts.initial_step)
            cur = phi[active]
            moved = np.zeros(active.size, dtype=bool)
            searching = np.ones(active.size, dtype=bool)
            while searching.any():
                idx = np.flatnonzero(searching)
                trial = wrap_angles(cur[idx] - step[idx, None] * grad[idx])
                tval = _value(trial, sup_a[idx], tau, config)
                ok = tval <= val[idx] - opts.armijo * step[idx] * gsq[idx]
                acc = idx[ok]
                cur[acc] = trial[ok]
                moved[acc] = True
                searching[acc] = False
                bad = idx[~ok]
                step[bad] *= 0.5
                dead = bad[step[bad] < opts.min_step]
                searching[dead] = False
            phi[active] = cur
            if not moved.all():
                # line search stalled: leave those rows where they are
                active = active[moved]
                if active.size == 0:
                    break
        peak = _power_profiles(phi, supports, config)[2].max(axis=1)
        better = peak < best_peak
        best_peak[better] = peak[better]
        best_phi[better] = phi[better]

    return best_phi, best_peak, iters, stage_conv


def restart_points(rng: np.random.Generator, restarts: int, n_active_total: int) -> np.ndarray:
    """All-zero start plus uniform random starts, first phase pinned to zero."""
    starts = np.zeros((restarts, n_active_total))
    for r in range(1, restarts):
        starts[r] = rng.uniform(0.0, 2.0 * np.pi, n_active_total)
    starts[:, 0] = 0.0
    return starts


def optimize_phases(frame: Frame, opts: PhaseSolverOptions | None = None,
                    rng=None) -> tuple[np.ndarray, SolverReport]:
    """Minimize the oversampled peak power over the active-carrier phases.

    Runs the annealed descent from every restart point and returns the
    phase vector whose true peak profile is lowest (ties to the earliest
    restart).  The all-zero start is always included, so the reported PAPR
    never exceeds the constant-loading value BK.
    """
    if opts is None:
        opts = PhaseSolverOptions()
    config = frame.config
    bk = config.n_active_total
    rng = np.random.default_rng(rng)
    t0 = time.perf_counter()
    starts = restart_points(rng, opts.restarts, bk)
    supports = np.tile(frame.support, (opts.restarts, 1))
    best_phi, best_peak, iters, converged = anneal_batch(starts, supports, config, opts)
    paprs = best_peak / bk
    j = int(np.argmin(paprs))
    angles = wrap_angles(best_phi[j])
    value = float(paprs[j])
    report = SolverReport(
        objective=value,
        papr=value,
        papr_db=10.0 * np.log10(value),
        iterations=int(iters.sum()),
        wall_time=time.perf_counter() - t0,
        converged=bool(converged[j]),
        details={
            "restart": j,
            "restart_papr": paprs.tolist(),
            "options": asdict(opts),
        },
    )
    return angles, report
