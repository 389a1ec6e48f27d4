"""Greedy sign-exchange heuristic for peak reduction.

Starting from the all-plus loading, carriers are scanned in support order
and a sign flip is kept only when it strictly lowers the current peak.  A
scan pass alternates direction (+1 entries tried as -1, then the reverse)
and repeats while a pass still improves the peak by more than the relative
threshold ``eta``; the outer loop stops once an iteration leaves the count
of +1 entries unchanged.
"""

import time
from dataclasses import dataclass, replace, field

import numpy as np

from .frames import Frame
from .report import SolverReport
from .sign_opt import amplitude_steering, _realized_papr


@dataclass
class HeuristicState:
    signs: np.ndarray  # current +/-1 loading on the support
    indicator: np.ndarray  # 1 where signs == +1, 0 where -1
    prev_peak: float  # peak at the start of the last completed pass
    peak: float  # current peak (kept in sync after every accepted flip)
    eta: float
    time_series: np.ndarray = field(repr=False, default=None)
    accepted_peaks: list = field(default_factory=list)


def initial_state(steering: np.ndarray, eta: float) -> HeuristicState:
    bk = steering.shape[1]
    signs = np.ones(bk, dtype=np.float64)
    ts = steering @ signs
    peak = float(np.max(np.abs(ts)))
    return HeuristicState(signs, np.ones(bk, dtype=np.int64), peak, peak, eta, ts, [])


def exchange_sign(state: HeuristicState, steering: np.ndarray,
                  direction: int) -> HeuristicState:
    """One scan loop in the given direction.

    ``direction=+1`` tries turning current +1 entries into -1; ``-1`` the
    reverse.  Flips are accepted only on strict peak improvement; the loop
    repeats while a full pass improves the peak by more than ``eta`` times
    its value.
    """
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    signs = state.signs.copy()
    indicator = state.indicator.copy()
    ts = state.time_series if state.time_series is not None else steering @ signs
    ts = ts.copy()
    peak = state.peak
    prev = state.prev_peak
    accepted = list(state.accepted_peaks)
    want = (direction + 1) // 2
    while True:
        for i in np.flatnonzero(indicator == want):
            trial = ts - 2.0 * signs[i] * steering[:, i]
            trial_peak = float(np.max(np.abs(trial)))
            if trial_peak < peak:
                signs[i] = -direction
                indicator[i] = (-direction + 1) // 2
                ts = trial
                peak = trial_peak
                accepted.append(trial_peak)
        improvement = prev - peak
        prev = peak
        if not improvement > state.eta * peak:
            break
    return replace(state, signs=signs, indicator=indicator, prev_peak=prev,
                   peak=peak, time_series=ts, accepted_peaks=accepted)


def heuristic_signs(frame: Frame, eta: float = 0.1, sample_range: str = "nr",
                    max_outer: int = 100) -> tuple[np.ndarray, SolverReport]:
    """Run the alternating sign-exchange heuristic on one frame."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    t0 = time.perf_counter()
    steering = amplitude_steering(frame, sample_range)
    state = initial_state(steering, eta)
    plus_count = int(state.indicator.sum())
    outer = 0
    finished = False
    while outer < max_outer:
        outer += 1
        state = exchange_sign(state, steering, +1)
        current = int(state.indicator.sum())
        if current != plus_count:
            plus_count = current
        state = exchange_sign(state, steering, -1)
        if int(state.indicator.sum()) == plus_count:
            finished = True
            break
    realized = _realized_papr(frame, state.signs)
    report = SolverReport(
        objective=state.peak,
        papr=realized,
        papr_db=10.0 * np.log10(realized),
        iterations=outer,
        wall_time=time.perf_counter() - t0,
        converged=finished,
        details={"accepted_peaks": state.accepted_peaks, "eta": eta},
    )
    return state.signs, report
