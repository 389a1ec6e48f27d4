"""Monte Carlo experiment runner: CCDF, BER, and timing comparisons.

Every emitted number is a pure function of (spec, seed): payloads, channel
draws, and scheme randomness come from counter-based per-trial streams, so
results are identical regardless of worker count or chunk order.
"""

import csv
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict, field, fields
from pathlib import Path

import numpy as np

from .baselines import PtsConfig, make_slm_candidates, pts_select, slm_select
from .channel import (
    ChannelConfig,
    PAYLOAD_STREAM,
    SCHEME_STREAM,
    simulate_index_error_rate,
    snr_to_noise_variance,
    trial_rng,
)
from .config import FrameConfig
from .exchange import heuristic_signs
from .frames import Frame, build_frame, encode_indices, random_payload
from .phase_opt import PhaseSolverOptions, anneal_batch, optimize_phases, restart_points
from .sign_opt import DiscretizationConfig, SignSolverOptions, solve_discretized
from .transforms import TransformPlan, papr_db, second_papr_db

SCHEMES = ("none", "oslm-p1", "ilp-p4", "heuristic", "slm", "pts")
SLM_SET_STREAM = 3
_CHUNK = 128


@dataclass
class ExperimentSpec:
    """Flat description of one run; mirrors the config-file key names."""

    n_subcarriers: int = 128
    n_clusters: int = 8
    cluster_size: int = 16
    n_active: int = 3
    amplitude: float = 1.0
    oversampling: int = 4
    scheme: str = "none"
    n_trials: int = 1000
    seed: int = 0
    out_dir: str | None = None
    levels: int = 5
    eta: float = 0.1
    slm_candidates: int = 16
    pts_blocks: int = 4
    sample_range: str = "nr"
    phase_restarts: int = 4
    phase_stages: int = 5
    phase_max_iters: int = 500
    phase_tolerance: float = 1e-6
    snr_db: tuple = field(default_factory=tuple)
    channel_variance: float = 1.0
    workers: int = 1

    def __post_init__(self):
        self.snr_db = tuple(float(s) for s in self.snr_db)
        self.validate()

    def validate(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; choose from {SCHEMES}")
        if self.n_trials < 1:
            raise ValueError("n_trials must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        self.frame_config()  # numerology invariants
        if self.scheme == "ilp-p4" and self.levels < 3:
            raise ValueError("ilp-p4 needs levels >= 3")
        if self.scheme == "heuristic" and self.eta <= 0:
            raise ValueError("heuristic needs eta > 0")
        if self.scheme == "slm" and self.slm_candidates < 1:
            raise ValueError("slm needs slm_candidates >= 1")
        if self.scheme == "pts" and self.n_subcarriers % self.pts_blocks != 0:
            raise ValueError("pts_blocks must divide n_subcarriers")
        if self.sample_range not in ("nr", "n"):
            raise ValueError("sample_range must be 'nr' or 'n'")

    def frame_config(self) -> FrameConfig:
        return FrameConfig(
            self.n_subcarriers,
            self.n_clusters,
            self.cluster_size,
            self.n_active,
            self.amplitude,
            self.oversampling,
        )

    def phase_options(self) -> PhaseSolverOptions:
        return PhaseSolverOptions(
            restarts=self.phase_restarts,
            n_stages=self.phase_stages,
            max_iters=self.phase_max_iters,
            gradient_tolerance=self.phase_tolerance,
        )

    def resolved(self) -> dict:
        out = asdict(self)
        out["snr_db"] = list(self.snr_db)
        return out


@dataclass
class CcdfCurve:
    """Empirical exceedance curve on a 0.1 dB threshold grid."""

    thresholds_db: np.ndarray
    exceedance_prob: np.ndarray
    n_trials: int

    @classmethod
    def from_samples(cls, values_db: np.ndarray, n_trials: int) -> "CcdfCurve":
        values = np.sort(np.asarray(values_db, dtype=np.float64))
        lo = int(np.floor(values[0] * 10.0)) - 1
        hi = int(np.ceil(values[-1] * 10.0))
        thresholds = np.arange(lo, hi + 1, dtype=np.float64) / 10.0
        above = values.size - np.searchsorted(values, thresholds, side="right")
        return cls(thresholds, above / n_trials, n_trials)

    def threshold_at(self, prob: float) -> float:
        """Threshold (dB) where the curve crosses ``prob``, linearly interpolated."""
        c = self.exceedance_prob
        t = self.thresholds_db
        idx = np.flatnonzero(c <= prob)
        if idx.size == 0:
            return float(t[-1])
        i = int(idx[0])
        if i == 0:
            return float(t[0])
        c0, c1 = c[i - 1], c[i]
        if c0 == c1:
            return float(t[i])
        frac = (c0 - prob) / (c0 - c1)
        return float(t[i - 1] + frac * (t[i] - t[i - 1]))


@dataclass
class BenchRow:
    scheme: str
    mean_time_s: float
    n_frames: int


@dataclass
class TimingTable:
    rows: list

    def time_of(self, scheme: str) -> float:
        for row in self.rows:
            if row.scheme == scheme:
                return row.mean_time_s
        raise KeyError(scheme)


def _trial_frame(spec: ExperimentSpec, config: FrameConfig, trial: int) -> Frame:
    payload = random_payload(trial_rng(spec.seed, trial, PAYLOAD_STREAM), config)
    return build_frame(encode_indices(payload, config), config)


def make_scheme(spec: ExperimentSpec, config: FrameConfig):
    """Per-frame loading callable ``(frame, rng) -> Frame`` or None for 'none'."""
    plan = TransformPlan.from_config(config)
    if spec.scheme == "none":
        return None
    if spec.scheme == "heuristic":

        def apply(frame, rng):
            signs, _ = heuristic_signs(frame, spec.eta, spec.sample_range)
            return _loaded(frame, signs=signs)

    elif spec.scheme == "ilp-p4":
        disc = DiscretizationConfig(spec.levels)
        opts = SignSolverOptions(sample_range=spec.sample_range)

        def apply(frame, rng):
            signs, _ = solve_discretized(frame, disc, opts)
            return _loaded(frame, signs=signs)

    elif spec.scheme == "oslm-p1":
        popts = spec.phase_options()

        def apply(frame, rng):
            phases, _ = optimize_phases(frame, popts, rng)
            return _loaded(frame, phases=phases)

    elif spec.scheme == "slm":
        candidates = make_slm_candidates(
            spec.slm_candidates,
            config.n_active_total,
            trial_rng(spec.seed, 0, SLM_SET_STREAM),
        )

        def apply(frame, rng):
            return slm_select(frame, candidates, plan)[0]

    elif spec.scheme == "pts":
        cfg = PtsConfig(n_blocks=spec.pts_blocks)

        def apply(frame, rng):
            return pts_select(frame, cfg, plan)[0]

    else:  # pragma: no cover - guarded by validate()
        raise ValueError(spec.scheme)
    return apply


def _loaded(frame: Frame, phases=None, signs=None) -> Frame:
    values = np.zeros_like(frame.values)
    if phases is not None:
        values[frame.support] = frame.config.amplitude * np.exp(1j * np.asarray(phases))
    else:
        values[frame.support] = frame.config.amplitude * np.asarray(signs)
    return Frame(values, frame.support.copy(), frame.config)


def _ccdf_chunk(spec_dict: dict, start: int, stop: int) -> np.ndarray:
    """Per-trial PAPR statistic (dB) for trials [start, stop)."""
    spec = ExperimentSpec(**spec_dict)
    config = spec.frame_config()
    plan = TransformPlan.from_config(config)
    trials = range(start, stop)
    out = np.empty(stop - start)

    if spec.scheme == "oslm-p1":
        # all restarts of all frames share one batched descent
        opts = spec.phase_options()
        bk = config.n_active_total
        n = len(trials)
        starts = np.empty((n * opts.restarts, bk))
        supports = np.empty((n * opts.restarts, bk), dtype=np.int64)
        for i, t in enumerate(trials):
            frame = _trial_frame(spec, config, t)
            rng = trial_rng(spec.seed, t, SCHEME_STREAM)
            block = slice(i * opts.restarts, (i + 1) * opts.restarts)
            starts[block] = restart_points(rng, opts.restarts, bk)
            supports[block] = frame.support
        _, peaks, _, _ = anneal_batch(starts, supports, config, opts)
        per_frame = peaks.reshape(n, opts.restarts).min(axis=1)
        return 10.0 * np.log10(per_frame / bk)

    scheme = make_scheme(spec, config)
    for i, t in enumerate(trials):
        frame = _trial_frame(spec, config, t)
        ts_stat = None
        if scheme is None:
            ts_stat = second_papr_db(plan.transform(frame.values), config.mean_power)
        else:
            loaded = scheme(frame, trial_rng(spec.seed, t, SCHEME_STREAM))
            ts_stat = papr_db(plan.transform(loaded.values), config.mean_power)
        out[i] = ts_stat
    return out


def _chunk_ranges(n_trials: int, chunk: int):
    return [(a, min(a + chunk, n_trials)) for a in range(0, n_trials, chunk)]


def run_ccdf(spec: ExperimentSpec) -> CcdfCurve:
    """Empirical CCDF of the scheme's PAPR statistic over seeded trials.

    The 'none' scheme records the peak excluding the deterministic first
    sample, since its true peak is the same constant on every frame.
    """
    spec.validate()
    values = np.empty(spec.n_trials)
    ranges = _chunk_ranges(spec.n_trials, _CHUNK)
    spec_dict = spec.resolved()
    if spec.workers > 1 and len(ranges) > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            results = pool.map(
                _ccdf_chunk,
                [spec_dict] * len(ranges),
                [a for a, _ in ranges],
                [b for _, b in ranges],
            )
            for (a, b), vals in zip(ranges, results):
                values[a:b] = vals
    else:
        for a, b in ranges:
            values[a:b] = _ccdf_chunk(spec_dict, a, b)
    curve = CcdfCurve.from_samples(values, spec.n_trials)
    if spec.out_dir is not None:
        out = Path(spec.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_csv(
            out / f"{spec.scheme}_ccdf.csv",
            ("threshold_db", "ccdf"),
            zip(curve.thresholds_db, curve.exceedance_prob),
        )
        _write_sidecar(out / f"{spec.scheme}_ccdf.json", spec, {"statistic": "papr_db"})
    return curve


def run_bench(specs: list, n_trials: int = 10) -> TimingTable:
    """Mean per-frame wall time of each scheme over a common frame set."""
    if not specs:
        raise ValueError("need at least one spec")
    base = specs[0]
    config = base.frame_config()
    for other in specs[1:]:
        if other.frame_config() != config or other.seed != base.seed:
            raise ValueError("bench specs must share numerology and seed")
    frames = [_trial_frame(base, config, t) for t in range(n_trials)]
    rows = []
    for spec in specs:
        scheme = make_scheme(spec, config)
        plan = TransformPlan.from_config(config)
        t0 = time.perf_counter()
        for t, frame in enumerate(frames):
            if scheme is None:
                second_papr_db(plan.transform(frame.values), config.mean_power)
            else:
                scheme(frame, trial_rng(spec.seed, t, SCHEME_STREAM))
        elapsed = time.perf_counter() - t0
        rows.append(BenchRow(spec.scheme, elapsed / n_trials, n_trials))
    table = TimingTable(rows)
    if base.out_dir is not None:
        out = Path(base.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_csv(
            out / "bench.csv",
            ("scheme", "mean_time_s", "n_frames"),
            ((r.scheme, r.mean_time_s, r.n_frames) for r in rows),
        )
        _write_sidecar(out / "bench.json", base,
                       {"schemes": [s.scheme for s in specs], "n_frames": n_trials})
    return table


def run_ber(spec: ExperimentSpec) -> list:
    """Cluster/bit error rates per SNR point for the spec's scheme."""
    spec.validate()
    if not spec.snr_db:
        raise ValueError("spec.snr_db must list at least one SNR point")
    config = spec.frame_config()
    scheme = make_scheme(spec, config)
    rows = []
    for snr in spec.snr_db:
        noise_var = snr_to_noise_variance(snr, config, spec.channel_variance)
        cfg = ChannelConfig(spec.channel_variance, noise_var)
        res = simulate_index_error_rate(scheme, config, cfg, spec.n_trials, spec.seed)
        rows.append(
            {
                "snr_db": snr,
                "cer": res.cluster_error_rate,
                "cer_se": res.cluster_se,
                "ber": res.bit_error_rate,
                "ber_se": res.bit_se,
            }
        )
    if spec.out_dir is not None:
        out = Path(spec.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_csv(
            out / f"{spec.scheme}_ber.csv",
            ("snr_db", "cer", "cer_se", "ber", "ber_se"),
            ((r["snr_db"], r["cer"], r["cer_se"], r["ber"], r["ber_se"]) for r in rows),
        )
        _write_sidecar(out / f"{spec.scheme}_ber.json", spec, {})
    return rows


def _write_csv(path: Path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _fmt(v):
    if isinstance(v, float) or isinstance(v, np.floating):
        return repr(float(v))
    return v


def _write_sidecar(path: Path, spec: ExperimentSpec, extra: dict):
    doc = {"spec": spec.resolved()}
    doc.update(extra)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def spec_field_names() -> tuple:
    return tuple(f.name for f in fields(ExperimentSpec))
