"""Conventional selected-mapping and partial-transmit-sequence baselines."""

import itertools
from dataclasses import dataclass

import numpy as np

from .frames import Frame
from .transforms import TransformPlan, papr

PHASE_ALPHABET = np.array([0.0, np.pi / 2, np.pi, 3 * np.pi / 2])


@dataclass
class SlmCandidateSet:
    """Fixed candidate phase vectors; the first is always the identity."""

    phases: np.ndarray  # (n_candidates, BK)

    def __post_init__(self):
        self.phases = np.asarray(self.phases, dtype=np.float64)
        if self.phases.ndim != 2 or self.phases.shape[0] < 1:
            raise ValueError("need at least one candidate phase vector")
        if np.any(self.phases[0] != 0.0):
            raise ValueError("first candidate must be the all-zero phase vector")


def make_slm_candidates(n_candidates: int, n_active_total: int,
                        rng: np.random.Generator) -> SlmCandidateSet:
    """Draw the candidate set once: identity plus random quadrant phases."""
    if n_candidates < 1:
        raise ValueError("n_candidates must be >= 1")
    phases = np.zeros((n_candidates, n_active_total))
    if n_candidates > 1:
        picks = rng.integers(0, PHASE_ALPHABET.size,
                             size=(n_candidates - 1, n_active_total))
        phases[1:] = PHASE_ALPHABET[picks]
    return SlmCandidateSet(phases)


def slm_select(frame: Frame, candidates: SlmCandidateSet,
               plan: TransformPlan | None = None) -> tuple[Frame, int, float]:
    """Apply every candidate to the active entries, keep the lowest PAPR.

    Ties go to the lowest candidate index, so the identity wins when nothing
    improves on it.
    """
    config = frame.config
    if candidates.phases.shape[1] != config.n_active_total:
        raise ValueError("candidate length must equal the number of active carriers")
    if plan is None:
        plan = TransformPlan.from_config(config)
    base = frame.values[frame.support]
    loaded = base[None, :] * np.exp(1j * candidates.phases)
    trial_values = np.zeros((candidates.phases.shape[0], config.n_subcarriers),
                            dtype=np.complex128)
    trial_values[:, frame.support] = loaded
    ts = plan.transform(trial_values)
    peaks = np.max(np.abs(ts) ** 2, axis=1)
    best = int(np.argmin(peaks))
    best_frame = Frame(trial_values[best], frame.support.copy(), config)
    return best_frame, best, float(peaks[best] / config.mean_power)


@dataclass
class PtsConfig:
    """Block partition and search mode for partial transmit sequences.

    ``n_blocks`` contiguous equal spans of the subcarriers each receive one
    common phase from the quadrant alphabet.  The default exhaustive mode
    fixes block 0 at phase zero and searches the remaining combinations;
    ``mode="sampled"`` instead scores ``n_candidates`` seeded random block
    phase vectors (the identity always included).
    """

    n_blocks: int = 4
    mode: str = "exhaustive"
    n_candidates: int = 4
    seed: int = 0

    def __post_init__(self):
        if self.n_blocks < 1:
            raise ValueError("n_blocks must be >= 1")
        if self.mode not in ("exhaustive", "sampled"):
            raise ValueError("mode must be 'exhaustive' or 'sampled'")
        if self.n_candidates < 1:
            raise ValueError("n_candidates must be >= 1")


def _block_phase_vectors(cfg: PtsConfig) -> np.ndarray:
    m = cfg.n_blocks
    if cfg.mode == "exhaustive":
        if m == 1:
            return np.zeros((1, 1))
        combos = np.array(
            list(itertools.product(PHASE_ALPHABET, repeat=m - 1)), dtype=np.float64
        )
        return np.concatenate([np.zeros((combos.shape[0], 1)), combos], axis=1)
    rng = np.random.default_rng(cfg.seed)
    vecs = np.zeros((cfg.n_candidates, m))
    if cfg.n_candidates > 1:
        picks = rng.integers(0, PHASE_ALPHABET.size, size=(cfg.n_candidates - 1, m))
        vecs[1:] = PHASE_ALPHABET[picks]
    return vecs


def pts_select(frame: Frame, cfg: PtsConfig,
               plan: TransformPlan | None = None) -> tuple[Frame, np.ndarray, float]:
    """Search block phase combinations, keep the lowest-PAPR one."""
    config = frame.config
    if config.n_subcarriers % cfg.n_blocks != 0:
        raise ValueError("n_blocks must divide n_subcarriers")
    if plan is None:
        plan = TransformPlan.from_config(config)
    span = config.n_subcarriers // cfg.n_blocks
    block_of = frame.support // span
    block_ts = np.zeros((cfg.n_blocks, plan.n_samples), dtype=np.complex128)
    for m in range(cfg.n_blocks):
        part = np.zeros(config.n_subcarriers, dtype=np.complex128)
        mask = block_of == m
        part[frame.support[mask]] = frame.values[frame.support[mask]]
        block_ts[m] = plan.transform(part)
    combos = _block_phase_vectors(cfg)
    ts = np.exp(1j * combos) @ block_ts
    peaks = np.max(np.abs(ts) ** 2, axis=1)
    best = int(np.argmin(peaks))
    chosen = combos[best]
    values = frame.values.copy()
    values[frame.support] = values[frame.support] * np.exp(1j * chosen[block_of])
    best_frame = Frame(values, frame.support.copy(), config)
    return best_frame, chosen, float(peaks[best] / config.mean_power)
