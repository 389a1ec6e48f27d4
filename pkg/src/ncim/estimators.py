"""Estimator-style API over the functional core.

Frames are rows of a (n_frames, N) complex matrix, so the codec, the
peak-reduction schemes, and the detector compose with scikit-learn style
pipelines: encoders and reducers are transformers, the detector is a
predictor.  All estimators are stateless apart from constants precomputed
in ``fit``.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .baselines import PtsConfig, make_slm_candidates, pts_select, slm_select
from .channel import ml_detect_batch
from .config import FrameConfig
from .exchange import heuristic_signs
from .frames import (
    Frame,
    bits_per_frame,
    build_frame,
    decode_indices,
    encode_indices,
)
from .phase_opt import PhaseSolverOptions, optimize_phases
from .sign_opt import DiscretizationConfig, SignSolverOptions, solve_discretized, solve_exact_binary
from .transforms import TransformPlan
from .validation import check_bit_matrix, check_frame_matrix


class _ConfiguredEstimator(BaseEstimator):
    """Shared numerology parameters and fit-time plumbing."""

    def __init__(self, n_subcarriers=128, n_clusters=8, cluster_size=16,
                 n_active=3, amplitude=1.0, oversampling=4):
        self.n_subcarriers = n_subcarriers
        self.n_clusters = n_clusters
        self.cluster_size = cluster_size
        self.n_active = n_active
        self.amplitude = amplitude
        self.oversampling = oversampling

    def _make_config(self) -> FrameConfig:
        return FrameConfig(self.n_subcarriers, self.n_clusters, self.cluster_size,
                           self.n_active, self.amplitude, self.oversampling)

    def fit(self, X=None, y=None):
        self.config_ = self._make_config()
        self.plan_ = TransformPlan.from_config(self.config_)
        return self


class FrameEncoder(_ConfiguredEstimator, TransformerMixin):
    """Payload bits to index-modulated frames and back.

    ``transform`` maps a (n_frames, bits_per_frame) 0/1 matrix to the
    (n_frames, N) complex frame matrix with constant active loading;
    ``inverse_transform`` recovers the bits from any loaded frame matrix
    with the same supports.
    """

    def transform(self, X):
        check_is_fitted(self, "config_")
        X = check_bit_matrix(X, bits_per_frame(self.config_))
        out = np.empty((X.shape[0], self.config_.n_subcarriers), dtype=np.complex128)
        for i in range(X.shape[0]):
            out[i] = build_frame(encode_indices(X[i], self.config_), self.config_).values
        return out

    def inverse_transform(self, X):
        check_is_fitted(self, "config_")
        _, supports = check_frame_matrix(X, self.config_)
        n_bits = bits_per_frame(self.config_)
        out = np.empty((X.shape[0], n_bits), dtype=np.int64)
        for i in range(X.shape[0]):
            pattern = (
                supports[i].reshape(self.config_.n_clusters, self.config_.n_active)
                % self.config_.cluster_size
            )
            out[i] = decode_indices(pattern, self.config_)
        return out


class _ReducerBase(_ConfiguredEstimator, TransformerMixin):
    """Applies a per-frame peak-reduction loading to each row."""

    def transform(self, X):
        check_is_fitted(self, "config_")
        X, supports = check_frame_matrix(X, self.config_)
        out = np.empty_like(X)
        for i in range(X.shape[0]):
            frame = Frame(X[i].copy(), supports[i], self.config_)
            out[i] = self._reduce(frame, i).values
        return out

    def _reduce(self, frame: Frame, row: int) -> Frame:
        raise NotImplementedError


class MinimaxPhaseReducer(_ReducerBase):
    """Continuous per-carrier phases from the annealed smoothed-peak descent."""

    def __init__(self, n_subcarriers=128, n_clusters=8, cluster_size=16,
                 n_active=3, amplitude=1.0, oversampling=4,
                 restarts=4, max_iters=500, gradient_tolerance=1e-6,
                 n_stages=5, random_state=0):
        super().__init__(n_subcarriers, n_clusters, cluster_size, n_active,
                         amplitude, oversampling)
        self.restarts = restarts
        self.max_iters = max_iters
        self.gradient_tolerance = gradient_tolerance
        self.n_stages = n_stages
        self.random_state = random_state

    def _reduce(self, frame, row):
        opts = PhaseSolverOptions(
            restarts=self.restarts,
            max_iters=self.max_iters,
            gradient_tolerance=self.gradient_tolerance,
            n_stages=self.n_stages,
        )
        rng = np.random.default_rng([self.random_state, row])
        phases, _ = optimize_phases(frame, opts, rng)
        return build_frame_like(frame, np.exp(1j * phases))


class DiscreteSignReducer(_ReducerBase):
    """Optimal binary sign loading; exact modulus or discretized rows.

    ``levels=None`` solves the exact binary minimax; an integer P >= 3
    solves the P-angle discretized program instead.
    """

    def __init__(self, n_subcarriers=16, n_clusters=2, cluster_size=8,
                 n_active=2, amplitude=1.0, oversampling=4,
                 levels=None, method="auto", sample_range="nr"):
        super().__init__(n_subcarriers, n_clusters, cluster_size, n_active,
                         amplitude, oversampling)
        self.levels = levels
        self.method = method
        self.sample_range = sample_range

    def _reduce(self, frame, row):
        opts = SignSolverOptions(method=self.method, sample_range=self.sample_range)
        if self.levels is None:
            signs, _ = solve_exact_binary(frame, opts)
        else:
            signs, _ = solve_discretized(frame, DiscretizationConfig(self.levels), opts)
        return build_frame_like(frame, signs.astype(np.complex128))


class SignExchangeReducer(_ReducerBase):
    """Greedy sign-exchange heuristic loading."""

    def __init__(self, n_subcarriers=128, n_clusters=8, cluster_size=16,
                 n_active=3, amplitude=1.0, oversampling=4,
                 eta=0.1, sample_range="nr"):
        super().__init__(n_subcarriers, n_clusters, cluster_size, n_active,
                         amplitude, oversampling)
        self.eta = eta
        self.sample_range = sample_range

    def _reduce(self, frame, row):
        signs, _ = heuristic_signs(frame, self.eta, self.sample_range)
        return build_frame_like(frame, signs.astype(np.complex128))


class SelectedMappingReducer(_ReducerBase):
    """Best of a fixed seeded set of quadrant phase vectors."""

    def __init__(self, n_subcarriers=128, n_clusters=8, cluster_size=16,
                 n_active=3, amplitude=1.0, oversampling=4,
                 n_candidates=16, random_state=0):
        super().__init__(n_subcarriers, n_clusters, cluster_size, n_active,
                         amplitude, oversampling)
        self.n_candidates = n_candidates
        self.random_state = random_state

    def fit(self, X=None, y=None):
        super().fit(X, y)
        self.candidates_ = make_slm_candidates(
            self.n_candidates,
            self.config_.n_active_total,
            np.random.default_rng(self.random_state),
        )
        return self

    def _reduce(self, frame, row):
        return slm_select(frame, self.candidates_, self.plan_)[0]


class PartialTransmitReducer(_ReducerBase):
    """Exhaustive per-block quadrant phase search."""

    def __init__(self, n_subcarriers=128, n_clusters=8, cluster_size=16,
                 n_active=3, amplitude=1.0, oversampling=4, n_blocks=4):
        super().__init__(n_subcarriers, n_clusters, cluster_size, n_active,
                         amplitude, oversampling)
        self.n_blocks = n_blocks

    def _reduce(self, frame, row):
        return pts_select(frame, PtsConfig(n_blocks=self.n_blocks), self.plan_)[0]


class EnergyDetector(_ConfiguredEstimator):
    """Non-coherent index detector over received frame rows.

    ``predict`` maps a (n_frames, N) complex matrix of channel outputs to
    the detected (n_frames, B, K) index patterns.
    """

    def __init__(self, n_subcarriers=128, n_clusters=8, cluster_size=16,
                 n_active=3, amplitude=1.0, oversampling=4, decodable_only=True):
        super().__init__(n_subcarriers, n_clusters, cluster_size, n_active,
                         amplitude, oversampling)
        self.decodable_only = decodable_only

    def predict(self, X):
        check_is_fitted(self, "config_")
        X = np.asarray(X, dtype=np.complex128)
        if X.ndim != 2 or X.shape[1] != self.config_.n_subcarriers:
            raise ValueError(
                f"expected shape (n_frames, {self.config_.n_subcarriers}), got {X.shape}"
            )
        return ml_detect_batch(X, self.config_, self.decodable_only)


def build_frame_like(frame: Frame, loading: np.ndarray) -> Frame:
    """Frame with the same support but active entries amplitude * loading."""
    values = np.zeros_like(frame.values)
    values[frame.support] = frame.config.amplitude * loading
    return Frame(values, frame.support.copy(), frame.config)
