"""Oversampled frequency-to-time transform and peak-power measurement."""

from dataclasses import dataclass, field

import numpy as np

from .config import FrameConfig
from .frames import Frame


@dataclass
class TransformPlan:
    """Cached constants of the oversampled partial Fourier operator.

    Maps a length-N frequency vector x to the length-N*R time series
    ``x_t(n) = (1/sqrt(N)) * sum_k x(k) exp(2j*pi*n*k/(N*R))``.
    """

    n_subcarriers: int
    oversampling: int
    _operator: np.ndarray = field(default=None, repr=False, compare=False)

    @classmethod
    def from_config(cls, config: FrameConfig) -> "TransformPlan":
        return cls(config.n_subcarriers, config.oversampling)

    @property
    def n_samples(self) -> int:
        return self.n_subcarriers * self.oversampling

    def matches(self, config: FrameConfig) -> bool:
        return (
            self.n_subcarriers == config.n_subcarriers
            and self.oversampling == config.oversampling
        )

    def transform(self, values: np.ndarray) -> np.ndarray:
        """Fast path: inverse FFT of the zero-padded frequency vector."""
        values = np.asarray(values)
        if values.shape[-1] != self.n_subcarriers:
            raise ValueError("frequency vector length must equal n_subcarriers")
        return self.n_samples * np.fft.ifft(values, n=self.n_samples, axis=-1) / np.sqrt(
            self.n_subcarriers
        )

    def operator(self) -> np.ndarray:
        """Dense (n_samples, n_subcarriers) matrix of the transform, built once."""
        if self._operator is None:
            n = np.arange(self.n_samples)
            k = np.arange(self.n_subcarriers)
            self._operator = np.exp(
                2j * np.pi * np.outer(n, k) / self.n_samples
            ) / np.sqrt(self.n_subcarriers)
        return self._operator

    def transform_direct(self, values: np.ndarray) -> np.ndarray:
        """Direct summation of the defining formula (test oracle for the fast path)."""
        values = np.asarray(values)
        if values.shape[-1] != self.n_subcarriers:
            raise ValueError("frequency vector length must equal n_subcarriers")
        return self.operator() @ values

    def steering(self, support: np.ndarray, n_samples: int | None = None) -> np.ndarray:
        """Columns of the transform restricted to ``support``.

        Shape (n_samples, len(support)); the time series of a frame with
        loading ``c`` on that support is ``steering(support) @ c`` times the
        amplitude.
        """
        if n_samples is None:
            n_samples = self.n_samples
        n = np.arange(n_samples)
        return np.exp(
            2j * np.pi * np.outer(n, np.asarray(support)) / self.n_samples
        ) / np.sqrt(self.n_subcarriers)


def oversampled_transform(frame: Frame, plan: TransformPlan | None = None) -> np.ndarray:
    """Oversampled time-domain signal of a frame (fast FFT path)."""
    if plan is None:
        plan = TransformPlan.from_config(frame.config)
    elif not plan.matches(frame.config):
        raise ValueError("plan dimensions do not match frame config")
    return plan.transform(frame.values)


def oversampled_transform_direct(frame: Frame, plan: TransformPlan | None = None) -> np.ndarray:
    """Direct-evaluation twin of :func:`oversampled_transform`."""
    if plan is None:
        plan = TransformPlan.from_config(frame.config)
    elif not plan.matches(frame.config):
        raise ValueError("plan dimensions do not match frame config")
    return plan.transform_direct(frame.values)


def papr(time_series: np.ndarray, mean_power: float) -> float:
    """Peak power over the known ensemble-mean power.

    The denominator is the fixed ensemble mean of an IM frame
    (``config.mean_power``), not the per-frame sample mean.
    """
    if mean_power <= 0:
        raise ValueError("mean_power must be positive")
    ts = np.asarray(time_series)
    return float(np.max(np.abs(ts) ** 2) / mean_power)


def papr_db(time_series: np.ndarray, mean_power: float) -> float:
    return 10.0 * np.log10(papr(time_series, mean_power))


def second_papr(time_series: np.ndarray, mean_power: float) -> float:
    """Peak power excluding the deterministic first sample, over the mean power."""
    if mean_power <= 0:
        raise ValueError("mean_power must be positive")
    ts = np.asarray(time_series)
    if ts.size < 2:
        raise ValueError("time series too short for a second peak")
    return float(np.max(np.abs(ts[1:]) ** 2) / mean_power)


def second_papr_db(time_series: np.ndarray, mean_power: float) -> float:
    return 10.0 * np.log10(second_papr(time_series, mean_power))


def frame_papr(frame: Frame, plan: TransformPlan | None = None) -> float:
    """PAPR of a frame through the fast transform path."""
    return papr(oversampled_transform(frame, plan), frame.config.mean_power)


def frame_papr_db(frame: Frame, plan: TransformPlan | None = None) -> float:
    return 10.0 * np.log10(frame_papr(frame, plan))


def pairwise_sample_power(phases, support, n: int, config: FrameConfig) -> float:
    """Scaled instantaneous power at sample ``n``, expanded over carrier pairs.

    Returns ``BK + sum_{i != j} cos(2*pi*n*(i-j)/(N*R) + (phi_i - phi_j))``
    with i, j running over the support; equals ``N * |x_t(n)|**2`` for the
    unit-amplitude frame loaded with ``exp(1j*phases)``.
    """
    n_samples = config.n_samples
    if not 0 <= n < n_samples:
        raise ValueError(f"sample index {n} outside [0, {n_samples})")
    support = np.asarray(support, dtype=np.int64)
    phases = np.asarray(phases, dtype=np.float64)
    bk = config.n_active_total
    if support.size != bk or phases.size != bk:
        raise ValueError("support and phases must have one entry per active carrier")
    diff = support[:, None] - support[None, :]
    arg = 2.0 * np.pi * n * diff / n_samples + (phases[:, None] - phases[None, :])
    pair = np.cos(arg)
    np.fill_diagonal(pair, 0.0)
    return float(bk + pair.sum())


def sample_power_profile(phases, support, config: FrameConfig) -> np.ndarray:
    """All n_samples values of :func:`pairwise_sample_power` via the fast transform."""
    phases = np.asarray(phases, dtype=np.float64)
    support = np.asarray(support, dtype=np.int64)
    x = np.zeros(config.n_subcarriers, dtype=np.complex128)
    x[support] = np.exp(1j * phases)
    s = config.n_samples * np.fft.ifft(x, n=config.n_samples)
    return np.abs(s) ** 2
