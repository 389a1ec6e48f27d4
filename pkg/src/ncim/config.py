"""Frame numerology for non-coherent OFDM with index modulation."""

from dataclasses import dataclass


@dataclass(frozen=True)
class FrameConfig:
    """Dimensions of one OFDM-IM numerology.

    ``n_subcarriers`` carriers are split into ``n_clusters`` contiguous
    clusters of ``cluster_size`` carriers each; ``n_active`` carriers per
    cluster carry the constant ``amplitude``, the rest are idle.
    ``oversampling`` is the time-domain sample density multiplier used for
    peak measurement.
    """

    n_subcarriers: int
    n_clusters: int
    cluster_size: int
    n_active: int
    amplitude: float = 1.0
    oversampling: int = 4

    def __post_init__(self):
        if self.n_subcarriers != self.n_clusters * self.cluster_size:
            raise ValueError(
                f"n_subcarriers must equal n_clusters * cluster_size "
                f"({self.n_clusters} * {self.cluster_size} != {self.n_subcarriers})"
            )
        if not 1 <= self.n_active < self.cluster_size:
            raise ValueError("n_active must satisfy 1 <= n_active < cluster_size")
        if self.oversampling < 1:
            raise ValueError("oversampling must be >= 1")
        if self.amplitude <= 0:
            raise ValueError("amplitude must be positive")

    @property
    def n_active_total(self) -> int:
        """Total number of active carriers per frame."""
        return self.n_clusters * self.n_active

    @property
    def n_samples(self) -> int:
        """Length of the oversampled time-domain signal."""
        return self.n_subcarriers * self.oversampling

    @property
    def mean_power(self) -> float:
        """Ensemble-mean time-domain power of an IM frame (fixed by the numerology)."""
        return self.n_active_total * self.amplitude**2 / self.n_subcarriers


def default_config() -> FrameConfig:
    """128 carriers, 8 clusters of 16 with 3 active, 4x oversampling."""
    return FrameConfig(128, 8, 16, 3, 1.0, 4)


def small_config() -> FrameConfig:
    """16 carriers, 2 clusters of 8 with 2 active; small enough for exhaustive solvers."""
    return FrameConfig(16, 2, 8, 2, 1.0, 4)
