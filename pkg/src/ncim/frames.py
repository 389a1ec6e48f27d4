"""Bit-to-index codec and frame construction for non-coherent OFDM-IM.

Information is carried by which carriers are active.  Each cluster encodes
``floor(log2(C(L, K)))`` bits as the lexicographic rank of its active-offset
subset; bit groups are consumed cluster 0 first, most-significant bit first.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import FrameConfig


class NonDecodablePatternError(ValueError):
    """An index pattern whose rank falls outside the encodable range."""


def bits_per_cluster(cluster_size: int, n_active: int) -> int:
    return math.comb(cluster_size, n_active).bit_length() - 1


def bits_per_frame(config: FrameConfig) -> int:
    """Payload size of one frame: B * floor(log2(C(L, K)))."""
    return config.n_clusters * bits_per_cluster(config.cluster_size, config.n_active)


def subset_unrank(rank: int, cluster_size: int, n_active: int) -> np.ndarray:
    """The K-subset of {0..L-1} at position ``rank`` in lexicographic order."""
    total = math.comb(cluster_size, n_active)
    if not 0 <= rank < total:
        raise ValueError(f"rank {rank} outside [0, {total})")
    subset = np.empty(n_active, dtype=np.int64)
    x = 0
    r = rank
    for i in range(n_active):
        # advance x past all subsets starting with a smaller element
        while True:
            block = math.comb(cluster_size - 1 - x, n_active - 1 - i)
            if r < block:
                break
            r -= block
            x += 1
        subset[i] = x
        x += 1
    return subset


def subset_rank(subset, cluster_size: int) -> int:
    """Lexicographic rank of a strictly increasing subset of {0..L-1}."""
    sub = np.asarray(subset, dtype=np.int64)
    k = sub.size
    if sub.size == 0 or sub[0] < 0 or sub[-1] >= cluster_size:
        raise ValueError("subset entries must lie in [0, cluster_size)")
    if np.any(np.diff(sub) <= 0):
        raise ValueError("subset must be strictly increasing")
    rank = 0
    prev = -1
    for i, c in enumerate(sub):
        for v in range(prev + 1, int(c)):
            rank += math.comb(cluster_size - 1 - v, k - 1 - i)
        prev = int(c)
    return rank


@lru_cache(maxsize=None)
def subset_table(cluster_size: int, n_active: int) -> np.ndarray:
    """All K-subsets of {0..L-1} in lexicographic order, shape (C(L,K), K)."""
    total = math.comb(cluster_size, n_active)
    table = np.empty((total, n_active), dtype=np.int64)
    for r in range(total):
        table[r] = subset_unrank(r, cluster_size, n_active)
    table.setflags(write=False)
    return table


def _check_bits(bits, config: FrameConfig) -> np.ndarray:
    arr = np.asarray(bits)
    expected = bits_per_frame(config)
    if arr.ndim != 1 or arr.size != expected:
        raise ValueError(f"payload must hold exactly {expected} bits, got shape {arr.shape}")
    arr = arr.astype(np.int64)
    if np.any((arr != 0) & (arr != 1)):
        raise ValueError("payload entries must be 0 or 1")
    return arr


def encode_indices(bits, config: FrameConfig) -> np.ndarray:
    """Map a payload bit vector to the per-cluster active-offset pattern (B, K)."""
    arr = _check_bits(bits, config)
    p = bits_per_cluster(config.cluster_size, config.n_active)
    weights = 1 << np.arange(p - 1, -1, -1, dtype=np.int64)
    groups = arr.reshape(config.n_clusters, p)
    ranks = groups @ weights
    table = subset_table(config.cluster_size, config.n_active)
    return table[ranks].copy()


def decode_indices(pattern, config: FrameConfig) -> np.ndarray:
    """Exact inverse of :func:`encode_indices`.

    Raises :class:`NonDecodablePatternError` for subsets whose rank is not
    representable in the per-cluster bit budget (possible whenever C(L, K)
    is not a power of two).
    """
    pat = np.asarray(pattern, dtype=np.int64)
    if pat.shape != (config.n_clusters, config.n_active):
        raise ValueError(
            f"pattern must have shape ({config.n_clusters}, {config.n_active}), got {pat.shape}"
        )
    p = bits_per_cluster(config.cluster_size, config.n_active)
    out = np.empty(config.n_clusters * p, dtype=np.int64)
    for b in range(config.n_clusters):
        rank = subset_rank(pat[b], config.cluster_size)
        if rank >= (1 << p):
            raise NonDecodablePatternError(
                f"cluster {b} subset {pat[b].tolist()} has rank {rank} >= {1 << p}"
            )
        bits = (rank >> np.arange(p - 1, -1, -1, dtype=np.int64)) & 1
        out[b * p : (b + 1) * p] = bits
    return out


def pattern_support(pattern, config: FrameConfig) -> np.ndarray:
    """Global active-carrier indices (ascending) for a per-cluster pattern."""
    pat = np.asarray(pattern, dtype=np.int64)
    offsets = np.arange(config.n_clusters, dtype=np.int64) * config.cluster_size
    return (pat + offsets[:, None]).ravel()


@dataclass
class Frame:
    """A frequency-domain IM frame: complex values plus its active support."""

    values: np.ndarray
    support: np.ndarray
    config: FrameConfig

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        self.support = np.asarray(self.support, dtype=np.int64)
        if self.values.shape != (self.config.n_subcarriers,):
            raise ValueError("frame length must equal n_subcarriers")
        if self.support.size != self.config.n_active_total:
            raise ValueError("support size must equal the number of active carriers")


def build_frame(pattern, config: FrameConfig, phases=None, signs=None) -> Frame:
    """Construct the frequency-domain frame for an index pattern.

    Active entry k receives ``amplitude * exp(1j*phases[k])`` or
    ``amplitude * signs[k]``; with neither given, every active entry is the
    plain constant ``amplitude`` (conventional non-coherent loading).
    """
    if phases is not None and signs is not None:
        raise ValueError("pass at most one of phases / signs")
    support = pattern_support(pattern, config)
    bk = config.n_active_total
    loading = np.ones(bk, dtype=np.complex128)
    if phases is not None:
        phases = np.asarray(phases, dtype=np.float64)
        if phases.shape != (bk,):
            raise ValueError(f"phase loading must have length {bk}, got {phases.shape}")
        loading = np.exp(1j * phases)
    elif signs is not None:
        signs = np.asarray(signs, dtype=np.float64)
        if signs.shape != (bk,):
            raise ValueError(f"sign loading must have length {bk}, got {signs.shape}")
        if np.any(np.abs(signs) != 1):
            raise ValueError("sign loading entries must be +1 or -1")
        loading = signs.astype(np.complex128)
    values = np.zeros(config.n_subcarriers, dtype=np.complex128)
    values[support] = config.amplitude * loading
    return Frame(values, support, config)


def random_payload(rng: np.random.Generator, config: FrameConfig) -> np.ndarray:
    """Uniform random payload bits for one frame."""
    return rng.integers(0, 2, size=bits_per_frame(config), dtype=np.int64)


def random_frame(rng: np.random.Generator, config: FrameConfig) -> Frame:
    """Frame for a uniform random payload with conventional constant loading."""
    return build_frame(encode_indices(random_payload(rng, config), config), config)
