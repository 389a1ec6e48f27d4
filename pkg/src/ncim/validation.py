"""Input validation helpers shared by the estimator API and the solvers."""

import numpy as np

TWO_PI = 2.0 * np.pi


def wrap_angles(angles: np.ndarray) -> np.ndarray:
    """Wrap angles into [0, 2*pi), guarding the floating-point upper edge."""
    out = np.mod(np.asarray(angles, dtype=np.float64), TWO_PI)
    return np.where(out >= TWO_PI, 0.0, out)


def check_sign_vector(signs, n_active_total: int) -> np.ndarray:
    signs = np.asarray(signs, dtype=np.float64)
    if signs.shape != (n_active_total,):
        raise ValueError(f"sign vector must have length {n_active_total}")
    if np.any(np.abs(signs) != 1.0):
        raise ValueError("sign vector entries must be +1 or -1")
    return signs


def check_bit_matrix(X, n_bits: int) -> np.ndarray:
    """Validate a (n_frames, n_bits) matrix of 0/1 payloads."""
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[1] != n_bits:
        raise ValueError(f"expected a 2-D array with {n_bits} columns, got shape {X.shape}")
    X = X.astype(np.int64)
    if np.any((X != 0) & (X != 1)):
        raise ValueError("payload entries must be 0 or 1")
    return X


def check_frame_matrix(X, config) -> tuple[np.ndarray, np.ndarray]:
    """Validate a (n_frames, N) complex frame matrix; return (values, supports).

    Each row must hold exactly ``config.n_active_total`` non-zero entries.
    """
    X = np.asarray(X, dtype=np.complex128)
    if X.ndim != 2 or X.shape[1] != config.n_subcarriers:
        raise ValueError(
            f"expected a 2-D array with {config.n_subcarriers} columns, got shape {X.shape}"
        )
    active = X != 0
    counts = active.sum(axis=1)
    bk = config.n_active_total
    if np.any(counts != bk):
        bad = int(np.flatnonzero(counts != bk)[0])
        raise ValueError(
            f"row {bad} has {int(counts[bad])} active carriers, expected {bk}"
        )
    supports = np.empty((X.shape[0], bk), dtype=np.int64)
    for i in range(X.shape[0]):
        supports[i] = np.flatnonzero(active[i])
    return X, supports
