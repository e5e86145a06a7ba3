"""Input validation helpers used across the public API."""

import numpy as np

from .errors import DimensionMismatch, NonFinite


def as_data_matrix(X, name="X", allow_empty=False):
    """Coerce to a finite 2-D float64 array without copying when possible."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {X.shape}")
    if X.shape[0] == 0 and not allow_empty:
        raise DimensionMismatch(f"{name} has no rows")
    if X.shape[1] == 0:
        raise DimensionMismatch(f"{name} has no columns")
    if X.size and not np.isfinite(X).all():
        raise NonFinite(f"{name} contains NaN or infinite entries")
    return X


def as_encoded_matrix(A, name="A"):
    """Coerce to a finite 2-D complex128 array."""
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {A.shape}")
    if A.size and not np.isfinite(A).all():
        raise NonFinite(f"{name} contains NaN or infinite entries")
    return A


def as_square_symmetric(K, name="K", tol=1e-9):
    K = np.asarray(K, dtype=np.float64)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {K.shape}")
    scale = max(1.0, float(np.abs(K).max())) if K.size else 1.0
    if K.size and np.abs(K - K.T).max() > tol * scale:
        raise DimensionMismatch(f"{name} is not symmetric within {tol}")
    return K


def as_label_vector(y, n, name="y"):
    y = np.asarray(y)
    if y.ndim != 1:
        raise DimensionMismatch(f"{name} must be 1-D, got shape {y.shape}")
    if y.shape[0] != n:
        raise DimensionMismatch(f"{name} has {y.shape[0]} entries, expected {n}")
    return y


def check_seed(seed):
    """Validate the 32-byte shared secret; accepts bytes or a hex string."""
    if isinstance(seed, str):
        seed = bytes.fromhex(seed)
    if not isinstance(seed, (bytes, bytearray)):
        raise TypeError(f"seed must be bytes or hex string, got {type(seed).__name__}")
    seed = bytes(seed)
    if len(seed) != 32:
        raise ValueError(f"seed must be exactly 32 bytes, got {len(seed)}")
    return seed
