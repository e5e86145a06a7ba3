"""Participant-side preprocessing and randomized encoding.

Encoding permutes the feature columns and pushes each block through the
conjugate transpose of its frame, widening every row from f to f + k complex
entries.  Rows are independent, so new samples can be encoded and appended
without touching earlier submissions.
"""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from ._validation import as_data_matrix, check_seed
from .errors import DimensionMismatch, NonFinite, TooFewSamples
from .frames import DEFAULT_BLOCK_SIZE, DEFAULT_REDUNDANCY, EncodingKey, build_key, derive_plan


@dataclass(frozen=True)
class EncodedSubmission:
    """What a participant sends: encoded rows, an owner id, optional labels."""

    owner: str
    values: np.ndarray
    labels: np.ndarray = None

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


def flatten_images(tensor) -> np.ndarray:
    """Flatten an n x h x w x c image stack into an n x (h*w*c) matrix.

    Row i is image i in row-major order: height, then width, then channel.
    """
    tensor = np.asarray(tensor, dtype=np.float64)
    if tensor.ndim != 4:
        raise DimensionMismatch(f"expected an n x h x w x c tensor, got shape {tensor.shape}")
    n, h, w, c = tensor.shape
    if n < 2:
        raise TooFewSamples("participants must contribute at least two images")
    if min(h, w, c) < 1:
        raise DimensionMismatch("image dimensions must all be >= 1")
    if not np.isfinite(tensor).all():
        raise NonFinite("image tensor contains NaN or infinite values")
    return tensor.reshape(n, h * w * c)


def encode(data, key: EncodingKey) -> np.ndarray:
    """Encode an n x f matrix into n x (f + k) complex rows.

    Works block by block (gather the permuted feature slice, multiply by the
    frame's conjugate transpose), so the cost per row is sum(k_i * d_i) and no
    dense f x (f + k) matrix is ever materialized.
    """
    data = as_data_matrix(data, "data", allow_empty=True)
    plan = key.plan
    if data.shape[1] != plan.f:
        raise DimensionMismatch(
            f"data has {data.shape[1]} features but the key expects {plan.f}")
    permuted = data[:, key.sigma]
    out = np.empty((data.shape[0], plan.width), dtype=np.complex128)
    col = 0
    pos = 0
    for frame, (k, d) in zip(key.frames, plan.blocks):
        out[:, col:col + d] = permuted[:, pos:pos + k] @ frame.conj().T
        pos += k
        col += d
    return out


def encode_incremental(new_data, key: EncodingKey) -> np.ndarray:
    """Encode an append batch; identical to encode but permits zero rows."""
    new_data = np.asarray(new_data, dtype=np.float64)
    if new_data.ndim == 2 and new_data.shape[0] == 0:
        return np.empty((0, key.plan.width), dtype=np.complex128)
    return encode(new_data, key)


class RandomizedEncoder(BaseEstimator, TransformerMixin):
    """Seeded orthonormal-frame encoder with a scikit-learn transformer API.

    fit() derives the block plan from the data width and builds the key;
    transform() maps real rows to their complex encoded counterparts.  Two
    encoders constructed from the same seed produce identical outputs, which
    is what lets a cohort encode independently.

    Parameters
    ----------
    seed : bytes or hex str
        The 32-byte shared secret.
    block_size : int
        Feature-block width; per-row cost scales with block_size + redundancy.
    redundancy : int
        Extra ambient dimensions per block (>= 1).
    """

    def __init__(self, seed=None, block_size=DEFAULT_BLOCK_SIZE, redundancy=DEFAULT_REDUNDANCY):
        self.seed = seed
        self.block_size = block_size
        self.redundancy = redundancy

    def fit(self, X, y=None):
        if self.seed is None:
            raise ValueError("RandomizedEncoder requires a seed")
        X = as_data_matrix(X, "X", allow_empty=True)
        self.plan_ = derive_plan(X.shape[1], self.block_size, self.redundancy)
        self.key_ = build_key(check_seed(self.seed), self.plan_)
        return self

    def transform(self, X) -> np.ndarray:
        if not hasattr(self, "key_"):
            raise NotFittedError("RandomizedEncoder is not fitted; call fit first")
        return encode_incremental(X, self.key_)

    @property
    def encoded_width_(self) -> int:
        if not hasattr(self, "plan_"):
            raise NotFittedError("RandomizedEncoder is not fitted; call fit first")
        return self.plan_.width
