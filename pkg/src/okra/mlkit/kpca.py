"""Kernel PCA on a precomputed Gram matrix, with out-of-sample projection."""

import warnings
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .._validation import as_square_symmetric
from ..errors import DimensionMismatch, RankDeficientWarning

#: Eigenvalues below this fraction of the largest are treated as zero rank.
EIG_CUTOFF = 1e-12


@dataclass(frozen=True)
class GramCentering:
    """Training-Gram statistics needed to center out-of-sample kernel rows."""

    col_means: np.ndarray
    total_mean: float

    @property
    def n_train(self) -> int:
        return self.col_means.shape[0]


def center_gram(k_train):
    """Double-center a training Gram matrix; returns (centered, statistics)."""
    k_train = as_square_symmetric(k_train, "K_train")
    col_means = k_train.mean(axis=0)
    total_mean = float(col_means.mean())
    centered = k_train - col_means[None, :] - col_means[:, None] + total_mean
    return centered, GramCentering(col_means=col_means, total_mean=total_mean)


def center_against(stats: GramCentering, k_test):
    """Center test-vs-train kernel rows with stored training statistics."""
    k_test = np.asarray(k_test, dtype=np.float64)
    if k_test.ndim != 2 or k_test.shape[1] != stats.n_train:
        raise DimensionMismatch(
            f"expected t x {stats.n_train} kernel rows, got shape {k_test.shape}")
    row_means = k_test.mean(axis=1)
    return k_test - stats.col_means[None, :] - row_means[:, None] + stats.total_mean


class PrecomputedKPCA(BaseEstimator, TransformerMixin):
    """Kernel PCA taking Gram matrices instead of raw features.

    fit() eigendecomposes the centered training Gram and keeps the top
    n_components eigenpairs; transform() projects test-vs-train kernel rows.
    Component columns are scaled by 1/sqrt(eigenvalue) so that projections
    are plain matrix products with the centered kernel, and each component's
    sign is fixed by making its largest-magnitude entry positive.

    Attributes (after fit): eigenvalues_, components_, centering_,
    n_components_, rank_deficient_.
    """

    def __init__(self, n_components=2):
        self.n_components = n_components

    def fit(self, K, y=None):
        K = as_square_symmetric(K, "K")
        if not 1 <= self.n_components <= K.shape[0]:
            raise ValueError(f"n_components must be in [1, {K.shape[0]}]")
        centered, self.centering_ = center_gram(K)
        eigvals, eigvecs = np.linalg.eigh(centered)
        eigvals, eigvecs = eigvals[::-1], eigvecs[:, ::-1]

        usable = eigvals > EIG_CUTOFF * max(eigvals[0], 0.0)
        n_usable = int(usable.sum())
        m = min(self.n_components, n_usable)
        self.rank_deficient_ = n_usable < self.n_components
        if self.rank_deficient_:
            warnings.warn(
                f"only {n_usable} usable eigenvalues for {self.n_components} components",
                RankDeficientWarning)

        eigvals, eigvecs = eigvals[:m], eigvecs[:, :m]
        signs = np.sign(eigvecs[np.abs(eigvecs).argmax(axis=0), np.arange(m)])
        eigvecs = eigvecs * np.where(signs == 0, 1.0, signs)[None, :]
        self.eigenvalues_ = eigvals
        self.components_ = eigvecs / np.sqrt(eigvals)[None, :]
        self.n_components_ = m
        self.train_projections_ = centered @ self.components_
        return self

    def transform(self, K):
        """Project t x n_train kernel rows onto the principal components."""
        if not hasattr(self, "components_"):
            raise NotFittedError("PrecomputedKPCA is not fitted; call fit first")
        return center_against(self.centering_, K) @ self.components_

    def fit_transform(self, K, y=None):
        return self.fit(K).train_projections_
