"""SVM classification on a precomputed Gram matrix.

The dual problem is solved by simplified sequential minimal optimization:
sweep the KKT conditions, pair each violator with a seeded-random partner,
and solve the two-variable subproblem analytically with box clipping.  The
iteration order is a pure function of (K, y, C, tol, random_state), so two
runs on numerically identical Grams produce identical models.
"""

import warnings

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError

from .._validation import as_label_vector, as_square_symmetric
from ..errors import ConvergenceWarning, DimensionMismatch, SingleClass

_SUPPORT_EPS = 1e-12


def _smo_binary(K, y, C, tol, max_passes, rng):
    """Solve one binary dual; returns (alpha, bias, converged).

    Convergence: a full sweep in which no multiplier moved by more than tol.
    The bias is refitted at the end by averaging the margin support-vector
    conditions (falling back to all support vectors).
    """
    n = y.shape[0]
    alpha = np.zeros(n)
    f = np.zeros(n)  # sum_j alpha_j y_j K_ij, maintained incrementally
    b = 0.0
    converged = False
    for _ in range(max_passes):
        max_step = 0.0
        for i in range(n):
            e_i = f[i] + b - y[i]
            r_i = y[i] * e_i
            if not ((r_i < -tol and alpha[i] < C) or (r_i > tol and alpha[i] > 0)):
                continue
            j = int(rng.integers(n - 1))
            if j >= i:
                j += 1
            e_j = f[j] + b - y[j]
            ai_old, aj_old = alpha[i], alpha[j]
            if y[i] != y[j]:
                low, high = max(0.0, aj_old - ai_old), min(C, C + aj_old - ai_old)
            else:
                low, high = max(0.0, ai_old + aj_old - C), min(C, ai_old + aj_old)
            if low >= high:
                continue
            eta = 2.0 * K[i, j] - K[i, i] - K[j, j]
            if eta >= 0.0:
                continue
            aj = min(high, max(low, aj_old - y[j] * (e_i - e_j) / eta))
            step = abs(aj - aj_old)
            if step < _SUPPORT_EPS:
                continue
            ai = ai_old + y[i] * y[j] * (aj_old - aj)
            b1 = b - e_i - y[i] * (ai - ai_old) * K[i, i] - y[j] * (aj - aj_old) * K[i, j]
            b2 = b - e_j - y[i] * (ai - ai_old) * K[i, j] - y[j] * (aj - aj_old) * K[j, j]
            if 0.0 < ai < C:
                b = b1
            elif 0.0 < aj < C:
                b = b2
            else:
                b = 0.5 * (b1 + b2)
            f += y[i] * (ai - ai_old) * K[:, i] + y[j] * (aj - aj_old) * K[:, j]
            alpha[i], alpha[j] = ai, aj
            max_step = max(max_step, step)
        if max_step <= tol:
            converged = True
            break

    margin = (alpha > _SUPPORT_EPS) & (alpha < C - _SUPPORT_EPS)
    chosen = margin if margin.any() else alpha > _SUPPORT_EPS
    if chosen.any():
        b = float(np.mean(y[chosen] - f[chosen]))
    return alpha, b, converged


class PrecomputedSVC(BaseEstimator, ClassifierMixin):
    """C-SVM over a precomputed kernel; one-vs-rest above two classes.

    fit() takes the n x n training Gram and labels; predict() takes t x n
    kernel rows against the training samples.  Ties in the one-vs-rest vote
    go to the lowest class id.
    """

    def __init__(self, C=1.0, tol=1e-3, max_passes=1000, random_state=0):
        self.C = C
        self.tol = tol
        self.max_passes = max_passes
        self.random_state = random_state

    def fit(self, K, y):
        if self.C <= 0:
            raise ValueError(f"C must be a positive penalty, got {self.C}")
        K = as_square_symmetric(K, "K")
        y = as_label_vector(y, K.shape[0])
        self.classes_ = np.unique(y)
        if self.classes_.shape[0] < 2:
            raise SingleClass("training labels contain a single class")

        if self.classes_.shape[0] == 2:
            targets = [np.where(y == self.classes_[1], 1.0, -1.0)]
        else:
            targets = [np.where(y == c, 1.0, -1.0) for c in self.classes_]

        coefs, intercepts, converged = [], [], []
        for idx, target in enumerate(targets):
            rng = np.random.default_rng([int(self.random_state), idx])
            alpha, bias, ok = _smo_binary(
                K, target, float(self.C), float(self.tol), int(self.max_passes), rng)
            coefs.append(alpha * target)
            intercepts.append(bias)
            converged.append(ok)
        self.dual_coef_ = np.vstack(coefs)
        self.intercept_ = np.asarray(intercepts)
        self.converged_ = bool(all(converged))
        if not self.converged_:
            warnings.warn(
                f"SMO hit max_passes={self.max_passes} before reaching tol={self.tol}",
                ConvergenceWarning)
        self.support_ = np.nonzero(np.abs(self.dual_coef_).max(axis=0) > _SUPPORT_EPS)[0]
        self.n_train_ = K.shape[0]
        return self

    def decision_function(self, K):
        """Binary: (t,) signed scores; multi-class: (t, n_classes) scores."""
        if not hasattr(self, "dual_coef_"):
            raise NotFittedError("PrecomputedSVC is not fitted; call fit first")
        K = np.asarray(K, dtype=np.float64)
        if K.ndim != 2 or K.shape[1] != self.n_train_:
            raise DimensionMismatch(
                f"expected t x {self.n_train_} kernel rows, got shape {K.shape}")
        scores = K @ self.dual_coef_.T + self.intercept_[None, :]
        return scores[:, 0] if self.classes_.shape[0] == 2 else scores

    def predict(self, K):
        scores = self.decision_function(K)
        if self.classes_.shape[0] == 2:
            return self.classes_[(scores > 0).astype(int)]
        return self.classes_[np.argmax(scores, axis=1)]
