"""Kernel evaluation on recovered inner products.

The server never sees plaintext rows; it recovers real dot products and
squared distances from Hermitian products of encoded rows, then applies one
of the four supported kernel maps entrywise.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import as_encoded_matrix
from .errors import ImaginaryLeak, KernelOverflow, WidthMismatch

FAMILIES = ("linear", "rbf", "polynomial", "rational_quadratic")

#: Relative imaginary-residue budget; beyond this the submissions were not
#: encoded under the same key.
IMAG_TOL = 1e-6


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family plus the hyperparameters it actually uses.

    rbf  : gamma**2 * exp(-||x - y||**2 / (2 * length_scale**2))
    rq   : gamma**2 * (1 + ||x - y||**2 / (2 * alpha * length_scale**2)) ** -alpha
    poly : (1 + x . y) ** degree
    """

    family: str
    gamma: float = 1.0
    length_scale: float = 1.0
    degree: int = 3
    alpha: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}; choose from {FAMILIES}")
        if self.family in ("rbf", "rational_quadratic"):
            if not np.isfinite(self.gamma):
                raise ValueError("gamma must be finite")
            if self.length_scale <= 0:
                raise ValueError("length_scale must be positive")
        if self.family == "rational_quadratic" and self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.family == "polynomial":
            if int(self.degree) != self.degree or self.degree < 1:
                raise ValueError("degree must be an integer >= 1")


@dataclass(frozen=True)
class BaseProducts:
    """Recovered plaintext dot products between two encoded submissions."""

    cross: np.ndarray
    self_p: np.ndarray
    self_q: np.ndarray
    max_imag: float


def cross_products(ap, bq) -> BaseProducts:
    """Hermitian products of encoded rows; real parts are plaintext products.

    Raises ImaginaryLeak when the imaginary residue is too large relative to
    the recovered values, which happens when the two submissions were encoded
    under different keys.
    """
    ap = as_encoded_matrix(ap, "ap")
    bq = as_encoded_matrix(bq, "bq")
    if ap.shape[1] != bq.shape[1]:
        raise WidthMismatch(f"encoded widths differ: {ap.shape[1]} vs {bq.shape[1]}")
    gram = ap @ bq.conj().T
    cross = np.ascontiguousarray(gram.real)
    max_imag = float(np.abs(gram.imag).max()) if gram.size else 0.0
    max_real = float(np.abs(cross).max()) if cross.size else 0.0
    if max_imag > IMAG_TOL * (1.0 + max_real):
        raise ImaginaryLeak(
            f"imaginary residue {max_imag:.3e} exceeds {IMAG_TOL} * (1 + {max_real:.3e}); "
            "were the submissions encoded under the same seed?")
    # |z|^2 sums are exactly real; these equal the plaintext squared norms.
    self_p = np.einsum("ij,ij->i", ap.real, ap.real) + np.einsum("ij,ij->i", ap.imag, ap.imag)
    self_q = np.einsum("ij,ij->i", bq.real, bq.real) + np.einsum("ij,ij->i", bq.imag, bq.imag)
    return BaseProducts(cross=cross, self_p=self_p, self_q=self_q, max_imag=max_imag)


def squared_distances(base: BaseProducts) -> np.ndarray:
    """Pairwise squared Euclidean distances, clamped below at zero."""
    d = base.self_p[:, None] + base.self_q[None, :] - 2.0 * base.cross
    return np.maximum(d, 0.0)


def apply_kernel(spec: KernelSpec, base: BaseProducts) -> np.ndarray:
    """Apply the kernel map entrywise to recovered products."""
    if spec.family == "linear":
        return base.cross.copy()
    if spec.family == "polynomial":
        out = (1.0 + base.cross) ** spec.degree
        if out.size and not np.isfinite(out).all():
            raise KernelOverflow(
                f"polynomial kernel overflowed at degree {spec.degree}")
        return out
    d = squared_distances(base)
    if spec.family == "rbf":
        return spec.gamma**2 * np.exp(-d / (2.0 * spec.length_scale**2))
    return spec.gamma**2 * (1.0 + d / (2.0 * spec.alpha * spec.length_scale**2)) ** (-spec.alpha)


def plaintext_base_products(x, y=None) -> BaseProducts:
    """BaseProducts computed directly from plaintext rows.

    This is the centralized reference path: running apply_kernel on it yields
    the Gram matrix a single trusted site would have computed.
    """
    x = np.asarray(x, dtype=np.float64)
    y = x if y is None else np.asarray(y, dtype=np.float64)
    return BaseProducts(
        cross=x @ y.T,
        self_p=np.einsum("ij,ij->i", x, x),
        self_q=np.einsum("ij,ij->i", y, y),
        max_imag=0.0,
    )
