"""Seed-derived encoding keys: block frames plus a feature permutation.

The key pairs an ordered list of complex orthonormal frames (one per feature
block) with a permutation of the feature columns.  Both are pure functions of
the shared 32-byte seed and the block plan, so every cohort member derives the
bitwise-identical key on its own.
"""

from dataclasses import dataclass, field

import numpy as np

from ._validation import check_seed
from .errors import DegenerateDraw, ZeroFeatures
from .randomness import DeterministicStream

#: Orthonormality tolerance used by verify_key and the test suite.
ORTHONORMALITY_TOL = 1e-10

DEFAULT_BLOCK_SIZE = 64
DEFAULT_REDUNDANCY = 1


@dataclass(frozen=True)
class FramePlan:
    """Partition of the f feature columns into blocks with ambient dims.

    ``blocks[i] = (k_i, d_i)`` encodes a block of ``k_i`` features embedded in
    a ``d_i``-dimensional complex space; the encoded width is ``sum(d_i)``.
    """

    f: int
    blocks: tuple

    def __post_init__(self):
        if self.f < 1:
            raise ZeroFeatures("plan needs at least one feature")
        object.__setattr__(self, "blocks", tuple((int(k), int(d)) for k, d in self.blocks))
        if sum(k for k, _ in self.blocks) != self.f:
            raise ValueError("block widths must sum to the feature count")
        for k, d in self.blocks:
            if not 1 <= k <= d:
                raise ValueError(f"block ({k}, {d}) violates 1 <= width <= ambient dim")
        if self.k < 1:
            raise ValueError("plan must add at least one redundant dimension")

    @property
    def j(self) -> int:
        return len(self.blocks)

    @property
    def k(self) -> int:
        """Total added redundancy; the encoded width is f + k."""
        return sum(d - k for k, d in self.blocks)

    @property
    def width(self) -> int:
        return self.f + self.k


@dataclass(frozen=True)
class EncodingKey:
    """The per-cohort secret: block frames and the feature permutation."""

    plan: FramePlan
    frames: tuple
    sigma: np.ndarray = field(repr=False)

    def __post_init__(self):
        for frame, (k, d) in zip(self.frames, self.plan.blocks):
            if frame.shape != (d, k):
                raise ValueError(f"frame shape {frame.shape} does not match plan block ({k}, {d})")


@dataclass
class KeyReport:
    """Outcome of verify_key; failures are reported, never raised."""

    max_residual: float
    permutation_ok: bool
    plan_ok: bool
    issues: list

    @property
    def passed(self) -> bool:
        return self.plan_ok and self.permutation_ok and self.max_residual <= ORTHONORMALITY_TOL


def derive_plan(f: int, block_size: int = DEFAULT_BLOCK_SIZE,
                redundancy_per_block: int = DEFAULT_REDUNDANCY) -> FramePlan:
    """Partition f features into blocks of block_size (plus a remainder block).

    Each block gets ``redundancy_per_block`` extra ambient dimensions, keeping
    the per-row encoding cost linear in f.
    """
    if f == 0:
        raise ZeroFeatures("cannot plan for zero features")
    if f < 0 or block_size < 1:
        raise ValueError("f and block_size must be positive")
    if redundancy_per_block < 1:
        raise ValueError("redundancy_per_block must be >= 1 so the encoded width exceeds f")
    widths = [block_size] * (f // block_size)
    if f % block_size:
        widths.append(f % block_size)
    return FramePlan(f=f, blocks=tuple((k, k + redundancy_per_block) for k in widths))


def gen_frame(stream, d: int, k: int) -> np.ndarray:
    """Draw a Haar-distributed d x k orthonormal frame from the stream.

    Entries are standard complex Gaussians drawn column-major, orthonormalized
    by Householder QR; column phases are fixed so the triangular factor has a
    positive real diagonal, making the result unique (hence bitwise stable).
    """
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= d, got k={k}, d={d}")
    for attempt in range(2):
        raw = stream.complex_gaussians(d * k).reshape((d, k), order="F")
        q, r = np.linalg.qr(raw, mode="reduced")
        diag = np.diagonal(r).copy()
        scale = np.abs(diag).max(initial=0.0)
        if scale == 0.0 or np.abs(diag).min() <= max(d, k) * np.finfo(np.float64).eps * scale:
            continue  # numerically rank-deficient; retry once with fresh draws
        return q * (diag / np.abs(diag))
    raise DegenerateDraw(f"rank-deficient Gaussian draw for frame ({d}, {k})")


def gen_permutation(stream, f: int) -> np.ndarray:
    """Fisher-Yates shuffle of [0, f) driven by the stream."""
    if f < 1:
        raise ValueError("f must be >= 1")
    perm = np.arange(f, dtype=np.int64)
    for i in range(f - 1, 0, -1):
        j = stream.randint_below(i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    return perm


def build_key(seed, plan: FramePlan) -> EncodingKey:
    """Derive the full encoding key from the shared seed.

    One stream is consumed in a fixed order: frames in block order, then the
    permutation; the result is a pure function of (seed, plan).
    """
    seed = check_seed(seed)
    stream = DeterministicStream(seed)
    frames = []
    for k, d in plan.blocks:
        frame = gen_frame(stream, d, k)
        frame.setflags(write=False)
        frames.append(frame)
    sigma = gen_permutation(stream, plan.f)
    sigma.setflags(write=False)
    return EncodingKey(plan=plan, frames=tuple(frames), sigma=sigma)


def verify_key(key: EncodingKey) -> KeyReport:
    """Check frame orthonormality, permutation validity and plan consistency.

    The stacked frame matrix is block diagonal, so its Gram residual against
    the identity equals the worst per-block residual; no dense matrix is built.
    """
    issues = []
    plan_ok = True
    if len(key.frames) != key.plan.j:
        plan_ok = False
        issues.append(f"expected {key.plan.j} frames, found {len(key.frames)}")
    max_residual = 0.0
    for i, (frame, (k, d)) in enumerate(zip(key.frames, key.plan.blocks)):
        if frame.shape != (d, k):
            plan_ok = False
            issues.append(f"frame {i} has shape {frame.shape}, plan says ({d}, {k})")
            continue
        residual = np.abs(frame.conj().T @ frame - np.eye(k)).max()
        max_residual = max(max_residual, float(residual))
    if max_residual > ORTHONORMALITY_TOL:
        issues.append(f"orthonormality residual {max_residual:.3e} exceeds {ORTHONORMALITY_TOL}")

    sigma = np.asarray(key.sigma)
    permutation_ok = (
        sigma.ndim == 1
        and sigma.shape[0] == key.plan.f
        and np.array_equal(np.sort(sigma), np.arange(key.plan.f))
    )
    if not permutation_ok:
        issues.append("sigma is not a bijection on the feature indices")
    return KeyReport(max_residual=max_residual, permutation_ok=permutation_ok,
                     plan_ok=plan_ok, issues=issues)
