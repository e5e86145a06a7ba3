"""Global Gram assembly over encoded submissions, with incremental updates.

Blocks for distinct submission pairs are computed once (upper triangle) and
mirrored, which both halves the work and makes the assembled matrix exactly
symmetric.  Appending rows touches only the new-vs-all and new-vs-new blocks;
removing an owner slices its rows and columns out.
"""

from dataclasses import dataclass, field

import numpy as np

from .encoding import EncodedSubmission
from .errors import DuplicateOwner, UnknownOwner, WidthMismatch
from .kernels import KernelSpec, apply_kernel, cross_products


@dataclass
class OpCounter:
    """Counts kernel entries actually computed; used to verify that
    incremental updates never recompute existing blocks."""

    kernel_entries: int = 0

    def add(self, n: int):
        self.kernel_entries += int(n)


@dataclass(frozen=True)
class GlobalGram:
    """Assembled kernel matrix over all parties' samples.

    index_map[i] is the (owner, local row index) behind global row i; global
    order is submission order, then local row order.
    """

    values: np.ndarray
    index_map: tuple
    spec: KernelSpec
    max_imag: float = 0.0

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def owners(self) -> tuple:
        seen = dict.fromkeys(owner for owner, _ in self.index_map)
        return tuple(seen)

    def rows_of(self, owner: str) -> np.ndarray:
        return np.array([i for i, (o, _) in enumerate(self.index_map) if o == owner])


def _kernel_block(spec, a, b, counter):
    base = cross_products(a, b)
    if counter is not None:
        counter.add(base.cross.size)
    return apply_kernel(spec, base), base.max_imag


def _check_widths(submissions):
    widths = {s.width for s in submissions}
    if len(widths) > 1:
        raise WidthMismatch(f"submissions disagree on encoded width: {sorted(widths)}")


def assemble_global(submissions, spec: KernelSpec, counter: OpCounter = None) -> GlobalGram:
    """Assemble the full Gram matrix from an ordered list of submissions."""
    submissions = list(submissions)
    if not submissions:
        raise ValueError("need at least one submission")
    owners = [s.owner for s in submissions]
    if len(set(owners)) != len(owners):
        raise DuplicateOwner(f"duplicate owner ids in {owners}")
    _check_widths(submissions)

    sizes = [s.n_rows for s in submissions]
    offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    total = int(offsets[-1])
    values = np.empty((total, total), dtype=np.float64)
    max_imag = 0.0
    for p, sub_p in enumerate(submissions):
        for q in range(p, len(submissions)):
            block, imag = _kernel_block(spec, sub_p.values, submissions[q].values, counter)
            max_imag = max(max_imag, imag)
            if q == p:
                # mirror the strict upper triangle for exact symmetry
                block = np.triu(block) + np.triu(block, 1).T
                values[offsets[p]:offsets[p + 1], offsets[p]:offsets[p + 1]] = block
            else:
                values[offsets[p]:offsets[p + 1], offsets[q]:offsets[q + 1]] = block
                values[offsets[q]:offsets[q + 1], offsets[p]:offsets[p + 1]] = block.T

    index_map = tuple((s.owner, i) for s in submissions for i in range(s.n_rows))
    return GlobalGram(values=values, index_map=index_map, spec=spec, max_imag=max_imag)


def append_rows(gram: GlobalGram, cached, new: EncodedSubmission,
                counter: OpCounter = None) -> GlobalGram:
    """Extend the Gram with a new batch of encoded rows.

    Only the new-vs-existing and new-vs-new blocks are computed; existing
    entries are copied bit-for-bit.  Appended rows always land at the end of
    the global order, so an owner that appends twice owns two row ranges.
    """
    cached = list(cached)
    if new.n_rows == 0:
        return gram
    if cached and {s.width for s in cached} != {new.width}:
        raise WidthMismatch("append width differs from cached submissions")
    n_old = gram.n
    if sum(s.n_rows for s in cached) != n_old:
        raise ValueError("cached submissions do not cover the existing Gram rows")

    n_new = new.n_rows
    values = np.empty((n_old + n_new, n_old + n_new), dtype=np.float64)
    values[:n_old, :n_old] = gram.values
    max_imag = gram.max_imag
    col = 0
    for sub in cached:
        block, imag = _kernel_block(spec=gram.spec, a=new.values, b=sub.values, counter=counter)
        max_imag = max(max_imag, imag)
        values[n_old:, col:col + sub.n_rows] = block
        values[col:col + sub.n_rows, n_old:] = block.T
        col += sub.n_rows
    corner, imag = _kernel_block(gram.spec, new.values, new.values, counter)
    max_imag = max(max_imag, imag)
    values[n_old:, n_old:] = np.triu(corner) + np.triu(corner, 1).T

    local_start = sum(1 for owner, _ in gram.index_map if owner == new.owner)
    index_map = gram.index_map + tuple((new.owner, local_start + i) for i in range(n_new))
    return GlobalGram(values=values, index_map=index_map, spec=gram.spec, max_imag=max_imag)


def remove_owner(gram: GlobalGram, owner: str) -> GlobalGram:
    """Drop every row and column contributed by one owner."""
    keep = np.array([o != owner for o, _ in gram.index_map], dtype=bool)
    if keep.all():
        raise UnknownOwner(f"owner {owner!r} has no rows in this Gram")
    values = gram.values[np.ix_(keep, keep)]
    index_map = tuple(entry for entry, k in zip(gram.index_map, keep) if k)
    return GlobalGram(values=values, index_map=index_map, spec=gram.spec, max_imag=gram.max_imag)
