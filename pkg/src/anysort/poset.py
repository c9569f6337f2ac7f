"""Partial order over item indices, maintained as a transitive closure.

The order accumulates comparison outcomes one pair at a time.  Storage
is two packed bit matrices (ancestors and descendants per item) plus
per-item counts, so relation queries are O(1) and recording a new
outcome costs O(n^2 / 64) words in the worst case.
"""

from __future__ import annotations

import numpy as np

from . import _kernels


class ContradictionError(ValueError):
    """Raised when a recorded outcome conflicts with the existing order."""


class PartialOrder:
    """Transitive closure of comparison outcomes over indices 0..n-1.

    ``record(lo, hi)`` asserts that item lo sorts before item hi.  The
    closure is maintained eagerly, so ``leq`` answers from the stored
    relation alone.  Items compare equal only to themselves.
    """

    __slots__ = ("n", "_anc", "_desc", "_d", "_a", "_nrel")

    def __init__(self, n: int):
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
            raise TypeError(f"n must be an int, got {type(n).__name__}")
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        self.n = int(n)
        words = (self.n + 63) // 64
        self._anc = np.zeros((self.n, words), np.uint64)
        self._desc = np.zeros((self.n, words), np.uint64)
        self._d = np.zeros(self.n, np.int64)
        self._a = np.zeros(self.n, np.int64)
        _kernels.init_reflexive(self._anc, self._desc, self._d, self._a)
        self._nrel = 0

    def _check_index(self, i: int) -> int:
        i = int(i)
        if not 0 <= i < self.n:
            raise IndexError(f"index {i} out of range for n={self.n}")
        return i

    def leq(self, i: int, j: int) -> bool:
        """True iff i is known to sort at or before j (reflexive)."""
        i = self._check_index(i)
        j = self._check_index(j)
        return bool(_kernels.leq_bit(self._anc, i, j))

    def record(self, lo: int, hi: int) -> None:
        """Record the outcome "lo sorts before hi" and close transitively.

        Recording an already-implied relation is a no-op.  Recording the
        reverse of an implied relation raises ContradictionError.
        """
        lo = self._check_index(lo)
        hi = self._check_index(hi)
        if lo == hi:
            raise ValueError(f"cannot order item {lo} against itself")
        if _kernels.leq_bit(self._anc, lo, hi):
            return
        if _kernels.leq_bit(self._anc, hi, lo):
            raise ContradictionError(f"{hi} < {lo} already holds; cannot record {lo} < {hi}")
        self._nrel += int(_kernels.record_closure(self._anc, self._desc, self._d, self._a, lo, hi))

    @property
    def relation_count(self) -> int:
        """Number of ordered pairs i < j currently known (excluding self pairs)."""
        return self._nrel

    def descendant_counts(self) -> np.ndarray:
        """d[i] = number of items known to sort at or before i (including i)."""
        return self._d.copy()

    def ancestor_counts(self) -> np.ndarray:
        """a[i] = number of items known to sort at or after i (including i)."""
        return self._a.copy()

    def is_total(self) -> bool:
        """True iff every pair is ordered."""
        return self._nrel == self.n * (self.n - 1) // 2

    def incomparable_pairs(self) -> set[tuple[int, int]]:
        """All pairs (i, j) with i < j whose order is still unknown."""
        comp = self._anc | self._desc
        flat = np.unpackbits(comp.view(np.uint8), axis=1, bitorder="little")[:, : self.n]
        unknown = flat == 0
        unknown &= np.tri(self.n, self.n, -1, dtype=bool).T
        rows, cols = np.nonzero(unknown)
        return {(int(i), int(j)) for i, j in zip(rows, cols)}

    def sorted_order(self) -> np.ndarray:
        """The unique total order, as item indices from smallest to largest."""
        if not self.is_total():
            raise ValueError("order is not total yet")
        return np.argsort(self._d, kind="stable")

    def copy(self) -> "PartialOrder":
        dup = PartialOrder.__new__(PartialOrder)
        dup.n = self.n
        dup._anc = self._anc.copy()
        dup._desc = self._desc.copy()
        dup._d = self._d.copy()
        dup._a = self._a.copy()
        dup._nrel = self._nrel
        return dup


def new_poset(n: int) -> PartialOrder:
    """Create an empty order over n items (only reflexive pairs known)."""
    return PartialOrder(n)
