"""Score-based order estimates computed from a partial order.

Each item gets a scalar score from its descendant count d and ancestor
count a (both include the item itself):

    rho   = d / (d + a)   ratio score in (0, 1)
    delta = d - a         signed balance score
    info  = d + a         how constrained the item already is

Sorting the items by score (stable, so ties fall back to item index)
yields a full-order estimate that is consistent with every relation
recorded so far: i before j forces d(i) <= d(j) - 1 and a(i) >= a(j) + 1,
hence strictly smaller rho and delta.
"""

from __future__ import annotations

import numpy as np

from .poset import PartialOrder


def rho_scores(po: PartialOrder) -> np.ndarray:
    """Ratio score d / (d + a) per item, as float64.

    Exact for ties: d and a are integers at most n + 1, so two items
    share a float64 score only when the underlying rationals are equal.
    """
    d = po.descendant_counts().astype(np.float64)
    a = po.ancestor_counts().astype(np.float64)
    return d / (d + a)


def delta_scores(po: PartialOrder) -> np.ndarray:
    """Balance score d - a per item, as int64."""
    return po.descendant_counts() - po.ancestor_counts()


def info_scores(po: PartialOrder) -> np.ndarray:
    """Constraint score d + a per item, as int64."""
    return po.descendant_counts() + po.ancestor_counts()


def estimate_from_scores(scores: np.ndarray) -> np.ndarray:
    """Item indices ordered by ascending score, ties by ascending index."""
    scores = np.asarray(scores)
    if scores.ndim != 1:
        raise ValueError(f"scores must be one-dimensional, got shape {scores.shape}")
    return np.argsort(scores, kind="stable")


def _minimal_first_orders(po: PartialOrder, limit: int):
    """Yield every linear extension as a list of item indices.

    Standard minimal-element recursion over a bitmask of the remaining
    items; extensions come out in lexicographic item-index order.
    Raises RuntimeError once more than ``limit`` extensions were emitted.
    """
    n = po.n
    desc_mask = [int.from_bytes(po._desc[i].tobytes(), "little") for i in range(n)]
    prefix: list[int] = []
    emitted = 0

    def rec(remaining: int):
        nonlocal emitted
        if remaining == 0:
            emitted += 1
            if emitted > limit:
                raise RuntimeError(f"more than {limit} linear extensions; raise the limit to enumerate")
            yield list(prefix)
            return
        m = remaining
        while m:
            bit = m & -m
            m ^= bit
            i = bit.bit_length() - 1
            if desc_mask[i] & remaining == bit:
                prefix.append(i)
                yield from rec(remaining ^ bit)
                prefix.pop()

    yield from rec((1 << n) - 1)


def linear_extensions(po: PartialOrder, limit: int = 10_000_000) -> list[np.ndarray]:
    """All total orders consistent with the recorded relations.

    Intended for small instances; refuses n > 12 outright and raises
    RuntimeError if the count exceeds ``limit``.
    """
    if po.n > 12:
        raise ValueError(f"linear extension enumeration is limited to n <= 12, got n={po.n}")
    return [np.array(ext, np.int64) for ext in _minimal_first_orders(po, limit)]


def exact_average_heights(po: PartialOrder, limit: int = 10_000_000) -> np.ndarray:
    """Mean position of each item over all linear extensions, as float64.

    Positions are 0-based.  Same size and budget limits as
    ``linear_extensions``, but only accumulators are kept in memory.
    """
    if po.n > 12:
        raise ValueError(f"height enumeration is limited to n <= 12, got n={po.n}")
    totals = np.zeros(po.n, np.float64)
    count = 0
    for ext in _minimal_first_orders(po, limit):
        count += 1
        for pos, item in enumerate(ext):
            totals[item] += pos
    return totals / count
