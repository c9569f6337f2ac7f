"""Interruptible sorting algorithms with per-comparison order estimates.

Every algorithm is written as a generator over item indices 0..n-1 that
yields query pairs (x, y) and receives the outcome ``True`` iff x sorts
before y.  A driver answers queries from the hidden values, optionally
feeds a :class:`~anysort.poset.PartialOrder` with each outcome, and
snapshots a full-order estimate after every comparison.

Estimators:

* ``natural``  the algorithm's own working layout, read as an estimate
  (only quicksort, depth-first mergesort, and heapsort keep a layout
  whose order is meaningful at every step);
* ``rho``      items sorted by the ratio score d/(d+a) of the recorded
  partial order, ties by item index;
* ``delta``    items sorted by the balance score d-a, ties by index.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .estimators import delta_scores, estimate_from_scores, rho_scores
from .poset import PartialOrder

ALGORITHMS = (
    "corsort",
    "quicksort",
    "asort",
    "mergesort_dfs",
    "mergesort_bfs",
    "heapsort",
    "ford_johnson",
)
ESTIMATORS = ("natural", "rho", "delta")
_NATURAL_CAPABLE = ("quicksort", "mergesort_dfs", "heapsort")


@dataclass(frozen=True)
class SorterSpec:
    """An algorithm paired with the estimator used for its snapshots."""

    algorithm: str
    estimator: str = "rho"

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")
        if self.estimator not in ESTIMATORS:
            raise ValueError(f"unknown estimator {self.estimator!r}; choose from {ESTIMATORS}")
        if self.estimator == "natural" and self.algorithm not in _NATURAL_CAPABLE:
            raise ValueError(
                f"{self.algorithm} has no natural estimate; valid for {_NATURAL_CAPABLE}"
            )


class HiddenList:
    """Comparison oracle over a list of values.

    Algorithms only ever see pairwise order, never the values.  Values
    must be pairwise distinct; equality is rejected when first observed.
    """

    __slots__ = ("_values", "comparisons")

    def __init__(self, values):
        self._values = list(values)
        if not self._values:
            raise ValueError("need at least one value")
        self.comparisons = 0

    def __len__(self) -> int:
        return len(self._values)

    def less(self, i: int, j: int) -> bool:
        """True iff values[i] < values[j]; counts one comparison."""
        a = self._values[i]
        b = self._values[j]
        if a == b:
            raise ValueError(f"values at {i} and {j} compare equal; values must be distinct")
        self.comparisons += 1
        return a < b

    def ranks(self) -> np.ndarray:
        """ranks[i] = position of values[i] in ascending order.

        Rejects duplicate values: ranks are meaningless under ties.
        """
        n = len(self._values)
        order = sorted(range(n), key=self._values.__getitem__)
        for p in range(n - 1):
            if self._values[order[p]] == self._values[order[p + 1]]:
                raise ValueError(
                    f"values at {order[p]} and {order[p + 1]} compare equal; values must be distinct"
                )
        ranks = np.empty(n, np.int64)
        for pos, item in enumerate(order):
            ranks[item] = pos
        return ranks


def _as_hidden(values) -> HiddenList:
    return values if isinstance(values, HiddenList) else HiddenList(values)


@dataclass(eq=False)
class ComparisonTrace:
    """Full record of one sorting run.

    ``steps[k]`` is the k-th query as (x, y, outcome); ``estimates[k]``
    the estimate snapshot taken right after that outcome was absorbed.
    ``ranks`` maps item index to true rank, for scoring the estimates.
    """

    n: int
    steps: list = field(default_factory=list)
    estimates: list = field(default_factory=list)
    ranks: np.ndarray | None = None

    @property
    def total_comparisons(self) -> int:
        return len(self.steps)

    @property
    def final_estimate(self) -> np.ndarray:
        if self.estimates:
            return self.estimates[-1]
        return np.arange(self.n, dtype=np.int64)


# ---------------------------------------------------------------------------
# algorithm generators


def _corsort_gen(po: PartialOrder):
    """Query the pair minimising (|delta gap|, max info, index pair).

    The driver records every outcome into ``po`` before resuming, so the
    next pick always sees the updated closure.  Terminates exactly when
    the order is total; never queries a decided pair.
    """
    while not po.is_total():
        i, j = _kernels.next_pair(po._anc, po._d, po._a)
        yield (int(i), int(j))


def corsort_next_pair(po: PartialOrder) -> tuple[int, int]:
    """The pair the score-balancing strategy queries next.

    Minimises (|delta(i)-delta(j)|, max(info(i), info(j)), min(i, j),
    max(i, j)) over incomparable pairs.
    """
    if po.is_total():
        raise ValueError("order is already total; no pair left to query")
    i, j = _kernels.next_pair(po._anc, po._d, po._a)
    return int(i), int(j)


def _quicksort_gen(arr: list):
    """Depth-first quicksort, first element of each segment as pivot.

    Working layout per segment: [smaller | pivot | unseen | larger],
    both side blocks in encounter order.  An explicit stack keeps the
    left segment fully sorted before the right one is touched.
    """
    stack = [(0, len(arr))]
    while stack:
        l, r = stack.pop()
        if r - l <= 1:
            continue
        piv = arr[l]
        pivot_pos = l
        nlarge = 0
        while pivot_pos + 1 < r - nlarge:
            cand = arr[pivot_pos + 1]
            out = yield (cand, piv)
            arr.pop(pivot_pos + 1)
            if out:
                arr.insert(pivot_pos, cand)
                pivot_pos += 1
            else:
                arr.insert(r - 1, cand)
                nlarge += 1
        stack.append((pivot_pos + 1, r))
        stack.append((l, pivot_pos))


def _asort_gen(arr: list):
    """Median splitting in breadth-first segment order.

    Each segment is split around its exact lower median, found by
    quickselect with first-element pivots; the two halves join a FIFO
    queue, so refinement sweeps the whole array level by level.
    """
    queue = deque([(0, len(arr))])
    while queue:
        l, r = queue.popleft()
        if r - l <= 1:
            continue
        target = l + (r - l - 1) // 2
        lo, hi = l, r
        while hi - lo > 1:
            pivot_pos = lo
            nlarge = 0
            while pivot_pos + 1 < hi - nlarge:
                cand = arr[pivot_pos + 1]
                out = yield (cand, arr[pivot_pos])
                arr.pop(pivot_pos + 1)
                if out:
                    arr.insert(pivot_pos, cand)
                    pivot_pos += 1
                else:
                    arr.insert(hi - 1, cand)
                    nlarge += 1
            if pivot_pos == target:
                break
            if target < pivot_pos:
                hi = pivot_pos
            else:
                lo = pivot_pos + 1
        queue.append((l, target))
        queue.append((target + 1, r))


def _mergesort_dfs_gen(arr: list):
    """Top-down mergesort, left half (of ceil(size/2)) sorted first.

    Merges happen in place on the working list: taking from the right
    run moves one element left, so the layout between comparisons is
    always the two partially merged runs in their final region.
    """
    stack = [(0, len(arr), False)]
    while stack:
        l, r, ready = stack.pop()
        if r - l <= 1:
            continue
        m = l + (r - l + 1) // 2
        if not ready:
            stack.append((l, r, True))
            stack.append((m, r, False))
            stack.append((l, m, False))
            continue
        len_a = m - l
        len_b = r - m
        i = 0
        j = 0
        while i < len_a and j < len_b:
            out = yield (arr[l + i + j], arr[l + len_a + j])
            if out:
                i += 1
            else:
                arr.insert(l + i + j, arr.pop(l + len_a + j))
                j += 1


def _mergesort_bfs_gen(arr: list):
    """Bottom-up mergesort: one full pass of pairwise merges per round.

    Runs double in length each round; an odd run is carried over
    unmerged.  Merge mechanics are the same in-place scheme as the
    depth-first variant.
    """
    runs = [(k, k + 1) for k in range(len(arr))]
    while len(runs) > 1:
        merged = []
        for t in range(0, len(runs) - 1, 2):
            l, m = runs[t]
            _, r = runs[t + 1]
            len_a = m - l
            len_b = r - m
            i = 0
            j = 0
            while i < len_a and j < len_b:
                out = yield (arr[l + i + j], arr[l + len_a + j])
                if out:
                    i += 1
                else:
                    arr.insert(l + i + j, arr.pop(l + len_a + j))
                    j += 1
            merged.append((l, r))
        if len(runs) % 2:
            merged.append(runs[-1])
        runs = merged


class _HeapState:
    """Working layout of heapsort: max-heap prefix plus sorted suffix."""

    __slots__ = ("arr", "sorted_from")

    def __init__(self, arr: list):
        self.arr = arr
        self.sorted_from = len(arr)

    def estimate(self) -> np.ndarray:
        sf = self.sorted_from
        return np.array(list(reversed(self.arr[:sf])) + self.arr[sf:], np.int64)


def _heapsort_gen(state: _HeapState):
    """Classic two-comparison sift-down heapsort (max-heap, in place).

    The natural estimate reads the heap region reversed (root last is
    roughly descending, so reversed is roughly ascending) followed by
    the already sorted suffix.
    """
    arr = state.arr
    n = len(arr)

    def sift(root, size):
        while True:
            child = 2 * root + 1
            if child >= size:
                return
            if child + 1 < size:
                out = yield (arr[child], arr[child + 1])
                if out:
                    child += 1
            out = yield (arr[root], arr[child])
            if not out:
                return
            arr[root], arr[child] = arr[child], arr[root]
            root = child

    for i in range(n // 2 - 1, -1, -1):
        yield from sift(i, n)
    for end in range(n - 1, 0, -1):
        arr[0], arr[end] = arr[end], arr[0]
        state.sorted_from = end
        yield from sift(0, end)


def _jacobsthal_group(k: int) -> int:
    # smallest j >= 2 whose group bound (2^(j+1) + (-1)^j) / 3 reaches k
    j = 2
    t = 3
    while t < k:
        j += 1
        t = (2 ** (j + 1) + (1 if j % 2 == 0 else -1)) // 3
    return j


def _capped_insert(window: list, item):
    """Binary-insert item into window at a fixed comparison budget.

    Always spends exactly ceil(log2(len(window) + 1)) comparisons: once
    the position is pinned early, the remaining budget re-asks already
    decided pairs, keeping the total count independent of the data.
    Returns the insertion position.
    """
    m = len(window)
    if m == 0:
        return 0
    budget = m.bit_length()
    lo, hi = 0, m
    used = 0
    while lo < hi:
        mid = (lo + hi) // 2
        used += 1
        out = yield (item, window[mid])
        if out:
            hi = mid
        else:
            lo = mid + 1
    for _ in range(budget - used):
        if lo > 0:
            yield (item, window[lo - 1])
        else:
            yield (item, window[0])
    return lo


def _fj_sort(items: list):
    """Merge-insertion sort: pair, sort winners recursively, insert losers.

    Losers are inserted in groups by partner position (group bounds
    (2^(j+1) + (-1)^j) / 3, descending within a group) so every window
    is one comparison short of a power of two.  An odd leftover joins
    its group with the whole chain as window.
    """
    n = len(items)
    if n <= 1:
        return list(items)
    winners = []
    loser_of = {}
    for t in range(0, n - 1, 2):
        x, y = items[t], items[t + 1]
        out = yield (x, y)
        w, l = (y, x) if out else (x, y)
        winners.append(w)
        loser_of[w] = l
    ws = yield from _fj_sort(winners)
    chain = [loser_of[ws[0]]] + ws
    pend = [(k + 2, loser_of[w], w) for k, w in enumerate(ws[1:])]
    if n % 2:
        pend.append((len(ws) + 1, items[-1], None))
    pend.sort(key=lambda e: (_jacobsthal_group(e[0]), -e[0]))
    for _, item, upper in pend:
        window = chain[: chain.index(upper)] if upper is not None else chain[:]
        pos = yield from _capped_insert(window, item)
        chain.insert(pos, item)
    return chain


def _ford_johnson_gen(arr: list):
    result = yield from _fj_sort(list(arr))
    arr[:] = result


# ---------------------------------------------------------------------------
# driver


def _make_generator(algorithm: str, n: int, po: PartialOrder | None):
    """Instantiate one algorithm; returns (generator, natural_snapshot)."""
    if algorithm == "corsort":
        return _corsort_gen(po), None
    arr = list(range(n))
    if algorithm == "quicksort":
        return _quicksort_gen(arr), lambda: np.array(arr, np.int64)
    if algorithm == "asort":
        return _asort_gen(arr), None
    if algorithm == "mergesort_dfs":
        return _mergesort_dfs_gen(arr), lambda: np.array(arr, np.int64)
    if algorithm == "mergesort_bfs":
        return _mergesort_bfs_gen(arr), None
    if algorithm == "heapsort":
        state = _HeapState(arr)
        return _heapsort_gen(state), state.estimate
    if algorithm == "ford_johnson":
        return _ford_johnson_gen(arr), None
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _drive(spec: SorterSpec, hidden: HiddenList, on_step=None):
    """Run one algorithm to completion, reporting each step to on_step.

    on_step(x, y, outcome, po, natural) is called after the outcome has
    been recorded into the poset (when one is kept).  Returns the poset.
    """
    n = len(hidden)
    needs_poset = spec.algorithm == "corsort" or spec.estimator in ("rho", "delta")
    po = PartialOrder(n) if needs_poset else None
    gen, natural = _make_generator(spec.algorithm, n, po)
    try:
        query = next(gen)
    except StopIteration:
        return po
    while True:
        x, y = query
        if not 0 <= x < n or not 0 <= y < n or x == y:
            raise RuntimeError(f"algorithm queried invalid pair ({x}, {y})")
        out = hidden.less(x, y)
        if po is not None:
            if out:
                po.record(x, y)
            else:
                po.record(y, x)
        done = False
        try:
            query = gen.send(out)
        except StopIteration:
            done = True
        if on_step is not None:
            on_step(x, y, out, po, natural)
        if done:
            return po


def run(spec: SorterSpec, values) -> ComparisonTrace:
    """Sort hidden values, snapshotting an estimate after every comparison."""
    hidden = _as_hidden(values)
    trace = ComparisonTrace(n=len(hidden))

    def on_step(x, y, out, po, natural):
        trace.steps.append((x, y, out))
        if spec.estimator == "natural":
            trace.estimates.append(natural())
        elif spec.estimator == "rho":
            trace.estimates.append(estimate_from_scores(rho_scores(po)))
        else:
            trace.estimates.append(estimate_from_scores(delta_scores(po)))

    _drive(spec, hidden, on_step)
    trace.ranks = hidden.ranks()
    return trace


def count_comparisons(spec: SorterSpec, values) -> int:
    """Comparisons to finish, without snapshotting estimates.

    The count never depends on the estimator, so no partial order is
    kept: the pair-balancing sorter runs inside its compiled twin and
    everything else drives the bare generator.
    """
    hidden = _as_hidden(values)
    if spec.algorithm == "corsort":
        los, _ = _kernels.corsort_trial(hidden.ranks())
        return len(los)
    start = hidden.comparisons
    gen, _ = _make_generator(spec.algorithm, len(hidden), None)
    try:
        x, y = next(gen)
        while True:
            x, y = gen.send(hidden.less(x, y))
    except StopIteration:
        pass
    return hidden.comparisons - start


def comparison_log(spec: SorterSpec, values) -> tuple[np.ndarray, np.ndarray]:
    """Directed outcome log: los[t] sorted before his[t] at step t.

    Like count_comparisons, this skips the partial order: the log is a
    property of the algorithm and the hidden values alone.
    """
    hidden = _as_hidden(values)
    if spec.algorithm == "corsort":
        return _kernels.corsort_trial(hidden.ranks())
    los: list[int] = []
    his: list[int] = []
    gen, _ = _make_generator(spec.algorithm, len(hidden), None)
    try:
        x, y = next(gen)
        while True:
            out = hidden.less(x, y)
            if out:
                los.append(x)
                his.append(y)
            else:
                los.append(y)
                his.append(x)
            x, y = gen.send(out)
    except StopIteration:
        pass
    return np.array(los, np.int64), np.array(his, np.int64)


def tau_profile(spec: SorterSpec, values) -> np.ndarray:
    """Kendall tau of the estimate after each comparison (one run).

    Equivalent to scoring ``run(spec, values)`` step by step, but the
    score-based estimators replay the comparison log inside a compiled
    kernel instead of materialising every estimate.
    """
    hidden = _as_hidden(values)
    n = len(hidden)
    ranks = hidden.ranks()
    if spec.estimator in ("rho", "delta"):
        if n >= 4096:
            raise ValueError("compiled replay supports n < 4096")
        los, his = comparison_log(spec, hidden)
        return _kernels.replay_tau_profile(los, his, ranks, spec.estimator == "delta")
    if spec.algorithm == "quicksort":
        return _kernels.quicksort_natural_taus(ranks)
    if spec.algorithm == "mergesort_dfs":
        return _kernels.mergesort_dfs_natural_taus(ranks)
    taus: list[int] = []
    buf = np.empty(n, np.int64)

    def on_step(x, y, out, po, natural):
        seq = ranks[natural()]
        taus.append(int(_kernels.count_inversions(seq, buf)))

    _drive(spec, hidden, on_step)
    return np.array(taus, np.int64)


# ---------------------------------------------------------------------------
# one-call wrappers


def corsort(values, estimator: str = "rho") -> ComparisonTrace:
    return run(SorterSpec("corsort", estimator), values)


def quicksort_anytime(values, estimator: str = "natural") -> ComparisonTrace:
    return run(SorterSpec("quicksort", estimator), values)


def asort(values, estimator: str = "rho") -> ComparisonTrace:
    return run(SorterSpec("asort", estimator), values)


def mergesort_dfs(values, estimator: str = "natural") -> ComparisonTrace:
    return run(SorterSpec("mergesort_dfs", estimator), values)


def mergesort_bfs(values, estimator: str = "rho") -> ComparisonTrace:
    return run(SorterSpec("mergesort_bfs", estimator), values)


def heapsort_anytime(values, estimator: str = "natural") -> ComparisonTrace:
    return run(SorterSpec("heapsort", estimator), values)


def ford_johnson(values, estimator: str = "rho") -> ComparisonTrace:
    return run(SorterSpec("ford_johnson", estimator), values)
