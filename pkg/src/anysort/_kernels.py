"""Compiled kernels shared by the poset, sorter, and metric layers.

Everything here operates on plain numpy arrays so the hot loops stay in
nopython mode.  The partial order over n items is stored as two packed
bit matrices of shape (n, W) with W = ceil(n / 64) words per row:

    anc[i]  has bit j set iff i <= j in the recorded order (self bit set),
    desc[i] has bit j set iff j <= i in the recorded order (self bit set).

Alongside the matrices we keep per-item counts d[i] = popcount(desc[i])
and a[i] = popcount(anc[i]); both count the item itself.

The profile kernels track the Kendall tau of the running estimate
incrementally: every estimate change decomposes into single-element
moves, and moving one element across a block flips exactly its pairs
with the block, so the count is updated during the shift itself.
"""

import numba as nb
import numpy as np

_U0 = np.uint64(0)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)
_U1 = np.uint64(1)
_U2 = np.uint64(2)
_U4 = np.uint64(4)
_U56 = np.uint64(56)


@nb.njit(nb.int64(nb.uint64), cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> _U1) & _M1)
    x = (x & _M2) + ((x >> _U2) & _M2)
    x = (x + (x >> _U4)) & _M4
    return np.int64((x * _H01) >> _U56)


@nb.njit(cache=True)
def init_reflexive(anc, desc, d, a):
    """Set every item's self bit and reset the counts to 1."""
    n = d.shape[0]
    for i in range(n):
        w = i >> 6
        bit = _U1 << np.uint64(i & 63)
        anc[i, w] |= bit
        desc[i, w] |= bit
        d[i] = 1
        a[i] = 1


@nb.njit(nb.boolean(nb.uint64[:, :], nb.int64, nb.int64), cache=True, inline="always")
def leq_bit(anc, i, j):
    return (anc[i, j >> 6] >> np.uint64(j & 63)) & _U1 != _U0


@nb.njit(nb.int64(nb.uint64[:, :], nb.uint64[:, :], nb.int64[:], nb.int64[:], nb.int64, nb.int64), cache=True)
def record_closure(anc, desc, d, a, lo, hi):
    """Add the relation lo <= hi and re-close transitively.

    Precondition: lo and hi are currently incomparable.  Every x <= lo
    inherits the ancestors of hi, and every y >= hi inherits the
    descendants of lo.  Returns the number of ordered pairs added.
    """
    W = anc.shape[1]
    added = np.int64(0)
    for w in range(W):
        bits = desc[lo, w]
        if bits == _U0:
            continue
        base = w << 6
        for b in range(64):
            if (bits >> np.uint64(b)) & _U1:
                x = base + b
                gained = np.int64(0)
                for v in range(W):
                    old = anc[x, v]
                    new = old | anc[hi, v]
                    if new != old:
                        gained += _popcount(new & ~old)
                        anc[x, v] = new
                a[x] += gained
    for w in range(W):
        bits = anc[hi, w]
        if bits == _U0:
            continue
        base = w << 6
        for b in range(64):
            if (bits >> np.uint64(b)) & _U1:
                y = base + b
                gained = np.int64(0)
                for v in range(W):
                    old = desc[y, v]
                    new = old | desc[lo, v]
                    if new != old:
                        gained += _popcount(new & ~old)
                        desc[y, v] = new
                d[y] += gained
                added += gained
    return added


@nb.njit(nb.types.UniTuple(nb.int64, 2)(nb.uint64[:, :], nb.int64[:], nb.int64[:]), cache=True)
def next_pair(anc, d, a):
    """Pick the next query pair for the score-balancing sorter.

    Among incomparable pairs (i, j) this minimises, lexicographically,
    (|delta(i) - delta(j)|, max(info(i), info(j)), min(i, j), max(i, j))
    with delta = d - a and info = d + a.  Relies on the closure fact
    that i < j in the order forces delta(j) - delta(i) >= 2, so pairs
    with a delta gap of 0 or 1 are incomparable without a bit check.
    Returns (-1, -1) when the order is already total.
    """
    n = d.shape[0]
    delta = np.empty(n, np.int64)
    info = np.empty(n, np.int64)
    for i in range(n):
        delta[i] = d[i] - a[i]
        info[i] = d[i] + a[i]
    # counting sort by delta (range -n..n), ties by item index
    off = n + 1
    counts = np.zeros(2 * n + 3, np.int64)
    for i in range(n):
        counts[delta[i] + off] += 1
    pos = 0
    for v in range(2 * n + 3):
        c = counts[v]
        counts[v] = pos
        pos += c
    order = np.empty(n, np.int64)
    for i in range(n):
        v = delta[i] + off
        order[counts[v]] = i
        counts[v] += 1

    # Phase one: any run of equal deltas is mutually incomparable, so
    # the global optimum has delta gap 0 whenever such a run exists.
    # Within a run the best pair takes the two items of smallest index
    # among those whose info does not exceed the run's second-smallest.
    best_m = np.int64(1) << 62
    best_i = np.int64(-1)
    best_j = np.int64(-1)
    p = 0
    while p < n:
        q = p + 1
        while q < n and delta[order[q]] == delta[order[p]]:
            q += 1
        if q - p >= 2:
            m1 = np.int64(1) << 62
            m2 = np.int64(1) << 62
            for t in range(p, q):
                v = info[order[t]]
                if v < m1:
                    m2 = m1
                    m1 = v
                elif v < m2:
                    m2 = v
            i1 = np.int64(n)
            i2 = np.int64(n)
            for t in range(p, q):
                idx = order[t]
                if info[idx] <= m2:
                    if idx < i1:
                        i2 = i1
                        i1 = idx
                    elif idx < i2:
                        i2 = idx
            if m2 < best_m or (m2 == best_m and (i1 < best_i or (i1 == best_i and i2 < best_j))):
                best_m = m2
                best_i = i1
                best_j = i2
        p = q
    if best_i >= 0:
        return best_i, best_j

    # Phase two: all deltas distinct.  Scan pairs in delta order with an
    # early break once the gap alone exceeds the best key seen.
    big = np.int64(n) + 2
    best_key = np.int64(1) << 62
    for p in range(n):
        i = order[p]
        ii = info[i]
        di = delta[i]
        for q in range(p + 1, n):
            j = order[q]
            gap = delta[j] - di
            if gap * big + 2 > best_key:
                break
            if gap >= 2 and leq_bit(anc, i, j):
                continue
            m = ii if ii > info[j] else info[j]
            key = gap * big + m
            u = i if i < j else j
            v = j if i < j else i
            if key < best_key or (key == best_key and (u < best_i or (u == best_i and v < best_j))):
                best_key = key
                best_i = u
                best_j = v
    return best_i, best_j


@nb.njit(nb.int64(nb.int64[:], nb.int64[:]), cache=True)
def count_inversions(seq, buf):
    """Count inversions of seq by bottom-up mergesort; clobbers both arrays."""
    n = seq.shape[0]
    src = seq
    dst = buf
    total = np.int64(0)
    flips = 0
    width = 1
    while width < n:
        lo = 0
        while lo < n:
            mid = lo + width
            hi = lo + 2 * width
            if mid > n:
                mid = n
            if hi > n:
                hi = n
            i = lo
            j = mid
            k = lo
            while i < mid and j < hi:
                if src[i] <= src[j]:
                    dst[k] = src[i]
                    i += 1
                else:
                    dst[k] = src[j]
                    j += 1
                    total += mid - i
                k += 1
            while i < mid:
                dst[k] = src[i]
                i += 1
                k += 1
            while j < hi:
                dst[k] = src[j]
                j += 1
                k += 1
            lo = hi
        tmp = src
        src = dst
        dst = tmp
        flips += 1
        width *= 2
    if flips & 1:
        for t in range(n):
            seq[t] = src[t]
    return total


@nb.njit(nb.types.UniTuple(nb.int64[:], 2)(nb.int64[:]), cache=True)
def corsort_trial(ranks):
    """Run the pair-balancing sorter start to finish inside one call.

    ranks[i] is the true rank of item i; outcomes are answered from it
    directly.  Returns the directed comparison log (los[t] sorted before
    his[t]).  Selection and closure match next_pair / record_closure
    exactly, so this is the compiled twin of the generator-driven run.
    """
    n = ranks.shape[0]
    W = (n + 63) >> 6
    anc = np.zeros((n, W), np.uint64)
    desc = np.zeros((n, W), np.uint64)
    d = np.empty(n, np.int64)
    a = np.empty(n, np.int64)
    init_reflexive(anc, desc, d, a)
    cap = n * (n - 1) // 2
    los = np.empty(cap, np.int64)
    his = np.empty(cap, np.int64)
    nrel = np.int64(0)
    steps = 0
    while nrel < cap:
        i, j = next_pair(anc, d, a)
        if ranks[i] < ranks[j]:
            lo, hi = i, j
        else:
            lo, hi = j, i
        nrel += record_closure(anc, desc, d, a, lo, hi)
        los[steps] = lo
        his[steps] = hi
        steps += 1
    return los[:steps], his[:steps]


@nb.njit(nb.int64[:](nb.int64[:], nb.int64[:], nb.int64[:], nb.boolean), cache=True)
def replay_tau_profile(los, his, ranks, use_delta):
    """Rebuild a poset from a comparison log and score the estimate per step.

    los/his give the directed outcome of each comparison (los[t] came
    out smaller).  After each step the items are ordered by delta
    (use_delta) or by the ratio d/(d+a), ties by item index, and the
    Kendall tau of that estimate is recorded.  The estimate order is
    repaired by insertion after each update, with the tau maintained
    across each adjacent transposition.  Requires n < 4096 so the
    integer ratio keys stay exact.
    """
    n = ranks.shape[0]
    W = (n + 63) >> 6
    anc = np.zeros((n, W), np.uint64)
    desc = np.zeros((n, W), np.uint64)
    d = np.empty(n, np.int64)
    a = np.empty(n, np.int64)
    init_reflexive(anc, desc, d, a)
    steps = los.shape[0]
    taus = np.empty(steps, np.int64)
    key = np.empty(n, np.int64)
    order = np.arange(n)
    shift = np.int64(4096)
    scale = np.int64(1) << 40
    # initial keys are all equal, so the initial estimate is the identity
    seq = ranks.copy()
    buf = np.empty(n, np.int64)
    tau = count_inversions(seq, buf)
    for t in range(steps):
        lo = los[t]
        hi = his[t]
        if not leq_bit(anc, lo, hi):
            record_closure(anc, desc, d, a, lo, hi)
        if use_delta:
            for i in range(n):
                key[i] = (d[i] - a[i]) * shift + i
        else:
            for i in range(n):
                key[i] = (d[i] * scale // (d[i] + a[i])) * shift + i
        # insertion repair; each leftward swap flips exactly one pair
        for p in range(1, n):
            item = order[p]
            kv = key[item]
            rk = ranks[item]
            q = p
            while q > 0 and key[order[q - 1]] > kv:
                moved = order[q - 1]
                order[q] = moved
                if rk > ranks[moved]:
                    tau += 1
                else:
                    tau -= 1
                q -= 1
            order[q] = item
        taus[t] = tau
    return taus


@nb.njit(nb.int64[:](nb.int64[:]), cache=True)
def quicksort_natural_taus(ranks):
    """Per-step Kendall tau of quicksort's working layout, in one call.

    Compiled twin of the generator: first-element pivot, depth-first
    left-first recursion, layout [smaller | pivot | unseen | larger].
    Outcomes are answered from ranks.  Returns tau after each comparison.
    """
    n = ranks.shape[0]
    arr = np.arange(n)
    stack = np.empty((2 * n + 4, 2), np.int64)
    stack[0, 0] = 0
    stack[0, 1] = n
    top = 1
    cap = n * (n - 1) // 2
    taus = np.empty(cap, np.int64)
    steps = 0
    seq = ranks.copy()
    buf = np.empty(n, np.int64)
    tau = count_inversions(seq, buf)
    while top > 0:
        top -= 1
        l = stack[top, 0]
        r = stack[top, 1]
        if r - l <= 1:
            continue
        piv = arr[l]
        rp = ranks[piv]
        pp = l
        nlarge = 0
        while pp + 1 < r - nlarge:
            cand = arr[pp + 1]
            rc = ranks[cand]
            if rc < rp:
                # swap cand just left of the pivot: one pair flips
                arr[pp + 1] = piv
                arr[pp] = cand
                tau -= 1
                pp += 1
            else:
                # slide cand to the right end, moving right past the block
                for t in range(pp + 1, r - 1):
                    m = arr[t + 1]
                    arr[t] = m
                    if rc > ranks[m]:
                        tau -= 1
                    else:
                        tau += 1
                arr[r - 1] = cand
                nlarge += 1
            taus[steps] = tau
            steps += 1
        stack[top, 0] = pp + 1
        stack[top, 1] = r
        top += 1
        stack[top, 0] = l
        stack[top, 1] = pp
        top += 1
    return taus[:steps]


@nb.njit(nb.int64[:](nb.int64[:]), cache=True)
def mergesort_dfs_natural_taus(ranks):
    """Per-step Kendall tau of top-down mergesort's working layout.

    Compiled twin of the generator: split ceil/floor, left half first,
    in-place merge (taking from the right run moves one element left
    across the remainder of the left run).  Returns tau per comparison.
    """
    n = ranks.shape[0]
    arr = np.arange(n)
    lg = 0
    while (1 << lg) < n:
        lg += 1
    cap = n * lg + 1
    taus = np.empty(cap, np.int64)
    steps = 0
    stack = np.empty((4 * n + 8, 3), np.int64)
    stack[0, 0] = 0
    stack[0, 1] = n
    stack[0, 2] = 0
    top = 1
    seq = ranks.copy()
    buf = np.empty(n, np.int64)
    tau = count_inversions(seq, buf)
    while top > 0:
        top -= 1
        l = stack[top, 0]
        r = stack[top, 1]
        ready = stack[top, 2]
        if r - l <= 1:
            continue
        m = l + (r - l + 1) // 2
        if ready == 0:
            stack[top, 0] = l
            stack[top, 1] = r
            stack[top, 2] = 1
            top += 1
            stack[top, 0] = m
            stack[top, 1] = r
            stack[top, 2] = 0
            top += 1
            stack[top, 0] = l
            stack[top, 1] = m
            stack[top, 2] = 0
            top += 1
            continue
        len_a = m - l
        len_b = r - m
        i = 0
        j = 0
        while i < len_a and j < len_b:
            aitem = arr[l + i + j]
            bitem = arr[l + len_a + j]
            if ranks[aitem] < ranks[bitem]:
                i += 1
            else:
                rb = ranks[bitem]
                t = l + len_a + j
                while t > l + i + j:
                    moved = arr[t - 1]
                    arr[t] = moved
                    if rb > ranks[moved]:
                        tau += 1
                    else:
                        tau -= 1
                    t -= 1
                arr[l + i + j] = bitem
                j += 1
            taus[steps] = tau
            steps += 1
    return taus[:steps]
