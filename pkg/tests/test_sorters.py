"""Sorting algorithms, their traces, estimates, and comparison counts."""

import itertools
import random

import numpy as np
import pytest

from anysort import (
    ALGORITHMS,
    PartialOrder,
    SorterSpec,
    comparison_log,
    corsort_next_pair,
    count_comparisons,
    delta_scores,
    estimate_from_scores,
    new_poset,
    profile,
    rho_scores,
    run,
    tau_profile,
)

ALL_SPECS = [
    SorterSpec("corsort", "rho"),
    SorterSpec("quicksort", "natural"),
    SorterSpec("asort", "rho"),
    SorterSpec("mergesort_dfs", "natural"),
    SorterSpec("mergesort_bfs", "rho"),
    SorterSpec("heapsort", "natural"),
    SorterSpec("ford_johnson", "rho"),
]


def ford_johnson_count(n):
    """Comparison count of the fixed-budget merge-insertion sort.

    One pass of pairing plus recursion plus insertions works out to
    sum over k <= n of ceil(log2(3k/4)), evaluated here in exact
    integer arithmetic.
    """
    return sum((3 * k - 1).bit_length() - 2 for k in range(1, n + 1))


def mergesort_worst_case(n):
    if n <= 1:
        return 0
    lg = (n - 1).bit_length()
    return n * lg - 2**lg + 1


def check_trace(trace, values):
    """Structural invariants every completed trace must satisfy."""
    n = len(values)
    assert trace.n == n
    assert len(trace.steps) == len(trace.estimates) == trace.total_comparisons
    for x, y, out in trace.steps:
        assert 0 <= x < n and 0 <= y < n and x != y
        assert out == (values[x] < values[y])
    for est in trace.estimates:
        assert sorted(est) == list(range(n))
    final = trace.final_estimate
    assert [values[i] for i in final] == sorted(values)


# ---------------------------------------------------------------------------
# correctness across the board


def test_every_algorithm_sorts_exhaustively_small():
    """All permutations up to n=6: the last estimate is the true order."""
    for n in range(1, 7):
        for perm in itertools.permutations(range(n)):
            for spec in ALL_SPECS:
                if n <= 4:
                    check_trace(run(spec, list(perm)), list(perm))
                else:
                    taus = tau_profile(spec, list(perm))
                    assert len(taus) == 0 or taus[-1] == 0, (spec, perm)


def test_every_algorithm_sorts_random_medium():
    rng = random.Random(83)
    for n in (7, 8, 13, 24, 40):
        for _ in range(30):
            vals = [rng.random() for _ in range(n)]
            for spec in ALL_SPECS:
                taus = tau_profile(spec, vals)
                assert taus[-1] == 0


def test_single_element_needs_no_comparisons():
    for alg in ALGORITHMS:
        est = "natural" if alg in ("quicksort", "mergesort_dfs", "heapsort") else "rho"
        trace = run(SorterSpec(alg, est), [7.5])
        assert trace.total_comparisons == 0
        assert trace.estimates == []
        assert list(trace.final_estimate) == [0]


def test_two_elements_need_one_comparison():
    for alg in ALGORITHMS:
        assert count_comparisons(SorterSpec(alg), [2, 1]) == 1
        assert count_comparisons(SorterSpec(alg), [1, 2]) == 1


def test_all_estimator_pairings_agree_on_counts():
    """The estimator changes snapshots, never the comparison sequence."""
    rng = random.Random(89)
    vals = [rng.random() for _ in range(17)]
    for alg in ALGORITHMS:
        ests = ["rho", "delta"]
        if alg in ("quicksort", "mergesort_dfs", "heapsort"):
            ests.append("natural")
        logs = [comparison_log(SorterSpec(alg, e), vals) for e in ests]
        runs = [run(SorterSpec(alg, e), vals) for e in ests]
        for (los, his), trace in zip(logs, runs):
            assert trace.total_comparisons == len(los)
            assert [s[:2] for s in trace.steps] == [s[:2] for s in runs[0].steps]
            got_los = [x if o else y for x, y, o in trace.steps]
            got_his = [y if o else x for x, y, o in trace.steps]
            assert got_los == list(los) and got_his == list(his)


def test_duplicate_values_are_rejected():
    with pytest.raises(ValueError):
        run(SorterSpec("quicksort", "natural"), [3, 3])
    with pytest.raises(ValueError):
        run(SorterSpec("mergesort_dfs", "natural"), [2, 9, 9])
    with pytest.raises(ValueError):
        count_comparisons(SorterSpec("corsort", "rho"), [1, 1, 2])
    with pytest.raises(ValueError):
        run(SorterSpec("corsort", "rho"), [])


def test_sorter_spec_validation():
    with pytest.raises(ValueError):
        SorterSpec("bogosort", "rho")
    with pytest.raises(ValueError):
        SorterSpec("corsort", "psychic")
    for alg in ("corsort", "asort", "mergesort_bfs", "ford_johnson"):
        with pytest.raises(ValueError):
            SorterSpec(alg, "natural")


# ---------------------------------------------------------------------------
# corsort


def test_corsort_next_pair_small_cases():
    assert corsort_next_pair(new_poset(2)) == (0, 1)
    assert corsort_next_pair(new_poset(3)) == (0, 1)
    po = new_poset(4)
    po.record(0, 1)
    assert corsort_next_pair(po) == (2, 3)


def test_corsort_next_pair_requires_open_pairs():
    po = new_poset(2)
    po.record(0, 1)
    with pytest.raises(ValueError):
        corsort_next_pair(po)


def test_corsort_next_pair_matches_exhaustive_rule():
    """The compiled picker agrees with a literal scan of all pairs."""
    rng = random.Random(97)
    for _ in range(40):
        n = rng.randrange(2, 12)
        hidden = list(range(n))
        rng.shuffle(hidden)
        po = new_poset(n)
        for _ in range(rng.randrange(2 * n)):
            i, j = rng.sample(range(n), 2)
            if hidden[i] < hidden[j]:
                po.record(i, j)
            else:
                po.record(j, i)
        if po.is_total():
            continue
        delta = delta_scores(po)
        info = po.descendant_counts() + po.ancestor_counts()
        best = min(
            (abs(delta[i] - delta[j]), max(info[i], info[j]), i, j)
            for i, j in po.incomparable_pairs()
        )
        assert corsort_next_pair(po) == (best[2], best[3])


def test_corsort_on_sorted_input():
    trace = run(SorterSpec("corsort", "rho"), [1, 2, 3])
    assert list(trace.final_estimate) == [0, 1, 2]
    check_trace(trace, [1, 2, 3])


def test_corsort_queries_only_incomparable_pairs():
    """Replaying the log, both directions must be unknown at each step."""
    rng = random.Random(101)
    for n in (5, 9, 16, 33):
        for _ in range(6):
            vals = [rng.random() for _ in range(n)]
            los, his = comparison_log(SorterSpec("corsort", "rho"), vals)
            assert len(los) <= n * (n - 1) // 2
            po = new_poset(n)
            for lo, hi in zip(los, his):
                assert not po.leq(lo, hi) and not po.leq(hi, lo)
                po.record(lo, hi)
            assert po.is_total()


def test_corsort_log_matches_stepwise_picker():
    """The fused trial kernel and the public picker walk in lockstep."""
    rng = random.Random(103)
    for n in (2, 5, 17, 41):
        vals = [rng.random() for _ in range(n)]
        los, his = comparison_log(SorterSpec("corsort", "rho"), vals)
        po = new_poset(n)
        for lo, hi in zip(los, his):
            pick = corsort_next_pair(po)
            assert {int(lo), int(hi)} == set(pick)
            po.record(lo, hi)
        assert po.is_total()


def test_corsort_median_beats_quicksort_at_n64():
    trials = 1000
    cor = []
    qck = []
    rng = random.Random(107)
    for _ in range(trials):
        vals = [rng.random() for _ in range(64)]
        cor.append(count_comparisons(SorterSpec("corsort", "rho"), vals))
        qck.append(count_comparisons(SorterSpec("quicksort", "natural"), vals))
    assert np.median(cor) < np.median(qck)


# ---------------------------------------------------------------------------
# quicksort and asort


def test_quicksort_worst_case_on_sorted_input():
    for n in (2, 4, 9, 16):
        vals = list(range(1, n + 1))
        assert count_comparisons(SorterSpec("quicksort", "natural"), vals) == n * (n - 1) // 2


def test_quicksort_natural_estimate_tracks_pivot():
    """After each comparison against the first pivot, the layout reads
    [smaller | pivot | unseen | larger] with side blocks in encounter
    order, and the natural estimate mirrors it exactly."""
    vals = [5, 2, 8, 1, 9]
    trace = run(SorterSpec("quicksort", "natural"), vals)
    assert trace.total_comparisons == 6
    assert list(trace.estimates[0]) == [1, 0, 2, 3, 4]
    assert list(trace.estimates[1]) == [1, 0, 3, 4, 2]
    assert list(trace.estimates[2]) == [1, 3, 0, 4, 2]
    assert list(trace.estimates[3]) == [1, 3, 0, 2, 4]
    assert list(trace.estimates[4]) == [3, 1, 0, 2, 4]
    assert list(trace.estimates[5]) == [3, 1, 0, 2, 4]
    check_trace(trace, vals)


def test_asort_split_cost_small():
    for perm in itertools.permutations(range(3)):
        count = count_comparisons(SorterSpec("asort", "rho"), list(perm))
        assert count in (2, 3)


def test_asort_splits_around_the_exact_median():
    """Once the true lower median stops being compared, it has been
    pinned: every later comparison stays on one side of it."""
    rng = random.Random(109)
    for n in (7, 16, 33):
        for _ in range(10):
            vals = [rng.random() for _ in range(n)]
            los, his = comparison_log(SorterSpec("asort", "rho"), vals)
            rank = {i: r for r, i in enumerate(sorted(range(n), key=vals.__getitem__))}
            mid = (n - 1) // 2
            touched = [t for t, (lo, hi) in enumerate(zip(los, his))
                       if mid in (rank[int(lo)], rank[int(hi)])]
            assert touched, "the median must take part in its own selection"
            for lo, hi in list(zip(los, his))[touched[-1] + 1:]:
                assert (rank[int(lo)] < mid) == (rank[int(hi)] < mid)


# ---------------------------------------------------------------------------
# mergesort


def test_mergesort_counts_within_classic_bound():
    """The balanced top-down tree obeys n ceil(lg n) - 2^ceil(lg n) + 1;
    the bottom-up tree only shares that bound when n is a power of two
    (at n=5 its (4,1) final merge can cost one comparison more)."""
    for n in range(2, 8):
        for perm in itertools.permutations(range(n)):
            assert count_comparisons(SorterSpec("mergesort_dfs"), list(perm)) <= mergesort_worst_case(n)
    rng = random.Random(113)
    for n in (8, 13, 16, 33, 64):
        for _ in range(20):
            vals = [rng.random() for _ in range(n)]
            assert count_comparisons(SorterSpec("mergesort_dfs"), vals) <= mergesort_worst_case(n)
    for n in (2, 4, 8, 16, 32, 64):
        for _ in range(20):
            vals = [rng.random() for _ in range(n)]
            assert count_comparisons(SorterSpec("mergesort_bfs"), vals) <= mergesort_worst_case(n)


def test_mergesort_traversals_agree_at_powers_of_two():
    """Same merge tree, so identical counts per input when n is 2^k."""
    for perm in itertools.permutations(range(4)):
        assert count_comparisons(SorterSpec("mergesort_dfs"), list(perm)) == count_comparisons(
            SorterSpec("mergesort_bfs"), list(perm)
        )
    rng = random.Random(127)
    for n in (8, 16):
        for _ in range(200):
            vals = [rng.random() for _ in range(n)]
            assert count_comparisons(SorterSpec("mergesort_dfs"), vals) == count_comparisons(
                SorterSpec("mergesort_bfs"), vals
            )


def test_mergesort_bfs_leftover_run_joins_last():
    """At n=5 the odd element out is only touched in the final merge."""
    rng = random.Random(131)
    for _ in range(20):
        vals = [rng.random() for _ in range(5)]
        los, his = comparison_log(SorterSpec("mergesort_bfs", "rho"), vals)
        steps_with_last = [t for t, (lo, hi) in enumerate(zip(los, his)) if 4 in (lo, hi)]
        assert steps_with_last, "item 4 must be merged eventually"
        assert steps_with_last == list(range(steps_with_last[0], len(los)))


def test_mergesort_dfs_sorts_left_half_first():
    vals = [3, 1, 4, 2]
    trace = run(SorterSpec("mergesort_dfs", "natural"), vals)
    x, y, _ = trace.steps[0]
    assert {x, y} == {0, 1}
    check_trace(trace, vals)


# ---------------------------------------------------------------------------
# heapsort


def test_heapsort_two_elements():
    assert count_comparisons(SorterSpec("heapsort", "natural"), [4, 3]) == 1


def test_heapsort_natural_estimate_shape():
    """Estimates are permutations throughout; the suffix grows sorted."""
    rng = random.Random(137)
    vals = [rng.random() for _ in range(12)]
    trace = run(SorterSpec("heapsort", "natural"), vals)
    check_trace(trace, vals)
    order = sorted(range(12), key=vals.__getitem__)
    final = list(trace.final_estimate)
    assert final == order


# ---------------------------------------------------------------------------
# ford_johnson


def test_ford_johnson_count_is_input_independent():
    for n in range(1, 7):
        expected = ford_johnson_count(n)
        seen = {
            count_comparisons(SorterSpec("ford_johnson"), list(perm))
            for perm in itertools.permutations(range(n))
        }
        assert seen == {expected}, f"n={n}"
    rng = random.Random(139)
    for n in (7, 8, 9, 12, 21, 33, 50, 100):
        expected = ford_johnson_count(n)
        for _ in range(8):
            vals = [rng.random() for _ in range(n)]
            assert count_comparisons(SorterSpec("ford_johnson"), vals) == expected


def test_ford_johnson_small_counts():
    assert [ford_johnson_count(n) for n in range(1, 9)] == [0, 1, 3, 5, 7, 10, 13, 16]


def test_ford_johnson_redundant_queries_are_consistent():
    """Budget-padding re-asks decided pairs, never contradictions."""
    rng = random.Random(149)
    for n in (8, 11, 21):
        vals = [rng.random() for _ in range(n)]
        los, his = comparison_log(SorterSpec("ford_johnson", "rho"), vals)
        po = new_poset(n)
        for lo, hi in zip(los, his):
            po.record(lo, hi)  # a contradiction would raise
        assert po.is_total()


# ---------------------------------------------------------------------------
# estimator replay equivalences


def test_estimates_depend_only_on_the_comparison_log():
    """Replaying any sorter's log through a fresh order reproduces the
    estimate sequence exactly, whatever algorithm produced the log."""
    rng = random.Random(151)
    vals = [rng.random() for _ in range(12)]
    for spec in ALL_SPECS:
        for est_name in ("rho", "delta"):
            spec2 = SorterSpec(spec.algorithm, est_name)
            trace = run(spec2, vals)
            los, his = comparison_log(spec2, vals)
            po = PartialOrder(12)
            for t, (lo, hi) in enumerate(zip(los, his)):
                po.record(lo, hi)
                scores = rho_scores(po) if est_name == "rho" else delta_scores(po)
                assert list(estimate_from_scores(scores)) == list(trace.estimates[t])


def test_tau_profile_matches_trace_scoring():
    """Fast per-step scoring equals scoring the full trace, everywhere."""
    rng = random.Random(157)
    for n in (2, 9, 17):
        vals = [rng.random() for _ in range(n)]
        for alg in ALGORITHMS:
            ests = ["rho", "delta"]
            if alg in ("quicksort", "mergesort_dfs", "heapsort"):
                ests.append("natural")
            for est in ests:
                spec = SorterSpec(alg, est)
                taus = tau_profile(spec, vals)
                expected = profile(run(spec, vals)).tau_by_step
                assert np.array_equal(taus, expected), (alg, est, n)


def test_tau_profile_rejects_oversized_score_replay():
    with pytest.raises(ValueError):
        tau_profile(SorterSpec("mergesort_bfs", "rho"), list(range(4096)))
