from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from navflow.flow import FILTERED, GROUND_TRUTH, NavFlow, extract_baseline_flow, filter_flow
from navflow.hierarchy import load_hierarchy
from navflow.metrics import reachability, sequence_similarity, touchable_ids
from oracles import rank_similarity
from treekit import FIXTURES, box, leaf, tree


def truth(*ids):
    return NavFlow(tuple(ids), GROUND_TRUTH)


def cand(*ids):
    return NavFlow(tuple(ids), FILTERED)


class TestSimilarity:
    def test_identical(self):
        r = sequence_similarity(truth("a", "b", "c"), cand("a", "b", "c"))
        assert r.s == 1.0
        assert all(d == 0 for _, d in r.per_node_rank_delta)

    def test_swap_of_two(self):
        assert sequence_similarity(truth("a", "b"), cand("b", "a")).s == pytest.approx(1 / (1 + math.sqrt(2)))
        assert sequence_similarity(truth("a", "b"), cand("b", "a")).s == pytest.approx(0.4142, abs=1e-4)

    def test_reversal_of_three(self):
        s = sequence_similarity(truth("a", "b", "c"), cand("c", "b", "a")).s
        assert s == pytest.approx(1 / (1 + math.sqrt(8)))
        assert s == pytest.approx(0.2612, abs=1e-4)

    def test_rank_deltas(self):
        r = sequence_similarity(truth("a", "b", "c"), cand("c", "b", "a"))
        assert r.per_node_rank_delta == (("a", 2), ("b", 0), ("c", -2))
        assert (r.truth_len, r.matched_len) == (3, 3)

    def test_missing_nodes_take_tail_ranks(self):
        r = sequence_similarity(truth("a", "b", "c"), cand("a"))
        # b and c are placed at ranks 2 and 3, so the penalty is zero here
        assert r.s == 1.0
        assert r.missing == ("b", "c")
        assert r.matched_len == 1
        assert r.diagnostics

        r = sequence_similarity(truth("a", "b"), cand("x", "y", "a"))
        # a at 3 (delta 2); b missing -> rank 4 (delta 2)
        assert r.s == pytest.approx(1 / (1 + math.sqrt(8)))
        assert r.extra == ("x", "y")

    def test_extra_nodes_ignored_but_keep_positions(self):
        r = sequence_similarity(truth("a", "b"), cand("a", "junk", "b"))
        assert r.s == pytest.approx(1 / 2)
        assert r.extra == ("junk",)

    def test_empty_truth(self):
        with pytest.raises(ValueError):
            sequence_similarity(truth(), cand("a"))

    @settings(max_examples=200, deadline=None)
    @given(st.permutations(list(range(10))), st.integers(2, 10))
    def test_matches_direct_evaluation(self, perm, n):
        ids = [f"n{i}" for i in range(n)]
        shuffled = [ids[i] for i in perm if i < n]
        assert abs(sequence_similarity(truth(*ids), cand(*shuffled)).s - rank_similarity(ids, shuffled)) <= 1e-12

    @settings(max_examples=100, deadline=None)
    @given(st.permutations(list(range(8))))
    def test_range_and_relabeling(self, perm):
        ids = [f"n{i}" for i in range(8)]
        shuffled = [ids[i] for i in perm]
        s = sequence_similarity(truth(*ids), cand(*shuffled)).s
        assert 0 < s <= 1
        assert (s == 1) == (shuffled == ids)
        relabel = {n: f"z{7 - k}" for k, n in enumerate(ids)}
        again = sequence_similarity(truth(*[relabel[n] for n in ids]), cand(*[relabel[n] for n in shuffled])).s
        assert again == s

    @given(st.integers(2, 15), st.data())
    def test_adjacent_transposition_lowers_score(self, n, data):
        ids = [f"n{i}" for i in range(n)]
        i = data.draw(st.integers(0, n - 2))
        swapped = ids[:i] + [ids[i + 1], ids[i]] + ids[i + 2:]
        assert sequence_similarity(truth(*ids), cand(*swapped)).s < sequence_similarity(truth(*ids), cand(*ids)).s


class TestReachability:
    def test_all_focusable(self):
        t = load_hierarchy(FIXTURES / "all_focusable.xml")
        r = reachability(t, extract_baseline_flow(t))
        assert (r.n, r.m, r.p) == (5, 5, 1.0)

    def test_one_silent_leaf(self):
        t = tree(box("root", leaf("a"), leaf("b"), leaf("quiet", focusable=False), leaf("d"), leaf("e")))
        filtered, _ = filter_flow(extract_baseline_flow(t), t)
        r = reachability(t, filtered)
        assert (r.n, r.m) == (4, 5)
        assert r.p == pytest.approx(0.8)

    def test_silent_never_counts_even_if_in_flow(self):
        t = tree(box("root", leaf("a"), leaf("quiet", focusable=False)))
        r = reachability(t, extract_baseline_flow(t))
        assert (r.n, r.m) == (1, 2)

    def test_invisible_excluded_from_m(self):
        t = tree(box("root", leaf("a"), leaf("gone", visibility="gone"), leaf("off", enabled=False, clickable=False)))
        assert touchable_ids(t) == ["a"]

    def test_no_touchable_components(self):
        t = tree(box("root", leaf("off", enabled=False, focusable=False, clickable=False)))
        with pytest.raises(ValueError, match="no touchable components"):
            reachability(t, extract_baseline_flow(t))

    def test_report_dict(self):
        t = load_hierarchy(FIXTURES / "all_focusable.xml")
        assert reachability(t, extract_baseline_flow(t)).to_dict() == {"n": 5, "m": 5, "p": 1.0}


node_state = st.fixed_dictionaries({
    "visibility": st.sampled_from(["visible", "visible", "gone"]),
    "focusable": st.booleans(),
    "enabled": st.booleans(),
    "clickable": st.booleans(),
})


class TestReachabilityProperties:
    @settings(max_examples=150, deadline=None)
    @given(st.lists(node_state, min_size=1, max_size=12), st.randoms(use_true_random=False))
    def test_bounds_and_filtering(self, states, rnd):
        t = tree(box("root", *[leaf(f"n{i}", **s) for i, s in enumerate(states)]))
        if not touchable_ids(t):
            return
        base = extract_baseline_flow(t)
        filtered, _ = filter_flow(base, t)
        rb, rf = reachability(t, base), reachability(t, filtered)
        assert rb.n <= rb.m and rf.n <= rf.m
        assert rb.m == rf.m  # m is a property of the tree, not of the flow
        assert rf.n == rb.n  # filtering only drops nodes that never counted
        shuffled = list(filtered.order)
        rnd.shuffle(shuffled)
        assert reachability(t, cand(*shuffled)).n == rf.n

    def test_fixture_corpus(self):
        for name in ("profile_screen.json", "toolbar_row.json", "product_grid.json", "all_focusable.xml"):
            t = load_hierarchy(FIXTURES / name)
            for flow in (extract_baseline_flow(t), filter_flow(extract_baseline_flow(t), t)[0]):
                r = reachability(t, flow)
                assert r.n <= r.m
