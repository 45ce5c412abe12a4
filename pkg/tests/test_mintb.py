from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tollbooth.errors import InvalidNetwork, LengthTooSmall, NoUsedPath, NotOptimalFlow
from tollbooth.flows import Flow, LInstance, LinearLatency, compute_social_optimum, verify_opt_inducing
from tollbooth.gadgets import gen_random_sp, random_l_instances
from tollbooth.mintb import (
    INF,
    EdgeLengthList,
    Entry,
    combine_parallel,
    combine_series,
    format_lists,
    make_list,
    make_list_pl,
    max_used_path_length,
    min_edges_to_induce,
    place_toll,
    solve_l_instance,
    solve_mintb,
)
from tollbooth.network import Leaf, Network, Series, build_parse_tree, enumerate_st_paths, postorder


def lst(pairs, lower="first"):
    entries = [Entry(c, l) for c, l in pairs]
    return EdgeLengthList(entries, entries[0].length if lower == "first" else lower)


def bundle(lengths, used):
    net = Network([(i, "s", "t") for i in range(len(lengths))], "s", "t")
    return LInstance(net, {i: F(x) for i, x in enumerate(lengths)}, frozenset(used))


class TestLeaf:
    def test_all_used(self):
        assert make_list_pl({0: F(1), 1: F(2), 2: F(3)}, {0, 1, 2}).pairs() == [(2, 3), (3, INF)]

    def test_single_edge(self):
        assert make_list_pl({0: F(5)}, {0}).pairs() == [(0, 5), (1, INF)]

    def test_short_used_long_unused(self):
        out = make_list_pl({0: F(1), 1: F(4)}, {0})
        assert out.pairs() == [(0, 1), (1, 4), (2, INF)]
        assert out.lower == 1

    def test_all_unused_starts_at_zero(self):
        out = make_list_pl({0: F(3), 1: F(2)}, set())
        assert out.pairs() == [(0, 2), (1, 3), (2, INF)]
        assert not out.used


class TestCombine:
    def test_series(self):
        out = combine_series(lst([(1, 2), (2, INF)]), lst([(0, 5), (1, INF)]))
        assert out.pairs() == [(1, 7), (2, INF)]
        assert out.lower == 7

    def test_series_equal_single_edges(self):
        one = lst([(0, F(3)), (1, INF)])
        assert combine_series(one, one).pairs() == [(0, 6), (1, INF)]

    def test_parallel(self):
        out = combine_parallel(lst([(1, 2), (2, INF)]), lst([(0, 5), (1, INF)]))
        assert out.pairs() == [(2, 5), (3, INF)]

    def test_parallel_identical(self):
        one = lst([(0, F(4)), (1, INF)])
        assert combine_parallel(one, one).pairs() == [(0, 4), (1, 4), (2, INF)]

    def test_parallel_equal_lower_bounds(self):
        out = combine_parallel(lst([(1, 3), (2, INF)]), lst([(2, 3), (3, 6), (4, INF)]))
        assert out.entries[0].count == 3 and out.entries[0].length == 3

    def test_series_used_with_unused_rejected(self):
        with pytest.raises(InvalidNetwork):
            combine_series(lst([(0, 1), (1, INF)]), lst([(0, 1), (1, INF)], lower=None))

    def test_tie_prefers_smallest_left_index(self):
        a = lst([(0, F(2)), (1, F(2)), (2, INF)])
        out = combine_series(a, a)
        assert out.entries[1].left == 0


class TestLookup:
    def test_examples(self):
        l = lst([(2, 3), (3, INF)])
        assert min_edges_to_induce(l, F(3)) == (0, 2)
        assert min_edges_to_induce(l, F(7, 2)) == (1, 3)

    def test_below_lower_bound(self):
        with pytest.raises(LengthTooSmall):
            min_edges_to_induce(lst([(2, 3), (3, INF)]), F(2))


class TestPlaceToll:
    def test_leaf(self):
        li = bundle([1, 2, 3], {0, 1, 2})
        tree = build_parse_tree(li.network)
        tolls = place_toll(tree, make_list(tree, li), li, F(3))
        assert [tolls[i] for i in range(3)] == [2, 1, 0]
        assert tolls.size == 2

    def test_series_uses_one_toll(self):
        # left bundle lengths (1, 2) both used, right single edge 5
        net = Network([(0, "s", "u"), (1, "s", "u"), (2, "u", "t")], "s", "t")
        li = LInstance(net, {0: F(1), 1: F(2), 2: F(5)}, frozenset({0, 1, 2}))
        tree = build_parse_tree(net)
        lists = make_list(tree, li)
        assert lists[id(tree)].pairs() == [(1, 7), (2, INF)]
        tolls = place_toll(tree, lists, li, F(7))
        assert tolls.tolls == {0: F(1)}

    def test_larger_target_split(self):
        net = Network([(0, "s", "u"), (1, "s", "u"), (2, "u", "t")], "s", "t")
        li = LInstance(net, {0: F(1), 1: F(2), 2: F(5)}, frozenset({0, 1, 2}))
        sol = solve_l_instance(li, target=F(10))
        assert sol.support == 2
        costs = {e: li.lengths[e] + sol.tolls[e] for e in li.lengths}
        assert costs[0] == costs[1] and costs[0] + costs[2] == 10

    def test_infinite_target_rejected(self):
        li = bundle([1], {0})
        tree = build_parse_tree(li.network)
        with pytest.raises(ValueError):
            place_toll(tree, make_list(tree, li), li, INF)


def test_max_used_path_length():
    net = Network([(0, "s", "u"), (1, "u", "t"), (2, "s", "t")], "s", "t")
    li = LInstance(net, {0: F(2), 1: F(5), 2: F(9)}, frozenset({0, 1}))
    assert max_used_path_length(build_parse_tree(net), li) == 7


class TestSolve:
    def test_pigou(self, pigou, pigou_opt):
        net, lat, r = pigou
        sol = solve_mintb(net, lat, r, pigou_opt)
        assert sol.tolls.tolls == {0: F(1, 2)}
        assert sol.induced_length == 1
        assert sol.lists[id(sol.tree)].pairs() == [(1, 1), (2, INF)]

    def test_single_edge(self):
        net = Network([(0, "s", "t")], "s", "t")
        sol = solve_mintb(net, {0: LinearLatency(1, 1)}, 2, Flow({0: 2}, 2))
        assert sol.support == 0

    def test_already_balanced(self):
        li = bundle([3, 3, 5], {0, 1})
        assert solve_l_instance(li).support == 0

    def test_not_optimal(self, pigou):
        net, lat, r = pigou
        with pytest.raises(NotOptimalFlow):
            solve_mintb(net, lat, r, Flow({0: 1}, 1))
        assert solve_mintb(net, lat, r, Flow({0: 1}, 1), check_optimal=False).support == 0

    def test_zero_demand(self, pigou):
        net, lat, _ = pigou
        with pytest.raises(NoUsedPath):
            solve_mintb(net, lat, 0, Flow({}, 0))

    def test_trace_format(self, pigou, pigou_opt):
        sol = solve_mintb(*pigou, pigou_opt)
        assert format_lists(sol.tree, sol.lists) == ["list 0 (1:1) (2:inf)"]


def check_list_shape(node_list, lower):
    entries = node_list.entries
    counts = [e.count for e in entries]
    assert counts == list(range(counts[0], counts[0] + len(counts)))
    assert all(a.length <= b.length for a, b in zip(entries, entries[1:]))
    assert entries[-1].length is INF
    assert all(e.length is not INF for e in entries[:-1])
    if lower is not None:
        assert entries[0].length == lower


def recompute(node, lists, entry):
    left, right = lists[id(node.left)], lists[id(node.right)]
    a, b = left.entries[entry.left], right.entries[entry.right]
    value = a.length + b.length if isinstance(node, Series) else min(a.length, b.length)
    return a.count + b.count, value


@given(seed=st.integers(0, 1_000_000))
def test_lists_well_formed_and_pointers_sound(seed):
    li = next(random_l_instances(seed, 1, max_m=14, max_length=9))
    tree = build_parse_tree(li.network)
    lists = make_list(tree, li)
    for node in postorder(tree):
        check_list_shape(lists[id(node)], lists[id(node)].lower)
        if not isinstance(node, Leaf):
            for entry in lists[id(node)].entries:
                assert recompute(node, lists, entry) == (entry.count, entry.length)


@given(seed=st.integers(0, 1_000_000), extra=st.fractions(min_value=0, max_value=6, max_denominator=3))
def test_support_matches_root_entry(seed, extra):
    li = next(random_l_instances(seed, 1, max_m=14, max_length=9))
    sol = solve_l_instance(li)
    root = sol.lists[id(sol.tree)]
    assert sol.support == root.entries[0].count
    target = root.lower + extra
    sol2 = solve_l_instance(li, target=target)
    assert sol2.support == min_edges_to_induce(root, target)[1]
    costs = {e: li.lengths[e] + sol2.tolls[e] for e in li.lengths}
    assert _induces(li, costs, target)


def _induces(li, costs, target):
    for path in enumerate_st_paths(li.network):
        cost = sum(costs[e] for e in path)
        if all(e in li.used for e in path):
            if cost != target:
                return False
        elif cost < target:
            return False
    return True


@given(seed=st.integers(0, 10_000), m=st.integers(1, 60))
def test_solve_end_to_end(seed, m):
    g = gen_random_sp(seed, m)
    opt = compute_social_optimum(g.network, g.latencies, g.demand)
    sol = solve_mintb(g.network, g.latencies, g.demand, opt)
    assert verify_opt_inducing(g.network, g.latencies, g.demand, opt, sol.tolls)
