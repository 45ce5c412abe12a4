import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tollbooth.errors import InfeasibleFlow
from tollbooth.flows import (
    Flow,
    LinearLatency,
    TollVector,
    build_l_instance,
    compute_equilibrium,
    compute_social_optimum,
    effective_latency,
    social_cost,
    verify_opt_inducing,
    verify_social_optimum,
    verify_wardrop,
)
from tollbooth.gadgets import gen_random_sp
from tollbooth.network import Network, build_parse_tree, enumerate_st_paths
from tollbooth.oracle import is_wardrop_by_paths

TWO = Network([(0, "s", "t"), (1, "s", "t")], "s", "t")
SHIFTED = {0: LinearLatency(1, 0), 1: LinearLatency(1, 1)}


def costs_at(lat, flow):
    return {e: lat[e](flow[e]) for e in lat}


def test_social_cost_single_edge():
    net = Network([(0, "s", "t")], "s", "t")
    assert social_cost(net, {0: LinearLatency(1, 0)}, Flow({0: 1}, 1)) == 1
    assert social_cost(net, {0: LinearLatency(1, 0)}, Flow({}, 0)) == 0


def test_conservation_checked():
    net = Network([(0, "s", "u"), (1, "u", "t")], "s", "t")
    with pytest.raises(InfeasibleFlow):
        social_cost(net, {0: LinearLatency(1, 0), 1: LinearLatency(1, 0)}, Flow({0: 1, 1: F(1, 2)}, 1))


@pytest.mark.parametrize("r,expected", [(1, (1, 0)), (3, (2, 1)), (0, (0, 0))])
def test_equilibrium_two_links(r, expected):
    f = compute_equilibrium(TWO, SHIFTED, r)
    assert (f[0], f[1]) == expected
    assert verify_wardrop(TWO, costs_at(SHIFTED, f), f)


def test_pigou_optimum(pigou):
    net, lat, r = pigou
    f = compute_social_optimum(net, lat, r)
    assert (f[0], f[1]) == (F(1, 2), F(1, 2))
    assert social_cost(net, lat, f) == F(3, 4)
    assert verify_social_optimum(net, lat, f)
    assert not verify_social_optimum(net, lat, Flow({0: 1}, 1))


def test_symmetric_links_split_evenly():
    net = Network([(i, "s", "t") for i in range(3)], "s", "t")
    lat = {i: LinearLatency(2, 1) for i in range(3)}
    f = compute_social_optimum(net, lat, 5)
    assert [f[i] for i in range(3)] == [F(5, 3)] * 3


def test_constant_ties_split_evenly():
    lat = {0: LinearLatency(0, 1), 1: LinearLatency(0, 1)}
    f = compute_equilibrium(TWO, lat, 4)
    assert (f[0], f[1]) == (2, 2)


def test_pigou_tolls(pigou, pigou_opt):
    net, lat, r = pigou
    assert not verify_opt_inducing(net, lat, r, pigou_opt, TollVector())
    assert verify_opt_inducing(net, lat, r, pigou_opt, TollVector({0: F(1, 2)}))


def test_perturbed_flow_fails_wardrop():
    f = compute_equilibrium(TWO, SHIFTED, 3)
    g = Flow({0: f[0] - F(1, 10), 1: f[1] + F(1, 10)}, 3)
    assert not verify_wardrop(TWO, costs_at(SHIFTED, g), g)


def test_zero_flow_is_wardrop():
    assert verify_wardrop(TWO, {0: F(0), 1: F(1)}, Flow({}, 0))


def test_l_instance_examples(pigou, pigou_opt):
    net, lat, _ = pigou
    li = build_l_instance(net, lat, pigou_opt)
    assert li.lengths == {0: F(1, 2), 1: F(1)}
    assert li.used == frozenset({0, 1})
    one = Network([(0, "s", "t")], "s", "t")
    li = build_l_instance(one, {0: LinearLatency(2, 3)}, Flow({0: 2}, 2))
    assert li.lengths[0] == 7
    li = build_l_instance(TWO, SHIFTED, Flow({0: 1}, 1))
    assert li.lengths[1] == 1 and li.used == frozenset({0})


@given(seed=st.integers(0, 10_000), m=st.integers(1, 25),
       r=st.fractions(min_value=0, max_value=30, max_denominator=7))
def test_equilibrium_and_optimum_verify(seed, m, r):
    g = gen_random_sp(seed, m)
    eq = compute_equilibrium(g.network, g.latencies, r)
    assert eq.demand == r
    assert verify_wardrop(g.network, costs_at(g.latencies, eq), eq)
    opt = compute_social_optimum(g.network, g.latencies, r)
    assert verify_social_optimum(g.network, g.latencies, opt)
    assert social_cost(g.network, g.latencies, opt) <= social_cost(g.network, g.latencies, eq)


@given(seed=st.integers(0, 10_000), m=st.integers(1, 12),
       r=st.fractions(min_value=F(1, 5), max_value=10, max_denominator=5))
def test_effective_latency_matches_used_paths(seed, m, r):
    g = gen_random_sp(seed, m)
    tree = build_parse_tree(g.network)
    level = effective_latency(tree, g.latencies)(r)
    f = compute_equilibrium(g.network, g.latencies, r, tree)
    costs = costs_at(g.latencies, f)
    for path in enumerate_st_paths(g.network):
        cost = sum(costs[e] for e in path)
        if all(f[e] > 0 for e in path):
            assert cost == level
        assert cost >= level


@given(seed=st.integers(0, 10_000), m=st.integers(1, 10),
       r=st.fractions(min_value=0, max_value=10, max_denominator=5),
       tolls=st.dictionaries(st.integers(0, 9), st.fractions(min_value=0, max_value=3, max_denominator=4)))
def test_wardrop_agrees_with_path_definition(seed, m, r, tolls):
    g = gen_random_sp(seed, m)
    f = compute_social_optimum(g.network, g.latencies, r)
    costs = {e: g.latencies[e](f[e]) + tolls.get(e, 0) for e in g.network.edge_ids}
    assert verify_wardrop(g.network, costs, f) == is_wardrop_by_paths(g.network, costs, f)


def test_optimum_beats_grid():
    # three routes: a direct link and two parallel-then-series paths
    net = Network([(0, "s", "t"), (1, "s", "u"), (2, "u", "t"), (3, "u", "t")], "s", "t")
    lat = {0: LinearLatency(1, 2), 1: LinearLatency(1, 0), 2: LinearLatency(2, 1), 3: LinearLatency(0, 3)}
    r = F(3)
    opt = compute_social_optimum(net, lat, r)
    best = social_cost(net, lat, opt)
    steps = 24
    for i, j in itertools.product(range(steps + 1), repeat=2):
        if i + j > steps:
            continue
        p0, p2 = r * i / steps, r * j / steps
        p3 = r - p0 - p2
        f = Flow({0: p0, 1: p2 + p3, 2: p2, 3: p3}, r)
        assert social_cost(net, lat, f) >= best
