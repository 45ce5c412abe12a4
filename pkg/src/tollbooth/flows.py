"""Linear latencies, exact equilibria and social optima, and flow verifiers."""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import InfeasibleFlow, InvalidNetwork
from .network import Leaf, Network, Node, Parallel, ParseTree, Series, build_parse_tree, postorder
from .piecewise import PiecewiseLinearFn, parallel_sum, series_sum, split_at_level

ZERO = Fraction(0)


@dataclass(frozen=True)
class LinearLatency:
    """Latency ``a*x + b`` with ``a, b >= 0``."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.a < 0 or self.b < 0:
            raise ValueError(f"latency coefficients must be nonnegative, got a={self.a}, b={self.b}")

    def __call__(self, x) -> Fraction:
        return self.a * x + self.b

    def marginal(self) -> LinearLatency:
        """``l(x) + x l'(x)`` for a linear latency."""
        return LinearLatency(2 * self.a, self.b)

    def as_function(self) -> PiecewiseLinearFn:
        return PiecewiseLinearFn.affine(self.a, self.b)


Latencies = Mapping[int, LinearLatency]


@dataclass
class Flow:
    """Edge flows (missing edges carry zero) routing ``demand`` from s to t."""

    values: dict[int, Fraction]
    demand: Fraction

    def __post_init__(self):
        self.values = {e: Fraction(v) for e, v in self.values.items()}
        self.demand = Fraction(self.demand)

    def __getitem__(self, eid: int) -> Fraction:
        return self.values.get(eid, ZERO)

    def used(self) -> frozenset[int]:
        return frozenset(e for e, v in self.values.items() if v > 0)


@dataclass
class TollVector:
    tolls: dict[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        self.tolls = {e: Fraction(v) for e, v in self.tolls.items()}
        bad = [e for e, v in self.tolls.items() if v < 0]
        if bad:
            raise ValueError(f"negative toll on edges {bad}")

    def __getitem__(self, eid: int) -> Fraction:
        return self.tolls.get(eid, ZERO)

    @property
    def support(self) -> list[int]:
        return sorted(e for e, v in self.tolls.items() if v > 0)

    @property
    def size(self) -> int:
        return len(self.support)


@dataclass
class LInstance:
    """Frozen edge lengths and the set of edges used by a fixed flow."""

    network: Network
    lengths: dict[int, Fraction]
    used: frozenset[int]

    def __post_init__(self):
        self.lengths = {e: Fraction(v) for e, v in self.lengths.items()}
        self.used = frozenset(self.used)

    def validate(self) -> None:
        net = self.network
        for e in net.edges:
            if e.id not in self.lengths or self.lengths[e.id] < 0:
                raise InvalidNetwork(f"edge {e.id} needs a nonnegative length")
        if not self.used:
            return
        # every used edge must sit on an all-used s-t path
        fwd = _reach(net, net.source, self.used, True)
        bwd = _reach(net, net.sink, self.used, False)
        for eid in self.used:
            e = net.edge(eid)
            if e.tail not in fwd or e.head not in bwd:
                raise InvalidNetwork(f"used edge {eid} is not on any used s-t path")

    def restrict(self, edge_ids, source: Node, sink: Node) -> LInstance:
        ids = list(edge_ids)
        return LInstance(self.network.restrict(ids, source, sink),
                         {e: self.lengths[e] for e in ids},
                         frozenset(e for e in ids if e in self.used))


def _reach(net: Network, start: Node, allowed, forward: bool) -> set[Node]:
    seen = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for e in (net.out_edges(v) if forward else net.in_edges(v)):
            if e.id not in allowed:
                continue
            w = e.head if forward else e.tail
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def check_flow(net: Network, flow: Flow) -> None:
    """Raise ``InfeasibleFlow`` on negative entries, unknown edges or broken conservation."""
    if flow.demand < 0:
        raise InfeasibleFlow("negative demand")
    balance = {v: ZERO for v in net.nodes}
    for eid, x in flow.values.items():
        if eid not in net:
            raise InfeasibleFlow(f"flow on unknown edge {eid}")
        if x < 0:
            raise InfeasibleFlow(f"negative flow on edge {eid}")
        e = net.edge(eid)
        balance[e.tail] -= x
        balance[e.head] += x
    for v, bal in balance.items():
        want = -flow.demand if v == net.source else flow.demand if v == net.sink else ZERO
        if bal != want:
            raise InfeasibleFlow(f"conservation violated at node {v!r}: net inflow {bal}, expected {want}")


def social_cost(net: Network, latencies: Latencies, flow: Flow) -> Fraction:
    check_flow(net, flow)
    return sum((x * latencies[e](x) for e, x in flow.values.items()), ZERO)


# -- equilibria on series-parallel networks ----------------------------------

def _node_functions(tree: ParseTree, latencies: Latencies) -> dict[int, PiecewiseLinearFn]:
    fns: dict[int, PiecewiseLinearFn] = {}
    for node in postorder(tree):
        if isinstance(node, Leaf):
            fns[id(node)] = parallel_sum([latencies[e].as_function() for e in node.edges])
        elif isinstance(node, Series):
            fns[id(node)] = series_sum([fns[id(node.left)], fns[id(node.right)]])
        else:
            fns[id(node)] = parallel_sum([fns[id(node.left)], fns[id(node.right)]])
    return fns


def effective_latency(tree: ParseTree, latencies: Latencies) -> PiecewiseLinearFn:
    """Equilibrium latency of the whole tree as a function of the routed demand."""
    return _node_functions(tree, latencies)[id(tree)]


def _route(tree: ParseTree, latencies: Latencies, demand: Fraction) -> dict[int, Fraction]:
    values: dict[int, Fraction] = {}
    if demand == 0:
        return values
    fns = _node_functions(tree, latencies)
    stack: list[tuple[ParseTree, Fraction]] = [(tree, demand)]
    while stack:
        node, x = stack.pop()
        if x == 0:
            continue
        if isinstance(node, Series):
            stack.append((node.left, x))
            stack.append((node.right, x))
            continue
        level = fns[id(node)](x)
        if isinstance(node, Leaf):
            links = [latencies[e].as_function() for e in node.edges]
            for eid, share in zip(node.edges, split_at_level(links, x, level)):
                if share:
                    values[eid] = share
        else:
            kids = [node.left, node.right]
            shares = split_at_level([fns[id(k)] for k in kids], x, level)
            stack.extend(zip(kids, shares))
    return values


def compute_equilibrium(net: Network, latencies: Latencies, demand, tree: ParseTree | None = None) -> Flow:
    """Exact Wardrop equilibrium of a series-parallel network."""
    demand = Fraction(demand)
    if demand < 0:
        raise ValueError("negative demand")
    if tree is None:
        tree = build_parse_tree(net)
    return Flow(_route(tree, latencies, demand), demand)


def marginal_latencies(latencies: Latencies) -> dict[int, LinearLatency]:
    return {e: lat.marginal() for e, lat in latencies.items()}


def compute_social_optimum(net: Network, latencies: Latencies, demand, tree: ParseTree | None = None) -> Flow:
    """Optimal flow, found as the equilibrium under marginal latencies ``2ax + b``."""
    return compute_equilibrium(net, marginal_latencies(latencies), demand, tree)


# -- verification on arbitrary directed networks ----------------------------

def shortest_distances(net: Network, costs: Mapping[int, Fraction]) -> dict[Node, Fraction]:
    """Dijkstra from the source with exact nonnegative costs; unreachable nodes are absent."""
    dist: dict[Node, Fraction] = {net.source: ZERO}
    tie = itertools.count()
    heap = [(ZERO, next(tie), net.source)]
    done = set()
    while heap:
        d, _, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        for e in net.out_edges(v):
            c = costs[e.id]
            if c < 0:
                raise ValueError(f"negative cost on edge {e.id}")
            nd = d + c
            if e.head not in dist or nd < dist[e.head]:
                dist[e.head] = nd
                heapq.heappush(heap, (nd, next(tie), e.head))
    return dist


def verify_wardrop(net: Network, edge_costs: Mapping[int, Fraction], flow: Flow) -> bool:
    """True iff every edge carrying flow is tight for shortest-path distances.

    Then every path carrying flow costs exactly the s-t distance.
    """
    check_flow(net, flow)
    dist = shortest_distances(net, edge_costs)
    for eid, x in flow.values.items():
        if x <= 0:
            continue
        e = net.edge(eid)
        if e.tail not in dist or dist[e.head] != dist[e.tail] + edge_costs[eid]:
            return False
    return True


def verify_social_optimum(net: Network, latencies: Latencies, flow: Flow) -> bool:
    check_flow(net, flow)
    costs = {e.id: latencies[e.id].marginal()(flow[e.id]) for e in net.edges}
    return verify_wardrop(net, costs, flow)


def tolled_costs(net: Network, latencies: Latencies, flow: Flow, tolls: TollVector) -> dict[int, Fraction]:
    return {e.id: latencies[e.id](flow[e.id]) + tolls[e.id] for e in net.edges}


def verify_opt_inducing(net: Network, latencies: Latencies, demand, flow: Flow, tolls: TollVector) -> bool:
    """True iff ``flow`` is an equilibrium once ``tolls`` are added to the latencies."""
    if Fraction(demand) != flow.demand:
        raise InfeasibleFlow(f"flow routes {flow.demand}, instance demands {demand}")
    return verify_wardrop(net, tolled_costs(net, latencies, flow, tolls), flow)


def build_l_instance(net: Network, latencies: Latencies, flow: Flow) -> LInstance:
    check_flow(net, flow)
    if flow.demand <= 0:
        raise InfeasibleFlow("an l-instance needs positive demand")
    lengths = {e.id: latencies[e.id](flow[e.id]) for e in net.edges}
    return LInstance(net, lengths, flow.used())
