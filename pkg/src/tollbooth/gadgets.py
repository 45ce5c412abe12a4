"""Reduction instances from vertex cover and partition, and random SP networks.

Both reductions come with a known optimal flow and, for YES certificates,
explicit toll vectors.  Edge names follow the usual labels of the
constructions (``e1_3`` is the first gadget edge of vertex 3, ``g2_1`` the
second cross edge of graph edge 1, ``c1_2`` a parallel middle edge of
element 2, ``h`` the bypass edge).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import NotACover, NotAPartition
from .flows import Flow, LinearLatency, LInstance, TollVector
from .network import Edge, Network, enumerate_st_paths

HALF = Fraction(1, 2)


@dataclass
class GadgetInstance:
    network: Network
    latencies: dict[int, LinearLatency]
    demand: Fraction
    flow: Flow | None
    names: dict[str, int] = field(default_factory=dict)

    def edge(self, name: str) -> int:
        return self.names[name]


class _Builder:
    def __init__(self):
        self.edges: list[Edge] = []
        self.latencies: dict[int, LinearLatency] = {}
        self.flow: dict[int, Fraction] = {}
        self.names: dict[str, int] = {}

    def add(self, name, tail, head, a, b, flow=0):
        eid = len(self.edges)
        self.edges.append(Edge(eid, tail, head))
        self.latencies[eid] = LinearLatency(a, b)
        if flow:
            self.flow[eid] = Fraction(flow)
        self.names[name] = eid
        return eid


@dataclass(frozen=True)
class VcInput:
    """Undirected simple graph on vertices ``1..n``."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge {(u, v)} leaves the vertex range 1..{self.n}")
            key = frozenset((u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {(u, v)}")
            seen.add(key)

    @property
    def m(self) -> int:
        return len(self.edges)

    def is_cover(self, cover: Iterable[int]) -> bool:
        c = set(cover)
        return all(u in c or v in c for u, v in self.edges)


def gen_vc_gadget(vc: VcInput) -> GadgetInstance:
    """Vertex-cover reduction network, demand ``2n`` and its optimal flow.

    Each vertex gets a four-node gadget whose two inner paths carry one unit
    each; cross edges for graph edges and the terminal shortcuts stay empty.
    """
    b = _Builder()
    s, t = "s", "t"
    for i in range(1, vc.n + 1):
        a_, b_, c_, d_ = f"a{i}", f"b{i}", f"c{i}", f"d{i}"
        b.add(f"s1_{i}", s, a_, 0, 0, flow=2)
        b.add(f"e1_{i}", a_, b_, HALF, HALF, flow=1)
        b.add(f"e2_{i}", b_, c_, 0, 0, flow=1)
        b.add(f"e3_{i}", c_, d_, HALF, HALF, flow=1)
        b.add(f"e4_{i}", a_, d_, 0, 3, flow=1)
        b.add(f"t1_{i}", d_, t, 0, 0, flow=2)
        b.add(f"s2_{i}", s, b_, 0, Fraction(3, 2))
        b.add(f"t2_{i}", c_, t, 0, Fraction(3, 2))
    for k, (i, j) in enumerate(vc.edges, 1):
        b.add(f"g1_{k}", f"b{i}", f"c{j}", 0, HALF)
        b.add(f"g2_{k}", f"b{j}", f"c{i}", 0, HALF)
    nodes = [s, t] + [f"{x}{i}" for i in range(1, vc.n + 1) for x in "abcd"]
    net = Network(b.edges, s, t, nodes)
    demand = Fraction(2 * vc.n)
    return GadgetInstance(net, b.latencies, demand, Flow(b.flow, demand), b.names)


def known_vc_tolls(vc: VcInput, cover: Iterable[int]) -> TollVector:
    """Half a unit on both outer gadget edges of covered vertices, one unit on
    the middle edge of the others; support ``n + |cover|``."""
    cover = set(cover)
    if not cover <= set(range(1, vc.n + 1)) or not vc.is_cover(cover):
        raise NotACover(f"{sorted(cover)} is not a vertex cover")
    names = gen_vc_gadget(vc).names
    tolls = {}
    for i in range(1, vc.n + 1):
        if i in cover:
            tolls[names[f"e1_{i}"]] = HALF
            tolls[names[f"e3_{i}"]] = HALF
        else:
            tolls[names[f"e2_{i}"]] = Fraction(1)
    return TollVector(tolls)


@dataclass(frozen=True)
class PartitionInput:
    """Positive rationals to be split into two halves of equal sum."""

    alphas: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(Fraction(a) for a in self.alphas)
        if not vals:
            raise ValueError("empty multiset")
        if any(a <= 0 for a in vals):
            raise ValueError("elements must be positive")
        object.__setattr__(self, "alphas", vals)

    @property
    def n(self) -> int:
        return len(self.alphas)

    @property
    def half(self) -> Fraction:
        return sum(self.alphas, Fraction(0)) / 2


def gen_partition_gadget(p: PartitionInput) -> GadgetInstance:
    """Chain of Braess gadgets plus a bypass edge ``h``; demand 4, one unit on ``h``."""
    b = _Builder()
    u = "u1"
    for i, alpha in enumerate(p.alphas, 1):
        w, x, v = f"w{i}", f"x{i}", f"u{i + 1}"
        b.add(f"a_{i}", u, w, alpha / 4, alpha / 2, flow=2)
        b.add(f"c1_{i}", w, x, alpha, 3 * alpha / 2, flow=HALF)
        b.add(f"c2_{i}", w, x, alpha, 3 * alpha / 2, flow=HALF)
        b.add(f"q_{i}", w, v, 0, 4 * alpha, flow=1)
        b.add(f"g_{i}", u, x, 0, 4 * alpha, flow=1)
        b.add(f"b_{i}", x, v, alpha / 4, alpha / 2, flow=2)
        u = v
    s, t = "u1", u
    b.add("h", s, t, 0, 11 * p.half, flow=1)
    nodes = ["u1"] + [v for i in range(1, p.n + 1) for v in (f"w{i}", f"x{i}", f"u{i + 1}")]
    net = Network(b.edges, s, t, nodes)
    demand = Fraction(4)
    return GadgetInstance(net, b.latencies, demand, Flow(b.flow, demand), b.names)


def known_partition_tolls(p: PartitionInput, first: Iterable[int], second: Iterable[int]) -> TollVector:
    """Tolls for a YES certificate; indices are 1-based positions in ``p.alphas``.

    Elements of the first half are tolled on ``a`` and ``b``, the others on
    both parallel middle edges.
    """
    first, second = set(first), set(second)
    if first & second or first | second != set(range(1, p.n + 1)):
        raise NotAPartition("index sets must split 1..n")
    if sum((p.alphas[i - 1] for i in first), Fraction(0)) != p.half:
        raise NotAPartition("halves have different sums")
    names = gen_partition_gadget(p).names
    tolls = {}
    for i in first:
        tolls[names[f"a_{i}"]] = p.alphas[i - 1]
        tolls[names[f"b_{i}"]] = p.alphas[i - 1]
    for i in second:
        tolls[names[f"c1_{i}"]] = p.alphas[i - 1]
        tolls[names[f"c2_{i}"]] = p.alphas[i - 1]
    return TollVector(tolls)


def gen_random_sp(seed: int, target_m: int, coeff_bound: int = 5) -> GadgetInstance:
    """Random series-parallel network grown from one edge.

    Each step picks an edge and either subdivides it (series) or doubles it
    (parallel).  Coefficients are integers in ``[0, coeff_bound]`` with a
    positive slope or intercept; the demand is a random positive rational.
    No flow is attached.
    """
    if target_m < 1:
        raise ValueError("target_m must be positive")
    rng = random.Random(seed)
    edges: list[list] = [[0, 0, 1]]
    next_node = 2
    while len(edges) < target_m:
        e = edges[rng.randrange(len(edges))]
        if rng.random() < 0.5:
            mid = next_node
            next_node += 1
            edges.append([len(edges), mid, e[2]])
            e[2] = mid
        else:
            edges.append([len(edges), e[1], e[2]])
    latencies = {}
    for eid, _, _ in edges:
        a = rng.randint(0, coeff_bound)
        c = rng.randint(0 if a else 1, max(coeff_bound, 1))
        latencies[eid] = LinearLatency(a, c)
    net = Network([Edge(*e) for e in edges], 0, 1)
    demand = Fraction(rng.randint(1, 4 * target_m), rng.randint(1, 4))
    return GadgetInstance(net, latencies, demand, None)


def used_patterns(net: Network) -> list[frozenset[int]]:
    """Every distinct nonempty union of s-t paths, sorted for determinism."""
    found: set[frozenset[int]] = set()
    for path in enumerate_st_paths(net):
        p = frozenset(path)
        found |= {p | q for q in found}
        found.add(p)
    return sorted(found, key=lambda u: (len(u), sorted(u)))


def random_l_instances(seed: int, count: int, max_m: int = 8, max_length: int = 6) -> Iterator[LInstance]:
    """Small SP l-instances covering every used pattern of each random network.

    Networks have 1..max_m edges; each of their used patterns gets fresh
    integer lengths in ``[0, max_length]``.  Stops after ``count`` instances.
    """
    rng = random.Random(seed)
    produced = 0
    net_seed = 0
    while produced < count:
        net = gen_random_sp(seed * 1_000_003 + net_seed, rng.randint(1, max_m)).network
        net_seed += 1
        for used in used_patterns(net):
            lengths = {e: Fraction(rng.randint(0, max_length)) for e in net.edge_ids}
            yield LInstance(net, lengths, used)
            produced += 1
            if produced == count:
                return
