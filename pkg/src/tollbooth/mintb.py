"""Minimum-support opt-inducing tolls on series-parallel networks.

Every parse-tree node gets an edge-length list: entry ``(count, length)``
says that ``length`` is the largest value that can be induced on the node's
subnetwork while raising at most ``count`` edge lengths.  Leaves are handled
by sorting, internal nodes by combining their children's lists, and tolls are
then placed by walking the tree top-down from the root's target length.

A subnetwork that contains no used path is constrained only from below (all
its paths must be at least as long as the target), so its list describes the
largest achievable shortest-path length instead; it has no lower bound.
"""

from __future__ import annotations

import functools
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from .errors import InvalidNetwork, LengthTooSmall, NoUsedEdge, NoUsedPath, NotOptimalFlow
from .flows import Flow, Latencies, LInstance, TollVector, build_l_instance, check_flow, verify_social_optimum
from .network import Leaf, Network, Parallel, ParseTree, Series, build_parse_tree, postorder


@functools.total_ordering
class Infinity:
    """Positive infinity for exact lengths; absorbs addition."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __le__(self, other):
        return other is self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __hash__(self):
        return hash("inf")

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"


INF = Infinity()
Length = Union[Fraction, Infinity]


@dataclass(frozen=True)
class Entry:
    count: int
    length: Length
    left: int | None = None
    right: int | None = None


@dataclass
class EdgeLengthList:
    """Entries with consecutive counts and nondecreasing lengths ending at INF.

    ``lower`` is the longest used path of the subnetwork, the smallest length
    that can be induced; ``None`` if the subnetwork has no used path.
    """

    entries: list[Entry]
    lower: Fraction | None

    @property
    def used(self) -> bool:
        return self.lower is not None

    def pairs(self) -> list[tuple[int, Length]]:
        return [(e.count, e.length) for e in self.entries]

    def __len__(self):
        return len(self.entries)


def make_list_pl(lengths: Mapping[int, Fraction], used) -> EdgeLengthList:
    """List for a bundle of parallel edges.

    With the lengths sorted and a trailing INF, tolling the ``i`` shortest
    edges lets any length up to ``l[i+1]`` be induced.  Edges shorter than the
    longest used edge must always be tolled.  An all-unused bundle yields the
    list starting at zero tolls.
    """
    if not lengths:
        raise NoUsedEdge("empty bundle")
    ordered = sorted(lengths.values()) + [INF]
    m = len(lengths)
    used_lengths = [lengths[e] for e in lengths if e in used]
    if used_lengths:
        top = max(used_lengths)
        start = bisect_left(ordered, top, 0, m)
    else:
        top = None
        start = 0
    return EdgeLengthList([Entry(i, ordered[i]) for i in range(start, m + 1)], top)


def _start_index(lst: EdgeLengthList, bound: Fraction | None) -> int:
    if bound is None:
        return 0
    return bisect_left([e.length for e in lst.entries], bound)


def _combine(lst1: EdgeLengthList, lst2: EdgeLengthList, series: bool) -> EdgeLengthList:
    e1, e2 = lst1.entries, lst2.entries
    if series:
        if lst1.used != lst2.used:
            raise InvalidNetwork("series composition of a used and an unused part")
        lower = lst1.lower + lst2.lower if lst1.used else None
        a1 = a2 = 0
        first = e1[0].count + e2[0].count
        last = min(e1[-1].count + e2[0].count, e1[0].count + e2[-1].count)
    else:
        bounds = [b for b in (lst1.lower, lst2.lower) if b is not None]
        lower = max(bounds) if bounds else None
        a1, a2 = _start_index(lst1, lower), _start_index(lst2, lower)
        first = e1[a1].count + e2[a2].count
        last = e1[-1].count + e2[-1].count

    base1, base2 = e1[0].count, e2[0].count
    out = []
    for i in range(first, last + 1):
        best = None
        # counts are consecutive, so j2 is determined by j1
        j1_lo = max(a1, i - base1 - base2 - (len(e2) - 1))
        j1_hi = min(len(e1) - 1, i - base1 - base2 - a2)
        for j1 in range(j1_lo, j1_hi + 1):
            j2 = i - base1 - base2 - j1
            l1, l2 = e1[j1].length, e2[j2].length
            value = l1 + l2 if series else min(l1, l2)
            if best is None or value > best[0]:
                best = (value, j1, j2)
        out.append(Entry(i, best[0], best[1], best[2]))
    return EdgeLengthList(out, lower)


def combine_series(lst1: EdgeLengthList, lst2: EdgeLengthList) -> EdgeLengthList:
    return _combine(lst1, lst2, series=True)


def combine_parallel(lst1: EdgeLengthList, lst2: EdgeLengthList) -> EdgeLengthList:
    return _combine(lst1, lst2, series=False)


def make_list(tree: ParseTree, linstance: LInstance) -> dict[int, EdgeLengthList]:
    """Lists for every node, keyed by ``id(node)``, built bottom-up."""
    lists: dict[int, EdgeLengthList] = {}
    for node in postorder(tree):
        if isinstance(node, Leaf):
            lists[id(node)] = make_list_pl({e: linstance.lengths[e] for e in node.edges}, linstance.used)
        else:
            lists[id(node)] = _combine(lists[id(node.left)], lists[id(node.right)], isinstance(node, Series))
    return lists


def max_used_path_length(tree: ParseTree, linstance: LInstance) -> Fraction:
    """Longest all-used path between the root terminals."""
    best: dict[int, Fraction | None] = {}
    for node in postorder(tree):
        if isinstance(node, Leaf):
            vals = [linstance.lengths[e] for e in node.edges if e in linstance.used]
            best[id(node)] = max(vals) if vals else None
        else:
            l, r = best[id(node.left)], best[id(node.right)]
            if isinstance(node, Series):
                best[id(node)] = l + r if l is not None and r is not None else None
            else:
                both = [v for v in (l, r) if v is not None]
                best[id(node)] = max(both) if both else None
    if best[id(tree)] is None:
        raise NoUsedPath("no used s-t path")
    return best[id(tree)]


def min_edges_to_induce(lst: EdgeLengthList, length: Length) -> tuple[int, int]:
    """``(index, count)`` of the first entry able to induce ``length``."""
    if lst.lower is not None and length < lst.lower:
        raise LengthTooSmall(f"cannot induce {length} below the longest used path {lst.lower}")
    idx = bisect_left([e.length for e in lst.entries], length)
    return idx, lst.entries[idx].count


def place_toll(tree: ParseTree, lists: Mapping[int, EdgeLengthList], linstance: LInstance,
               target: Fraction) -> TollVector:
    """Tolls inducing ``target`` with the fewest tolled edges.

    At a series node the right part gets at most what the chosen entry's
    right pointer certifies and the left part absorbs the rest, never dropping
    below its own lower bound.
    """
    if isinstance(target, Infinity):
        raise ValueError("target length must be finite")
    target = Fraction(target)
    root = lists[id(tree)]
    if root.lower is not None and target < root.lower:
        raise LengthTooSmall(f"cannot induce {target} below the longest used path {root.lower}")
    tolls: dict[int, Fraction] = {}
    stack: list[tuple[ParseTree, Fraction]] = [(tree, target)]
    while stack:
        node, want = stack.pop()
        if isinstance(node, Leaf):
            for e in node.edges:
                if linstance.lengths[e] < want:
                    tolls[e] = want - linstance.lengths[e]
            continue
        if isinstance(node, Parallel):
            stack.append((node.left, want))
            stack.append((node.right, want))
            continue
        lst = lists[id(node)]
        idx, _ = min_edges_to_induce(lst, want)
        entry = lst.entries[idx]
        left, right = lists[id(node.left)], lists[id(node.right)]
        cap_right = right.entries[entry.right].length
        floor_left = left.lower if left.lower is not None else left.entries[0].length
        part_left = floor_left if isinstance(cap_right, Infinity) else max(want - cap_right, floor_left)
        stack.append((node.left, part_left))
        stack.append((node.right, want - part_left))
    return TollVector(tolls)


@dataclass
class MintbSolution:
    tolls: TollVector
    induced_length: Fraction
    tree: ParseTree
    lists: dict[int, EdgeLengthList]
    linstance: LInstance

    @property
    def support(self) -> int:
        return self.tolls.size


def solve_l_instance(linstance: LInstance, tree: ParseTree | None = None,
                     target: Fraction | None = None) -> MintbSolution:
    """Fewest-edge tolls inducing ``target`` (default: the longest used path)."""
    net = linstance.network
    net.check_solver_input()
    linstance.validate()
    if tree is None:
        tree = build_parse_tree(net)
    lists = make_list(tree, linstance)
    lower = lists[id(tree)].lower
    if lower is None:
        raise NoUsedPath("no used s-t path")
    if target is None:
        target = lower
    tolls = place_toll(tree, lists, linstance, target)
    return MintbSolution(tolls, Fraction(target), tree, lists, linstance)


def solve_mintb(net: Network, latencies: Latencies, demand, optimal_flow: Flow, *,
                check_optimal: bool = True, target: Fraction | None = None) -> MintbSolution:
    """Minimum-support opt-inducing tolls for ``optimal_flow`` on a series-parallel network."""
    check_flow(net, optimal_flow)
    if optimal_flow.demand != Fraction(demand):
        raise NotOptimalFlow(f"flow routes {optimal_flow.demand}, instance demands {demand}")
    tree = build_parse_tree(net)
    if check_optimal and not verify_social_optimum(net, latencies, optimal_flow):
        raise NotOptimalFlow("flow is not a social optimum")
    if optimal_flow.demand == 0:
        raise NoUsedPath("zero demand leaves no used path")
    linstance = build_l_instance(net, latencies, optimal_flow)
    return solve_l_instance(linstance, tree, target)


def node_ids(tree: ParseTree) -> dict[int, int]:
    """Stable post-order numbering of parse-tree nodes."""
    return {id(node): k for k, node in enumerate(postorder(tree))}


def format_lists(tree: ParseTree, lists: Mapping[int, EdgeLengthList]) -> list[str]:
    from .instance import fmt_length
    lines = []
    for k, node in enumerate(postorder(tree)):
        body = " ".join(f"({e.count}:{fmt_length(e.length)})" for e in lists[id(node)].entries)
        lines.append(f"list {k} {body}")
    return lines
