"""Directed s-t multigraphs, series-parallel recognition and parse trees."""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Union

from .errors import InvalidNetwork, NotSeriesParallel, PathExplosion

Node = Hashable


@dataclass(frozen=True)
class Edge:
    id: int
    tail: Node
    head: Node


class Network:
    """A directed multigraph with a distinguished source and sink.

    Parallel edges are allowed; self-loops are not.  Edge ids are integers
    and every per-edge quantity elsewhere in the package is a dict keyed by
    them.
    """

    def __init__(self, edges: Iterable[Edge | tuple[int, Node, Node]], source: Node, sink: Node,
                 nodes: Iterable[Node] | None = None):
        edge_list = [e if isinstance(e, Edge) else Edge(*e) for e in edges]
        if source == sink:
            raise InvalidNetwork("source and sink must differ")
        by_id: dict[int, Edge] = {}
        for e in edge_list:
            if not isinstance(e.id, int) or isinstance(e.id, bool):
                raise InvalidNetwork(f"edge id {e.id!r} is not an integer")
            if e.id in by_id:
                raise InvalidNetwork(f"duplicate edge id {e.id}")
            if e.tail == e.head:
                raise InvalidNetwork(f"edge {e.id} is a self-loop at {e.tail!r}")
            by_id[e.id] = e

        if nodes is None:
            seen: dict[Node, None] = {source: None, sink: None}
            for e in edge_list:
                seen.setdefault(e.tail)
                seen.setdefault(e.head)
            node_list = list(seen)
        else:
            node_list = list(dict.fromkeys(nodes))
            known = set(node_list)
            for v in (source, sink):
                if v not in known:
                    raise InvalidNetwork(f"terminal {v!r} is not a node")
            for e in edge_list:
                if e.tail not in known or e.head not in known:
                    raise InvalidNetwork(f"edge {e.id} has an endpoint outside the node set")

        self.source = source
        self.sink = sink
        self.nodes: tuple[Node, ...] = tuple(node_list)
        self.edges: tuple[Edge, ...] = tuple(edge_list)
        self._by_id = by_id
        self._out: dict[Node, list[Edge]] = defaultdict(list)
        self._in: dict[Node, list[Edge]] = defaultdict(list)
        for e in sorted(edge_list, key=lambda e: e.id):
            self._out[e.tail].append(e)
            self._in[e.head].append(e)

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def edge_ids(self) -> list[int]:
        return [e.id for e in self.edges]

    def edge(self, eid: int) -> Edge:
        return self._by_id[eid]

    def __contains__(self, eid: object) -> bool:
        return eid in self._by_id

    def out_edges(self, v: Node) -> list[Edge]:
        return self._out.get(v, [])

    def in_edges(self, v: Node) -> list[Edge]:
        return self._in.get(v, [])

    def __repr__(self) -> str:
        return f"Network(n={self.n}, m={self.m}, source={self.source!r}, sink={self.sink!r})"

    def restrict(self, edge_ids: Iterable[int], source: Node, sink: Node) -> Network:
        """The subnetwork on ``edge_ids`` with new terminals."""
        return Network([self._by_id[i] for i in edge_ids], source, sink)

    def _reach(self, start: Node, forward: bool) -> set[Node]:
        seen = {start}
        todo = [start]
        while todo:
            v = todo.pop()
            for e in (self.out_edges(v) if forward else self.in_edges(v)):
                w = e.head if forward else e.tail
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return seen

    def check_solver_input(self) -> None:
        """Reject isolated nodes and edges that lie on no s-t path."""
        from_s = self._reach(self.source, True)
        to_t = self._reach(self.sink, False)
        if self.sink not in from_s:
            raise InvalidNetwork("sink is not reachable from source")
        for e in self.edges:
            if e.tail not in from_s or e.head not in to_t:
                raise InvalidNetwork(f"edge {e.id} ({e.tail}->{e.head}) lies on no s-t path")
        touched = {self.source, self.sink}
        for e in self.edges:
            touched.add(e.tail)
            touched.add(e.head)
        stray = [v for v in self.nodes if v not in touched]
        if stray:
            raise InvalidNetwork(f"isolated nodes: {stray[:5]}")

    def topological_order(self) -> list[Node] | None:
        """Kahn's algorithm; ``None`` when the graph has a directed cycle."""
        indeg = {v: 0 for v in self.nodes}
        for e in self.edges:
            indeg[e.head] += 1
        queue = deque(v for v in self.nodes if indeg[v] == 0)
        order = []
        while queue:
            v = queue.popleft()
            order.append(v)
            for e in self.out_edges(v):
                indeg[e.head] -= 1
                if indeg[e.head] == 0:
                    queue.append(e.head)
        return order if len(order) == len(self.nodes) else None


# -- parse trees -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Leaf:
    """A bundle of parallel edges between two terminals."""

    edges: tuple[int, ...]
    source: Node
    sink: Node


@dataclass(frozen=True, eq=False)
class Series:
    left: ParseTree
    right: ParseTree
    source: Node
    sink: Node


@dataclass(frozen=True, eq=False)
class Parallel:
    left: ParseTree
    right: ParseTree
    source: Node
    sink: Node


ParseTree = Union[Leaf, Series, Parallel]


def postorder(tree: ParseTree) -> list[ParseTree]:
    """Children before parents; iterative so deep trees are fine."""
    out: list[ParseTree] = []
    stack: list[tuple[ParseTree, bool]] = [(tree, False)]
    while stack:
        node, expanded = stack.pop()
        if isinstance(node, Leaf) or expanded:
            out.append(node)
            continue
        stack.append((node, True))
        stack.append((node.right, False))
        stack.append((node.left, False))
    return out


def tree_edges(tree: ParseTree) -> list[int]:
    return [eid for node in postorder(tree) if isinstance(node, Leaf) for eid in node.edges]


def signature(tree: ParseTree) -> tuple:
    """Nested-tuple shape of a tree, handy for comparisons in tests."""
    done: dict[int, tuple] = {}
    for node in postorder(tree):
        if isinstance(node, Leaf):
            done[id(node)] = ("L", node.edges)
        else:
            tag = "S" if isinstance(node, Series) else "P"
            done[id(node)] = (tag, done[id(node.left)], done[id(node.right)])
    return done[id(tree)]


def validate_parse_tree(tree: ParseTree, net: Network) -> None:
    """Raise ``ValueError`` unless ``tree`` composes back to ``net`` exactly."""
    seen: list[int] = []
    for node in postorder(tree):
        if isinstance(node, Leaf):
            if not node.edges:
                raise ValueError("empty leaf bundle")
            for eid in node.edges:
                e = net.edge(eid)
                if (e.tail, e.head) != (node.source, node.sink):
                    raise ValueError(f"edge {eid} does not join leaf terminals")
            seen.extend(node.edges)
        elif isinstance(node, Series):
            l, r = node.left, node.right
            if l.sink != r.source or (l.source, r.sink) != (node.source, node.sink):
                raise ValueError("series terminals do not chain")
        else:
            l, r = node.left, node.right
            if not ((l.source, l.sink) == (r.source, r.sink) == (node.source, node.sink)):
                raise ValueError("parallel children do not share terminals")
    if (tree.source, tree.sink) != (net.source, net.sink):
        raise ValueError("root terminals differ from the network's")
    if sorted(seen) != sorted(net.edge_ids):
        raise ValueError("leaf edge multiset differs from the network's edge set")


def build_parse_tree(net: Network) -> ParseTree:
    """Decompose a two-terminal series-parallel network.

    Parallel edges are first grouped into leaf bundles; afterwards internal
    nodes with one incoming and one outgoing connection are contracted
    (series) and any resulting duplicate connection is merged (parallel)
    until nothing changes.
    """
    out_map: dict[Node, dict[Node, ParseTree]] = defaultdict(dict)
    in_map: dict[Node, dict[Node, ParseTree]] = defaultdict(dict)

    bundles: dict[tuple[Node, Node], list[int]] = {}
    for e in net.edges:
        bundles.setdefault((e.tail, e.head), []).append(e.id)
    for (u, w), ids in bundles.items():
        leaf = Leaf(tuple(sorted(ids)), u, w)
        out_map[u][w] = leaf
        in_map[w][u] = leaf

    terminals = {net.source, net.sink}
    queue = deque(v for v in net.nodes if v not in terminals)
    while queue:
        v = queue.popleft()
        if v in terminals or len(in_map[v]) != 1 or len(out_map[v]) != 1:
            continue
        (u, first), = in_map[v].items()
        (w, second), = out_map[v].items()
        if u == w:
            continue
        del in_map[v][u], out_map[u][v], out_map[v][w], in_map[w][v]
        merged: ParseTree = Series(first, second, u, w)
        if w in out_map[u]:
            merged = Parallel(out_map[u][w], merged, u, w)
        out_map[u][w] = merged
        in_map[w][u] = merged
        queue.append(u)
        queue.append(w)

    remaining = [(u, w) for u in out_map for w in out_map[u]]
    if remaining == [(net.source, net.sink)]:
        return out_map[net.source][net.sink]
    raise NotSeriesParallel(sorted(remaining, key=lambda p: (str(p[0]), str(p[1]))))


def is_series_parallel(net: Network) -> bool:
    try:
        build_parse_tree(net)
    except NotSeriesParallel:
        return False
    return True


def iter_st_paths(net: Network) -> Iterator[tuple[int, ...]]:
    """Simple s-t paths as edge-id tuples, in lexicographic edge-id order."""
    path: list[int] = []
    on_path = {net.source}
    stack = [iter(net.out_edges(net.source))]
    while stack:
        e = next(stack[-1], None)
        if e is None:
            stack.pop()
            if path:
                on_path.discard(net.edge(path.pop()).head)
            continue
        if e.head in on_path:
            continue
        if e.head == net.sink:
            yield tuple(path) + (e.id,)
            continue
        path.append(e.id)
        on_path.add(e.head)
        stack.append(iter(net.out_edges(e.head)))


def enumerate_st_paths(net: Network, cap: int = 100_000) -> list[tuple[int, ...]]:
    paths = []
    for p in iter_st_paths(net):
        if len(paths) == cap:
            raise PathExplosion(cap)
        paths.append(p)
    return paths
