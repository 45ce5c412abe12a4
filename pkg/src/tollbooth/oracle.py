"""Brute-force ground truth for small instances.

For a fixed set of tollable edges, inducing a length ``L`` is a linear
system in the tolls and ``L``: every used path must sum to ``L``, every
unused path to at least ``L``, and tolls are nonnegative.  The system is
decided exactly by Fourier-Motzkin elimination with ``L`` eliminated last, so
the feasible values of ``L`` come out as an explicit interval.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import CapExceeded
from .flows import LInstance, TollVector
from .mintb import INF, Infinity, Length
from .network import Network, ParseTree, enumerate_st_paths, is_series_parallel, tree_edges

FREE = None  # target meaning "any inducible length"


# -- exact Fourier-Motzkin ---------------------------------------------------

Row = tuple[tuple[Fraction, ...], Fraction]  # coeffs . x <= rhs


def _normalize(coeffs: tuple[Fraction, ...], rhs: Fraction) -> Row:
    scale = max(abs(c) for c in coeffs)
    return tuple(c / scale for c in coeffs), rhs / scale


class _Infeasible(Exception):
    pass


@dataclass
class LinearSystem:
    """Rows ``coeffs . x <= rhs`` and ``coeffs . x == rhs`` over ``nvars`` unknowns.

    The last unknown is kept to the end of elimination so its feasible range
    is read off directly.
    """

    nvars: int
    ineqs: list[Row]
    eqs: list[Row]

    def solve(self) -> _Elimination | None:
        try:
            return _Elimination(self)
        except _Infeasible:
            return None


class _Elimination:
    def __init__(self, system: LinearSystem):
        n = system.nvars
        self.n = n
        keep = n - 1
        ineqs = list(system.ineqs)
        eqs = list(system.eqs)
        self.substitutions: list[tuple[int, tuple[Fraction, ...], Fraction]] = []
        while eqs:
            coeffs, rhs = eqs.pop()
            nz = [j for j in range(n) if coeffs[j] != 0]
            if not nz:
                if rhs != 0:
                    raise _Infeasible
                continue
            pivot = next((j for j in nz if j != keep), keep)
            # x_pivot = (rhs - sum_{k != pivot} c_k x_k) / c_pivot
            cp = coeffs[pivot]
            expr = tuple(Fraction(0) if k == pivot else -coeffs[k] / cp for k in range(n))
            const = rhs / cp
            self.substitutions.append((pivot, expr, const))
            eqs = [_substitute(r, pivot, expr, const) for r in eqs]
            ineqs = [_substitute(r, pivot, expr, const) for r in ineqs]

        substituted = {p for p, _, _ in self.substitutions}
        rows = self._prune(ineqs)
        self.stages: list[tuple[int, list[Row]]] = []
        remaining = [j for j in range(n) if j != keep and j not in substituted]
        while remaining:
            j = min(remaining, key=lambda j: _fm_cost(rows, j))
            remaining.remove(j)
            self.stages.append((j, rows))
            rows = self._prune(_eliminate(rows, j))
        lo: Fraction | None = None
        hi: Fraction | None = None
        if keep not in substituted:
            for coeffs, rhs in rows:
                c = coeffs[keep]
                if c > 0:
                    hi = rhs / c if hi is None else min(hi, rhs / c)
                elif c < 0:
                    lo = rhs / c if lo is None else max(lo, rhs / c)
        if lo is not None and hi is not None and lo > hi:
            raise _Infeasible
        self.keep_fixed = keep in substituted
        self.lo, self.hi = lo, hi

    @staticmethod
    def _prune(rows: Iterable[Row]) -> list[Row]:
        best: dict[tuple[Fraction, ...], Fraction] = {}
        for coeffs, rhs in rows:
            if all(c == 0 for c in coeffs):
                if rhs < 0:
                    raise _Infeasible
                continue
            coeffs, rhs = _normalize(coeffs, rhs)
            if coeffs not in best or rhs < best[coeffs]:
                best[coeffs] = rhs
        return list(best.items())

    def point(self, value: Fraction | None = None) -> list[Fraction]:
        """A feasible point; ``value`` fixes the kept unknown when it is free."""
        x: list[Fraction | None] = [None] * self.n
        keep = self.n - 1
        if not self.keep_fixed:
            if value is None:
                value = self.lo if self.lo is not None else self.hi if self.hi is not None else Fraction(0)
            x[keep] = Fraction(value)
        for j, rows in reversed(self.stages):
            lo = hi = None
            for coeffs, rhs in rows:
                c = coeffs[j]
                if c == 0:
                    continue
                rest = rhs - sum(coeffs[k] * x[k] for k in range(self.n) if k != j and coeffs[k] != 0)
                bound = rest / c
                if c > 0:
                    hi = bound if hi is None else min(hi, bound)
                else:
                    lo = bound if lo is None else max(lo, bound)
            x[j] = lo if lo is not None else hi if hi is not None else Fraction(0)
        for j, expr, const in reversed(self.substitutions):
            x[j] = const + sum(expr[k] * x[k] for k in range(self.n) if expr[k] != 0)
        return [Fraction(0) if v is None else v for v in x]


def _substitute(row: Row, pivot: int, expr: tuple[Fraction, ...], const: Fraction) -> Row:
    coeffs, rhs = row
    c = coeffs[pivot]
    if c == 0:
        return row
    new = tuple(Fraction(0) if k == pivot else coeffs[k] + c * expr[k] for k in range(len(coeffs)))
    return new, rhs - c * const


def _fm_cost(rows: Sequence[Row], j: int) -> int:
    pos = sum(1 for c, _ in rows if c[j] > 0)
    neg = sum(1 for c, _ in rows if c[j] < 0)
    return pos * neg - pos - neg


def _eliminate(rows: Sequence[Row], j: int) -> list[Row]:
    pos = [r for r in rows if r[0][j] > 0]
    neg = [r for r in rows if r[0][j] < 0]
    out = [r for r in rows if r[0][j] == 0]
    for cp, rp in pos:
        for cn, rn in neg:
            a, b = cp[j], -cn[j]
            out.append((tuple(b * x + a * y for x, y in zip(cp, cn)), b * rp + a * rn))
    return out


# -- inducing lengths with a restricted toll set ------------------------------

@dataclass(frozen=True)
class LengthInterval:
    """Feasible induced lengths ``lo <= L <= hi``; ``lo`` is ``None`` when
    unbounded below (no used path)."""

    lo: Fraction | None
    hi: Length

    def __contains__(self, value) -> bool:
        if isinstance(value, Infinity):
            return isinstance(self.hi, Infinity)
        return (self.lo is None or value >= self.lo) and value <= self.hi


class SupportOracle:
    """Answers feasibility questions on one l-instance by enumeration."""

    def __init__(self, linstance: LInstance, path_cap: int = 10_000, paths=None):
        self.linstance = linstance
        self.paths = list(paths) if paths is not None else enumerate_st_paths(linstance.network, path_cap)
        used = linstance.used
        self.used_paths = [p for p in self.paths if all(e in used for e in p)]
        self.path_lengths = [sum((linstance.lengths[e] for e in p), Fraction(0)) for p in self.paths]
        self.edges = sorted(linstance.network.edge_ids)
        self.checks = 0
        self._cache: dict[frozenset[int], tuple[LengthInterval | None, _Elimination | None, list[int]]] = {}

    def _system(self, support: Sequence[int]) -> LinearSystem:
        col = {e: k for k, e in enumerate(support)}
        n = len(support) + 1
        used = self.linstance.used
        eqs, ineqs = [], []
        for p, length in zip(self.paths, self.path_lengths):
            coeffs = [Fraction(0)] * n
            for e in p:
                if e in col:
                    coeffs[col[e]] = Fraction(1)
            if all(e in used for e in p):
                coeffs[-1] = Fraction(-1)
                eqs.append((tuple(coeffs), -length))
            else:
                coeffs = [-c for c in coeffs]
                coeffs[-1] = Fraction(1)
                ineqs.append((tuple(coeffs), length))
        for k in range(len(support)):
            coeffs = [Fraction(0)] * n
            coeffs[k] = Fraction(-1)
            ineqs.append((tuple(coeffs), Fraction(0)))
        return LinearSystem(n, ineqs, eqs)

    def _solve(self, support: Iterable[int]):
        key = frozenset(support)
        if key not in self._cache:
            self.checks += 1
            cols = sorted(key)
            elim = self._system(cols).solve()
            if elim is None:
                self._cache[key] = (None, None, cols)
            elif elim.keep_fixed:
                value = elim.point()[-1]
                self._cache[key] = (LengthInterval(value, value), elim, cols)
            else:
                hi = INF if elim.hi is None else elim.hi
                self._cache[key] = (LengthInterval(elim.lo, hi), elim, cols)
        return self._cache[key]

    def interval(self, support: Iterable[int]) -> LengthInterval | None:
        """Inducible lengths when only ``support`` may be tolled, or ``None``."""
        return self._solve(support)[0]

    def feasible(self, support: Iterable[int], target=FREE) -> bool:
        iv = self.interval(support)
        if iv is None:
            return False
        if target is FREE:
            if not self.used_paths:
                raise ValueError("free target needs at least one used path")
            return True
        return target in iv

    def witness(self, support: Iterable[int], target=FREE) -> tuple[TollVector, Fraction]:
        iv, elim, cols = self._solve(support)
        if iv is None or (target is not FREE and target not in iv):
            raise ValueError("support cannot induce the requested length")
        if isinstance(target, Infinity):
            raise ValueError("no finite witness for an infinite length")
        value = None if target is FREE else Fraction(target)
        x = elim.point(value)
        tolls = {e: x[k] for k, e in enumerate(cols) if x[k] != 0}
        return TollVector(tolls), x[-1]

    def min_support(self, target=FREE, max_size: int | None = None,
                    max_checks: int = 10**6) -> tuple[int, tuple[int, ...]] | None:
        """Smallest tollable edge set (lexicographically first) that induces ``target``."""
        m = len(self.edges)
        top = m if max_size is None else min(m, max_size)
        for k in range(top + 1):
            for combo in itertools.combinations(self.edges, k):
                if self.checks >= max_checks and frozenset(combo) not in self._cache:
                    raise CapExceeded(f"more than {max_checks} subset checks")
                if self.feasible(combo, target):
                    return k, combo
        return None

    def max_inducible(self, count: int) -> Length | None:
        """Largest length inducible with at most ``count`` tolled edges (``None``: infeasible)."""
        # tolls may be zero, so supersets never do worse
        k = min(count, len(self.edges))
        best = None
        for combo in itertools.combinations(self.edges, k):
            iv = self.interval(combo)
            if iv is not None and (best is None or iv.hi > best):
                best = iv.hi
        return best


def feasible_support(linstance: LInstance, paths, support_set, target=FREE) -> bool:
    """Can tolls on ``support_set`` alone induce ``target`` (``FREE``: some length)?"""
    return SupportOracle(linstance, paths=paths).feasible(support_set, target)


def brute_force_mintb(linstance: LInstance, max_support: int | None = None, *, target=FREE,
                      max_checks: int = 10**6, path_cap: int = 10_000) -> tuple[int, TollVector | None] | None:
    """Exhaustive minimum-support tolls; ``None`` if nothing within ``max_support`` works.

    An infinite target has no finite toll vector, so only the size is returned.
    """
    oracle = SupportOracle(linstance, path_cap)
    if target is FREE and not oracle.used_paths:
        raise ValueError("instance has no used s-t path")
    found = oracle.min_support(target, max_size=max_support, max_checks=max_checks)
    if found is None:
        return None
    k, combo = found
    if isinstance(target, Infinity):
        return k, None
    tolls, _ = oracle.witness(combo, target)
    return k, tolls


def _sub_instance(linstance: LInstance, subnetwork) -> LInstance:
    if subnetwork is None:
        return linstance
    if isinstance(subnetwork, Network):
        return linstance.restrict(subnetwork.edge_ids, subnetwork.source, subnetwork.sink)
    return linstance.restrict(tree_edges(subnetwork), subnetwork.source, subnetwork.sink)


def max_inducible_length(linstance: LInstance, subnetwork: ParseTree | Network | None, count: int) -> Length | None:
    """Largest length inducible on ``subnetwork`` with at most ``count`` tolls.

    ``None`` marks that even the smallest inducible length needs more tolls.
    On a subnetwork without used paths the answer is the largest achievable
    shortest-path length.
    """
    return SupportOracle(_sub_instance(linstance, subnetwork)).max_inducible(count)


def oracle_for(linstance: LInstance, subnetwork: ParseTree | Network | None = None) -> SupportOracle:
    return SupportOracle(_sub_instance(linstance, subnetwork))


def is_wardrop_by_paths(net: Network, edge_costs, flow) -> bool:
    """Definitional equilibrium check by path enumeration (small networks only)."""
    paths = enumerate_st_paths(net)
    if flow.demand == 0:
        return True
    cost = [sum((edge_costs[e] for e in p), Fraction(0)) for p in paths]
    used = [c for p, c in zip(paths, cost) if all(flow[e] > 0 for e in p)]
    return bool(used) and max(used) == min(cost)


@dataclass
class NonMonotoneWitness:
    linstance: LInstance
    supports: dict[Fraction, int | None]  # target length -> minimum number of tolls
    shorter: Fraction
    longer: Fraction


_FOUR_NODE_ARCS = (("s", "a"), ("s", "b"), ("a", "b"), ("b", "a"), ("a", "t"), ("b", "t"))


def _four_node_graphs() -> list[Network]:
    out = []
    for k in range(1, len(_FOUR_NODE_ARCS) + 1):
        for arcs in itertools.combinations(_FOUR_NODE_ARCS, k):
            net = Network([(i, u, v) for i, (u, v) in enumerate(arcs)], "s", "t")
            try:
                net.check_solver_input()
            except ValueError:
                continue
            if net.n == 4 and not is_series_parallel(net):
                out.append(net)
    return out


def find_nonmonotone_witness(max_length: int = 3, span: int = 4) -> NonMonotoneWitness | None:
    """Search small non-series-parallel l-instances for a longer target that
    needs strictly fewer tolls than a shorter one.

    Graphs have four nodes, integer lengths in ``0..max_length``, used sets
    that are unions of s-t paths, and integer targets from the longest used
    path up to ``span`` above it.
    """
    for net in _four_node_graphs():
        paths = enumerate_st_paths(net)
        ids = net.edge_ids
        for lens in itertools.product(range(max_length + 1), repeat=len(ids)):
            lengths = {e: Fraction(x) for e, x in zip(ids, lens)}
            seen_used = set()
            for k in range(1, len(paths) + 1):
                for chosen in itertools.combinations(paths, k):
                    used = frozenset(e for p in chosen for e in p)
                    if used in seen_used:
                        continue
                    seen_used.add(used)
                    li = LInstance(net, lengths, used)
                    oracle = SupportOracle(li, paths=paths)
                    top = max(oracle.path_lengths[i] for i, p in enumerate(paths)
                              if all(e in used for e in p))
                    supports: dict[Fraction, int | None] = {}
                    for step in range(span + 1):
                        found = oracle.min_support(top + step)
                        supports[top + step] = found[0] if found else None
                    targets = sorted(supports)
                    for i, short in enumerate(targets):
                        for long in targets[i + 1:]:
                            a, b = supports[short], supports[long]
                            if a is not None and b is not None and b < a:
                                return NonMonotoneWitness(li, supports, short, long)
    return None
