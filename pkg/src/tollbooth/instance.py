"""Line-oriented text format for instances, flows and tolls.

::

    # comment
    network <n> <m> <s-id> <t-id>
    edge <id> <tail> <head> <a> <b>
    demand <p/q>
    flow <edge-id> <p/q>

Rationals are integers or ``p/q``; they are parsed exactly.  Toll files use
``toll <edge-id> <p/q>`` lines with ``support <k>`` and
``induced-length <p/q>`` trailers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import ParseError
from .flows import Flow, LinearLatency, TollVector
from .network import Edge, Network

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_INT = re.compile(r"^-?\d+$")


def parse_rational(token: str) -> Fraction:
    if not _RATIONAL.match(token):
        raise ValueError(f"not a rational: {token!r}")
    try:
        return Fraction(token)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator: {token!r}") from None


def fmt_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_length(x) -> str:
    if isinstance(x, Fraction) or isinstance(x, int):
        return fmt_fraction(x)
    return "inf"


def _node(token: str):
    return int(token) if _INT.match(token) else token


@dataclass
class Instance:
    network: Network
    latencies: dict[int, LinearLatency]
    demand: Fraction | None = None
    flow: Flow | None = None


def _records(text: str) -> Iterable[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_instance(text: str) -> Instance:
    header = None
    edges: list[Edge] = []
    lat: dict[int, LinearLatency] = {}
    demand = None
    flows: dict[int, Fraction] = {}
    for lineno, tok in _records(text):
        kind = tok[0]
        try:
            if kind == "network":
                if header is not None:
                    raise ParseError("duplicate network header", lineno)
                if len(tok) != 5:
                    raise ParseError("expected: network <n> <m> <s> <t>", lineno)
                header = (int(tok[1]), int(tok[2]), _node(tok[3]), _node(tok[4]))
            elif kind == "edge":
                if len(tok) != 6:
                    raise ParseError("expected: edge <id> <tail> <head> <a> <b>", lineno)
                eid = int(tok[1])
                edges.append(Edge(eid, _node(tok[2]), _node(tok[3])))
                lat[eid] = LinearLatency(parse_rational(tok[4]), parse_rational(tok[5]))
            elif kind == "flow":
                if len(tok) != 3:
                    raise ParseError("expected: flow <edge-id> <p/q>", lineno)
                eid = int(tok[1])
                if eid in flows:
                    raise ParseError(f"duplicate flow for edge {eid}", lineno)
                flows[eid] = parse_rational(tok[2])
            elif kind == "demand":
                if len(tok) != 2 or demand is not None:
                    raise ParseError("expected a single: demand <p/q>", lineno)
                demand = parse_rational(tok[1])
            elif kind in ("toll", "support", "induced-length", "social-cost"):
                continue
            else:
                raise ParseError(f"unknown record {kind!r}", lineno)
        except ParseError:
            raise
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    if header is None:
        raise ParseError("missing network header")
    n, m, s, t = header
    if m != len(edges):
        raise ParseError(f"header declares {m} edges, found {len(edges)}")
    try:
        net = Network(edges, s, t)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    if n != net.n:
        raise ParseError(f"header declares {n} nodes, edges and terminals name {net.n}")
    unknown = [e for e in flows if e not in net]
    if unknown:
        raise ParseError(f"flow on unknown edges {unknown}")
    flow = None
    if flows:
        if demand is None:
            demand = sum((x for e, x in flows.items() if net.edge(e).tail == s), Fraction(0)) - \
                sum((x for e, x in flows.items() if net.edge(e).head == s), Fraction(0))
        flow = Flow(flows, demand)
    return Instance(net, lat, demand, flow)


def format_instance(inst: Instance, comments: Iterable[str] = ()) -> str:
    net = inst.network
    lines = [f"# {c}" for c in comments]
    lines.append(f"network {net.n} {net.m} {net.source} {net.sink}")
    for e in sorted(net.edges, key=lambda e: e.id):
        lat = inst.latencies[e.id]
        lines.append(f"edge {e.id} {e.tail} {e.head} {fmt_fraction(lat.a)} {fmt_fraction(lat.b)}")
    if inst.demand is not None:
        lines.append(f"demand {fmt_fraction(inst.demand)}")
    if inst.flow is not None:
        lines.extend(format_flow(inst.flow))
    return "\n".join(lines) + "\n"


def format_flow(flow: Flow) -> list[str]:
    return [f"flow {e} {fmt_fraction(x)}" for e, x in sorted(flow.values.items()) if x != 0]


def format_tolls(tolls: TollVector, induced_length=None) -> list[str]:
    lines = [f"toll {e} {fmt_fraction(tolls[e])}" for e in tolls.support]
    lines.append(f"support {tolls.size}")
    if induced_length is not None:
        lines.append(f"induced-length {fmt_length(induced_length)}")
    return lines


def parse_tolls(text: str) -> tuple[TollVector, dict[str, str]]:
    tolls: dict[int, Fraction] = {}
    meta: dict[str, str] = {}
    for lineno, tok in _records(text):
        try:
            if tok[0] == "toll":
                if len(tok) != 3:
                    raise ParseError("expected: toll <edge-id> <p/q>", lineno)
                tolls[int(tok[1])] = parse_rational(tok[2])
            elif tok[0] in ("support", "induced-length") and len(tok) == 2:
                meta[tok[0]] = tok[1]
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    try:
        vec = TollVector(tolls)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    if "support" in meta and int(meta["support"]) != vec.size:
        raise ParseError(f"support trailer says {meta['support']}, file tolls {vec.size} edges")
    return vec, meta
