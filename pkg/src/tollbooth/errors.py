"""Exception hierarchy shared by every module."""

from __future__ import annotations


class TollboothError(Exception):
    """Base class for all errors raised by this package."""


class InvalidNetwork(TollboothError, ValueError):
    pass


class NotSeriesParallel(TollboothError):
    """The network cannot be reduced to a single s-t edge.

    ``witness`` lists the (tail, head) pairs left over after exhaustive
    series and parallel reductions.
    """

    def __init__(self, witness: list[tuple[object, object]]):
        self.witness = witness
        pairs = ", ".join(f"{u}->{v}" for u, v in witness[:12])
        more = "" if len(witness) <= 12 else f", ... ({len(witness)} total)"
        super().__init__(f"network is not two-terminal series-parallel; irreducible remainder: {pairs}{more}")


class PathExplosion(TollboothError):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"more than {cap} simple s-t paths")


class InfeasibleFlow(TollboothError, ValueError):
    pass


class NotOptimalFlow(TollboothError, ValueError):
    pass


class NoUsedPath(TollboothError, ValueError):
    pass


class NoUsedEdge(TollboothError, ValueError):
    pass


class LengthTooSmall(TollboothError, ValueError):
    pass


class CapExceeded(TollboothError):
    pass


class NotACover(TollboothError, ValueError):
    pass


class NotAPartition(TollboothError, ValueError):
    pass


class ParseError(TollboothError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
