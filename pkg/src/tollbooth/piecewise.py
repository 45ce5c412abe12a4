"""Continuous nondecreasing piecewise-linear functions on [0, inf).

These represent the common latency ``L(x)`` of an equilibrium that routes
``x`` units through a subnetwork.  Series composition adds functions
pointwise; parallel composition adds their inverses, i.e. the amount of flow
each branch absorbs at a given latency level.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class PiecewiseLinearFn:
    """Values ``ys`` at strictly increasing breakpoints ``xs`` (``xs[0] == 0``),
    linear in between, continued past the last breakpoint with ``tail_slope``.
    """

    xs: tuple[Fraction, ...]
    ys: tuple[Fraction, ...]
    tail_slope: Fraction

    def __post_init__(self):
        if not self.xs or self.xs[0] != 0 or len(self.xs) != len(self.ys):
            raise ValueError("breakpoints must start at 0 and match values")
        for i in range(1, len(self.xs)):
            if self.xs[i] <= self.xs[i - 1]:
                raise ValueError("breakpoints must increase strictly")
            if self.ys[i] < self.ys[i - 1]:
                raise ValueError("function must be nondecreasing")
        if self.tail_slope < 0:
            raise ValueError("function must be nondecreasing")

    @classmethod
    def affine(cls, slope, intercept) -> PiecewiseLinearFn:
        return cls((Fraction(0),), (Fraction(intercept),), Fraction(slope))

    @property
    def start(self) -> Fraction:
        return self.ys[0]

    @property
    def flat_from(self) -> Fraction | None:
        """Level at which the function becomes constant forever, if any."""
        return self.ys[-1] if self.tail_slope == 0 else None

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        if x < 0:
            raise ValueError("negative argument")
        i = bisect_right(self.xs, x) - 1
        if i == len(self.xs) - 1:
            return self.ys[i] + self.tail_slope * (x - self.xs[i])
        x0, x1 = self.xs[i], self.xs[i + 1]
        y0, y1 = self.ys[i], self.ys[i + 1]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def pieces(self) -> list[tuple[Fraction, Fraction, Fraction]]:
        """``(from_x, slope, intercept)`` for every segment including the tail."""
        out = []
        for i in range(len(self.xs)):
            if i + 1 < len(self.xs):
                slope = (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i])
            else:
                slope = self.tail_slope
            out.append((self.xs[i], slope, self.ys[i] - slope * self.xs[i]))
        return out

    def level_range(self, c) -> tuple[Fraction, Fraction | None]:
        """Flows ``x`` with ``L(x) == c`` as ``(lo, hi)``; ``hi`` is ``None``
        when unbounded.  Below the start level both ends are 0.
        """
        c = Fraction(c)
        if c < self.ys[0]:
            return Fraction(0), Fraction(0)
        lo = self._first_reaching(c)
        hi = self._last_not_exceeding(c)
        return lo, hi

    def _first_reaching(self, c: Fraction) -> Fraction:
        # smallest x with L(x) >= c, assuming c >= L(0)
        ys = self.ys
        if c <= ys[0]:
            return Fraction(0)
        k = _bisect_left(ys, c)
        if k < len(ys):
            x0, x1, y0, y1 = self.xs[k - 1], self.xs[k], ys[k - 1], ys[k]
            return x0 + (c - y0) * (x1 - x0) / (y1 - y0)
        return self.xs[-1] + (c - ys[-1]) / self.tail_slope if self.tail_slope else _unreachable(c)

    def _last_not_exceeding(self, c: Fraction) -> Fraction | None:
        # largest x with L(x) <= c, or None if unbounded
        ys = self.ys
        k = bisect_right(ys, c)
        if k == len(ys):
            if self.tail_slope == 0:
                return None
            return self.xs[-1] + (c - ys[-1]) / self.tail_slope
        x0, x1, y0, y1 = self.xs[k - 1], self.xs[k], ys[k - 1], ys[k]
        return x0 + (c - y0) * (x1 - x0) / (y1 - y0)

    def __add__(self, other: PiecewiseLinearFn) -> PiecewiseLinearFn:
        return series_sum([self, other])

    def __repr__(self):
        pts = ", ".join(f"({x}, {y})" for x, y in zip(self.xs, self.ys))
        return f"PiecewiseLinearFn([{pts}], tail_slope={self.tail_slope})"


def _bisect_left(seq, value):
    lo, hi = 0, len(seq)
    while lo < hi:
        mid = (lo + hi) // 2
        if seq[mid] < value:
            lo = mid + 1
        else:
            hi = mid
    return lo


def _unreachable(c):
    raise ValueError(f"level {c} is never reached")


def _compact(xs: list[Fraction], ys: list[Fraction], tail: Fraction) -> PiecewiseLinearFn:
    # drop interior breakpoints where the slope does not change
    if len(xs) <= 1:
        return PiecewiseLinearFn(tuple(xs), tuple(ys), tail)
    keep_x, keep_y = [xs[0]], [ys[0]]
    for i in range(1, len(xs)):
        nxt_slope = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]) if i + 1 < len(xs) else tail
        prev_slope = (ys[i] - keep_y[-1]) / (xs[i] - keep_x[-1])
        if prev_slope != nxt_slope:
            keep_x.append(xs[i])
            keep_y.append(ys[i])
    return PiecewiseLinearFn(tuple(keep_x), tuple(keep_y), tail)


def series_sum(fns: Sequence[PiecewiseLinearFn]) -> PiecewiseLinearFn:
    """Pointwise sum."""
    xs = sorted({x for f in fns for x in f.xs})
    ys = [sum((f(x) for f in fns), Fraction(0)) for x in xs]
    tail = sum((f.tail_slope for f in fns), Fraction(0))
    return _compact(xs, ys, tail)


def parallel_sum(fns: Sequence[PiecewiseLinearFn]) -> PiecewiseLinearFn:
    """Common-latency function of branches sharing both terminals.

    At every level ``c`` the branches together absorb the sum of their
    individual flows at ``c``; breakpoints of the result can only sit at
    breakpoint levels of the inputs.
    """
    if len(fns) == 1:
        return fns[0]
    c0 = min(f.start for f in fns)
    levels = sorted({y for f in fns for y in f.ys if y >= c0})
    xs: list[Fraction] = []
    ys: list[Fraction] = []

    def push(x, c):
        if xs and x == xs[-1]:
            return
        xs.append(x)
        ys.append(c)

    for c in levels:
        lo = hi = Fraction(0)
        unbounded = False
        for f in fns:
            a, b = f.level_range(c)
            lo += a
            if b is None:
                unbounded = True
            else:
                hi += b
        push(lo, c)
        if unbounded:
            return _compact(xs, ys, Fraction(0))
        push(hi, c)
    inverse_rate = sum((1 / f.tail_slope for f in fns), Fraction(0))
    return _compact(xs, ys, 1 / inverse_rate)


def split_at_level(fns: Sequence[PiecewiseLinearFn], demand, level) -> list[Fraction]:
    """Route ``demand`` over parallel branches whose common latency is ``level``.

    Each branch takes the least flow it needs to sit at ``level``; the rest is
    shared evenly among branches that are flat at that level, respecting
    their upper limits.
    """
    demand = Fraction(demand)
    ranges = [f.level_range(level) for f in fns]
    shares = [lo for lo, _ in ranges]
    rest = demand - sum(shares, Fraction(0))
    if rest < 0:
        raise ValueError("demand below the flow forced at this level")
    open_ = [i for i, (lo, hi) in enumerate(ranges) if hi is None or hi > lo]
    while rest > 0:
        if not open_:
            raise ValueError("demand above the flow admissible at this level")
        even = rest / len(open_)
        capped = [i for i in open_ if ranges[i][1] is not None and ranges[i][1] - shares[i] <= even]
        if not capped:
            for i in open_:
                shares[i] += even
            break
        for i in capped:
            rest -= ranges[i][1] - shares[i]
            shares[i] = ranges[i][1]
        open_ = [i for i in open_ if i not in capped]
    return shares
