"""Closed intervals with exact rational endpoints.

Endpoints are Fractions, so every operation is exact and the result
encloses the true range of the operation over the operands.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import rat
from .errors import DivByZero, InvalidInterval


class Interval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = rat(lo)
        hi = lo if hi is None else rat(hi)
        if lo > hi:
            raise InvalidInterval(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @staticmethod
    def _co(x) -> "Interval":
        return x if isinstance(x, Interval) else Interval(x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def mag(self) -> Fraction:
        return max(abs(self.lo), abs(self.hi))

    def contains(self, x) -> bool:
        x = rat(x)
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def is_positive(self) -> bool:
        return self.lo > 0

    def is_negative(self) -> bool:
        return self.hi < 0

    def __add__(self, o):
        o = self._co(o)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, o):
        o = self._co(o)
        return Interval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, o):
        return self._co(o) - self

    def __mul__(self, o):
        o = self._co(o)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    def reciprocal(self) -> "Interval":
        if self.contains_zero():
            raise DivByZero(f"division by interval containing zero {self}")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, o):
        return self * self._co(o).reciprocal()

    def __rtruediv__(self, o):
        return self._co(o) * self.reciprocal()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (self ** (-k)).reciprocal()
        if k == 0:
            return Interval(1)
        a, b = self.lo ** k, self.hi ** k
        if k % 2 == 0:
            if self.contains_zero():
                return Interval(0, max(a, b))
            return Interval(min(a, b), max(a, b))
        return Interval(a, b)

    def hull(self, o) -> "Interval":
        o = self._co(o)
        return Interval(min(self.lo, o.lo), max(self.hi, o.hi))

    def __eq__(self, o):
        if not isinstance(o, Interval):
            return NotImplemented
        return self.lo == o.lo and self.hi == o.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"Interval({self.lo}, {self.hi})"

    def __float__(self):
        return float(self.mid)
