"""Univariate exact real-root machinery over Q.

Roots are isolated with Sturm chains and bisection; every returned
interval ``(lo, hi]`` carries a Sturm count of exactly one for the
square-free part. A degenerate interval ``lo == hi`` marks an exact
rational root hit during bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import MultiPoly, VarContext, rat
from .errors import EndpointRoot, InvalidInterval, RemainderError, ZeroPolyError

DEFAULT_WIDTH = Fraction(1, 10**12)


class UniPoly:
    """Dense univariate polynomial; ``coeffs[i]`` multiplies ``var**i``."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable = (), var: str = "x"):
        cs = [rat(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self.var = var

    @classmethod
    def from_roots(cls, roots: Iterable, var: str = "x") -> "UniPoly":
        out = cls([1], var)
        for r in roots:
            out = out * cls([-rat(r), 1], var)
        return out

    @classmethod
    def x(cls, var: str = "x") -> "UniPoly":
        return cls([0, 1], var)

    # -- basics ---------------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        if not self.coeffs:
            raise ZeroPolyError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UniPoly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UniPoly({self.to_multipoly()!s}, var={self.var!r})"

    def _wrap(self, cs) -> "UniPoly":
        return UniPoly(cs, self.var)

    def _co(self, other) -> "UniPoly":
        return other if isinstance(other, UniPoly) else UniPoly([other], self.var)

    def __add__(self, other) -> "UniPoly":
        other = self._co(other)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return self._wrap(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
        )

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return self._wrap(-c for c in self.coeffs)

    def __sub__(self, other) -> "UniPoly":
        return self + (-self._co(other))

    def __rsub__(self, other) -> "UniPoly":
        return self._co(other) - self

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            c = rat(other)
            return self._wrap(x * c for x in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return self._wrap([])
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return self._wrap(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UniPoly":
        out = UniPoly([1], self.var)
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroPolyError("division by the zero polynomial")
        r = list(self.coeffs)
        d = other.degree
        inv = 1 / other.lc
        q = [Fraction(0)] * max(0, len(r) - d)
        for i in range(len(r) - 1, d - 1, -1):
            c = r[i] * inv
            if c:
                q[i - d] = c
                for j, oc in enumerate(other.coeffs):
                    r[i - d + j] -= c * oc
        return self._wrap(q), self._wrap(r[:d] if d > 0 else [])

    def __call__(self, x):
        """Horner evaluation; works for Fractions, floats and intervals."""
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "UniPoly":
        return self._wrap(i * c for i, c in enumerate(self.coeffs) if i)

    def content(self) -> Fraction:
        num, den = 0, 1
        for c in self.coeffs:
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "UniPoly":
        """Integer coefficients with gcd 1 and positive leading coefficient."""
        if not self.coeffs:
            return self
        g = self.content()
        if self.lc < 0:
            g = -g
        return self * (1 / g)

    def monic(self) -> "UniPoly":
        return self * (1 / self.lc)

    def int_coeffs(self) -> list[int]:
        p = self.primitive()
        return [int(c) for c in p.coeffs]

    def shift(self, a) -> "UniPoly":
        """f(x + a) via repeated synthetic division (Taylor shift)."""
        a = rat(a)
        cs = list(self.coeffs)
        n = len(cs)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                cs[j] += a * cs[j + 1]
        return self._wrap(cs)

    def reversed(self) -> "UniPoly":
        return self._wrap(reversed(self.coeffs))

    def is_palindromic(self) -> bool:
        return self.coeffs == tuple(reversed(self.coeffs))

    def sign_at(self, x) -> int:
        v = self(rat(x))
        return (v > 0) - (v < 0)

    def to_multipoly(self, ctx: VarContext | None = None) -> MultiPoly:
        ctx = ctx or VarContext([self.var])
        i = ctx.index(self.var)
        terms = {}
        for k, c in enumerate(self.coeffs):
            if c:
                e = [0] * len(ctx)
                e[i] = k
                terms[tuple(e)] = c
        return MultiPoly(ctx, terms)


def poly_gcd(f: UniPoly, g: UniPoly) -> UniPoly:
    """Primitive gcd (positive leading coefficient) by the Euclidean algorithm."""
    a, b = f.primitive(), g.primitive()
    while b:
        _, r = a.divmod(b)
        a, b = b, r.primitive()
    return a.primitive() if a else a


def exact_divide(f: UniPoly, g: UniPoly) -> UniPoly:
    q, r = f.divmod(g)
    if r:
        raise RemainderError(f"{g!r} does not divide {f!r}")
    return q


def squarefree_part(f: UniPoly) -> UniPoly:
    """f / gcd(f, f'), primitive."""
    if f.is_zero():
        raise ZeroPolyError("square-free part of the zero polynomial")
    if f.degree <= 0:
        return UniPoly([1], f.var)
    g = poly_gcd(f, f.derivative())
    return exact_divide(f, g).primitive()


def cauchy_bound(f: UniPoly) -> Fraction:
    """1 + max |a_i / a_n|: every complex root has modulus strictly below it."""
    if f.degree < 1:
        return Fraction(1)
    lc = abs(f.lc)
    return 1 + max(abs(c) for c in f.coeffs[:-1]) / lc


# -- sign evaluation on integer coefficients -------------------------------


def _int_sign(cs: Sequence[int], x: Fraction) -> int:
    """Sign of sum cs[i] x^i using only integer arithmetic."""
    p, q = x.numerator, x.denominator
    acc = 0
    qp = 1
    for c in reversed(cs):
        acc = acc * p + c * qp
        qp *= q
    # acc = q^deg * f(x); q > 0
    return (acc > 0) - (acc < 0)


def sturm_sequence(f: UniPoly) -> list[UniPoly]:
    """Sturm chain of a square-free f, each member scaled by a positive constant."""
    if f.is_zero():
        raise ZeroPolyError("Sturm chain of the zero polynomial")
    seq = [f.primitive(), f.derivative().primitive()]
    while seq[-1] and seq[-1].degree > 0:
        _, r = seq[-2].divmod(seq[-1])
        if not r:
            break
        g = r.content()
        seq.append(r * (-1 / g))
    return [s for s in seq if s]


class SturmChain:
    """Precomputed Sturm chain; counts distinct real roots in ``(a, b]``."""

    def __init__(self, f: UniPoly, squarefree: bool = False):
        self.f = f if squarefree else squarefree_part(f)
        self.seq = sturm_sequence(self.f)
        # int_coeffs() forces a positive leading coefficient; restore the chain's signs
        self._ints = [s.int_coeffs() if s.lc > 0 else [-c for c in s.int_coeffs()]
                      for s in self.seq]
        self._f_ints = self._ints[0]

    def _variations(self, x) -> int:
        if x is None or x == "+inf":
            signs = [1 if cs[-1] > 0 else -1 for cs in self._ints]
        elif x == "-inf":
            signs = [(1 if cs[-1] > 0 else -1) * (-1) ** (len(cs) - 1) for cs in self._ints]
        else:
            signs = [_int_sign(cs, x) for cs in self._ints]
        signs = [s for s in signs if s]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def sign(self, x: Fraction) -> int:
        return _int_sign(self._f_ints, x)

    def count(self, a, b) -> int:
        """Distinct roots in (a, b]; ``a="-inf"`` / ``b="+inf"`` allowed."""
        for x in (a, b):
            if isinstance(x, Fraction) and self.sign(x) == 0:
                raise EndpointRoot(f"{x} is a root")
        return self._variations(a) - self._variations(b)


def sturm_count(f: UniPoly, a, b) -> int:
    """Number of distinct real roots of f in ``(a, b]``.

    ``b`` may be ``"+inf"`` and ``a`` may be ``"-inf"``. Raises
    :class:`EndpointRoot` if a finite endpoint is a root.
    """
    a = a if a in ("-inf",) else rat(a)
    b = b if b in ("+inf",) else rat(b)
    if isinstance(a, Fraction) and isinstance(b, Fraction) and not a < b:
        raise InvalidInterval(f"need a < b, got ({a}, {b}]")
    return SturmChain(f).count(a, b)


@dataclass(frozen=True)
class IsolatingInterval:
    """``(lo, hi]`` holding exactly one root; ``lo == hi`` is an exact root."""

    lo: Fraction
    hi: Fraction
    root_multiplicity_certified: bool = True

    def __post_init__(self):
        if self.lo > self.hi:
            raise InvalidInterval(f"lo > hi: ({self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def approx(self) -> float:
        return float(self.mid)

    def __contains__(self, x) -> bool:
        x = rat(x)
        return self.lo <= x <= self.hi


def _split_point(chain: SturmChain, a: Fraction, b: Fraction) -> Fraction:
    m = (a + b) / 2
    k = 3
    while chain.sign(m) == 0:
        # nudge off an exact rational root; stays strictly inside (a, b)
        m = (a + b) / 2 + (b - a) / (k * 4)
        k += 1
    return m


def isolate_real_roots(f: UniPoly, positive_only: bool = False) -> list[IsolatingInterval]:
    """One certified interval per distinct real root, sorted ascending."""
    if f.is_zero():
        raise ZeroPolyError("cannot isolate roots of the zero polynomial")
    sf = squarefree_part(f)
    out: list[IsolatingInterval] = []
    if sf.degree < 1:
        return out
    if sf.coeffs[0] == 0:
        if not positive_only:
            out.append(IsolatingInterval(Fraction(0), Fraction(0)))
        sf = UniPoly(sf.coeffs[1:], sf.var)
        if sf.degree < 1:
            return out
    chain = SturmChain(sf, squarefree=True)
    bound = cauchy_bound(sf)
    # nonzero roots satisfy low < |r| < bound, so no span endpoint is a root
    low = 1 / cauchy_bound(sf.reversed())
    spans = [(low, bound)] if positive_only else [(-bound, -low), (low, bound)]
    stack = []
    for a, b in spans:
        n = chain.count(a, b)
        if n:
            stack.append((a, b, n))
    while stack:
        a, b, n = stack.pop()
        if n == 1:
            out.append(IsolatingInterval(a, b))
            continue
        m = _split_point(chain, a, b)
        n_left = chain.count(a, m)
        if n_left:
            stack.append((a, m, n_left))
        if n - n_left:
            stack.append((m, b, n - n_left))
    out.sort(key=lambda iv: iv.lo)
    return out


def refine_root(
    f: UniPoly,
    iv: IsolatingInterval,
    width=DEFAULT_WIDTH,
    *,
    assume_squarefree: bool = False,
) -> IsolatingInterval:
    """Bisect ``iv`` until ``hi - lo <= width``, keeping the same root."""
    width = rat(width)
    if iv.exact:
        if f(iv.lo) != 0:
            raise InvalidInterval(f"{iv.lo} is not a root")
        return iv
    if iv.width <= width:
        return iv
    sf = f if assume_squarefree else squarefree_part(f)
    cs = sf.int_coeffs()
    lo, hi = iv.lo, iv.hi
    s_lo, s_hi = _int_sign(cs, lo), _int_sign(cs, hi)
    if s_hi == 0:
        return IsolatingInterval(hi, hi)
    if s_lo == 0 or s_lo == s_hi:
        raise InvalidInterval(f"no sign change of the square-free part on ({lo}, {hi}]")
    while hi - lo > width:
        m = (lo + hi) / 2
        s = _int_sign(cs, m)
        if s == 0:
            return IsolatingInterval(m, m)
        if s == s_lo:
            lo = m
        else:
            hi = m
    return IsolatingInterval(lo, hi, iv.root_multiplicity_certified)


def real_roots(f: UniPoly, positive_only: bool = False, width=DEFAULT_WIDTH) -> list[IsolatingInterval]:
    """Isolate then refine every root to ``width``."""
    sf = squarefree_part(f)
    return [refine_root(sf, iv, width, assume_squarefree=True)
            for iv in isolate_real_roots(sf, positive_only)]


def loads_univariate(text: str) -> UniPoly:
    """Read a single univariate polynomial from the text format."""
    from .algebra import loads

    ctx, polys = loads(text)
    if len(polys) != 1:
        raise ValueError(f"expected exactly one polynomial, found {len(polys)}")
    f = polys[0]
    used = f.variables()
    return f.to_univariate(used[0] if used else ctx.names[0])


def dumps_univariate(f: UniPoly) -> str:
    from .algebra import dumps

    return dumps([f.to_multipoly()])
