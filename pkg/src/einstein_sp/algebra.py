"""Exact scalars, sparse multivariate polynomials and rational expressions.

Coefficients are :class:`fractions.Fraction` throughout the public API.
Polynomials carry a :class:`VarContext` (an ordered tuple of variable
names); arithmetic between polynomials of different contexts raises
:class:`ContextError`.

The repo-wide text format is::

    vars: x1, x2, x12
    x1^2*x12 - 3/2*x2 + 1
    x12 - 1

Parentheses are accepted on input so that factored data can be stored
in factored form; output is always the expanded canonical form.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import (
    ContextError,
    DivByZero,
    EvalError,
    ParseError,
    UnsupportedDenominator,
)

BigRational = Fraction
Exps = tuple[int, ...]


def rat(x) -> Fraction:
    """Coerce ints, strings like ``"3/4"``, Fractions and gmpy2 mpq to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def rat_arith(a, b, op: str):
    """Exact ``add``/``sub``/``mul``/``div``/``cmp`` on rationals.

    ``cmp`` returns -1, 0 or 1.
    """
    a, b = rat(a), rat(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise DivByZero(f"{a} / 0")
        return a / b
    if op == "cmp":
        return (a > b) - (a < b)
    raise ValueError(f"unknown op {op!r}")


# --------------------------------------------------------------------------
# contexts and orders


class VarContext:
    """Ordered, immutable list of distinct variable names."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ContextError(f"duplicate variable names in {names}")
        for nm in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", nm):
                raise ContextError(f"bad variable name {nm!r}")
        self.names = names
        self._index = {nm: i for i, nm in enumerate(names)}

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ContextError(f"{name!r} not in context {self.names}") from None

    def __contains__(self, name) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __eq__(self, other) -> bool:
        return isinstance(other, VarContext) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"VarContext({', '.join(self.names)})"

    def extend(self, names: Iterable[str], front: bool = False) -> "VarContext":
        names = tuple(names)
        clash = [nm for nm in names if nm in self._index]
        if clash:
            raise ContextError(f"variables {clash} already in context")
        return VarContext(names + self.names if front else self.names + names)


@dataclass(frozen=True)
class MonomialOrder:
    """``lex`` or ``grevlex`` with an explicit variable precedence (largest first)."""

    kind: str
    precedence: tuple[str, ...]

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        object.__setattr__(self, "precedence", tuple(self.precedence))
        if len(set(self.precedence)) != len(self.precedence):
            raise ContextError("precedence list repeats a variable")

    @classmethod
    def lex(cls, *names: str) -> "MonomialOrder":
        return cls("lex", names)

    @classmethod
    def grevlex(cls, *names: str) -> "MonomialOrder":
        return cls("grevlex", names)

    def check(self, ctx: VarContext) -> None:
        if sorted(self.precedence) != sorted(ctx.names):
            raise ContextError(
                f"order precedence {self.precedence} is not a permutation of {ctx.names}"
            )

    def key(self, ctx: VarContext) -> Callable[[Exps], tuple]:
        """Sort key on exponent tuples of ``ctx``; larger key = larger monomial."""
        self.check(ctx)
        perm = tuple(ctx.index(nm) for nm in self.precedence)
        if self.kind == "lex":
            return lambda e: tuple(e[i] for i in perm)
        rev = perm[::-1]
        return lambda e: (sum(e), tuple(-e[i] for i in rev))


def canonical_order(ctx: VarContext) -> MonomialOrder:
    return MonomialOrder("grevlex", ctx.names)


# --------------------------------------------------------------------------
# polynomials


def _clean(terms: Mapping[Exps, Fraction]) -> dict[Exps, Fraction]:
    return {e: c for e, c in terms.items() if c}


class MultiPoly:
    """Sparse polynomial over Q in a fixed :class:`VarContext`.

    Immutable by convention: every operation returns a new object.
    """

    __slots__ = ("ctx", "_terms", "_hash")

    def __init__(self, ctx: VarContext, terms: Mapping[Exps, object] | None = None):
        self.ctx = ctx
        d: dict[Exps, Fraction] = {}
        n = len(ctx)
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n or any(k < 0 for k in e):
                raise ContextError(f"monomial {e} does not fit context {ctx.names}")
            c = rat(c)
            if c:
                d[e] = d.get(e, Fraction(0)) + c
        self._terms = _clean(d)
        self._hash = None

    @classmethod
    def _raw(cls, ctx: VarContext, terms: dict[Exps, Fraction]) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, ctx: VarContext, c) -> "MultiPoly":
        c = rat(c)
        return cls._raw(ctx, {(0,) * len(ctx): c} if c else {})

    @classmethod
    def var(cls, ctx: VarContext, name: str) -> "MultiPoly":
        e = [0] * len(ctx)
        e[ctx.index(name)] = 1
        return cls._raw(ctx, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, ctx: VarContext, exps: Mapping[str, int], coeff=1) -> "MultiPoly":
        e = [0] * len(ctx)
        for nm, k in exps.items():
            e[ctx.index(nm)] = k
        return cls(ctx, {tuple(e): coeff})

    # -- inspection ---------------------------------------------------------

    def items(self):
        return self._terms.items()

    def as_dict(self) -> dict[Exps, Fraction]:
        return dict(self._terms)

    def terms(self, order: MonomialOrder | None = None) -> list[tuple[Fraction, Exps]]:
        """(coefficient, exponents) pairs, descending under ``order`` (default canonical)."""
        key = (order or canonical_order(self.ctx)).key(self.ctx)
        return [(self._terms[e], e) for e in sorted(self._terms, key=key, reverse=True)]

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * len(self.ctx), Fraction(0))

    def coeff(self, exps: Mapping[str, int] | Exps) -> Fraction:
        if isinstance(exps, Mapping):
            e = [0] * len(self.ctx)
            for nm, k in exps.items():
                e[self.ctx.index(nm)] = k
            exps = tuple(e)
        return self._terms.get(tuple(exps), Fraction(0))

    def degree(self, var: str | None = None) -> int:
        """Total degree, or degree in ``var``; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        if var is None:
            return max(sum(e) for e in self._terms)
        i = self.ctx.index(var)
        return max(e[i] for e in self._terms)

    def variables(self) -> tuple[str, ...]:
        used = [False] * len(self.ctx)
        for e in self._terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = True
        return tuple(nm for nm, u in zip(self.ctx.names, used) if u)

    def lead(self, order: MonomialOrder | None = None) -> tuple[Fraction, Exps]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        key = (order or canonical_order(self.ctx)).key(self.ctx)
        e = max(self._terms, key=key)
        return self._terms[e], e

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.ctx != self.ctx:
                raise ContextError(f"context mismatch: {self.ctx.names} vs {other.ctx.names}")
            return other
        return MultiPoly.const(self.ctx, other)

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        d = dict(self._terms)
        for e, c in other._terms.items():
            v = d.get(e)
            if v is None:
                d[e] = c
            else:
                v += c
                if v:
                    d[e] = v
                else:
                    del d[e]
        return MultiPoly._raw(self.ctx, d)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self.ctx, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            c = rat(other)
            if not c:
                return MultiPoly._raw(self.ctx, {})
            return MultiPoly._raw(self.ctx, {e: v * c for e, v in self._terms.items()})
        other = self._coerce(other)
        d: dict[Exps, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                d[e] = d.get(e, 0) + c1 * c2
        return MultiPoly._raw(self.ctx, _clean(d))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if not other.is_constant():
                raise TypeError("use exact_div for polynomial division")
            other = other.constant_term()
        c = rat(other)
        if not c:
            raise DivByZero("polynomial divided by zero")
        return self * (1 / c)

    def __pow__(self, k: int) -> "MultiPoly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = MultiPoly.const(self.ctx, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.ctx == other.ctx and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ctx, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"MultiPoly({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)

    # -- transformations ----------------------------------------------------

    def evaluate(self, point: Mapping[str, object]):
        """Value at ``point`` (name -> value). Values may be any ring elements
        supporting ``+``, ``*`` and ``**`` with Fraction coefficients."""
        names = self.variables()
        missing = [nm for nm in names if nm not in point]
        if missing:
            raise EvalError(f"no value for {missing}")
        idx = [self.ctx.index(nm) for nm in names]
        vals = [point[nm] for nm in names]
        powers: dict[tuple[int, int], object] = {}
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for j, i in enumerate(idx):
                k = e[i]
                if k:
                    pw = powers.get((j, k))
                    if pw is None:
                        pw = powers[(j, k)] = vals[j] ** k
                    term = pw * term
            total = term + total
        return total

    def subs(self, values: Mapping[str, object]) -> "MultiPoly":
        """Substitute rationals or same-context polynomials for variables."""
        idx = {self.ctx.index(nm): v for nm, v in values.items()}
        cache: dict[tuple[int, int], MultiPoly | Fraction] = {}
        acc: dict[Exps, Fraction] = {}
        poly_parts = []
        for e, c in self._terms.items():
            scalar = c
            rest = list(e)
            polyfac = None
            for i, v in idx.items():
                k = e[i]
                if not k:
                    continue
                rest[i] = 0
                pw = cache.get((i, k))
                if pw is None:
                    pw = cache[(i, k)] = (v if isinstance(v, MultiPoly) else rat(v)) ** k
                if isinstance(pw, MultiPoly):
                    polyfac = pw if polyfac is None else polyfac * pw
                else:
                    scalar = scalar * pw
            if polyfac is None:
                key = tuple(rest)
                acc[key] = acc.get(key, 0) + scalar
            else:
                poly_parts.append(polyfac * MultiPoly._raw(self.ctx, {tuple(rest): scalar}))
        out = MultiPoly._raw(self.ctx, _clean(acc))
        for part in poly_parts:
            out = out + part
        return out

    def to_context(self, ctx: VarContext) -> "MultiPoly":
        """Re-express in another context containing every variable actually used."""
        if ctx == self.ctx:
            return self
        moves = []
        for i, nm in enumerate(self.ctx.names):
            if nm in ctx:
                moves.append((i, ctx.index(nm)))
        used = set(self.variables())
        lost = used - set(ctx.names)
        if lost:
            raise ContextError(f"variables {sorted(lost)} missing from target context")
        n = len(ctx)
        d = {}
        for e, c in self._terms.items():
            ne = [0] * n
            for i, j in moves:
                ne[j] = e[i]
            d[tuple(ne)] = c
        return MultiPoly._raw(ctx, d)

    def derivative(self, var: str) -> "MultiPoly":
        i = self.ctx.index(var)
        d = {}
        for e, c in self._terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                d[tuple(ne)] = c * e[i]
        return MultiPoly._raw(self.ctx, d)

    def content(self) -> Fraction:
        """Positive rational g with self/g having coprime integer coefficients."""
        if not self._terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self._terms.values():
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self, positive_lead: bool = True) -> "MultiPoly":
        """Integer-coefficient primitive associate; sign fixed by the canonical
        leading coefficient if ``positive_lead``, else the sign is kept."""
        if not self._terms:
            return self
        g = self.content()
        if positive_lead and self.lead()[0] < 0:
            g = -g
        return self * (1 / g)

    def positive_ratio(self, other: "MultiPoly") -> Fraction | None:
        """The rational r > 0 with self == r * other, else None."""
        other = self._coerce(other)
        if set(self._terms) != set(other._terms) or not self._terms:
            return None
        e0 = next(iter(self._terms))
        r = self._terms[e0] / other._terms[e0]
        if r <= 0:
            return None
        if all(self._terms[e] == r * other._terms[e] for e in self._terms):
            return r
        return None

    def is_positive_multiple_of(self, other: "MultiPoly") -> bool:
        return self.positive_ratio(other) is not None

    def coefficients_in(self, var: str) -> dict[int, "MultiPoly"]:
        """Split as sum_k c_k * var^k with c_k free of ``var``."""
        i = self.ctx.index(var)
        parts: dict[int, dict[Exps, Fraction]] = {}
        for e, c in self._terms.items():
            ne = list(e)
            k = ne[i]
            ne[i] = 0
            parts.setdefault(k, {})[tuple(ne)] = c
        return {k: MultiPoly._raw(self.ctx, d) for k, d in sorted(parts.items())}

    def to_univariate(self, var: str | None = None):
        """Convert to :class:`einstein_sp.univar.UniPoly` (must involve only ``var``)."""
        from .univar import UniPoly

        used = self.variables()
        if var is None:
            if len(used) > 1:
                raise ContextError(f"polynomial is not univariate: {used}")
            var = used[0] if used else self.ctx.names[0]
        if any(nm != var for nm in used):
            raise ContextError(f"polynomial involves {used}, not only {var}")
        i = self.ctx.index(var)
        deg = self.degree(var)
        coeffs = [Fraction(0)] * (deg + 1) if deg >= 0 else []
        for e, c in self._terms.items():
            coeffs[e[i]] = c
        return UniPoly(coeffs, var)


def exact_div(f: MultiPoly, g: MultiPoly, order: MonomialOrder | None = None) -> MultiPoly:
    """Exact quotient f / g; raises RemainderError when g does not divide f."""
    from .errors import RemainderError

    g = f._coerce(g)
    if g.is_zero():
        raise DivByZero("division by the zero polynomial")
    order = order or canonical_order(f.ctx)
    gc, ge = g.lead(order)
    q: dict[Exps, Fraction] = {}
    r = f
    while r:
        rc, re_ = r.lead(order)
        diff = tuple(a - b for a, b in zip(re_, ge))
        if any(k < 0 for k in diff):
            raise RemainderError("polynomial division is not exact")
        c = rc / gc
        q[diff] = c
        r = r - g * MultiPoly._raw(f.ctx, {diff: c})
    return MultiPoly._raw(f.ctx, q)


def poly_arith(f: MultiPoly, g: MultiPoly, op: str) -> MultiPoly:
    if not isinstance(f, MultiPoly) or not isinstance(g, MultiPoly):
        raise TypeError("poly_arith expects two MultiPoly operands")
    if f.ctx != g.ctx:
        raise ContextError(f"context mismatch: {f.ctx.names} vs {g.ctx.names}")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown op {op!r}")


def poly_eval(f: MultiPoly, point: Mapping[str, object]) -> Fraction:
    return f.evaluate({k: rat(v) for k, v in point.items()})


def variables(ctx: VarContext) -> tuple[MultiPoly, ...]:
    return tuple(MultiPoly.var(ctx, nm) for nm in ctx.names)


# --------------------------------------------------------------------------
# text format


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_mono(ctx: VarContext, e: Exps) -> str:
    parts = []
    for nm, k in zip(ctx.names, e):
        if k == 1:
            parts.append(nm)
        elif k:
            parts.append(f"{nm}^{k}")
    return "*".join(parts)


def format_poly(f: MultiPoly, order: MonomialOrder | None = None) -> str:
    if f.is_zero():
        return "0"
    out = []
    for i, (c, e) in enumerate(f.terms(order)):
        mono = _format_mono(f.ctx, e)
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{_format_coeff(mag)}*{mono}"
        else:
            body = _format_coeff(mag)
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 20]!r}")
        num, name, op = m.groups()
        if num is not None:
            toks.append(("num", num))
        elif name is not None:
            toks.append(("name", name))
        else:
            toks.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str, ctx: VarContext):
        self.toks = _tokenize(text)
        self.i = 0
        self.ctx = ctx

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, val=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (val and tok[1] != val):
            raise ParseError(f"expected {val or kind}, got {tok[1]!r}")
        self.i += 1
        return tok[1]

    def parse(self) -> MultiPoly:
        if not self.toks:
            raise ParseError("empty polynomial")
        p = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input at token {self.peek()[1]!r}")
        return p

    def expr(self) -> MultiPoly:
        p = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> MultiPoly:
        p = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant() or q.is_zero():
                    raise ParseError("division only by nonzero constants")
                p = p / q.constant_term()
        return p

    def unary(self) -> MultiPoly:
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> MultiPoly:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            k = int(self.take("num"))
            return base ** k
        return base

    def atom(self) -> MultiPoly:
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return MultiPoly.const(self.ctx, int(val))
        if kind == "name":
            self.take()
            if val not in self.ctx:
                raise ParseError(f"unknown variable {val!r} (context {self.ctx.names})")
            return MultiPoly.var(self.ctx, val)
        if (kind, val) == ("op", "("):
            self.take()
            p = self.expr()
            self.take("op", ")")
            return p
        raise ParseError(f"unexpected token {val!r}")


def parse_poly(text: str, ctx: VarContext) -> MultiPoly:
    return _Parser(text, ctx).parse()


def loads(text: str) -> tuple[VarContext, list[MultiPoly]]:
    """Parse a document in the text format.

    Blank lines and ``#`` comments are ignored. A line ending in ``\\`` is
    joined with the next one (used for long data lines).
    """
    lines = []
    buf = ""
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].rstrip()
        if line.endswith("\\"):
            buf += line[:-1] + " "
            continue
        line = buf + line
        buf = ""
        if line.strip():
            lines.append(line.strip())
    if buf.strip():
        lines.append(buf.strip())
    if not lines or not lines[0].startswith("vars:"):
        raise ParseError("first line must be 'vars: a, b, ...'")
    names = [s.strip() for s in lines[0][len("vars:"):].split(",") if s.strip()]
    ctx = VarContext(names)
    return ctx, [parse_poly(line, ctx) for line in lines[1:]]


def dumps(polys: Sequence[MultiPoly], ctx: VarContext | None = None) -> str:
    if ctx is None:
        if not polys:
            raise ValueError("need a context for an empty document")
        ctx = polys[0].ctx
    head = "vars: " + ", ".join(ctx.names)
    body = [format_poly(p.to_context(ctx)) for p in polys]
    return "\n".join([head, *body]) + "\n"


# --------------------------------------------------------------------------
# rational expressions


class Expr:
    """Node of a rational expression tree; build with ``const``/``var`` and operators."""

    __slots__ = ()

    def __add__(self, o):
        return Add(self, _ex(o))

    def __radd__(self, o):
        return Add(_ex(o), self)

    def __sub__(self, o):
        return Sub(self, _ex(o))

    def __rsub__(self, o):
        return Sub(_ex(o), self)

    def __mul__(self, o):
        return Mul(self, _ex(o))

    def __rmul__(self, o):
        return Mul(_ex(o), self)

    def __truediv__(self, o):
        return Div(self, _ex(o))

    def __rtruediv__(self, o):
        return Div(_ex(o), self)

    def __neg__(self):
        return Sub(Const(Fraction(0)), self)

    def __pow__(self, k: int):
        return IntPow(self, k)


@dataclass(frozen=True, eq=True)
class Const(Expr):
    value: Fraction


@dataclass(frozen=True, eq=True)
class Var(Expr):
    name: str


@dataclass(frozen=True, eq=True)
class Add(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True, eq=True)
class Sub(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True, eq=True)
class Mul(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True, eq=True)
class Div(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True, eq=True)
class IntPow(Expr):
    base: Expr
    k: int


RationalExpr = Expr


def _ex(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, MultiPoly):
        raise TypeError("mixing MultiPoly and Expr; convert with poly_to_expr")
    return Const(rat(x))


def const(x) -> Const:
    return Const(rat(x))


def var(name: str) -> Var:
    return Var(name)


def expr_vars(e: Expr) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Const):
        return set()
    if isinstance(e, IntPow):
        return expr_vars(e.base)
    return expr_vars(e.a) | expr_vars(e.b)


def expr_eval(e: Expr, point: Mapping[str, object]):
    """Evaluate over any field-like values (Fraction, Interval, MultiPoly numerators...)."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        try:
            return point[e.name]
        except KeyError:
            raise EvalError(f"no value for {e.name!r}") from None
    if isinstance(e, IntPow):
        b = expr_eval(e.base, point)
        if e.k >= 0:
            return b ** e.k
        return 1 / (b ** (-e.k))
    a = expr_eval(e.a, point)
    b = expr_eval(e.b, point)
    if isinstance(e, Add):
        return a + b
    if isinstance(e, Sub):
        return a - b
    if isinstance(e, Mul):
        return a * b
    if isinstance(b, (int, Fraction)) and b == 0:
        raise DivByZero("expression denominator evaluates to zero")
    return a / b


def expr_subs(e: Expr, values: Mapping[str, object]) -> Expr:
    """Replace variables by constants or sub-expressions."""
    if isinstance(e, Var):
        if e.name in values:
            return _ex(values[e.name])
        return e
    if isinstance(e, Const):
        return e
    if isinstance(e, IntPow):
        return IntPow(expr_subs(e.base, values), e.k)
    return type(e)(expr_subs(e.a, values), expr_subs(e.b, values))


def poly_to_expr(f: MultiPoly) -> Expr:
    out: Expr | None = None
    for c, e in f.terms():
        t: Expr = Const(c)
        for nm, k in zip(f.ctx.names, e):
            if k:
                t = Mul(t, Var(nm) if k == 1 else IntPow(Var(nm), k))
        out = t if out is None else Add(out, t)
    return out if out is not None else Const(Fraction(0))


# A cleared fraction: numerator polynomial and denominator atoms {atom: multiplicity}.
_Frac = tuple[MultiPoly, dict[MultiPoly, int]]


def _split_denominator(den: MultiPoly, strict: bool) -> tuple[Fraction, dict[MultiPoly, int]]:
    """Write a polynomial denominator as scalar * product of atoms."""
    if den.is_zero():
        raise DivByZero("denominator is the zero polynomial")
    if den.is_constant():
        return den.constant_term(), {}
    if len(den) == 1:
        (e, c), = den.items()
        atoms = {}
        for nm, k in zip(den.ctx.names, e):
            if k:
                atoms[MultiPoly.var(den.ctx, nm)] = k
        return c, atoms
    # monomial gcd of the terms times a non-monomial remainder
    ctx = den.ctx
    g = [min(e[i] for e, _ in den.items()) for i in range(len(ctx))]
    atoms = {MultiPoly.var(ctx, nm): k for nm, k in zip(ctx.names, g) if k}
    rest = MultiPoly._raw(ctx, {tuple(a - b for a, b in zip(e, g)): c for e, c in den.items()})
    if strict:
        raise UnsupportedDenominator(f"non-monomial denominator {format_poly(den)}")
    prim = rest.primitive()
    scale = rest.lead()[0] / prim.lead()[0]
    atoms[prim] = 1
    return scale, atoms


def _clear(e: Expr, ctx: VarContext, strict: bool) -> _Frac:
    if isinstance(e, Const):
        return MultiPoly.const(ctx, e.value), {}
    if isinstance(e, Var):
        return MultiPoly.var(ctx, e.name), {}
    if isinstance(e, IntPow):
        if e.k < 0:
            return _clear(Div(Const(Fraction(1)), IntPow(e.base, -e.k)), ctx, strict)
        n, d = _clear(e.base, ctx, strict)
        return n ** e.k, {a: m * e.k for a, m in d.items()}
    if isinstance(e, Div):
        # split product denominators so each factor becomes its own atom
        if isinstance(e.b, Mul):
            return _clear(Div(Div(e.a, e.b.a), e.b.b), ctx, strict)
        if isinstance(e.b, IntPow) and e.b.k > 1:
            return _clear(Div(Div(e.a, e.b.base), IntPow(e.b.base, e.b.k - 1)), ctx, strict)
    n1, d1 = _clear(e.a, ctx, strict)
    n2, d2 = _clear(e.b, ctx, strict)
    if isinstance(e, (Add, Sub)):
        lcm = dict(d1)
        for a, m in d2.items():
            lcm[a] = max(lcm.get(a, 0), m)
        f1 = n1
        f2 = n2
        for a, m in lcm.items():
            if m - d1.get(a, 0):
                f1 = f1 * a ** (m - d1.get(a, 0))
            if m - d2.get(a, 0):
                f2 = f2 * a ** (m - d2.get(a, 0))
        return (f1 + f2 if isinstance(e, Add) else f1 - f2), lcm
    if isinstance(e, Mul):
        d = dict(d1)
        for a, m in d2.items():
            d[a] = d.get(a, 0) + m
        return n1 * n2, d
    # Div: (n1/d1) / (n2/d2) = n1*d2 / (d1*n2)
    scale, atoms = _split_denominator(n2, strict)
    num = n1 * (1 / scale)
    for a, m in d2.items():
        num = num * a ** m
    d = dict(d1)
    for a, m in atoms.items():
        d[a] = d.get(a, 0) + m
    return num, d


def expr_clear_denominators(
    e: Expr,
    ctx: VarContext,
    *,
    normalize_sign: bool = True,
    strict: bool = True,
) -> MultiPoly:
    """Numerator of ``e`` over a common denominator, made primitive.

    With ``strict`` every denominator must be a monomial (otherwise
    :class:`UnsupportedDenominator`); ``strict=False`` also accepts
    polynomial factors such as ``n + 1`` and keeps them as opaque atoms.
    The sign follows the canonical leading coefficient when
    ``normalize_sign`` is set, and is otherwise that of
    ``e * (common denominator)``.
    """
    for nm in expr_vars(e):
        ctx.index(nm)
    num, _ = _clear(e, ctx, strict)
    return num.primitive(positive_lead=normalize_sign)


def clear_fraction(e: Expr, ctx: VarContext, strict: bool = True) -> tuple[MultiPoly, MultiPoly]:
    """(numerator, denominator) with e == numerator / denominator exactly."""
    num, atoms = _clear(e, ctx, strict)
    den = MultiPoly.const(ctx, 1)
    for a, m in atoms.items():
        den = den * a ** m
    return num, den
