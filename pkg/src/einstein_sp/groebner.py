"""Reduced Groebner bases over Q.

Buchberger's algorithm with the normal selection strategy and the
Gebauer-Moeller form of Buchberger's two criteria. Lex bases of
zero-dimensional ideals are obtained by default from a grevlex basis
followed by FGLM basis conversion; ``method="direct"`` runs Buchberger
under lex instead, and both paths return the same reduced basis.

Internally monomials are packed into Python ints so that the monomial
order is integer comparison, multiplication is addition and divisibility
is one masked subtraction. Coefficients are gmpy2 rationals and basis
elements are kept monic during the computation; the returned basis is
converted back to primitive integer polynomials with positive leading
coefficient.
"""

from __future__ import annotations

import heapq
import json
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2
from gmpy2 import gcd, lcm, mpq, mpz

from .algebra import MonomialOrder, MultiPoly, VarContext, format_poly, parse_poly
from .errors import BudgetExceeded, ContextError, NotZeroDimensional
from .univar import UniPoly

FIELD_BITS = 16
_GUARD = 1 << (FIELD_BITS - 1)
_FMASK = (1 << FIELD_BITS) - 1


@dataclass
class Budget:
    """Resource caps; ``None`` disables a cap."""

    max_pairs: int | None = None
    max_reductions: int | None = None
    max_seconds: float | None = None

    @classmethod
    def from_env(cls, **kw) -> "Budget":
        b = cls(**kw)
        env = os.environ.get("EINSTEIN_SP_BUDGET_SECONDS")
        if env:
            b.max_seconds = float(env)
        return b


@dataclass
class GBStats:
    pairs_total: int = 0
    pairs_reduced: int = 0
    zero_reductions: int = 0
    seconds: float = 0.0
    method: str = "buchberger"

    def as_dict(self) -> dict:
        return {
            "pairs_total": self.pairs_total,
            "pairs_reduced": self.pairs_reduced,
            "zero_reductions": self.zero_reductions,
            "seconds": round(self.seconds, 3),
            "method": self.method,
        }


@dataclass
class IdealBasis:
    ctx: VarContext
    generators: list[MultiPoly]

    def __post_init__(self):
        gens = []
        for g in self.generators:
            if g.ctx != self.ctx:
                raise ContextError(f"generator in context {g.ctx.names}, ideal in {self.ctx.names}")
            if g.is_zero():
                raise ValueError("zero polynomial among the generators")
            gens.append(g)
        self.generators = gens


@dataclass
class GroebnerBasis:
    order: MonomialOrder
    elements: list[MultiPoly]
    ctx: VarContext
    stats: GBStats = field(default_factory=GBStats)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def leading_monomials(self) -> list[tuple[int, ...]]:
        return [g.lead(self.order)[1] for g in self.elements]

    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].is_constant()

    def reduce(self, f: MultiPoly) -> MultiPoly:
        return normal_form(f, self.elements, self.order)

    def contains(self, f: MultiPoly) -> bool:
        return self.reduce(f).is_zero()


class _Ring:
    """Packed-monomial arithmetic for one (context, order) pair."""

    def __init__(self, ctx: VarContext, order: MonomialOrder):
        order.check(ctx)
        self.ctx = ctx
        self.order = order
        self.n = n = len(ctx)
        self.perm = [ctx.index(nm) for nm in order.precedence]
        self.grevlex = order.kind == "grevlex"
        # layout, most significant first: order fields, then plain exponents (ctx order)
        self.n_order_fields = n if self.grevlex else n
        self.n_fields = self.n_order_fields + n
        self.gmask = 0
        for k in range(self.n_fields):
            self.gmask |= _GUARD << (FIELD_BITS * k)
        self.exp_unit = [1 << (FIELD_BITS * (n - 1 - i)) for i in range(n)]

    def encode(self, e: Sequence[int]) -> int:
        n = self.n
        if self.grevlex:
            d = sum(e)
            rev = self.perm[::-1]
            fields = [d] + [d - e[i] for i in rev[:-1]]
        else:
            fields = [e[i] for i in self.perm]
        m = 0
        for v in fields:
            m = (m << FIELD_BITS) | v
        for i in range(n):
            m = (m << FIELD_BITS) | e[i]
        if max(fields, default=0) >= _GUARD:
            raise OverflowError("monomial degree exceeds packed field width")
        return m

    def decode(self, m: int) -> tuple[int, ...]:
        n = self.n
        out = [0] * n
        for i in range(n - 1, -1, -1):
            out[i] = m & _FMASK
            m >>= FIELD_BITS
        return tuple(out)

    def divides(self, a: int, b: int) -> bool:
        g = self.gmask
        return ((b | g) - a) & g == g

    def lcm(self, a: int, b: int) -> int:
        ea, eb = self.decode(a), self.decode(b)
        return self.encode([max(x, y) for x, y in zip(ea, eb)])

    def coprime(self, a: int, b: int) -> bool:
        ea, eb = self.decode(a), self.decode(b)
        return all(not (x and y) for x, y in zip(ea, eb))

    def from_poly_int(self, f: MultiPoly) -> tuple[dict[int, mpz], mpq]:
        """(d, s): integer coefficients d = s * f with the content removed."""
        den = mpz(1)
        for _, c in f.items():
            den = lcm(den, mpz(c.denominator))
        d = {self.encode(e): mpz(c.numerator) * (den // c.denominator) for e, c in f.items()}
        g = _content(d.values()) if d else mpz(1)
        if g != 1:
            d = {m: c // g for m, c in d.items()}
        return d, mpq(den, g)

    def to_poly(self, d: dict[int, mpz], scale=1) -> MultiPoly:
        scale = mpq(scale)
        return MultiPoly._raw(
            self.ctx,
            {self.decode(m): Fraction(int((c * scale).numerator), int((c * scale).denominator))
             for m, c in d.items() if c},
        )


def _content(vals) -> mpz:
    g = mpz(0)
    for v in vals:
        g = gcd(g, v)
        if g == 1:
            break
    return g


def _primitive(d: dict[int, mpz]) -> dict[int, mpz]:
    """Divide out the content and make the leading coefficient positive."""
    g = _content(d.values())
    if d[max(d)] < 0:
        g = -g
    return {m: c // g for m, c in d.items()} if g != 1 else d


class _Reducer:
    """Basis held as primitive integer (lead monomial, lead coefficient, tail) triples.

    Reduction is fraction-free: the dividend is scaled by the reducer's
    leading coefficient at each step and its content is removed
    periodically. The returned scale records the total rational factor.
    """

    CONTENT_EVERY = 8

    def __init__(self, ring: _Ring):
        self.ring = ring
        self.elems: list[tuple[int, mpz, list[tuple[int, mpz]]]] = []
        self.active: list[int] = []
        self.reductions = 0

    def add(self, d: dict[int, mpz]) -> int:
        lm = max(d)
        tail = sorted(((m, c) for m, c in d.items() if m != lm), reverse=True)
        self.elems.append((lm, d[lm], tail))
        return len(self.elems) - 1

    def reduce(self, f: dict[int, mpz], exclude: int | None = None) -> tuple[dict[int, mpz], mpq]:
        """(r, s) with r = s * (fully reduced remainder of f), s a nonzero rational."""
        gm = self.ring.gmask
        cands = [self.elems[i] for i in sorted(self.active, key=lambda i: len(self.elems[i][2]))
                 if i != exclude]
        f = dict(f)
        heap = [-m for m in f]
        heapq.heapify(heap)
        rem: dict[int, mpz] = {}
        scale = mpq(1)
        steps = 0
        pop, push = heapq.heappop, heapq.heappush
        while heap:
            m = -pop(heap)
            c = f.pop(m, None)
            if c is None:
                continue
            mg = m | gm
            for lm, lc, tail in cands:
                if (mg - lm) & gm == gm:
                    break
            else:
                rem[m] = c
                continue
            self.reductions += 1
            steps += 1
            g = gcd(lc, c)
            a, b = lc // g, c // g
            if a != 1:
                for k in f:
                    f[k] *= a
                for k in rem:
                    rem[k] *= a
                scale *= a
            q = m - lm
            for mm, cg in tail:
                t = mm + q
                v = f.get(t)
                if v is None:
                    f[t] = -b * cg
                    push(heap, -t)
                else:
                    v -= b * cg
                    if v:
                        f[t] = v
                    else:
                        del f[t]
            if steps % self.CONTENT_EVERY == 0 and (f or rem):
                g = _content(list(f.values()) + list(rem.values()))
                if g > 1:
                    for k in f:
                        f[k] //= g
                    for k in rem:
                        rem[k] //= g
                    scale /= g
        return rem, scale


def _spoly(ring: _Ring, a, b, lcm: int) -> dict[int, mpz]:
    (lma, ca, ta), (lmb, cb, tb) = a, b
    g = gcd(ca, cb)
    fa, fb = cb // g, ca // g
    qa, qb = lcm - lma, lcm - lmb
    d: dict[int, mpz] = {}
    for m, c in ta:
        d[m + qa] = fa * c
    for m, c in tb:
        t = m + qb
        v = d.get(t, 0) - fb * c
        if v:
            d[t] = v
        else:
            d.pop(t, None)
    return d


def _buchberger_core(ring: _Ring, gens: list[dict[int, mpz]], budget: Budget | None,
                     stats: GBStats) -> list[tuple[int, list]]:
    budget = budget or Budget()
    t0 = time.monotonic()
    red = _Reducer(ring)
    pairs: list[tuple[int, int, int]] = []  # heap of (lcm, i, j)
    alive: set[tuple[int, int]] = set()
    lcms: dict[tuple[int, int], int] = {}

    def check_budget():
        if budget.max_pairs is not None and stats.pairs_total > budget.max_pairs:
            raise BudgetExceeded(f"more than {budget.max_pairs} S-pairs")
        if budget.max_reductions is not None and red.reductions > budget.max_reductions:
            raise BudgetExceeded(f"more than {budget.max_reductions} reduction steps")
        if budget.max_seconds is not None and time.monotonic() - t0 > budget.max_seconds:
            raise BudgetExceeded(f"Groebner basis exceeded {budget.max_seconds:.3g} s")

    def update(h: int):
        lmh = red.elems[h][0]
        # Gebauer-Moeller: new pairs
        C = [(g, ring.lcm(lmh, red.elems[g][0])) for g in red.active]
        D: list[tuple[int, int]] = []
        while C:
            g1, l1 = C.pop()
            cop = ring.coprime(lmh, red.elems[g1][0])
            if cop or (
                not any(ring.divides(l2, l1) for _, l2 in C)
                and not any(ring.divides(l2, l1) for _, l2 in D)
            ):
                D.append((g1, l1))
        E = [(g, l) for g, l in D if not ring.coprime(lmh, red.elems[g][0])]
        # prune old pairs
        dead = []
        for (i, j) in alive:
            l = lcms[(i, j)]
            if (ring.divides(lmh, l)
                    and ring.lcm(red.elems[i][0], lmh) != l
                    and ring.lcm(lmh, red.elems[j][0]) != l):
                dead.append((i, j))
        for p in dead:
            alive.discard(p)
        for g, l in E:
            key = (g, h)
            alive.add(key)
            lcms[key] = l
            heapq.heappush(pairs, (l, g, h))
        stats.pairs_total += len(E)
        red.active = [g for g in red.active if not ring.divides(lmh, red.elems[g][0])] + [h]

    for d in gens:
        r = red.reduce(d)[0] if red.active else d
        if not r:
            continue
        h = red.add(_primitive(r))
        update(h)

    while pairs:
        l, i, j = heapq.heappop(pairs)
        if (i, j) not in alive:
            continue
        alive.discard((i, j))
        check_budget()
        stats.pairs_reduced += 1
        s = _spoly(ring, red.elems[i], red.elems[j], l)
        r = red.reduce(s)[0]
        if not r:
            stats.zero_reductions += 1
            continue
        h = red.add(_primitive(r))
        if red.elems[h][0] == 0:  # unit ideal
            red.active = [h]
            alive.clear()
            break
        update(h)

    # interreduce the minimal basis
    active = sorted(red.active, key=lambda i: red.elems[i][0])
    out = []
    for i in active:
        lm, lc, tail = red.elems[i]
        red.active = [k for k in active if k != i]
        d = dict(tail)
        d[lm] = lc
        r = red.reduce(d)[0] if tail else d
        out.append(_primitive(r))
    out.sort(key=max, reverse=True)
    stats.seconds += time.monotonic() - t0
    return out


def _normalize(ring: _Ring, elems: list[dict[int, mpz]]) -> list[MultiPoly]:
    return [ring.to_poly(d) for d in elems]


def normal_form(f: MultiPoly, basis: Sequence[MultiPoly], order: MonomialOrder) -> MultiPoly:
    """Fully reduced remainder of f modulo ``basis`` (multivariate division)."""
    for g in basis:
        if g.ctx != f.ctx:
            raise ContextError("basis and polynomial contexts differ")
    ring = _Ring(f.ctx, order)
    red = _Reducer(ring)
    for g in basis:
        if g.is_zero():
            continue
        red.active.append(red.add(ring.from_poly_int(g)[0]))
    if f.is_zero():
        return f
    fi, sf = ring.from_poly_int(f)
    r, s = red.reduce(fi)
    return ring.to_poly(r, 1 / (s * sf))


def s_polynomial(f: MultiPoly, g: MultiPoly, order: MonomialOrder) -> MultiPoly:
    ring = _Ring(f.ctx, order)
    red = _Reducer(ring)
    a = red.elems[red.add(ring.from_poly_int(f)[0])]
    b = red.elems[red.add(ring.from_poly_int(g)[0])]
    d = _spoly(ring, a, b, ring.lcm(a[0], b[0]))
    # _spoly carries the factor lc(a) lc(b) / gcd; return lcm/LT(f) f - lcm/LT(g) g
    return ring.to_poly(d, mpq(gcd(a[1], b[1]), a[1] * b[1]))


def buchberger(
    ideal: IdealBasis,
    order: MonomialOrder,
    *,
    budget: Budget | None = None,
    method: str = "auto",
) -> GroebnerBasis:
    """Reduced Groebner basis of ``ideal`` under ``order``.

    ``method``: ``"direct"`` runs Buchberger under ``order``; ``"fglm"``
    computes a grevlex basis then converts (zero-dimensional only);
    ``"auto"`` uses FGLM for lex orders when the ideal turns out to be
    zero-dimensional.
    """
    if not ideal.generators:
        raise ValueError("empty ideal")
    ctx = ideal.ctx
    order.check(ctx)
    if method not in ("auto", "direct", "fglm"):
        raise ValueError(f"unknown method {method!r}")
    if order.kind == "lex" and method in ("auto", "fglm"):
        grev = MonomialOrder("grevlex", order.precedence)
        gb = buchberger(ideal, grev, budget=budget, method="direct")
        if gb.is_unit():
            return GroebnerBasis(order, gb.elements, ctx, gb.stats)
        if method == "fglm" or _is_zero_dim(gb):
            return fglm(gb, order)
        remaining = None
        if budget and budget.max_seconds is not None:
            remaining = Budget(budget.max_pairs, budget.max_reductions,
                               max(budget.max_seconds - gb.stats.seconds, 0.001))
        return buchberger(ideal, order, budget=remaining or budget, method="direct")
    ring = _Ring(ctx, order)
    stats = GBStats(method="buchberger-" + order.kind)
    gens = [ring.from_poly_int(g)[0] for g in ideal.generators]
    elems = _buchberger_core(ring, gens, budget, stats)
    return GroebnerBasis(order, _normalize(ring, elems), ctx, stats)


# --------------------------------------------------------------------------
# FGLM


def _is_zero_dim(gb: GroebnerBasis) -> bool:
    pure = set()
    for e in gb.leading_monomials():
        nz = [i for i, k in enumerate(e) if k]
        if len(nz) == 1:
            pure.add(nz[0])
    return len(pure) == len(gb.ctx)


def standard_monomials(gb: GroebnerBasis) -> list[tuple[int, ...]]:
    """Monomials outside the leading-term ideal (finite for zero-dim ideals)."""
    if not _is_zero_dim(gb):
        raise NotZeroDimensional("leading terms lack a pure power of some variable")
    lts = gb.leading_monomials()
    n = len(gb.ctx)

    def reducible(e):
        return any(all(a <= b for a, b in zip(lt, e)) for lt in lts)

    seen = {(0,) * n}
    out = []
    stack = [(0,) * n]
    if reducible((0,) * n):
        return []
    while stack:
        e = stack.pop()
        out.append(e)
        for i in range(n):
            ne = list(e)
            ne[i] += 1
            ne = tuple(ne)
            if ne not in seen and not reducible(ne):
                seen.add(ne)
                stack.append(ne)
    return out


def fglm(gb: GroebnerBasis, target: MonomialOrder) -> GroebnerBasis:
    """Convert a reduced basis of a zero-dimensional ideal to ``target``."""
    t0 = time.monotonic()
    ctx = gb.ctx
    n = len(ctx)
    src = _Ring(ctx, gb.order)
    red = _Reducer(src)
    for g in gb.elements:
        red.active.append(red.add(src.from_poly_int(g)[0]))
    std = standard_monomials(gb)
    dim = len(std)
    index = {e: k for k, e in enumerate(std)}

    def nf_vector(e) -> list:
        if e in index:
            v = [mpq(0)] * dim
            v[index[e]] = mpq(1)
            return v
        r, s = red.reduce({src.encode(e): mpz(1)})
        v = [mpq(0)] * dim
        for m, c in r.items():
            v[index[src.decode(m)]] = mpq(c) / s
        return v

    # multiplication matrices, column k = NF(x_i * std[k])
    mult = []
    for i in range(n):
        cols = []
        for e in std:
            ne = list(e)
            ne[i] += 1
            cols.append(nf_vector(tuple(ne)))
        mult.append(cols)

    def apply(i: int, vec: list) -> list:
        out = [mpq(0)] * dim
        cols = mult[i]
        for k, c in enumerate(vec):
            if c:
                col = cols[k]
                for r in range(dim):
                    if col[r]:
                        out[r] += c * col[r]
        return out

    tgt = _Ring(ctx, target)
    new_basis: list[tuple[tuple[int, ...], dict]] = []
    staircase: list[tuple[int, ...]] = []
    stair_vecs: dict[tuple[int, ...], list] = {}
    # echelon rows: pivot -> (row, combo over staircase indices)
    echelon: list[tuple[int, list, list]] = []

    def express(vec):
        v = list(vec)
        combo = [mpq(0)] * len(staircase)
        for piv, row, rc in echelon:
            c = v[piv]
            if c:
                for r in range(dim):
                    if row[r]:
                        v[r] -= c * row[r]
                for k in range(len(rc)):
                    if rc[k]:
                        combo[k] += c * rc[k]
        return v, combo

    one = (0,) * n
    cand = [(tgt.encode(one), one, None, None)]
    seen = {one}
    lts: list[tuple[int, ...]] = []
    while cand:
        _, e, src_var, src_mono = heapq.heappop(cand)
        if any(all(a <= b for a, b in zip(lt, e)) for lt in lts):
            continue
        vec = nf_vector(one) if src_var is None else apply(src_var, stair_vecs[src_mono])
        resid, combo = express(vec)
        piv = next((r for r in range(dim) if resid[r]), None)
        if piv is None:
            # e - sum combo_k * staircase_k is in the ideal
            poly = {e: Fraction(1)}
            for k, c in enumerate(combo):
                if c:
                    poly[staircase[k]] = -Fraction(int(c.numerator), int(c.denominator))
            new_basis.append((e, poly))
            lts.append(e)
            continue
        k_new = len(staircase)
        staircase.append(e)
        stair_vecs[e] = vec
        inv = 1 / resid[piv]
        row = [c * inv for c in resid]
        rc = [-c * inv for c in combo] + [inv]
        # keep echelon rows' combos the same length
        for idx, (p, r_, c_) in enumerate(echelon):
            c_.append(mpq(0))
        echelon.append((piv, row, rc))
        del k_new
        for i in range(n):
            ne = list(e)
            ne[i] += 1
            ne = tuple(ne)
            if ne not in seen:
                seen.add(ne)
                heapq.heappush(cand, (tgt.encode(ne), ne, i, e))
    polys = [MultiPoly(ctx, d).primitive(positive_lead=False) for _, d in new_basis]
    polys = [p if p.lead(target)[0] > 0 else -p for p in polys]
    polys.sort(key=lambda p: target.key(ctx)(p.lead(target)[1]), reverse=True)
    stats = GBStats(gb.stats.pairs_total, gb.stats.pairs_reduced, gb.stats.zero_reductions,
                    gb.stats.seconds + time.monotonic() - t0, "buchberger-grevlex+fglm")
    return GroebnerBasis(target, polys, ctx, stats)


# --------------------------------------------------------------------------
# elimination helpers


def eliminant(gb: GroebnerBasis, var: str) -> UniPoly:
    """The basis element involving only ``var``, as a primitive UniPoly."""
    gb.ctx.index(var)
    found = [g for g in gb.elements if set(g.variables()) <= {var} and not g.is_constant()]
    if not found:
        if gb.is_unit():
            raise NotZeroDimensional("ideal is the unit ideal (no solutions)")
        raise NotZeroDimensional(f"no univariate element in {var}")
    g = min(found, key=lambda p: p.degree(var))
    return g.to_univariate(var).primitive()


def saturate_nonzero(
    ideal: IdealBasis,
    factors: Iterable[str | MultiPoly],
    fresh: str = "z",
) -> IdealBasis:
    """Append ``fresh * prod(factors) - 1``, forcing every factor to be nonzero."""
    ctx = ideal.ctx.extend([fresh], front=True)
    gens = [g.to_context(ctx) for g in ideal.generators]
    prod = MultiPoly.var(ctx, fresh)
    for f in factors:
        if isinstance(f, str):
            prod = prod * MultiPoly.var(ctx, f)
        else:
            prod = prod * f.to_context(ctx)
    return IdealBasis(ctx, gens + [prod - 1])


def is_reduced(gb: GroebnerBasis) -> bool:
    """No term of any element is divisible by another element's leading monomial;
    each element primitive with positive leading coefficient."""
    order = gb.order
    lms = gb.leading_monomials()
    for k, g in enumerate(gb.elements):
        c, _ = g.lead(order)
        if c <= 0 or g.content() != 1:
            return False
        for j, lm in enumerate(lms):
            if j == k:
                continue
            for e, _ in g.items():
                if all(a <= b for a, b in zip(lm, e)):
                    return False
    return True


def spolys_reduce_to_zero(gb: GroebnerBasis) -> bool:
    """Buchberger's criterion on the final basis."""
    els = gb.elements
    for i in range(len(els)):
        for j in range(i + 1, len(els)):
            s = s_polynomial(els[i], els[j], gb.order)
            if not normal_form(s, els, gb.order).is_zero():
                return False
    return True


# --------------------------------------------------------------------------
# JSON I/O


def ideal_from_json(doc: dict) -> tuple[IdealBasis, MonomialOrder]:
    ctx = VarContext(doc["vars"])
    od = doc.get("order", {"kind": "grevlex", "precedence": list(ctx.names)})
    order = MonomialOrder(od["kind"], tuple(od.get("precedence", ctx.names)))
    polys = [parse_poly(t, ctx) for t in doc["polys"]]
    return IdealBasis(ctx, polys), order


def basis_to_json(gb: GroebnerBasis) -> dict:
    return {
        "vars": list(gb.ctx.names),
        "order": {"kind": gb.order.kind, "precedence": list(gb.order.precedence)},
        "polys": [format_poly(g, gb.order) for g in gb.elements],
        "stats": gb.stats.as_dict(),
    }


def dumps_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


__all__ = [
    "Budget",
    "GBStats",
    "GroebnerBasis",
    "IdealBasis",
    "basis_to_json",
    "buchberger",
    "eliminant",
    "fglm",
    "ideal_from_json",
    "is_reduced",
    "normal_form",
    "s_polynomial",
    "saturate_nonzero",
    "spolys_reduce_to_zero",
    "standard_monomials",
]

del gmpy2
