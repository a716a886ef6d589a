from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from conftest import rationals
from einstein_sp.algebra import (
    MonomialOrder,
    MultiPoly,
    VarContext,
    clear_fraction,
    const,
    dumps,
    expr_clear_denominators,
    expr_eval,
    format_poly,
    loads,
    parse_poly,
    poly_arith,
    poly_eval,
    rat_arith,
    var,
)
from einstein_sp.errors import (
    ContextError,
    DivByZero,
    EvalError,
    ParseError,
    UnsupportedDenominator,
)

CTX = VarContext(["x", "y", "z"])
X, Y, Z = (MultiPoly.var(CTX, v) for v in CTX.names)


def polys(ctx=CTX, max_terms=5, max_deg=3):
    n = len(ctx)
    mono = st.tuples(*[st.integers(0, max_deg)] * n)
    return st.dictionaries(mono, rationals(), max_size=max_terms).map(lambda d: MultiPoly(ctx, d))


def points(ctx=CTX):
    return st.fixed_dictionaries({v: rationals() for v in ctx.names})


def to_sympy(f: MultiPoly):
    syms = sp.symbols(f.ctx.names)
    return sp.Add(*[sp.Rational(c.numerator, c.denominator) * sp.Mul(*[s**k for s, k in zip(syms, e)])
                    for e, c in f.items()])


# -- scalars ----------------------------------------------------------------


def test_rational_sum():
    assert rat_arith(Fraction(1, 2), Fraction(1, 3), "add") == Fraction(5, 6)


def test_rational_canonical_sign():
    f = Fraction(-2, 4)
    assert (f.numerator, f.denominator) == (-1, 2)


def test_rational_product_of_squares():
    assert rat_arith(rat_arith(26, 26, "mul"), rat_arith(19, 19, "mul"), "mul") == 244036


def test_rational_division_by_zero():
    with pytest.raises(DivByZero):
        rat_arith(1, 0, "div")


def test_rational_compare():
    assert rat_arith("1/3", "1/2", "cmp") == -1
    assert rat_arith("2/4", "1/2", "cmp") == 0


# -- polynomials ----------------------------------------------------------


def test_difference_of_squares():
    assert poly_arith(X + Y, X - Y, "mul") == X**2 - Y**2


def test_additive_identity():
    f = 3 * X * Y - Fraction(1, 7)
    assert poly_arith(f, MultiPoly(CTX), "add") == f


def test_context_mismatch():
    other = MultiPoly.var(VarContext(["x", "w"]), "x")
    with pytest.raises(ContextError):
        X + other


def test_eval_small():
    assert poly_eval(X**2 + Y, {"x": 2, "y": 3, "z": 0}) == 7


def test_eval_missing_variable():
    with pytest.raises(EvalError):
        poly_eval(X + Z, {"x": 1})


def test_eval_f4_at_all_ones():
    ctx = VarContext(["x1", "x2", "x12", "x13"])
    f4 = parse_poly("-3*x1*x12 + 3*x12*x13^2*x2 - 16*x12*x13^2 + 16*x12*x13 + 4*x13^3 - 4*x13", ctx)
    assert poly_eval(f4, dict.fromkeys(ctx.names, 1)) == 0


@given(polys())
def test_eval_at_zero_is_constant_term(f):
    assert poly_eval(f, dict.fromkeys(CTX.names, 0)) == f.constant_term()


@given(polys(), polys(), polys())
def test_ring_laws(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


@given(polys(), polys(), points())
def test_eval_is_homomorphism(f, g, pt):
    assert poly_eval(f * g, pt) == poly_eval(f, pt) * poly_eval(g, pt)
    assert poly_eval(f + g, pt) == poly_eval(f, pt) + poly_eval(g, pt)


@given(polys(), polys())
def test_product_matches_sympy(f, g):
    assert sp.expand(to_sympy(f * g) - to_sympy(f) * to_sympy(g)) == 0


@given(polys())
def test_text_round_trip(f):
    ctx, (g,) = loads(dumps([f], CTX)) if not f.is_zero() else (CTX, [f])
    assert g == f


def test_parse_parenthesised_and_continued():
    text = "# comment\nvars: x, y\n(x - 1)^2*(y + 1/2) \\\n - 3\n"
    ctx, (f,) = loads(text)
    x, y = (MultiPoly.var(ctx, v) for v in "xy")
    assert f == (x - 1) ** 2 * (y + Fraction(1, 2)) - 3


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_poly("x + * y", CTX)
    with pytest.raises(ParseError):
        parse_poly("x + w", CTX)
    with pytest.raises(ParseError):
        loads("x + y\n")


def test_lead_term_depends_on_order():
    f = X * Z**2 + Y**2
    assert f.lead(MonomialOrder.lex("x", "y", "z"))[1] == (1, 0, 2)
    assert f.lead(MonomialOrder.lex("y", "x", "z"))[1] == (0, 2, 0)


def test_format_is_expanded():
    assert format_poly((X + 1) ** 2) == "x^2 + 2*x + 1"


# -- rational expressions ---------------------------------------------------


def test_clear_reciprocals():
    ctx = VarContext(["x", "y"])
    f = expr_clear_denominators(1 / var("x") - 1 / var("y"), ctx)
    x, y = (MultiPoly.var(ctx, v) for v in "xy")
    assert f == x - y or f == y - x


def test_clear_reciprocals_keeps_sign_when_asked():
    ctx = VarContext(["x", "y"])
    f = expr_clear_denominators(1 / var("x") - 1 / var("y"), ctx, normalize_sign=False)
    x, y = (MultiPoly.var(ctx, v) for v in "xy")
    assert f == y - x


def test_clear_identity():
    ctx = VarContext(["x"])
    assert expr_clear_denominators(var("x") / 1, ctx) == MultiPoly.var(ctx, "x")


def test_non_monomial_denominator_rejected():
    ctx = VarContext(["x"])
    with pytest.raises(UnsupportedDenominator):
        expr_clear_denominators(1 / (var("x") + 1), ctx)


def test_symbolic_denominator_allowed_when_not_strict():
    ctx = VarContext(["x", "n"])
    e = var("x") / (var("n") + 1) - 1 / (var("n") * var("x"))
    num, den = clear_fraction(e, ctx, strict=False)
    for pt in ({"x": 2, "n": 3}, {"x": Fraction(1, 3), "n": 7}):
        assert poly_eval(num, pt) / poly_eval(den, pt) == expr_eval(e, pt)


monomial_exprs = st.recursive(
    st.one_of(
        rationals(-5, 5).map(const),
        st.sampled_from(["x", "y"]).map(var),
    ),
    lambda kids: st.one_of(
        st.tuples(kids, kids).map(lambda t: t[0] + t[1]),
        st.tuples(kids, kids).map(lambda t: t[0] - t[1]),
        st.tuples(kids, kids).map(lambda t: t[0] * t[1]),
        st.tuples(kids, st.sampled_from(["x", "y"])).map(lambda t: t[0] / var(t[1])),
    ),
    max_leaves=8,
)


@given(monomial_exprs, st.fixed_dictionaries({"x": rationals(nonzero=True), "y": rationals(nonzero=True)}))
def test_cleared_numerator_vanishes_with_expression(e, pt):
    ctx = VarContext(["x", "y"])
    f = expr_clear_denominators(e, ctx)
    if not f.is_zero():
        assert f.content() == 1
    assert (poly_eval(f, pt) == 0) == (expr_eval(e, pt) == 0)
