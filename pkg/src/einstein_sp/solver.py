"""Einstein-metric systems: assembly, elimination, certified solving, classification.

Pipeline for a concrete spec::

    assemble_system -> saturate_nonzero -> buchberger (lex) -> eliminant
    -> isolate positive roots -> back-substitute over intervals
    -> certify (interval Ricci residual) -> classify

Loci removed by the saturation (x13 = 1 for Wallach spaces, u1 = 1 for
flag fibrations) are solved as separate branches and merged.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import (
    MonomialOrder,
    MultiPoly,
    VarContext,
    expr_clear_denominators,
    expr_subs,
    format_poly,
)
from .errors import BudgetExceeded, NotZeroDimensional, SpecError, UncertifiedSolution
from .geometry import FibrationSpec, ricci_closed_form
from .groebner import Budget, GroebnerBasis, IdealBasis, buchberger, eliminant, fglm, saturate_nonzero
from .interval import Interval
from .univar import (
    IsolatingInterval,
    UniPoly,
    exact_divide,
    isolate_real_roots,
    refine_root,
    squarefree_part,
)

DEFAULT_TOL = Fraction(1, 10**9)
CTOL = 1e-8
COORD_WIDTH = Fraction(1, 10**12)
PARTNER_TOL = 1e-6


@dataclass
class EinsteinSystem:
    spec: FibrationSpec
    normalized_variable: str
    ctx: VarContext
    polys: list[MultiPoly]
    provenance: list[str]

    def text(self) -> str:
        lines = ["vars: " + ", ".join(self.ctx.names)]
        lines += [format_poly(f) for f in self.polys]
        return "\n".join(lines) + "\n"


@dataclass
class EinsteinSolution:
    spec: FibrationSpec
    branch: str
    coords: dict[str, Interval]
    einstein_constant: Interval | None = None
    residual_bound: Fraction | None = None
    classification: str = "Unclassified"
    symmetry_partner: int | None = None
    root_index: int = 0

    def approx(self, var: str) -> float:
        return float(self.coords[var].mid)

    def point(self) -> tuple[float, ...]:
        return tuple(self.approx(v) for v in self.spec.metric_vars)

    def to_json(self, digits: int = 6) -> dict:
        return {
            "spec": str(self.spec),
            "branch": self.branch,
            "coords": {
                v: {
                    "interval": list(_outward(iv)),
                    "approx": round(float(iv.mid), digits),
                }
                for v, iv in self.coords.items()
            },
            "lambda": None if self.einstein_constant is None else {
                "interval": list(_outward(self.einstein_constant)),
                "approx": round(float(self.einstein_constant.mid), digits),
            },
            "residual_bound": None if self.residual_bound is None else float(self.residual_bound),
            "class": self.classification,
            "symmetry_partner": self.symmetry_partner,
        }


def _q(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


_JSON_BITS = 64


def _outward(iv: Interval) -> tuple[str, str]:
    """Endpoints rounded outward to multiples of 2**-64, so the enclosure survives."""
    s = 1 << _JSON_BITS
    lo = Fraction(math.floor(iv.lo * s), s)
    hi = Fraction(math.ceil(iv.hi * s), s)
    return _q(lo), _q(hi)


# --------------------------------------------------------------------------
# assembly


def assemble_system(spec: FibrationSpec) -> EinsteinSystem:
    """Consecutive Ricci differences with the last metric variable set to 1.

    Each polynomial is (r_i - r_j) times a positive common denominator,
    made primitive; its sign is kept.
    """
    if not isinstance(spec, FibrationSpec):
        raise SpecError(f"not a fibration spec: {spec!r}")
    ric = ricci_closed_form(spec)
    labels = spec.labels
    nv = spec.normalized_var
    unknowns = [v for v in spec.metric_vars if v != nv]
    ctx = VarContext(unknowns + (["n", "p"] if spec.symbolic else []))
    polys, prov = [], []
    for a, b in zip(labels, labels[1:]):
        e = expr_subs(ric[a] - ric[b], {nv: 1})
        polys.append(expr_clear_denominators(e, ctx, normalize_sign=False, strict=not spec.symbolic))
        prov.append(f"r{a} - r{b}")
    return EinsteinSystem(spec, nv, ctx, polys, prov)


# --------------------------------------------------------------------------
# branch description


@dataclass
class _Branch:
    name: str
    ctx: VarContext
    polys: list[MultiPoly]
    order: MonomialOrder  # lex, least variable last; saturation variable first
    elim_var: str
    saturate: list  # factors forced nonzero
    fixed: dict[str, Fraction] = field(default_factory=dict)
    strip_factor: UniPoly | None = None  # divided out of the eliminant


def _branches(system: EinsteinSystem, branches: Sequence[str] | None) -> list[_Branch]:
    spec = system.spec
    ctx = system.ctx
    out = []
    if spec.kind == "wallach":
        lex = MonomialOrder.lex("z", "x2", "x1", "x12", "x13")
        out.append(_Branch("generic", ctx, system.polys, lex, "x13",
                           ["x1", "x2", "x12", "x13"],
                           strip_factor=UniPoly([-1, 1], "x13")))
        sub_ctx = VarContext(["x1", "x2", "x12"])
        sub = [f.subs({"x13": 1}).to_context(sub_ctx) for f in system.polys]
        sub = [f for f in sub if not f.is_zero()]
        out.append(_Branch("x13=1", sub_ctx, sub, MonomialOrder.lex("z", "x2", "x1", "x12"),
                           "x12", ["x1", "x2", "x12"], fixed={"x13": Fraction(1)}))
    else:
        if spec.p < 2:
            raise SpecError("flag solver needs p >= 2 (p = 1 has no u1 summand)")
        u1m1 = MultiPoly.var(ctx, "u1") - 1
        lex = MonomialOrder.lex("z", "u0", "u2", "u1")
        out.append(_Branch("generic", ctx, system.polys, lex, "u1", ["u0", "u1", "u2", u1m1]))
        sub_ctx = VarContext(["u0", "u2"])
        sub = [f.subs({"u1": 1}).to_context(sub_ctx) for f in system.polys]
        sub = [f for f in sub if not f.is_zero()]
        out.append(_Branch("u1=1", sub_ctx, sub, MonomialOrder.lex("z", "u0", "u2"),
                           "u2", ["u0", "u2"], fixed={"u1": Fraction(1)}))
    if branches is not None:
        out = [b for b in out if b.name in branches]
    return out


# --------------------------------------------------------------------------
# cache: one grevlex basis per ideal (the expensive step); lex bases by FGLM

_GREVLEX_CACHE: dict[tuple, GroebnerBasis] = {}
_LEX_CACHE: dict[tuple, GroebnerBasis] = {}


def _ideal_key(ideal: IdealBasis) -> tuple:
    return (ideal.ctx.names, tuple(format_poly(g) for g in ideal.generators))


def _lex_basis(ideal: IdealBasis, order: MonomialOrder, budget: Budget | None) -> GroebnerBasis:
    key = _ideal_key(ideal)
    lex = _LEX_CACHE.get(key + (order,))
    if lex is not None:
        return lex
    grev = _GREVLEX_CACHE.get(key)
    if grev is None:
        grev = buchberger(ideal, MonomialOrder.grevlex(*order.precedence), budget=budget, method="direct")
        _GREVLEX_CACHE[key] = grev
    if grev.is_unit():
        lex = GroebnerBasis(order, grev.elements, grev.ctx, grev.stats)
    else:
        try:
            lex = fglm(grev, order)
        except NotZeroDimensional:
            lex = buchberger(ideal, order, budget=budget, method="direct")
    _LEX_CACHE[key + (order,)] = lex
    return lex


def branch_basis(
    spec: FibrationSpec,
    branch: str = "generic",
    budget: Budget | None = None,
    order: MonomialOrder | None = None,
) -> GroebnerBasis:
    """Lex Groebner basis of the saturated ideal of one branch (default order: the solver's)."""
    system = assemble_system(spec)
    (br,) = _branches(system, [branch])
    ideal = saturate_nonzero(IdealBasis(br.ctx, br.polys), br.saturate)
    return _lex_basis(ideal, order or br.order, budget)


def clear_cache() -> None:
    _GREVLEX_CACHE.clear()
    _LEX_CACHE.clear()


# --------------------------------------------------------------------------
# back-substitution


def _eval_iv(f: MultiPoly, box: dict[str, Interval]) -> Interval:
    acc = Interval(0)
    names = f.ctx.names
    for e, c in f.items():
        t = Interval(c)
        for nm, k in zip(names, e):
            if k:
                t = t * box[nm] ** k
        acc = acc + t
    return acc


def _solve_linear(gb: GroebnerBasis, var: str, known: set[str], box: dict[str, Interval]) -> Interval | None:
    """Interval value of ``var`` from a basis element a*var + b with a certified nonzero."""
    for g in gb.elements:
        used = set(g.variables())
        if var not in used or not used <= known | {var} or g.degree(var) != 1:
            continue
        cs = g.coefficients_in(var)
        a = _eval_iv(cs[1], box)
        if a.contains_zero():
            continue
        b = _eval_iv(cs[0], box) if 0 in cs else Interval(0)
        return -b / a
    return None


def _back_substitute(gb: GroebnerBasis, br: _Branch, elim: UniPoly, iv: IsolatingInterval,
                     width: Fraction) -> dict[str, Interval]:
    """Coordinate box for one eliminant root, every coordinate narrower than ``width``."""
    order_vars = [v for v in br.order.precedence if v != "z"]
    w = min(iv.width, width / 1000) if not iv.exact else width
    for _ in range(8):
        riv = refine_root(elim, iv, w, assume_squarefree=True)
        box = {br.elim_var: Interval(riv.lo, riv.hi)}
        known = {br.elim_var}
        ok = True
        for v in reversed(order_vars[:-1]):
            val = _solve_linear(gb, v, known, box)
            if val is None:
                ok = False
                break
            box[v] = val
            known.add(v)
        if ok and all(x.width <= width for x in box.values()):
            return box
        w = w / 10**6
    raise UncertifiedSolution(
        f"back-substitution failed near {br.elim_var} ~ {float(iv.mid):.6g} in branch {br.name}"
    )


# --------------------------------------------------------------------------
# certification and classification


def residual(spec: FibrationSpec, coords: dict[str, object]) -> tuple[Fraction, Interval]:
    """Upper bound on max |r_i - r_j| over the box, and an enclosure of the common value."""
    vals = ricci_closed_form(spec, {v: coords[v] for v in spec.metric_vars})
    comps = [v if isinstance(v, Interval) else Interval(v) for v in vals.values()]
    bound = Fraction(0)
    for i in range(len(comps)):
        for j in range(i + 1, len(comps)):
            bound = max(bound, (comps[i] - comps[j]).mag)
    lam = comps[0]
    for c in comps[1:]:
        lam = lam.hull(c)
    return bound, lam


def certify(sol: EinsteinSolution, spec: FibrationSpec | None = None) -> Fraction:
    """Interval residual bound of the solution; stores it and lambda on ``sol``."""
    spec = spec or sol.spec
    for v, iv in sol.coords.items():
        if not (iv.lo > 0):
            raise UncertifiedSolution(f"coordinate {v} not certified positive: {iv}")
    bound, lam = residual(spec, sol.coords)
    sol.residual_bound = bound
    sol.einstein_constant = lam
    return bound


def classify(sol: EinsteinSolution, spec: FibrationSpec | None = None, ctol: float = CTOL) -> str:
    spec = spec or sol.spec
    x = {v: sol.approx(v) for v in spec.metric_vars}
    if spec.kind == "wallach":
        if abs(x["x13"] - 1) <= ctol and abs(x["x23"] - 1) <= ctol:
            if abs(x["x1"] - x["x2"]) <= ctol:
                return "Jensen" if abs(x["x1"] - x["x12"]) <= ctol else "ADN"
        return "New"
    pairs = [("u0", "u1"), ("u0", "u3"), ("u1", "u3")]
    if any(abs(x[a] - x[b]) <= ctol for a, b in pairs if a in x and b in x):
        return "Jensen"
    return "New"


def swap_image(spec: FibrationSpec, point: dict[str, float]) -> dict[str, float]:
    """Wallach(k,k,m): exchange 1<->2 and 13<->23, then rescale so x23 = 1."""
    s = point["x13"]
    return {"x1": point["x2"] / s, "x2": point["x1"] / s, "x12": point["x12"] / s,
            "x13": point["x23"] / s, "x23": 1.0}


def link_symmetry_partners(spec: FibrationSpec, sols: list[EinsteinSolution], tol: float = PARTNER_TOL) -> None:
    if spec.kind != "wallach" or spec.params[0] != spec.params[1]:
        return
    pts = [{v: s.approx(v) for v in spec.metric_vars} for s in sols]
    for i, p in enumerate(pts):
        img = swap_image(spec, p)
        for j, q in enumerate(pts):
            if all(abs(img[v] - q[v]) <= tol for v in spec.metric_vars):
                sols[i].symmetry_partner = j
                break


# --------------------------------------------------------------------------
# driver


def _positive_roots(elim: UniPoly, strip: UniPoly | None) -> tuple[UniPoly, list[IsolatingInterval]]:
    f = elim
    if strip is not None:
        while f.degree >= strip.degree and f.divmod(strip)[1].is_zero():
            f = exact_divide(f, strip)
    sf = squarefree_part(f).primitive()
    return sf, isolate_real_roots(sf, positive_only=True)


def solve_einstein(
    spec: FibrationSpec,
    *,
    tol=DEFAULT_TOL,
    budget: Budget | None = None,
    branches: Sequence[str] | None = None,
    width: Fraction = COORD_WIDTH,
    ctol: float = CTOL,
) -> list[EinsteinSolution]:
    """All certified positive Einstein metrics of ``spec`` in the gauge last-variable = 1."""
    if spec.symbolic:
        raise SpecError("solve needs concrete parameters")
    tol = Fraction(tol)
    t0 = time.monotonic()
    system = assemble_system(spec)
    out: list[EinsteinSolution] = []
    for br in _branches(system, branches):
        if budget and budget.max_seconds is not None:
            left = budget.max_seconds - (time.monotonic() - t0)
            if left <= 0:
                raise BudgetExceeded("time budget exhausted before branch " + br.name)
            sub_budget = Budget(budget.max_pairs, budget.max_reductions, left)
        else:
            sub_budget = budget
        ideal = saturate_nonzero(IdealBasis(br.ctx, br.polys), br.saturate)
        gb = _lex_basis(ideal, br.order, sub_budget)
        if gb.is_unit():
            continue
        elim = eliminant(gb, br.elim_var)
        sf, ivs = _positive_roots(elim, br.strip_factor)
        for idx, iv in enumerate(ivs):
            w = width
            for _ in range(6):
                box = _back_substitute(gb, br, sf, iv, w)
                if any(not (b.lo > 0) for b in box.values()):
                    break
                coords = {v: box[v] if v in box else Interval(br.fixed.get(v, 1))
                          for v in spec.metric_vars}
                sol = EinsteinSolution(spec, br.name, coords, root_index=idx)
                if certify(sol, spec) < tol:
                    sol.classification = classify(sol, spec, ctol)
                    out.append(sol)
                    break
                w = w / 1000
            else:
                raise UncertifiedSolution(
                    f"{spec} branch {br.name}: residual {float(sol.residual_bound):.3g} >= {float(tol):.3g}"
                )
    link_symmetry_partners(spec, out)
    return out


# --------------------------------------------------------------------------
# census

REFERENCE_COUNTS = {
    "n-2,1,1": [((3, 7), 2, 6), ((8, 29), 2, 8), ((30, None), 2, 10)],
    "n-3,1,2": [((5, 9), 2, 6), ((10, 10), 2, 8), ((11, 27), 2, 6), ((28, 40), 2, 8), ((41, None), 2, 10)],
}


def family_spec(family: str, n: int) -> FibrationSpec:
    if family == "n-2,1,1":
        return FibrationSpec.wallach(n - 2, 1, 1)
    if family == "n-3,1,2":
        return FibrationSpec.wallach(n - 3, 1, 2)
    raise SpecError(f"unknown census family {family!r}")


def reference_counts(family: str, n: int) -> tuple[int, int] | None:
    for (lo, hi), j, new in REFERENCE_COUNTS[family]:
        if n >= lo and (hi is None or n <= hi):
            return j, new
    return None


def census(family: str, n_range: Sequence[int], *, budget_seconds: float | None = None) -> list[dict]:
    """Classification counts per n (exploratory; the reference table is conjectural)."""
    rows = []
    for n in n_range:
        spec = family_spec(family, n)
        t0 = time.monotonic()
        row = {"n": n, "k": list(spec.params)}
        try:
            sols = solve_einstein(spec, budget=Budget(max_seconds=budget_seconds) if budget_seconds else None)
        except BudgetExceeded as exc:
            row.update(status="incomplete", reason=str(exc))
        else:
            counts = {c: sum(s.classification == c for s in sols) for c in ("Jensen", "ADN", "New")}
            row.update(
                status="complete",
                total=len(sols),
                jensen=counts["Jensen"],
                adn=counts["ADN"],
                new_excluding_adn=counts["New"],
                new_including_adn=counts["New"] + counts["ADN"],
            )
        ref = reference_counts(family, n)
        row["reference"] = None if ref is None else {"jensen": ref[0], "new": ref[1]}
        if ref is not None and row["status"] == "complete":
            row["agrees_with_reference"] = {
                "jensen": row["jensen"] == ref[0],
                "new_including_adn": row["new_including_adn"] == ref[1],
                "new_excluding_adn": row["new_excluding_adn"] == ref[1],
            }
        row["seconds"] = round(time.monotonic() - t0, 2)
        rows.append(row)
    return rows
