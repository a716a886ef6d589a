from fractions import Fraction

import pytest

from einstein_sp.algebra import MultiPoly, parse_poly
from einstein_sp.errors import SpecError
from einstein_sp.geometry import FibrationSpec, ricci_closed_form
from einstein_sp.groebner import is_reduced, spolys_reduce_to_zero
from einstein_sp.interval import Interval
from einstein_sp.solver import (
    CTOL,
    EinsteinSolution,
    assemble_system,
    branch_basis,
    census,
    certify,
    classify,
    solve_einstein,
    swap_image,
)

W111 = FibrationSpec.wallach(1, 1, 1)
W112 = FibrationSpec.wallach(1, 1, 2)

REFERENCE_W111 = [
    "x1^2*x12^2*x2 + x1^2*x13^2*x2 - x1*x12^2*x13^2*x2^2 - 2*x1*x12^2*x13^2 - x1*x13^2*x2^2 + 2*x12^2*x13^2*x2",
    "3*x1*x13*x2 - 2*x12^3*x2 + 2*x12^2*x13*x2^2 + 4*x12^2*x13 + 2*x12*x13^2*x2 - 16*x12*x13*x2"
    " + 2*x12*x2 + 5*x13*x2^2",
    "3*x1*x12^2 - 3*x1*x13^2 + 4*x12^3*x13 - 16*x12^2*x13 - 4*x12*x13^3 + 16*x12*x13^2 - 3*x13^2*x2",
    "-3*x1*x12 + 3*x12*x13^2*x2 - 16*x12*x13^2 + 16*x12*x13 + 4*x13^3 - 4*x13",
]
REFERENCE_W112 = [
    "2*x1^2*x12^2*x2 + x1^2*x13^2*x2 - 2*x1*x12^2*x13^2*x2^2 - 2*x1*x12^2*x13^2 - x1*x13^2*x2^2"
    " + 2*x12^2*x13^2*x2",
    "3*x1*x13*x2 - 4*x12^3*x2 + 4*x12^2*x13*x2^2 + 4*x12^2*x13 + 4*x12*x13^2*x2 - 20*x12*x13*x2"
    " + 4*x12*x2 + 5*x13*x2^2",
    "3*x1*x12^2 - 3*x1*x13^2 + 6*x12^3*x13 - 20*x12^2*x13 - 6*x12*x13^3 + 20*x12*x13^2 - 2*x12*x13"
    " - 3*x13^2*x2",
    "-3*x1*x12 + 3*x12*x13^2*x2 - 20*x12*x13^2 + 20*x12*x13 + 4*x13^3 - 4*x13",
]
REFERENCE_FLAG = [
    "2*u0*u1*(n - p) - 2*u1^2*(n - p) + 2*(p + 1)*u0*u1*u2^2 - (p + 2)*u1^2*u2^2 - p*u2^2",
    "u1^2*((2*n - p)*p - 1) - 4*(n + 1)*p*u1*u2 + p^2*u2^2 + p*(p + 2)*u1^2*u2^2 + p*(p + 1)*u1 + u0*u1",
    "4*(n + 1)*p*u2 + p*(-2*n + p - 1) + 2*(p - 1)*(p + 2)*u1*u2^2 - (p - 1)*(p + 1)*u1"
    " - 4*p*(p + 1)*u2^2 + 4*u0*u2^2 - u0",
]

# (x1, x2, x12, x13), x23 = 1
NEW_111 = [(0.276281, 0.251266, 0.460887, 0.568722), (1.112249, 0.417937, 1.598741, 0.595776),
           (0.701500, 1.866891, 2.683459, 1.678482), (0.441809, 0.485793, 0.810389, 1.758325)]
BRANCH_111 = [(0.472797, 0.472797, 0.472797, 1), (1.812916, 1.812916, 1.812916, 1),
              (0.344889, 0.344889, 0.80019, 1), (0.483972, 0.483972, 2.585187, 1)]
NEW_112 = [(0.227002, 0.207491, 0.362198, 0.643984), (1.293692, 0.292641, 1.707728, 0.683996),
           (0.427841, 1.891372, 2.496690, 1.461995), (0.322198, 0.352496, 0.562433, 1.552832)]
BRANCH_112 = [(0.357518, 0.357518, 0.357518, 1), (1.864703, 1.864703, 1.864703, 1),
              (0.256403, 0.256403, 0.607404, 1), (0.309365, 0.309365, 2.398604, 1)]


def positive_multiple(f: MultiPoly, g: MultiPoly) -> bool:
    fd, gd = dict(f.items()), dict(g.items())
    if fd.keys() != gd.keys() or not fd:
        return False
    m = next(iter(fd))
    c = fd[m] / gd[m]
    return c > 0 and all(fd[k] == c * gd[k] for k in fd)


def eval_box(f: MultiPoly, box: dict[str, Interval]) -> Interval:
    acc = Interval(0)
    for e, c in f.items():
        t = Interval(c)
        for nm, k in zip(f.ctx.names, e):
            t = t * box[nm] ** k
        acc = acc + t
    return acc


def match(sols, expected, tol=1e-5):
    """Each expected tuple is matched by a distinct solution; returns the matched solutions."""
    left = list(sols)
    hits = []
    for tup in expected:
        for s in left:
            if all(abs(s.approx(v) - t) <= tol for v, t in zip(("x1", "x2", "x12", "x13"), tup)):
                hits.append(s)
                left.remove(s)
                break
        else:
            raise AssertionError(f"no solution near {tup}")
    return hits


# -- assembly ---------------------------------------------------------------


@pytest.mark.parametrize("spec,reference", [(W111, REFERENCE_W111), (W112, REFERENCE_W112),
                                          (FibrationSpec.flag(), REFERENCE_FLAG)])
def test_assembled_systems_match_reference(spec, reference):
    system = assemble_system(spec)
    assert len(system.polys) == len(spec.labels) - 1
    for ours, text in zip(system.polys, reference):
        assert positive_multiple(ours, parse_poly(text, system.ctx)), text
        assert ours.content() == 1


def test_symbolic_flag_specialises():
    sym = assemble_system(FibrationSpec.flag())
    for n, p in [(3, 2), (5, 3), (8, 6)]:
        conc = assemble_system(FibrationSpec.flag(n, p))
        for f, g in zip(sym.polys, conc.polys):
            spec_f = f.subs({"n": n, "p": p}).to_context(conc.ctx)
            assert positive_multiple(spec_f, g)


def test_solve_needs_concrete_spec():
    with pytest.raises(SpecError):
        solve_einstein(FibrationSpec.flag())


# -- Wallach solutions ------------------------------------------------------


@pytest.mark.parametrize("which", ["111", "112"])
def test_wallach_solution_lists(which, request):
    sols = request.getfixturevalue("wallach_" + which)
    new, branch = (NEW_111, BRANCH_111) if which == "111" else (NEW_112, BRANCH_112)
    assert len(sols) == 8
    assert [s.classification for s in match(sols, new)] == ["New"] * 4
    assert [s.classification for s in match(sols, branch)] == ["Jensen", "Jensen", "ADN", "ADN"]


@pytest.mark.parametrize("which", ["111", "112"])
def test_solution_invariants(which, request):
    spec = W111 if which == "111" else W112
    sols = request.getfixturevalue("wallach_" + which)
    system = assemble_system(spec)
    for s in sols:
        assert all(iv.lo > 0 and iv.width <= Fraction(1, 10**12) for iv in s.coords.values())
        assert s.residual_bound < Fraction(1, 10**9)
        box = {v: s.coords[v] for v in system.ctx.names}
        for f in system.polys:
            assert eval_box(f, box).contains_zero()
        assert classify(s, spec, CTOL / 2) == s.classification
        assert s.einstein_constant.contains(s.einstein_constant.mid)


@pytest.mark.parametrize("which", ["111", "112"])
def test_swap_closure(which, request):
    spec = W111 if which == "111" else W112
    sols = request.getfixturevalue("wallach_" + which)
    for i, s in enumerate(sols):
        img = swap_image(spec, {v: s.approx(v) for v in spec.metric_vars})
        assert any(all(abs(img[v] - t.approx(v)) <= 1e-6 for v in spec.metric_vars) for t in sols)
        assert s.symmetry_partner is not None
        assert sols[s.symmetry_partner].symmetry_partner == i


def test_json_record(wallach_111):
    rec = wallach_111[0].to_json()
    assert set(rec) == {"spec", "branch", "coords", "lambda", "residual_bound", "class", "symmetry_partner"}
    for v, c in rec["coords"].items():
        lo, hi = (Fraction(x) for x in c["interval"])
        assert lo <= wallach_111[0].coords[v].lo and wallach_111[0].coords[v].hi <= hi


def test_generic_basis_is_reduced(wallach_111):
    gb = branch_basis(W111)
    assert is_reduced(gb)
    small = branch_basis(W111, "x13=1")
    assert is_reduced(small) and spolys_reduce_to_zero(small)


# -- certification ------------------------------------------------------------


def test_all_ones_is_not_einstein():
    coords = {v: Interval(1) for v in W111.metric_vars}
    bound = certify(EinsteinSolution(W111, "generic", coords))
    assert bound == Fraction(3, 32)


def test_zero_width_box_gives_pointwise_residual():
    x = [Fraction(1, 2), Fraction(3, 4), Fraction(2), Fraction(5, 3), Fraction(1)]
    coords = {v: Interval(c) for v, c in zip(W111.metric_vars, x)}
    sol = EinsteinSolution(W111, "generic", coords)
    bound = certify(sol)
    r = list(ricci_closed_form(W111, x).values())
    assert bound == max(abs(a - b) for a in r for b in r)
    assert sol.einstein_constant.width == max(r) - min(r)


# -- flag fibration -----------------------------------------------------------


def test_flag_3_2_two_new_metrics(flag_grid):
    sols = flag_grid[(3, 2)]
    off = [s for s in sols if abs(s.approx("u1") - 1) > CTOL]
    assert len(off) >= 2
    u1 = sorted(s.approx("u1") for s in off)
    assert any(0 < u < 0.2 for u in u1) and any(0.2 < u < 1 for u in u1)
    for s in sols:
        assert all(iv.lo > 0 for iv in s.coords.values())


def test_flag_grid_solutions_satisfy_system(flag_grid):
    for (n, p), sols in flag_grid.items():
        system = assemble_system(FibrationSpec.flag(n, p))
        for s in sols:
            box = {v: s.coords[v] for v in system.ctx.names}
            assert all(eval_box(f, box).contains_zero() for f in system.polys)
            assert classify(s, s.spec, CTOL / 2) == s.classification


def test_flag_p1_rejected():
    with pytest.raises(SpecError):
        solve_einstein(FibrationSpec.flag(4, 1))


# -- census -------------------------------------------------------------------


def test_census_row_incomplete_on_budget():
    (row,) = census("n-2,1,1", [6], budget_seconds=1e-3)
    assert row["status"] == "incomplete"
    assert row["reference"] == {"jensen": 2, "new": 6}


def test_census_unknown_family():
    with pytest.raises(SpecError):
        census("n-4,2,2", [6])
