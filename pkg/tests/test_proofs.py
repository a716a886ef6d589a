import random
from fractions import Fraction

import pytest

from einstein_sp.errors import SpecError
from einstein_sp.geometry import FibrationSpec
from einstein_sp.groebner import eliminant
from einstein_sp.proofs import (
    DATA_FILES,
    b_sign_pattern,
    back_substitution_leads,
    data_checksums,
    endpoint_signs,
    grid_check,
    load,
    positive_on_ray,
    recorded_checksums,
    closed_form_identities,
    u0_poly,
    u1_poly,
    u2_poly,
    u2_sign_pattern,
    u_expansion,
    u_expansion_certificate,
    verify_checksums,
    verify_u0_against_groebner,
    verify_u1_against_groebner,
    verify_u2_against_groebner,
)
from einstein_sp.solver import branch_basis
from einstein_sp.univar import UniPoly


def test_checksums_match_recorded():
    assert verify_checksums() == []
    assert set(recorded_checksums()) == set(data_checksums())
    assert {DATA_FILES[k] for k in DATA_FILES} <= set(data_checksums())


def test_identities_hold():
    ids = closed_form_identities()
    assert len(ids) == 5
    assert all(ids.values()), ids


def test_leading_expansion_coefficients():
    c = u_expansion()
    assert max(c) == 6
    assert c[6] == UniPoly([640000, -160000, 160000], "p")
    assert c[5] == UniPoly([2548800, 2744000, -1049600, 876800], "p")


def test_expansion_certificate_fully_proven():
    rep = u_expansion_certificate()
    assert len(rep.coefficients) == 7
    assert rep.fully_proven and rep.all_positive
    assert all(c.status == "proven (shift)" for c in rep.coefficients)


def test_positive_on_ray_paths():
    p = UniPoly.x("p")
    assert positive_on_ray(p * p + 1)[0] == "proven (shift)"
    # (p - 3)^2 + 1: shift test fails at q = p - 1, Sturm succeeds
    assert positive_on_ray((p - 3) ** 2 + UniPoly([1], "p"))[0] == "proven (sturm)"
    assert positive_on_ray(p - 5, p_max=10)[0] == "failed"


def test_endpoint_signs_4_3():
    e = endpoint_signs(4, 3)
    assert e["values"]["0"] == 26**2 * 19**2 == 244036
    assert (e["U1_at_0"], e["U1_at_1"], e["U1_at_fifth"]) == (1, 1, -1)
    assert e["U1_at_0_matches"] and e["U1_at_1_matches"]


def test_u1_positive_at_one_for_all_p_le_n():
    for n in range(2, 25):
        for p in range(1, n + 1):
            assert endpoint_signs(n, p)["U1_at_1"] == 1


def test_endpoint_signs_rejects_p_above_n():
    with pytest.raises(SpecError):
        endpoint_signs(3, 4)


@pytest.mark.parametrize("n,p", [(3, 2), (8, 6), (4, 1), (9, 8)])
def test_u2_alternates(n, p):
    assert u2_sign_pattern(n, p)


def test_u2_constant_term():
    for n in range(2, 15):
        for p in range(1, n):
            assert u2_poly(n, p).coeffs[0] == 4 * p * (n - p) ** 4 + 2 * (p * p + p + 1) * (n - p) ** 3


@pytest.mark.parametrize("n,p", [(4, 3), (8, 6), (3, 2)])
def test_b_alternates(n, p):
    assert b_sign_pattern(n, p)
    assert b_sign_pattern(n, p, restored=False)


def test_b8_leading_coefficient():
    # restored b8 carries the squared factor the eliminant exhibits
    for n, p in [(4, 3), (8, 6), (12, 5)]:
        lead = (4 * n - p + 1) ** 4 * (4 * n * p - 3 * p * p + p + 2)
        assert load("b8").evaluate({"n": n, "p": p}) == lead
        assert u0_poly(n, p).lc == lead * (4 * n * p - 3 * p * p + p + 2)


def test_pattern_preconditions():
    with pytest.raises(SpecError):
        u2_sign_pattern(3, 3)
    with pytest.raises(SpecError):
        b_sign_pattern(4, 4)


def test_grid_to_40():
    g = grid_check(40)
    assert g["ok"], g["failures"][:5]
    assert g["points"] == sum(3 * n // 4 - 1 for n in range(3, 41))


@pytest.mark.parametrize("n,p", [(3, 2), (4, 2), (4, 3), (5, 3)])
def test_u1_against_groebner(n, p):
    assert verify_u1_against_groebner(n, p)


@pytest.mark.parametrize("n,p", [(3, 2), (4, 3)])
def test_u2_and_u0_against_groebner(n, p):
    assert verify_u2_against_groebner(n, p)
    assert verify_u0_against_groebner(n, p)


def test_u0_original_b_set_disagrees_with_groebner():
    assert u0_poly(4, 3, restored=False) != u0_poly(4, 3)
    assert verify_u0_against_groebner(4, 3)


def test_degenerate_flag_rejected():
    with pytest.raises(SpecError):
        verify_u1_against_groebner(2, 2)


@pytest.mark.parametrize("n,p", [(3, 2), (4, 2)])
def test_stored_u1_at_random_points(n, p):
    elim = eliminant(branch_basis(FibrationSpec.flag(n, p)), "u1")
    U = u1_poly(n, p)
    rng = random.Random(n * 10 + p)
    pts = [Fraction(rng.randint(1, 99), rng.randint(1, 17)) for _ in range(3)]
    ratios = {elim(t) / U(t) for t in pts}
    assert len(ratios) == 1 and ratios.pop() > 0


def test_back_substitution_leads_are_positive():
    for n, p in [(3, 2), (4, 2), (5, 3)]:
        leads = back_substitution_leads(n, p)
        assert set(leads) == {"u0", "u2"}
        assert all(v > 0 for v in leads.values())
