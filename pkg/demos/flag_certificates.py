"""
Existence on the flag fibration
===============================

Solve a few Flag(n, p) systems, then run the exact sign certificates that
give two non-Jensen metrics for every 2 <= p <= 3n/4.
"""

from einstein_sp import FibrationSpec, solve_einstein
from einstein_sp.proofs import endpoint_signs, grid_check, u_expansion_certificate, verify_u1_against_groebner

for n, p in [(3, 2), (6, 4), (8, 6)]:
    sols = solve_einstein(FibrationSpec.flag(n, p))
    u1 = sorted(round(s.approx("u1"), 6) for s in sols if s.classification == "New")
    print(f"Flag({n},{p}): {len(sols)} metrics, u1 of the new ones: {u1}")

# U1 changes sign on (0, 1/5) and on (1/5, 1)
print(endpoint_signs(4, 3))

# u(n, p) = -(390625/64) U1(1/5) has positive coefficients around n = 4p/3
for c in u_expansion_certificate().coefficients:
    print(f"m^{c.power}: {c.status}")

print("grid n <= 20:", grid_check(20)["ok"])
print("U1 equals the Groebner eliminant at (5,3):", verify_u1_against_groebner(5, 3))
