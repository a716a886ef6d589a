"""
Ricci components and the Einstein system
========================================

Evaluate the Ricci tensor of a diagonal metric two ways, then build the
polynomial system whose positive roots are the Einstein metrics.
"""

from fractions import Fraction

from einstein_sp import FibrationSpec, assemble_system, ricci, ricci_closed_form
from einstein_sp.algebra import format_poly

spec = FibrationSpec.wallach(1, 1, 1)
print(spec, "summands:", spec.metric_vars)

# the normal metric: every coefficient 1
print(ricci_closed_form(spec, [1] * 5))

# general formula from dimensions and structure constants, at a random point
x = [Fraction(1, 2), Fraction(3, 4), 2, Fraction(5, 3), 1]
assert ricci(spec, x) == ricci_closed_form(spec, x)

# set x23 = 1 and clear denominators of r1 - r2, r2 - r12, ...
system = assemble_system(spec)
for label, f in zip(system.provenance, system.polys):
    print(f"{label:>12}:  {format_poly(f)}")

# the flag fibration with n, p left symbolic
for f in assemble_system(FibrationSpec.flag()).polys:
    print(format_poly(f))
