"""Recovering the canonical shape of a scrambled presentation.

A canonical matrix is hidden by random invertible row and column operations
and a linear change of coordinates.  A rational zero of I_{u+1} is found by
point search over F_p, and the canonical shape is rebuilt from it.  The full
verification report is then produced on the recovered matrix.
"""

import random

from blowup import GF, PresentationInput, find_point, generate_instance, verify_main_theorem
from blowup.linmatrix import ScalarConjugation, change_variables, conjugate, is_canonical_shape, minors, scalar_det

F = GF(32003)
d, n, u = 3, 5, 2
rng = random.Random(9)
hidden = generate_instance(d, n, u, F, seed=9).phi
T = [[F.random_element(rng) for _ in range(d)] for _ in range(d)]
assert scalar_det(T, F)
phi = change_variables(conjugate(hidden, ScalarConjugation.random(n, n - 1, F, rng)), T)
print("scrambled matrix is in canonical shape:", is_canonical_shape(phi, u))

point = find_point(minors(phi, u + 1))
print("rational zero of I_(u+1):", point)

inp = PresentationInput(phi)
inp.run_checks()
rep = verify_main_theorem(inp, seed=9)
print("canonical form used:", rep.canonical["transformed"], "at", rep.canonical["point"])
print("flags:", {k: v for k, v in rep.flags.items() if k in ("fiber_type", "expected_form", "birational")})
print("consistent with the theorems:", rep.consistent)
