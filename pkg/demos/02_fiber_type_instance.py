"""Walk through one random presentation satisfying G_{d-1} but not G_d.

The matrix is generated in canonical shape, so x1 only occurs on the first
u diagonal slots.  We look at the minor heights, the Jacobian dual B and its
block B', the special fiber Q, and the two ideals the Rees ideal is compared
against.
"""

import sys

from blowup import (
    GF,
    compute_u,
    generate_instance,
    gs_profile,
    is_expected_form,
    is_fiber_type,
    jacobian_dual,
    rees_ideal,
)
from blowup.linmatrix import minors, rank_mod
from blowup.theorems import birationality_check, minors_in

d, n, u = (int(a) for a in sys.argv[1:4]) if len(sys.argv) > 3 else (3, 4, 1)
inp = generate_instance(d, n, u, GF(32003), seed=2)
phi = inp.phi
print(f"phi ({n} x {n - 1}) in {', '.join(phi.variables)}:")
for row in phi.to_strings():
    print("   ", " | ".join(row))

prof = gs_profile(phi)
print("heights of I_j:", prof.heights)
print("G_s holds for s =", [s for s, ok in prof.satisfied.items() if ok], "; u =", compute_u(phi, prof))

B = jacobian_dual(phi)
Bp = B.submatrix(range(1, d), range(u, n - 1))
print("Jacobian dual B:")
for row in B.to_strings():
    print("   ", " | ".join(row))
print("rank B =", rank_mod(B), "; rank B' =", rank_mod(Bp))

P = rees_ideal(phi)
Q = P.fiber_basis
print(f"Q has {len(Q)} generators of degree {sorted({g.total_degree() for g in Q})}; indeg Q = {Q.initial_degree}")
print("fiber type:", is_fiber_type(P))
print("expected form <I_1(t.phi), I_d(B)>:", is_expected_form(P, B))
print("I_d(B) inside Q:", minors_in(B, d, Q), "; I_{d-1}(B') inside Q:", minors_in(Bp, d - 1, Q))
ok, (rows, cols) = birationality_check(B, Q)
print(f"birational: {ok}, witnessed by rows {rows} and columns {cols} of B")
