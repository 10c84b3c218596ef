"""Going modulo a general linear form f = x1 - b2 x2 - ... - bd xd.

Specializing drops one variable and turns the G_{d-1} condition into G_d for
the smaller ring, where the Rees ideal has the expected form.  The
determinant of a specialized column selection of B equals f evaluated at
the signed minors of the original selection.
"""

from itertools import combinations

from blowup import GF, generate_instance, jacobian_dual, specialization_form, verify_specialized_MU
from blowup.linmatrix import signed_maximal_minors

inp = generate_instance(4, 5, 1, GF(32003), seed=4)
B = jacobian_dual(inp.phi)
S = specialization_form(inp.phi, seed=0, B=B)
print("f =", S.form, f"(accepted after {S.attempts} draw(s))")
print("B-bar:")
for row in S.Bbar.to_strings():
    print("   ", " | ".join(row))

for cols in combinations(range(B.ncols), B.nrows - 1):
    delta = signed_maximal_minors(B.columns(cols)).delta
    rhs = delta[0]
    for b, dl in zip(S.b, delta[1:]):
        rhs = rhs - dl.scale(b)
    lhs = S.Bbar.columns(cols).det()
    print(f"columns {cols}: det(B-bar) == f(delta) -> {lhs == rhs}")

print("specialized ideal has expected Rees form:", verify_specialized_MU(S))
