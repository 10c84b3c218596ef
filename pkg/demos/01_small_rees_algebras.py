"""Rees algebras of two small ideals in k[x, y].

The maximal ideal (x, y) is of linear type: its Rees ideal is generated by
the single Koszul relation and its special fiber is a polynomial ring.  Its
square (x^2, xy, y^2) picks up one fiber relation, the quadric cone
t1*t3 - t2^2, and is of fiber type.
"""

from blowup import QQ, LinearMatrix, PolyRing, analytic_spread, is_fiber_type, rees_ideal

R = PolyRing.from_names(QQ, "x y")

for label, rows in [("(x, y)", [["y"], ["-x"]]),
                    ("(x, y)^2", [["y", "0"], ["-x", "y"], ["0", "-x"]])]:
    phi = LinearMatrix.from_strings(R, rows)
    P = rees_ideal(phi)
    print(f"I = {label}, generated by {', '.join(map(str, P.generators))}")
    print("  Rees ideal:   ", ", ".join(map(str, P.rees_basis)))
    print("  fiber ideal:  ", ", ".join(map(str, P.fiber_basis)) or "0")
    print("  analytic spread", analytic_spread(P), "| fiber type:", is_fiber_type(P))
