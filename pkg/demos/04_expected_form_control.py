"""The control case: a generic linear presentation satisfying G_d.

Here the Rees ideal is generated by the linear relations and the maximal
minors of B, and Q is principal, generated by det B in degree d.
"""

from blowup import generate_gd_instance, verify_morey_ulrich

for d, n in [(3, 4), (4, 5)]:
    inp = generate_gd_instance(d, n, seed=1)
    rep = verify_morey_ulrich(inp, seed=1)
    print(f"d={d}, n={n}: G_s profile {rep.gs_satisfied}")
    print("   Q =", rep.Q_generators[0][:70] + ("..." if len(rep.Q_generators[0]) > 70 else ""))
    print("   indeg Q =", rep.indeg_Q, "| expected form:", rep.flags["expected_form"],
          "| consistent:", rep.consistent)
