import pytest
import sympy

from blowup import (
    GF,
    QQ,
    HypothesisError,
    Ideal,
    LinearMatrix,
    PolyRing,
    analytic_spread,
    check_Gs_ideal,
    check_Gs_module,
    compute_u,
    fiber_ideal,
    generate_instance,
    gs_profile,
    ideal_equal,
    rees_from_generators,
    rees_ideal,
    sym_dimension,
)
from blowup.invariants import minor_heights, symmetric_in_rees
from blowup.linmatrix import minors, symmetric_ideal

F = GF(32003)


def xmat(rows, names, field=QQ):
    return LinearMatrix.from_strings(PolyRing.from_names(field, names), rows)


def sympy_rees(gens, xs, n):
    """Kernel of k[x, t] -> k[x, w] by a lex elimination of w in sympy."""
    w = sympy.Symbol("w")
    ts = sympy.symbols(f"t1:{n + 1}")
    G = sympy.groebner([t - w * g for t, g in zip(ts, gens)], w, *xs, *ts, order="lex")
    return [g for g in G.exprs if w not in g.free_symbols]


def as_ideal(ring, exprs):
    return Ideal(ring, [ring.parse(str(sympy.expand(e)).replace("**", "^")) for e in exprs])


HB_XY2 = [["y", "0"], ["-x", "y"], ["0", "-x"]]


def test_rees_of_maximal_ideal_in_two_variables():
    P = rees_ideal(xmat([["x2"], ["-x1"]], "x1 x2"))
    S = P.ring
    assert ideal_equal(P.rees, Ideal(S, [S.parse("x1*t2 - x2*t1")]))
    assert fiber_ideal(P).is_zero
    assert analytic_spread(P) == 2


def test_rees_of_square_of_maximal_ideal():
    P = rees_ideal(xmat(HB_XY2, "x y"))
    S = P.ring
    expected = Ideal(S, [S.parse(s) for s in ("x*t2 - y*t1", "x*t3 - y*t2", "t1*t3 - t2^2")])
    assert ideal_equal(P.rees, expected)
    Q = fiber_ideal(P)
    assert ideal_equal(Q, Ideal(Q.ring, [Q.ring.parse("t1*t3 - t2^2")]))
    assert analytic_spread(P) == 2
    assert symmetric_in_rees(P)


def test_rees_matches_sympy_elimination():
    x, y = sympy.symbols("x y")
    P = rees_ideal(xmat(HB_XY2, "x y"))
    oracle = sympy_rees([x**2, x * y, y**2], (x, y), 3)
    assert ideal_equal(P.rees, as_ideal(P.ring, oracle))


def test_principal_ideal_is_of_linear_type():
    R = PolyRing.from_names(QQ, "x1 x2")
    P = rees_from_generators([R.parse("x1^2 + x2^2")])
    assert P.rees.is_zero and P.fiber.is_zero


def test_gs_on_square_of_maximal_ideal():
    phi = xmat(HB_XY2, "x y")
    assert check_Gs_ideal(phi, 2)
    assert check_Gs_ideal(phi, 1)


def test_gs_module_with_rank_one_is_the_ideal_condition():
    inp = generate_instance(3, 5, 1, F, seed=0)
    for s in range(1, 4):
        assert check_Gs_module(inp.phi, 1, s) == check_Gs_ideal(inp.phi, s)


def test_zero_column_does_not_change_gs():
    inp = generate_instance(3, 4, 1, F, seed=0)
    phi = inp.phi
    R = phi.ring
    padded = LinearMatrix([list(r) + [R.zero] for r in phi.rows], "x", R)
    assert minor_heights(padded)[1] == minor_heights(phi)[1]
    # s = 4 brings j = 1 into range; the cokernel is unchanged by the zero column
    for s in range(1, 5):
        assert check_Gs_module(padded, 1, s) == check_Gs_module(phi, 1, s)


@pytest.mark.parametrize("d,n,u", [(3, 4, 1), (3, 5, 1), (3, 5, 2), (4, 5, 1), (4, 6, 2)])
def test_generated_instance_profile(d, n, u):
    inp = generate_instance(d, n, u, F, seed=1)
    phi = inp.phi
    prof = gs_profile(phi)
    assert prof.satisfied[d - 1] and not prof.satisfied[d]
    assert compute_u(phi, prof) == u
    hs = prof.heights
    assert all(hs[j + 1] <= hs[j] for j in range(1, n - 1))
    assert hs[n - 1] == 2 and hs[n - d + 1] == d - 1
    assert sym_dimension(phi) == n
    assert sym_dimension(phi.columns(range(u, n - 1))) == n + 1
    assert check_Gs_module(phi.columns(range(u, n - 1)), u + 1, d - 1)


def test_compute_u_rejects_gd_input():
    from blowup import generate_gd_instance
    inp = generate_gd_instance(3, 4, seed=0)
    with pytest.raises(HypothesisError):
        compute_u(inp.phi)


def test_koszul_symmetric_dimension():
    assert sym_dimension(xmat([["-x2"], ["x1"]], "x1 x2")) == 3


def test_symmetric_ideal_inside_rees_for_instance():
    inp = generate_instance(3, 4, 1, F, seed=5)
    P = rees_ideal(inp.phi)
    assert symmetric_in_rees(P)
    assert P.dim_rees == 4
    assert P.fiber.map_to(P.ring).gens and P.rees.contains_ideal(P.fiber.map_to(P.ring))
    assert P.rees.contains_ideal(symmetric_ideal(inp.phi))
    assert ideal_equal(minors(inp.phi, 3), inp.ideal)
