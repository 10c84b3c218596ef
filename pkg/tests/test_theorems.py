from itertools import combinations

import pytest

from blowup import (
    GF,
    QQ,
    HypothesisError,
    Ideal,
    LinearMatrix,
    PolyRing,
    birationality_check,
    find_point,
    generate_gd_instance,
    generate_instance,
    inverse_representatives,
    is_expected_form,
    is_fiber_type,
    rees_ideal,
    specialization_form,
    verify_det_identity,
    verify_main_theorem,
    verify_specialized_MU,
)
from blowup.linmatrix import change_variables, jacobian_dual, rank_mod, signed_maximal_minors
from blowup.theorems import (
    NotEvaluated,
    avoids_minor_primes,
    cross_compatible,
    excluded_selections_in_Q,
    low_rank_dets_in_Q,
    minors_in,
    projective_points,
)

F = GF(32003)


@pytest.fixture(scope="module")
def inst341():
    inp = generate_instance(3, 4, 1, F, seed=11)
    P = rees_ideal(inp.phi)
    return inp, P, jacobian_dual(inp.phi)


@pytest.fixture(scope="module")
def inst352():
    inp = generate_instance(3, 5, 2, F, seed=12)
    P = rees_ideal(inp.phi)
    return inp, P, jacobian_dual(inp.phi)


# --- points -------------------------------------------------------------------

def test_find_point_examples():
    R = PolyRing.from_names(GF(5), "x1 x2 x3")
    assert find_point(Ideal(R, [R.var("x2"), R.var("x3")])) == (1, 0, 0)
    assert find_point(Ideal(R, [])) == (1, 0, 0)


@pytest.mark.parametrize("text", ["x1^2 + x2^2", "x1^2 - 2*x2^2", "x1*x2", "x2^2"])
def test_find_point_agrees_with_enumeration(text):
    f7 = GF(7)
    R = PolyRing.from_names(f7, "x1 x2")
    g = R.parse(text)
    brute = next((p for p in projective_points(f7, 2) if not g.evaluate(p)), None)
    assert find_point(Ideal(R, [g])) == brute


def test_find_point_sum_of_squares_mod_7_has_no_point():
    R = PolyRing.from_names(GF(7), "x1 x2")
    assert find_point(Ideal(R, [R.parse("x1^2 + x2^2")])) is None


def test_find_point_needs_prime_field():
    R = PolyRing.from_names(QQ, "x1 x2")
    with pytest.raises(ValueError):
        find_point(Ideal(R, [R.var("x1")]))


# --- fiber type and expected form ---------------------------------------------

def test_linear_type_is_fiber_type():
    R = PolyRing.from_names(QQ, "x1 x2")
    P = rees_ideal(LinearMatrix.from_strings(R, [["x2"], ["-x1"]]))
    assert P.fiber.is_zero and is_fiber_type(P)


def test_square_of_maximal_ideal_is_fiber_type():
    R = PolyRing.from_names(QQ, "x y")
    P = rees_ideal(LinearMatrix.from_strings(R, [["y", "0"], ["-x", "y"], ["0", "-x"]]))
    assert is_fiber_type(P)


def test_theorem_instance_fiber_type_not_expected(inst341):
    inp, P, B = inst341
    assert is_fiber_type(P)
    assert not is_expected_form(P, B)
    assert minors_in(B, 3, P.fiber_basis)
    assert P.fiber_basis.initial_degree == 2


@pytest.mark.parametrize("d,n", [(3, 4), (4, 5)])
def test_gd_instance_has_expected_form(d, n):
    inp = generate_gd_instance(d, n, seed=3)
    P = rees_ideal(inp.phi)
    assert is_expected_form(P, jacobian_dual(inp.phi))


# --- birationality ------------------------------------------------------------

def test_birationality_and_witness(inst341):
    inp, P, B = inst341
    Q = P.fiber_basis
    ok, (rows, cols) = birationality_check(B, Q)
    assert ok
    m = B.minor(rows, cols)
    assert m.total_degree() == 2 and Q.reduce(m)
    reps = inverse_representatives(B, Q)
    assert cols in [r.columns for r in reps]
    assert cross_compatible(reps, Q)
    assert excluded_selections_in_Q(B, Q)


def test_unit_fiber_ideal_is_rejected(inst341):
    inp, P, B = inst341
    unit = Ideal(P.fiber_ring, [P.fiber_ring.one]).groebner()
    with pytest.raises(ValueError):
        birationality_check(B, unit)
    with pytest.raises(ValueError):
        inverse_representatives(B, unit)


def test_low_rank_selections_excluded(inst352):
    inp, P, B = inst352
    Q = P.fiber_basis
    listed = {r.columns for r in inverse_representatives(B, Q)}
    for cols in combinations(range(B.ncols), 2):
        sub = B.columns(cols)
        if cols not in listed:
            assert rank_mod(sub, Q) < 2
            assert all(not Q.reduce(x) for x in signed_maximal_minors(sub))


# --- specialization -----------------------------------------------------------

def test_specialized_matrices(inst352):
    inp, P, B = inst352
    S = specialization_form(inp.phi, seed=1, B=B)
    TR = B.ring
    # first row of B for a canonical input: t_j for j <= u, then zeros
    assert list(B.rows[0]) == [TR.var("t1"), TR.var("t2"), TR.zero, TR.zero]
    for j in range(S.Bbar.nrows):
        assert list(S.Bbar.rows[j]) == [B[j + 1, c] + B[0, c].scale(S.b[j]) for c in range(B.ncols)]
    assert S.form.lc() == 1 and S.form.coefficient((1, 0, 0)) == 1
    assert verify_det_identity(S, B)
    assert low_rank_dets_in_Q(S, B, P.fiber_basis)
    assert verify_specialized_MU(S)


def test_zero_b_accepted_iff_heights_check_out(inst341):
    inp, P, B = inst341
    x1 = inp.phi.ring.var("x1")
    try:
        S = specialization_form(inp.phi, b=(0, 0), B=B)
        accepted = True
    except HypothesisError:
        accepted = False
    assert accepted == avoids_minor_primes(inp.phi, x1)
    if accepted:
        # b = 0 drops the first row: det(B-bar_cols) = delta^1 = det(B_cols without row 1)
        for cols in combinations(range(B.ncols), 2):
            assert S.Bbar.columns(cols).det() == B.minor((1, 2), cols)


def test_degenerate_form_is_rejected(inst341):
    inp, P, B = inst341
    # swapping x1 and x2 puts the point (0:1:0) on V(I), so f = x1 vanishes there
    swap = [[0, 1, 0], [1, 0, 0], [0, 0, 1]]
    phi = change_variables(inp.phi, swap)
    with pytest.raises(HypothesisError):
        specialization_form(phi, b=(0, 0))


def test_specialized_mu_in_three_variables():
    inp = generate_instance(4, 5, 1, F, seed=21)
    S = specialization_form(inp.phi, seed=0)
    assert len(S.phibar.variables) == 3
    assert verify_specialized_MU(S)


# --- generation and the full pipeline -----------------------------------------

def test_generate_instance_examples():
    from blowup import compute_u
    assert compute_u(generate_instance(3, 4, 1, F, seed=7).phi) == 1
    assert compute_u(generate_instance(3, 5, 2, F, seed=7).phi) == 2
    inp = generate_instance(3, 5, 1, F, seed=7)
    assert inp.mu == inp.n >= inp.d + 1
    with pytest.raises(ValueError):
        generate_instance(3, 4, 2, F)
    with pytest.raises(ValueError):
        generate_instance(2, 4, 1, F)


@pytest.mark.parametrize("d,n,u", [(3, 4, 1), (4, 5, 1)])
def test_main_theorem_report(d, n, u):
    inp = generate_instance(d, n, u, F, seed=5)
    rep = verify_main_theorem(inp, seed=5)
    assert rep.consistent, rep.mismatches()
    assert rep.flags["fiber_type"] is True and rep.flags["expected_form"] is False
    assert rep.indeg_Q == d - 1
    assert rep.dims["analytic_spread"] == d
    assert rep.ranks == {"B": d, "B_prime": d - 1, "B_mod_Q": d - 1}
    assert not any(isinstance(v, NotEvaluated) for v in rep.flags.values())


def test_gd_instance_is_refused_by_main_pipeline():
    inp = generate_gd_instance(3, 4, seed=0)
    with pytest.raises(HypothesisError) as err:
        verify_main_theorem(inp)
    assert err.value.check == "not_G_d"


def test_failed_specialization_leaves_flags_unevaluated(monkeypatch):
    import blowup.theorems as th

    def refuse(*args, **kwargs):
        raise HypothesisError("prime avoidance", "forced")

    monkeypatch.setattr(th, "specialization_form", refuse)
    rep = verify_main_theorem(generate_instance(3, 4, 1, F, seed=2))
    assert isinstance(rep.flags["specialization_MU"], NotEvaluated)
    assert rep.consistent
