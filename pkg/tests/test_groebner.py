import itertools
import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from blowup import (
    GF,
    LEX,
    QQ,
    Budget,
    BudgetExceeded,
    Ideal,
    PolyRing,
    VariableBlock,
    ZeroIdealError,
    buchberger,
    dimension,
    eliminate,
    height,
    ideal_equal,
    initial_degree,
    normal_form,
)
from blowup.groebner import monomial_dimension


def ring(names="x1 x2 x3", field=QQ, order=None):
    return PolyRing.from_names(field, names, order=order)


def test_principal_ideal():
    R = ring()
    assert buchberger(Ideal(R, [R.parse("x1")])).elements == [R.parse("x1")]


def test_monomial_ideal_already_reduced():
    R = ring()
    gb = buchberger(Ideal(R, [R.parse("x1^2"), R.parse("x1*x2")]))
    assert set(gb.elements) == {R.parse("x1^2"), R.parse("x1*x2")}


def test_lex_basis_matches_sympy():
    R = ring(order=LEX)
    I = Ideal(R, [R.parse("x1^2 - x2"), R.parse("x1*x2 - x3")])
    ours = {str(g) for g in buchberger(I, LEX)}
    x1, x2, x3 = sympy.symbols("x1 x2 x3")
    theirs = sympy.groebner([x1**2 - x2, x1 * x2 - x3], x1, x2, x3, order="lex")
    assert {str(R.parse(str(g).replace("**", "^"))) for g in theirs.exprs} == ours
    assert R.parse("x2^2 - x1*x3") in I


def test_normal_form_examples():
    R = ring()
    I = Ideal(R, [R.parse("x1^2 - x2")])
    G = I.groebner()
    assert normal_form(R.parse("x1^2"), G) == R.parse("x2")
    assert normal_form(R.parse("x1^2 - x2"), G) == R.zero
    J = Ideal(R, [R.parse("x1^2 - x2*x3"), R.parse("x2^3")])
    assert normal_form(R.one, J.groebner()) == R.one


def test_ideal_equal_examples():
    R = ring()
    x1, x2 = R.var("x1"), R.var("x2")
    assert ideal_equal(Ideal(R, [x1, x2]), Ideal(R, [x2, x1]))
    assert not ideal_equal(Ideal(R, [x1]), Ideal(R, [x1 ** 2]))
    assert ideal_equal(Ideal(R, [x1 + x2, x2]), Ideal(R, [x1, x2]))


def test_eliminate_examples():
    R = PolyRing(QQ, [VariableBlock(("x",)), VariableBlock(("t1", "t2"), "t")])
    I = Ideal(R, [R.parse("t1 - x"), R.parse("t2 - x^2")])
    E = eliminate(I, R.block("x"))
    assert E.ring.names == ("t1", "t2")
    assert ideal_equal(E, Ideal(E.ring, [E.ring.parse("t2 - t1^2")]))
    assert eliminate(Ideal(R, [R.parse("t1 - x")]), ["x"]).is_zero
    assert eliminate(I, None) is I


def test_dimension_examples():
    R = ring()
    assert dimension(Ideal(R, [])) == 3 and height(Ideal(R, [])) == 0
    assert dimension(Ideal(R, R.gens)) == 0 and height(Ideal(R, R.gens)) == 3
    assert dimension(Ideal(R, [R.parse("x1*x3"), R.parse("x2*x3")])) == 2
    assert dimension(Ideal(R, [R.one])) == -1


def test_initial_degree_examples():
    R = ring()
    assert initial_degree(Ideal(R, [R.parse("x1^2"), R.parse("x2^3")])) == 2
    assert initial_degree(Ideal(R, [R.parse("x1")])) == 1
    with pytest.raises(ZeroIdealError):
        initial_degree(Ideal(R, []))


def test_budget_exhaustion():
    R = ring("x1 x2 x3 x4", GF(32003))
    rng = random.Random(1)
    gens = [R.from_terms({m: rng.randrange(1, 32003) for m in itertools.product(range(3), repeat=4)
                          if sum(m) == 3 and rng.random() < 0.5}) for _ in range(3)]
    with pytest.raises(BudgetExceeded):
        Ideal(R, gens).groebner(budget=Budget(max_pairs=3))


def test_basis_invariants():
    R = ring("x1 x2 x3", GF(32003))
    I = Ideal(R, [R.parse("x1^2*x2 - x3^3"), R.parse("x1*x3^2 + x2^3"), R.parse("x2^2*x3 - x1^3")])
    gb = I.groebner()
    assert gb.is_groebner() and gb.is_reduced()
    assert all(e.lc() == 1 for e in gb)
    assert gb.dimension == monomial_dimension(gb.leading, R.nvars)


def test_grevlex_basis_matches_sympy_over_fp():
    x, y, z = sympy.symbols("x1 x2 x3")
    rng = random.Random(3)
    R = ring(field=GF(101))
    for _ in range(10):
        exprs = []
        for _ in range(3):
            e = sum(rng.randrange(101) * x**a * y**b * z**c
                    for a, b, c in itertools.product(range(3), repeat=3) if a + b + c == 2 and rng.random() < 0.4)
            exprs.append(sympy.expand(e))
        exprs = [e for e in exprs if e != 0]
        if not exprs:
            continue
        theirs = sympy.groebner(exprs, x, y, z, order="grevlex", modulus=101)
        ours = Ideal(R, [R.parse(str(e).replace("**", "^")) for e in exprs]).groebner()
        mapped = Ideal(R, [R.parse(str(g.as_expr()).replace("**", "^")) for g in theirs.polys]).groebner()
        assert [g.terms_dict for g in ours] == [g.terms_dict for g in mapped]


# --- property tests -----------------------------------------------------------

monomials3 = st.tuples(*[st.integers(0, 4)] * 3)


@settings(max_examples=60)
@given(gens=st.lists(monomials3.filter(any), min_size=1, max_size=5), probe=monomials3)
def test_monomial_membership_is_divisibility(gens, probe):
    R = ring(field=GF(32003))
    I = Ideal(R, [R.monomial(g) for g in gens])
    divisible = any(all(a >= b for a, b in zip(probe, g)) for g in gens)
    assert I.groebner().contains(R.monomial(probe)) == divisible


@settings(max_examples=30)
@given(data=st.data())
def test_dimension_independent_of_order(data):
    R = ring(field=GF(32003))
    n = data.draw(st.integers(1, 3))
    gens = []
    for _ in range(n):
        terms = data.draw(st.dictionaries(st.tuples(*[st.integers(0, 2)] * 3), st.integers(1, 32002),
                                          min_size=1, max_size=3))
        gens.append(R.from_terms(terms))
    I = Ideal(R, gens)
    wide = Budget(max_pairs=50_000, max_degree=400)
    assert I.groebner(LEX, wide).dimension == I.groebner(budget=wide).dimension
