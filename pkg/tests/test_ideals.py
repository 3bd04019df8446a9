"""Groebner bases, membership, and the ideal operations."""

import random

import pytest
import sympy

from cartierlab.budgets import DEFAULT_BUDGETS
from cartierlab.errors import ResourceBudgetError, RingMismatchError
from cartierlab.ideals import (
    Ideal,
    ideal_contains,
    ideal_equal,
    ideal_member,
    ideal_product_poly,
    ideal_sum,
    normal_form,
    s_polynomial,
)
from cartierlab.ring import Polynomial, RingSpec

from test_ring import rand_poly


def ring(p=7, n=2):
    return RingSpec(p, ("x", "y", "z")[:n])


def I(R, *texts):
    return Ideal.from_strings(R, texts)


# -- basic bases --------------------------------------------------------------

def test_monomial_pair_is_its_own_basis():
    R = ring()
    basis = I(R, "x^2", "x*y").reduced_basis()
    assert {str(g) for g in basis} == {"x^2", "x*y"}
    # Buchberger criterion: every S-polynomial reduces to zero
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            assert normal_form(s_polynomial(basis[i], basis[j]), basis).is_zero()


def test_linear_elimination():
    R = ring()
    assert I(R, "x", "x+y").basis_strings() == ("y", "x")


def test_zero_ideal_empty_basis():
    R = ring()
    ideal = Ideal(R, [])
    assert ideal.reduced_basis() == ()
    assert ideal.is_zero()


def test_unit_ideal_basis_is_one():
    R = ring()
    assert I(R, "x", "x+1").basis_strings() == ("1",)
    assert I(R, "3").is_unit()


def test_member_examples():
    R = ring()
    assert ideal_member(R.parse("x^2+y^3"), I(R, "x", "y"))
    assert not ideal_equal(I(R, "x"), I(R, "x^2"))
    assert ideal_contains(I(R, "x"), I(R, "x^2"))
    assert ideal_equal(I(R, "x", "y"), I(R, "y", "x+y"))


def test_sum_and_product():
    R = ring()
    assert ideal_equal(ideal_sum(I(R, "x"), I(R, "y")), I(R, "x", "y"))
    f = R.parse("x^2+y^3")
    scaled = ideal_product_poly(f, I(R, "x", "y"))
    assert ideal_equal(scaled, I(R, "x^3+x*y^3", "x^2*y+y^4"))
    assert ideal_product_poly(R.zero(), I(R, "x")).is_zero()


def test_ring_mismatch_raises():
    with pytest.raises(RingMismatchError):
        ideal_member(ring(5).parse("x"), I(ring(7), "x"))


# -- canonicality -------------------------------------------------------------

def test_reduced_basis_is_canonical_under_regeneration():
    rng = random.Random(31)
    for _ in range(40):
        R = ring(rng.choice((2, 3, 5, 7)), rng.choice((1, 2)))
        gens = [rand_poly(rng, R, 3, 3) for _ in range(rng.randint(1, 3))]
        ideal = Ideal(R, gens)
        base = ideal.reduced_basis()
        # same ideal, different generating set: add random combinations
        extra = list(gens)
        for _ in range(rng.randint(1, 3)):
            combo = R.zero()
            for g in gens:
                combo = combo + g * rand_poly(rng, R, 2, 2)
            extra.append(combo)
        rng.shuffle(extra)
        assert Ideal(R, extra).reduced_basis() == base


def test_basis_is_reduced_and_monic():
    rng = random.Random(32)
    for _ in range(30):
        R = ring(rng.choice((3, 5)), 2)
        ideal = Ideal(R, [rand_poly(rng, R, 3, 4) for _ in range(2)])
        basis = ideal.reduced_basis()
        for i, g in enumerate(basis):
            assert g.leading_coeff() == 1
            others = basis[:i] + basis[i + 1 :]
            assert normal_form(g, others) == g


def test_containment_is_a_partial_order():
    rng = random.Random(33)
    for _ in range(25):
        R = ring(rng.choice((2, 5)), 2)
        ideals = [Ideal(R, [rand_poly(rng, R, 2, 3)]) for _ in range(3)]
        a, b, c = ideals
        ab = ideal_sum(a, b)
        abc = ideal_sum(ab, c)
        assert ideal_contains(ab, a) and ideal_contains(abc, ab)
        assert ideal_contains(abc, a)  # transitivity along the chain
        if ideal_contains(a, ab):
            assert ideal_equal(a, ab)  # antisymmetry


# -- oracles ------------------------------------------------------------------

def test_membership_against_sympy():
    rng = random.Random(34)
    x, y = sympy.symbols("x y")
    for _ in range(25):
        p = rng.choice((2, 3, 5, 7))
        R = ring(p, 2)
        gens = [rand_poly(rng, R, 2, 3) for _ in range(rng.randint(1, 2))]
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            continue
        f = rand_poly(rng, R, 3, 4)
        ours = ideal_member(f, Ideal(R, gens))
        sym_gens = [sympy.Poly(str(g).replace("^", "**"), x, y, modulus=p) for g in gens]
        sym_f = sympy.Poly(str(f).replace("^", "**"), x, y, modulus=p)
        basis = sympy.groebner(sym_gens, x, y, modulus=p, order="grevlex")
        assert ours == (basis.reduce(sym_f.as_expr())[1] == 0)


def test_groebner_against_sympy_bases():
    rng = random.Random(35)
    x, y = sympy.symbols("x y")
    for _ in range(20):
        p = rng.choice((3, 5, 7))
        R = ring(p, 2)
        gens = [rand_poly(rng, R, 3, 3) for _ in range(2)]
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            continue
        ours = {str(g).replace("^", "**") for g in Ideal(R, gens).reduced_basis()}
        sym_gens = [sympy.Poly(str(g).replace("^", "**"), x, y, modulus=p) for g in gens]
        basis = sympy.groebner(sym_gens, x, y, modulus=p, order="grevlex")
        theirs = set()
        for expr in basis.exprs:
            # normalize on our side: sympy's monic() would use lex leads
            back = R.parse(str(expr).replace("**", "^")).monic()
            theirs.add(str(back).replace("^", "**"))
        assert ours == theirs


# -- budgets ------------------------------------------------------------------

def test_pair_budget_raises():
    R = ring(7, 2)
    tight = DEFAULT_BUDGETS.with_overrides(groebner_max_pairs=1)
    ideal = I(R, "x^3+y", "x*y^2+x+1", "y^3+x^2")
    with pytest.raises(ResourceBudgetError):
        ideal.reduced_basis(tight)


def test_degree_budget_raises():
    R = ring(5, 2)
    tight = DEFAULT_BUDGETS.with_overrides(groebner_max_degree=2)
    ideal = I(R, "x^3+y^2+1", "y^4+x")
    with pytest.raises(ResourceBudgetError):
        ideal.reduced_basis(tight)


def test_basis_cache_is_idempotent():
    R = ring()
    ideal = I(R, "x^2+y", "y^2")
    first = ideal.reduced_basis()
    assert ideal.reduced_basis() is first
