"""Bracket powers, Frobenius roots, and twisted Cartier images."""

import random

import pytest

from cartierlab.budgets import DEFAULT_BUDGETS
from cartierlab.cartmod import CartierModuleDescriptor
from cartierlab.errors import ResourceBudgetError, ValidationError
from cartierlab.frobenius import bracket_power, cartier_image, pe_root
from cartierlab.ideals import Ideal, ideal_contains, ideal_equal, ideal_member
from cartierlab.ring import RingSpec

from test_ring import rand_poly


def ring(p=7, n=2):
    return RingSpec(p, ("x", "y")[:n])


def I(R, *texts):
    return Ideal.from_strings(R, texts)


# -- bracket powers -----------------------------------------------------------

def test_bracket_power_examples():
    R = ring(2)
    assert ideal_equal(bracket_power(I(R, "x", "y"), 1), I(R, "x^2", "y^2"))
    assert bracket_power(Ideal(R, []), 1).is_zero()
    R3 = ring(3)
    assert ideal_equal(bracket_power(I(R3, "x+y"), 1), I(R3, "x^3+y^3"))


def test_level_bounds():
    R = ring(13, 1)
    with pytest.raises(ValidationError):
        bracket_power(I(R, "x"), 0)
    with pytest.raises(ValidationError):
        pe_root(I(R, "x"), 6)  # 13^6 > 2^20


# -- roots --------------------------------------------------------------------

def test_root_of_single_monomials():
    for p in (2, 3, 5):
        R = ring(p, 1)
        for k in (1, 2, 5):
            assert ideal_equal(pe_root(I(R, f"x^{p * k}"), 1), I(R, f"x^{k}"))
        # x^(p-1) has the constant component at residue p-1
        assert pe_root(I(R, f"x^{p - 1}"), 1).is_unit()


def test_root_floor_rule():
    rng = random.Random(41)
    for _ in range(40):
        p = rng.choice((2, 3, 5))
        R = ring(p, 1)
        u = rng.randint(0, 40)
        e = rng.randint(1, 3)
        expected = I(R, f"x^{u // p**e}") if u // p**e else Ideal.unit(R)
        assert ideal_equal(pe_root(I(R, f"x^{u}"), e), expected)


def test_root_cusp_fifth_power_is_unit():
    # the term 3*x^6*y^6 contributes a unit component at residue (6,6)
    R = ring(7)
    f = R.parse("(x^2+y^3)^5")
    assert dict(f.terms())[(6, 6)] == 3
    assert pe_root(Ideal(R, [f]), 1).is_unit()


def test_root_adjunction_random():
    rng = random.Random(42)
    for _ in range(60):
        p = rng.choice((2, 3, 5))
        R = ring(p, rng.choice((1, 2)))
        gens = [rand_poly(rng, R, 2, 4) for _ in range(rng.randint(1, 3))]
        ideal = Ideal(R, gens)
        if ideal.is_zero():
            continue
        e = rng.randint(1, 3)
        root = pe_root(ideal, e)
        assert ideal_contains(bracket_power(root, e), ideal)
        assert ideal_equal(pe_root(bracket_power(ideal, e), e), ideal)


def test_root_composition_and_monotonicity():
    rng = random.Random(43)
    for _ in range(40):
        p = rng.choice((2, 3))
        R = ring(p, 2)
        ideal = Ideal(R, [rand_poly(rng, R, 3, 5)])
        bigger = Ideal(R, list(ideal.generators) + [rand_poly(rng, R, 2, 3)])
        a, b = rng.randint(1, 2), rng.randint(1, 2)
        assert ideal_equal(pe_root(pe_root(ideal, a), b), pe_root(ideal, a + b))
        assert ideal_contains(pe_root(bigger, a), pe_root(ideal, a))


def test_root_minimality_univariate_exhaustive():
    # exhaustive search over monic h with h^p | f, via plain coefficient division
    rng = random.Random(44)
    for _ in range(25):
        p = rng.choice((2, 3, 5))
        R = ring(p, 1)
        f = rand_poly(rng, R, 3, 12)
        if f.is_zero():
            continue
        root = pe_root(Ideal(R, [f]), 1)

        def coeff_list(poly):
            out = [0] * (poly.total_degree() + 1)
            for mon, c in poly.terms():
                out[mon[0]] = c
            return out

        def h_power_divides(h):
            hp = [0] * ((len(h) - 1) * p + 1)
            for i, c in enumerate(h):
                hp[i * p] = c
            rem = coeff_list(f)
            dh = len(hp) - 1
            if len(rem) - 1 < dh:
                return False
            inv = pow(hp[-1], -1, p)
            for top in range(len(rem) - 1, dh - 1, -1):
                if rem[top] % p:
                    q = (rem[top] * inv) % p
                    for i, c in enumerate(hp):
                        rem[top - dh + i] = (rem[top - dh + i] - q * c) % p
            return all(v % p == 0 for v in rem)

        best = None
        for d in range(f.total_degree() // p, -1, -1):
            for tail in range(p**d):
                h, t = [], tail
                for _ in range(d):
                    t, digit = divmod(t, p)
                    h.append(digit)
                h.append(1)
                if h_power_divides(h):
                    best = h
                    break
            if best is not None:
                break
        from cartierlab.ring import Polynomial

        expected = Ideal(R, [Polynomial(R, {(i,): c for i, c in enumerate(best) if c})])
        assert ideal_equal(root, expected), f"p={p}, f={f}"


# -- twisted images -----------------------------------------------------------

def test_cartier_image_monomial_formula():
    rng = random.Random(45)
    for p in (2, 3, 5):
        R = ring(p, 1)
        module = CartierModuleDescriptor(R, R.parse(f"x^{p - 1}"))
        one = R.one()
        for _ in range(15):
            m = rng.randint(0, 12)
            e = rng.randint(1, 3)
            k = (p**e - 1 + m) // p**e
            expected = I(R, f"x^{k}") if k else Ideal.unit(R)
            got = cartier_image(module, one, I(R, f"x^{m}") if m else Ideal.unit(R), e)
            assert ideal_equal(got, expected)


def test_cartier_image_untwisted_is_root():
    rng = random.Random(46)
    for _ in range(25):
        p = rng.choice((2, 3, 5))
        R = ring(p, rng.choice((1, 2)))
        module = CartierModuleDescriptor(R, R.one())
        ideal = Ideal(R, [rand_poly(rng, R, 2, 4)])
        e = rng.randint(1, 3)
        assert ideal_equal(cartier_image(module, R.one(), ideal, e), pe_root(ideal, e))


def test_cartier_image_fixed_unit_at_every_level():
    # (F_2[x], twist x): the twist power x^(2^e - 1) splits off a unit
    R = ring(2, 1)
    module = CartierModuleDescriptor(R, R.parse("x"))
    for e in (1, 2, 3, 4):
        assert cartier_image(module, R.one(), Ideal.unit(R), e).is_unit()


def test_cartier_image_composition():
    rng = random.Random(47)
    for _ in range(30):
        p = rng.choice((2, 3, 5))
        R = ring(p, 1)
        module = CartierModuleDescriptor(R, R.parse(f"x^{rng.randint(1, 2) * (p - 1)}"))
        one = R.one()
        ideal = Ideal(R, [rand_poly(rng, R, 2, 6)])
        if ideal.is_zero():
            continue
        a, b = rng.randint(1, 2), rng.randint(1, 2)
        left = cartier_image(module, one, cartier_image(module, one, ideal, b), a)
        assert ideal_equal(left, cartier_image(module, one, ideal, a + b))


def test_zero_cases():
    R = ring()
    module = CartierModuleDescriptor(R, R.one())
    assert cartier_image(module, R.zero(), Ideal.unit(R), 1).is_zero()
    assert cartier_image(module, R.one(), Ideal(R, []), 1).is_zero()
    assert pe_root(Ideal(R, []), 2).is_zero()


def test_term_budget_guard():
    R = ring(2)
    module = CartierModuleDescriptor(R, R.parse("x+y"))
    dense = R.parse("(x+y+1)^12")
    tight = DEFAULT_BUDGETS.with_overrides(term_budget=50)
    with pytest.raises(ResourceBudgetError):
        cartier_image(module, dense, Ideal(R, [dense]), 3, tight)
