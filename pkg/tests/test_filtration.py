"""Test module filtration: values, jumps, thresholds, nilpotence."""

import random
from fractions import Fraction as F

import pytest

from cartierlab.budgets import DEFAULT_BUDGETS
from cartierlab.cartmod import CartierModuleDescriptor
from cartierlab.errors import ResourceBudgetError, ValidationError
from cartierlab.filtration import (
    TauRequest,
    TestModuleFiltration,
    tau,
    validate_a_e,
)
from cartierlab.frobenius import cartier_image
from cartierlab.ideals import Ideal, ideal_contains, ideal_equal
from cartierlab.ring import rational_ceil_mul


def cusp(p):
    module = CartierModuleDescriptor.from_strings(p, ["x", "y"])
    return module, module.ring.parse("x^2+y^3")


def engine_for(p):
    module, f = cusp(p)
    return TestModuleFiltration(module, f)


# -- tau ------------------------------------------------------------------------

def test_cusp_tau_at_five_sixths():
    module, f = cusp(7)
    request = TauRequest(module=module, f=f, lam=F(5, 6))
    assert tau(request).basis_strings() == ("y", "x")


def test_tau_at_zero_is_test_module_at_zero():
    module = CartierModuleDescriptor.from_strings(
        3, ["x"], twist="x^4", test_element="x"
    )
    engine = TestModuleFiltration(module, module.ring.parse("x"))
    assert ideal_equal(engine.tau(F(0)), engine.tau_zero_ideal())
    assert engine.tau(F(0)).basis_strings() == ("x^2",)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_tau_shifted_module_translation(p):
    # module shifted along y, filtered along x: x^floor(lam) times (y)
    module = CartierModuleDescriptor.from_strings(
        p, ["x", "y"], twist=f"y^{p-1}", test_element="y"
    )
    engine = TestModuleFiltration(module, module.ring.parse("x"))
    assert engine.tau(F(3, 2)).basis_strings() == ("x*y",)


def test_request_validation():
    module, f = cusp(5)
    with pytest.raises(ValidationError):
        TauRequest(module=module, f=module.ring.zero(), lam=F(1, 2))
    with pytest.raises(ValidationError):
        TauRequest(module=module, f=f, lam=F(-1, 2))
    with pytest.raises(ValidationError):
        TauRequest(module=module, f=f, lam=F(1, 2), e_start=0)
    with pytest.raises(ValidationError):
        TestModuleFiltration(module, module.ring.zero())


def test_monomial_filtration_is_floor():
    module = CartierModuleDescriptor.from_strings(5, ["x"])
    engine = TestModuleFiltration(module, module.ring.parse("x"))
    assert engine.tau(F(1)).basis_strings() == ("x",)
    assert engine.tau(F(1, 2)).is_unit()
    assert engine.tau(F(7, 3)).basis_strings() == ("x^2",)
    assert engine.tau_left(F(1)).is_unit()


def test_tau_level_identity_random():
    # kappa_g^e(f^m T0) equals tau at m/p^e, exactly, at every level
    rng = random.Random(71)
    pool = [F(1, 2), F(1, 3), F(2, 3), F(3, 4), F(1), F(5, 6)]
    for _ in range(30):
        p = rng.choice((2, 3, 5))
        module, f = cusp(p)
        engine = TestModuleFiltration(module, f)
        lam = rng.choice(pool)
        e = rng.randint(1, 3)
        m = rational_ceil_mul(lam, p**e)
        lhs = cartier_image(module, f**m, engine.tau_zero_ideal(), e)
        assert ideal_equal(lhs, engine.tau(F(m, p**e)))


# -- left limits and graded pieces ------------------------------------------------

def test_left_limit_at_threshold_is_unit():
    engine = engine_for(7)
    assert engine.tau_left(F(5, 6)).is_unit()
    piece = engine.graded_piece(F(5, 6))
    assert piece.is_jump
    assert piece.tau_at.basis_strings() == ("y", "x")


def test_left_limit_between_jumps_matches_previous_value():
    engine = engine_for(7)
    # tau is constant on [5/6, 1), so the left limit just above matches tau(5/6)
    assert ideal_equal(engine.tau_left(F(9, 10)), engine.tau(F(5, 6)))


def test_graded_piece_below_threshold_is_trivial():
    engine = engine_for(7)
    piece = engine.graded_piece(F(1, 2))
    assert not piece.is_jump
    assert piece.tau_at.is_unit() and piece.tau_left.is_unit()


def test_left_limit_requires_positive_lambda():
    engine = engine_for(5)
    with pytest.raises(ValidationError):
        engine.tau_left(F(0))


# -- jumps and thresholds ----------------------------------------------------------

CUSP_EXPECTED = {2: F(1, 2), 3: F(2, 3), 5: F(4, 5), 7: F(5, 6), 13: F(5, 6)}


@pytest.mark.parametrize("p", [2, 3, 5, 7, 13])
def test_cusp_thresholds(p):
    assert engine_for(p).fpt(bounds=(1, 2)) == CUSP_EXPECTED[p]


def test_cusp_jump_report_p7():
    engine = engine_for(7)
    report = engine.jumping_numbers((F(0), F(1)), bounds=(1, 2))
    assert [lam for lam, _ in report.jumps] == [F(5, 6), F(1)]
    first, second = report.jumps
    assert first[1].basis_strings() == ("y", "x")
    assert second[1].basis_strings() == ("y^3+x^2",)
    assert any("denominators" in w for w in report.warnings)


def test_monomial_jumps_zero_to_three():
    module = CartierModuleDescriptor.from_strings(5, ["x"])
    engine = TestModuleFiltration(module, module.ring.parse("x"))
    report = engine.jumping_numbers((F(0), F(3)), bounds=(1, 1))
    assert [(lam, ideal.basis_strings()) for lam, ideal in report.jumps] == [
        (F(1), ("x",)), (F(2), ("x^2",)), (F(3), ("x^3",)),
    ]


def test_periodic_extension_matches_direct_scan():
    module = CartierModuleDescriptor.from_strings(3, ["x"])
    engine = TestModuleFiltration(module, module.ring.parse("x"))
    direct = engine.jumping_numbers((F(0), F(3)), bounds=(1, 1))
    periodic = engine.jumping_numbers((F(0), F(3)), bounds=(1, 1), use_periodicity=True)
    assert [lam for lam, _ in direct.jumps] == [lam for lam, _ in periodic.jumps]
    for (_, a), (_, b) in zip(direct.jumps, periodic.jumps):
        assert ideal_equal(a, b)


def test_candidate_budget_guard():
    engine = engine_for(7)
    tight = DEFAULT_BUDGETS.with_overrides(candidate_budget=10)
    small = TestModuleFiltration(engine.module, engine.f, tight)
    with pytest.raises(ResourceBudgetError):
        small.jumping_numbers((F(0), F(1)), bounds=(2, 2))


def test_bounds_outside_limits_rejected():
    engine = engine_for(3)
    with pytest.raises(ValidationError):
        engine.jumping_numbers((F(0), F(1)), bounds=(5, 2))
    with pytest.raises(ValidationError):
        engine.jumping_numbers((F(0), F(9)), bounds=(1, 1))


def test_fpt_needs_a_jump():
    module = CartierModuleDescriptor.from_strings(3, ["x"])
    engine = TestModuleFiltration(module, module.ring.parse("2"))
    with pytest.raises(ResourceBudgetError):
        engine.fpt(bounds=(1, 1))


# -- monotonicity and continuity ---------------------------------------------------

def test_tau_monotone_random():
    rng = random.Random(72)
    pool = [F(0), F(1, 3), F(1, 2), F(2, 3), F(5, 6), F(1), F(4, 3)]
    for _ in range(25):
        engine = engine_for(rng.choice((2, 3, 5, 7)))
        lo, hi = sorted((rng.choice(pool), rng.choice(pool)))
        assert ideal_contains(engine.tau(lo), engine.tau(hi))


def test_tau_right_continuous_sampled():
    rng = random.Random(73)
    pool = [F(1, 3), F(1, 2), F(2, 3), F(5, 6), F(1)]
    for _ in range(15):
        p = rng.choice((2, 3, 5, 7))
        engine = engine_for(p)
        lam = rng.choice(pool)
        computed = engine.tau_full(lam)
        nudge = F(1, p ** (computed.level + 2))
        assert ideal_equal(computed.ideal, engine.tau(lam + nudge))


# -- classical identities ----------------------------------------------------------

@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_skoda_and_division_at_threshold(p):
    engine = engine_for(p)
    lam = CUSP_EXPECTED[p]
    assert engine.check_skoda(lam)
    assert engine.check_kappa_division(lam)


def test_skoda_monomial_case():
    module = CartierModuleDescriptor.from_strings(5, ["x"])
    engine = TestModuleFiltration(module, module.ring.parse("x"))
    assert engine.check_skoda(F(2))


def test_kappa_division_at_zero():
    module = CartierModuleDescriptor.from_strings(
        3, ["x"], twist="x^4", test_element="x"
    )
    engine = TestModuleFiltration(module, module.ring.parse("x"))
    assert engine.check_kappa_division(F(0))


# -- nilpotence ---------------------------------------------------------------------

def test_validate_a_e_threshold():
    assert validate_a_e(F(5, 6), 1, 5, 7)
    assert not validate_a_e(F(5, 6), 1, 4, 7)
    assert validate_a_e(F(0), 3, 0, 7)


def test_nilpotence_rejects_too_small_exponent():
    engine = engine_for(7)
    with pytest.raises(ValidationError):
        engine.nilpotence_verdict(F(5, 6), 1, 4)


def test_nilpotence_at_cusp_threshold_p7():
    engine = engine_for(7)
    sharp = engine.nilpotence_verdict(F(5, 6), 1, 5)
    assert not sharp.nilpotent and not sharp.predicted_nilpotent and sharp.agree
    above = engine.nilpotence_verdict(F(5, 6), 1, 6)
    assert above.nilpotent and above.index == 1 and above.agree


def test_nilpotence_p_divisible_denominator_always_nilpotent():
    engine = engine_for(5)
    for e in (1, 2, 3):
        a = rational_ceil_mul(F(4, 5), 5**e - 1)
        verdict = engine.nilpotence_verdict(F(4, 5), e, a)
        assert verdict.nilpotent and verdict.predicted_nilpotent and verdict.agree


def test_nilpotence_trivial_piece():
    engine = engine_for(7)
    verdict = engine.nilpotence_verdict(F(1, 2), 1, 3)
    assert verdict.trivial_piece and verdict.nilpotent and verdict.index == 0


def test_threshold_interval_consistency_runs():
    # fpt() asserts the computed value avoids (a/p^e, a/(p^e-1)); reaching a
    # value at all means the consistency check passed
    for p in (2, 3, 5, 7):
        assert engine_for(p).fpt(bounds=(1, 2)) == CUSP_EXPECTED[p]
