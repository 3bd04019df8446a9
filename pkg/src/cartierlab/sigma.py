"""Non-F-pure submodules sigma(M, f^lambda) and their graded pieces.

For lambda with denominator prime to p the value has a closed form: with a
the multiplicative order of p modulo the denominator, the ideals
kappa_g^(ka)( f^(lambda(p^(ka)-1)) * R ) descend in k and their stable
member is sigma.  Each chain member is the previous one pushed through
Phi(N) = kappa_g^a( f^(lambda(p^a-1)) * N ), so the chain is evaluated by
iterating Phi to its fixed point.

When p divides the denominator, sigma agrees with its right limit, which is
evaluated through probes (floor(lambda(p^b-1)) + 1)/(p^b - 1): these always
have denominator prime to p, decrease to lambda, and become constant by
discreteness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Tuple

from .budgets import Budgets, DEFAULT_BUDGETS, max_level
from .cartmod import CartierModuleDescriptor
from .errors import (
    InternalInvariantError,
    ResourceBudgetError,
    StabilizationError,
    ValidationError,
)
from .filtration import NilpotenceVerdict, TestModuleFiltration
from .frobenius import cartier_image
from .ideals import Ideal, ideal_contains, ideal_equal, ideal_sum
from .ring import Polynomial, rational_ceil_mul, rational_floor_mul, rational_is_integer


@dataclass(frozen=True)
class SigmaResult:
    lam: Fraction
    ideal: Ideal
    route: str  # "direct" | "right-limit"
    level: int  # order a for the direct route, last probe level otherwise


@dataclass(frozen=True)
class GrSigma:
    lam: Fraction
    at: SigmaResult
    right: SigmaResult
    nontrivial: bool


@dataclass(frozen=True)
class SigmaVariantsReport:
    lam: Fraction
    sigma: Ideal
    sigma_n: Ideal
    sigma_prime: Optional[Ideal]
    all_equal: bool


@dataclass(frozen=True)
class SigmaTauReport:
    lam: Fraction
    sigma_right: Ideal
    tau_at: Ideal
    right_matches_tau: bool
    breakdown: bool
    sigma_at: Optional[Ideal] = None
    tau_left: Optional[Ideal] = None
    left_matches_tau: Optional[bool] = None


def _multiplicative_order(p: int, d: int, budgets: Budgets) -> int:
    if d > budgets.order_denominator_cap:
        raise ResourceBudgetError(
            f"denominator {d} exceeds order-computation cap {budgets.order_denominator_cap}"
        )
    if d == 1:
        return 1
    acc = p % d
    order = 1
    while acc != 1:
        acc = (acc * p) % d
        order += 1
        if order > d:
            raise InternalInvariantError("order computation ran past the modulus")
    return order


def _validate(module: CartierModuleDescriptor, f: Polynomial, lam: Fraction) -> Fraction:
    if f.ring != module.ring:
        raise ValidationError("f must live in the module's ring")
    if f.is_zero():
        raise ValidationError("f must be nonzero")
    lam = Fraction(lam)
    if lam < 0:
        raise ValidationError("lambda must be non-negative")
    return lam


def _direct_sigma(
    module: CartierModuleDescriptor,
    f: Polynomial,
    lam: Fraction,
    budgets: Budgets,
) -> SigmaResult:
    p = module.ring.p
    if lam.denominator % p == 0:
        raise ValidationError("direct route needs a denominator prime to p")
    a = _multiplicative_order(p, lam.denominator, budgets)
    if p**a > budgets.level_q_cap or a > budgets.level_cap:
        raise ResourceBudgetError(
            f"denominator {lam.denominator} needs Frobenius level {a}, beyond the cap"
        )
    m = lam * (p**a - 1)
    if m.denominator != 1:
        raise InternalInvariantError("direct-route exponent must be integral")
    power = f ** int(m)
    current = Ideal.unit(module.ring)
    for _ in range(budgets.chain_max_steps):
        nxt = cartier_image(module, power, current, a, budgets)
        if not ideal_contains(current, nxt, budgets):
            raise InternalInvariantError("sigma chain must descend")
        if ideal_equal(nxt, current, budgets):
            return SigmaResult(lam=lam, ideal=current, route="direct", level=a)
        current = nxt
    raise StabilizationError(
        f"sigma chain did not settle within {budgets.chain_max_steps} steps"
    )


def right_probes(lam: Fraction, p: int, budgets: Budgets) -> Iterator[Tuple[int, Fraction]]:
    """Rationals decreasing to lam from above with denominators prime to p.

    Starts once the probe step 1/(p^b - 1) drops below 1/denominator(lam),
    so agreements between coarse far-right probes are never trusted.
    """
    b_min = 1
    while p**b_min - 1 <= lam.denominator:
        b_min += 1
    for b in range(b_min, b_min + budgets.probe_budget):
        d = p**b - 1
        if d > budgets.order_denominator_cap:
            return
        yield b, Fraction(rational_floor_mul(lam, d) + 1, d)


def _right_limit_sigma(
    module: CartierModuleDescriptor,
    f: Polynomial,
    lam: Fraction,
    budgets: Budgets,
) -> SigmaResult:
    prev: Optional[Ideal] = None
    seen: set = set()
    last_level = 0
    for b, probe in right_probes(lam, module.ring.p, budgets):
        if probe in seen:
            continue
        seen.add(probe)
        value = _direct_sigma(module, f, probe, budgets).ideal
        if prev is not None and ideal_equal(value, prev, budgets):
            return SigmaResult(lam=lam, ideal=value, route="right-limit", level=b)
        prev = value
        last_level = b
    raise ResourceBudgetError(
        f"right-limit probes did not settle within {budgets.probe_budget} tries "
        f"(last level {last_level})"
    )


def sigma(
    module: CartierModuleDescriptor,
    f: Polynomial,
    lam: Fraction,
    budgets: Budgets = DEFAULT_BUDGETS,
    force_route: Optional[str] = None,
) -> SigmaResult:
    """The non-F-pure submodule at exponent lambda.

    ``force_route`` exists for cross-route consistency testing; by default
    the denominator decides.
    """
    lam = _validate(module, f, lam)
    p = module.ring.p
    if force_route == "direct" or (force_route is None and lam.denominator % p != 0):
        return _direct_sigma(module, f, lam, budgets)
    if force_route == "right-limit" or lam.denominator % p == 0:
        return _right_limit_sigma(module, f, lam, budgets)
    raise ValidationError(f"unknown route {force_route!r}")


def sigma_right_limit(
    module: CartierModuleDescriptor,
    f: Polynomial,
    lam: Fraction,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> SigmaResult:
    """sigma at lambda + epsilon for all small epsilon > 0."""
    lam = _validate(module, f, lam)
    return _right_limit_sigma(module, f, lam, budgets)


def gr_sigma(
    module: CartierModuleDescriptor,
    f: Polynomial,
    lam: Fraction,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> GrSigma:
    """The graded piece sigma(lambda)/sigma(lambda + epsilon)."""
    lam = _validate(module, f, lam)
    at = sigma(module, f, lam, budgets)
    right = sigma_right_limit(module, f, lam, budgets)
    if not ideal_contains(at.ideal, right.ideal, budgets):
        raise InternalInvariantError("sigma must decrease into its right limit")
    nontrivial = not ideal_equal(at.ideal, right.ideal, budgets)
    return GrSigma(lam=lam, at=at, right=right, nontrivial=nontrivial)


def sigma_nilpotence(
    module: CartierModuleDescriptor,
    f: Polynomial,
    lam: Fraction,
    a: int,
    k_max: Optional[int] = None,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> NilpotenceVerdict:
    """Nilpotence of kappa^a f^(ceil(lambda(p^a-1))) on the sigma graded piece."""
    lam = _validate(module, f, lam)
    p = module.ring.p
    if k_max is None:
        k_max = budgets.chain_max_steps
    a_exp = rational_ceil_mul(lam, p**a - 1)
    predicted_nilpotent = not rational_is_integer(lam, p**a - 1)
    piece = gr_sigma(module, f, lam, budgets)
    if not piece.nontrivial:
        return NilpotenceVerdict(
            lam=lam, e=a, a_e=a_exp, nilpotent=True, index=0,
            predicted_nilpotent=True, agree=True, trivial_piece=True,
        )
    bottom = piece.right.ideal
    power = f**a_exp
    current = piece.at.ideal
    for k in range(k_max + 1):
        if ideal_contains(bottom, current, budgets):
            return NilpotenceVerdict(
                lam=lam, e=a, a_e=a_exp, nilpotent=True, index=k,
                predicted_nilpotent=predicted_nilpotent,
                agree=predicted_nilpotent,
            )
        nxt = ideal_sum(cartier_image(module, power, current, a, budgets), bottom)
        if not ideal_contains(current, nxt, budgets):
            raise InternalInvariantError("sigma nilpotence iteration must descend")
        if ideal_equal(nxt, current, budgets):
            return NilpotenceVerdict(
                lam=lam, e=a, a_e=a_exp, nilpotent=False, index=None,
                predicted_nilpotent=predicted_nilpotent,
                agree=not predicted_nilpotent,
            )
        current = nxt
    raise StabilizationError(f"sigma nilpotence inconclusive after {k_max} steps")


def _iterate_operator(module, terms, start: Ideal, budgets: Budgets, h_cap: int,
                      floor_ideal: Optional[Ideal] = None) -> Ideal:
    """Fixed point of W -> sum of cartier images of W, descending from start.

    ``terms`` is a list of (power polynomial, level) pairs.  When a floor is
    supplied, each iterate is checked to stay above it (sandwich control).
    """
    current = start
    for _ in range(h_cap):
        parts = [cartier_image(module, power, current, level, budgets) for power, level in terms]
        nxt = parts[0]
        for part in parts[1:]:
            nxt = ideal_sum(nxt, part)
        if not ideal_contains(current, nxt, budgets):
            raise InternalInvariantError("variant iteration must descend")
        if floor_ideal is not None and not ideal_contains(nxt, floor_ideal, budgets):
            raise InternalInvariantError("variant iterate fell below the closed-form value")
        if ideal_equal(nxt, current, budgets):
            return current
        current = nxt
    raise StabilizationError(f"variant iteration did not settle within {h_cap} steps")


def sigma_variants_check(
    module: CartierModuleDescriptor,
    f: Polynomial,
    lam: Fraction,
    n: int,
    h_cap: int = 16,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> SigmaVariantsReport:
    """Cross-check sigma against the degree-truncated and single-degree variants.

    The degrees->=n variant iterates the algebra piece of degrees n..n+depth;
    correctness of the truncation rests on including a multiple of the order
    a, whose term alone already generates the closed-form chain.
    """
    lam = _validate(module, f, lam)
    p = module.ring.p
    if lam.denominator % p == 0:
        raise ValidationError("variant comparison needs a denominator prime to p")
    if n < 1:
        raise ValidationError("the truncation degree must be at least 1")
    base = sigma(module, f, lam, budgets)
    a = _multiplicative_order(p, lam.denominator, budgets)

    # degree window n..cap must contain a multiple of a
    first_multiple = a * ((n + a - 1) // a)
    cap = max(first_multiple, n + max(a, 2))
    if cap > max_level(p, budgets):
        raise ResourceBudgetError(
            f"truncation window reaches level {cap}, beyond the Frobenius level cap"
        )
    window_terms = [
        (f ** rational_ceil_mul(lam, p**e - 1), e) for e in range(n, cap + 1)
    ]
    sigma_n = _iterate_operator(
        module, window_terms, Ideal.unit(module.ring), budgets, h_cap, floor_ideal=base.ideal
    )

    # single-degree-a algebra
    if a > max_level(p, budgets):
        raise ResourceBudgetError("order exceeds the Frobenius level cap")
    m = int(lam * (p**a - 1))
    prime_terms = [(f**m, a)]
    sigma_prime = _iterate_operator(
        module, prime_terms, Ideal.unit(module.ring), budgets, h_cap, floor_ideal=base.ideal
    )

    all_equal = ideal_equal(sigma_n, base.ideal, budgets) and ideal_equal(
        sigma_prime, base.ideal, budgets
    )
    return SigmaVariantsReport(
        lam=lam, sigma=base.ideal, sigma_n=sigma_n, sigma_prime=sigma_prime, all_equal=all_equal
    )


def sigma_tau_comparison(
    module: CartierModuleDescriptor,
    f: Polynomial,
    lam: Fraction,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> SigmaTauReport:
    """Compare sigma with the test module filtration around lambda.

    For F-regular modules sigma(lambda + eps) should equal tau(lambda); the
    report flags ``breakdown`` when it does not.  When the denominator of
    lambda is prime to p the left-side identity sigma(lambda) = tau at the
    left limit is evaluated as well.
    """
    lam = _validate(module, f, lam)
    filtration = TestModuleFiltration(module, f, budgets)
    s_right = sigma_right_limit(module, f, lam, budgets).ideal
    t_at = filtration.tau(lam)
    right_matches = ideal_equal(s_right, t_at, budgets)

    sigma_at = None
    t_left = None
    left_matches = None
    if lam > 0 and lam.denominator % module.ring.p != 0:
        sigma_at = sigma(module, f, lam, budgets).ideal
        t_left = filtration.tau_left(lam)
        left_matches = ideal_equal(sigma_at, t_left, budgets)
    return SigmaTauReport(
        lam=lam,
        sigma_right=s_right,
        tau_at=t_at,
        right_matches_tau=right_matches,
        breakdown=not right_matches,
        sigma_at=sigma_at,
        tau_left=t_left,
        left_matches_tau=left_matches,
    )
