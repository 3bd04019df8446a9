"""The test module filtration tau(M, f^lambda) and everything built on it.

Evaluation strategy: with T0 the test module at exponent zero, the level-e
approximation J_e = kappa_g^e( f^ceil(lambda p^e) * T0 ) equals
tau(M, f^(ceil(lambda p^e)/p^e)) exactly, so the sequence J_e increases to
tau(M, f^lambda) and is exact as soon as no jump separates lambda from
ceil(lambda p^e)/p^e.  The stopping rule is the configured number of
consecutive equal values; jump scans additionally pass a resolution so the
approximation exponent is pushed strictly inside the current candidate gap
before a value is accepted.  When lambda * p^e is an integer the value is
exact outright and returned immediately.

Jump searches enumerate candidates a / (p^i (p^j - 1)) inside the window
and locate change points by bisection, which is sound because the
filtration is monotone: equal values at two points force constancy in
between.  Jumps whose denominators fall outside the candidate family are
missed; every report carries that caveat as a warning string.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .budgets import Budgets, DEFAULT_BUDGETS, max_level
from .cartmod import CartierModuleDescriptor, tau_zero
from .errors import (
    InternalInvariantError,
    ResourceBudgetError,
    StabilizationError,
    ValidationError,
)
from .frobenius import cartier_image
from .ideals import (
    Ideal,
    ideal_contains,
    ideal_equal,
    ideal_product_poly,
    ideal_strictly_contains,
    ideal_sum,
)
from .ring import Polynomial, rational_ceil_mul, rational_is_integer

Window = Tuple[Fraction, Fraction]

CANDIDATE_CAVEAT = (
    "jump candidates are limited to denominators p^i*(p^j-1) within the "
    "requested bounds; jumps with other denominators are not detected"
)


@dataclass(frozen=True)
class TauRequest:
    module: CartierModuleDescriptor
    f: Polynomial
    lam: Fraction
    e_start: int = 1
    e_cap: Optional[int] = None
    consecutive_stable: int = 2
    # optional exactness aid: keep refining until the approximation exponent
    # is within `resolution` of lam (used by jump scans; None = heuristic stop)
    resolution: Optional[Fraction] = None

    def __post_init__(self):
        if self.f.ring != self.module.ring:
            raise ValidationError("f must live in the module's ring")
        if self.f.is_zero():
            raise ValidationError("f must be nonzero (a regular element)")
        if self.lam < 0:
            raise ValidationError("lambda must be non-negative")
        cap = self.e_cap if self.e_cap is not None else max_level(self.module.ring.p)
        if not (1 <= self.e_start <= cap):
            raise ValidationError(f"need 1 <= e_start <= e_cap, got {self.e_start}..{cap}")
        if self.consecutive_stable < 1:
            raise ValidationError("consecutive_stable must be at least 1")


@dataclass(frozen=True)
class TauComputation:
    ideal: Ideal
    level: int


@dataclass(frozen=True)
class JumpReport:
    jumps: Tuple[Tuple[Fraction, Ideal], ...]
    window: Window
    bounds: Tuple[int, int]
    warnings: Tuple[str, ...]


@dataclass(frozen=True)
class GradedPiece:
    lam: Fraction
    tau_left: Ideal
    tau_at: Ideal
    is_jump: bool


@dataclass(frozen=True)
class NilpotenceVerdict:
    lam: Fraction
    e: int
    a_e: int
    nilpotent: bool
    index: Optional[int]
    predicted_nilpotent: bool
    agree: bool
    trivial_piece: bool = False


def validate_a_e(lam: Fraction, e: int, a_e: int, p: int) -> bool:
    """Does kappa^e f^(a_e) descend to the graded piece at lambda?"""
    return a_e >= rational_ceil_mul(lam, p**e - 1)


class TestModuleFiltration:
    """Evaluation engine for one (module, f) pair with memoized values."""

    def __init__(
        self,
        module: CartierModuleDescriptor,
        f: Polynomial,
        budgets: Budgets = DEFAULT_BUDGETS,
        consecutive_stable: int = 2,
    ):
        if f.ring != module.ring:
            raise ValidationError("f must live in the module's ring")
        if f.is_zero():
            raise ValidationError("f must be nonzero (a regular element)")
        self.module = module
        self.f = f
        self.budgets = budgets
        self.consecutive_stable = consecutive_stable
        self._t0: Optional[Ideal] = None
        self._tau_cache: Dict[Tuple[Fraction, Optional[Fraction]], TauComputation] = {}
        self._left_cache: Dict[Fraction, Ideal] = {}

    # -- base values ---------------------------------------------------------

    @property
    def ring(self):
        return self.module.ring

    def tau_zero_ideal(self) -> Ideal:
        if self._t0 is None:
            self._t0 = tau_zero(self.module, self.budgets)
        return self._t0

    # -- tau -----------------------------------------------------------------

    def tau(self, lam: Fraction, resolution: Optional[Fraction] = None) -> Ideal:
        return self.tau_full(lam, resolution).ideal

    def tau_full(
        self,
        lam: Fraction,
        resolution: Optional[Fraction] = None,
        e_start: int = 1,
        e_cap: Optional[int] = None,
    ) -> TauComputation:
        lam = Fraction(lam)
        if lam < 0:
            raise ValidationError("lambda must be non-negative")
        key = (lam, resolution, e_start, e_cap)
        hit = self._tau_cache.get(key)
        if hit is not None:
            return hit
        result = self._tau_iterate(lam, resolution, e_start, e_cap)
        self._tau_cache[key] = result
        return result

    def _tau_iterate(
        self,
        lam: Fraction,
        resolution: Optional[Fraction],
        e_start: int = 1,
        e_cap: Optional[int] = None,
    ) -> TauComputation:
        if lam == 0:
            return TauComputation(self.tau_zero_ideal(), 0)
        p = self.ring.p
        t0 = self.tau_zero_ideal()
        cap = min(e_cap, max_level(p, self.budgets)) if e_cap else max_level(p, self.budgets)
        run = 0
        prev: Optional[Ideal] = None
        prev_mu: Optional[Fraction] = None
        last_two: Tuple[Optional[Ideal], Optional[Ideal]] = (None, None)
        for e in range(e_start, cap + 1):
            m = rational_ceil_mul(lam, p**e)
            mu = Fraction(m, p**e)
            if mu == prev_mu:
                # same approximation exponent as the previous level: the value
                # cannot change and agreement carries no evidence, skip
                continue
            current = cartier_image(self.module, self.f**m, t0, e, self.budgets)
            if prev is not None and not ideal_contains(current, prev, self.budgets):
                raise InternalInvariantError("tau approximations must increase with the level")
            if mu == lam:
                # the approximation exponent hits lambda itself: exact value
                return TauComputation(current, e)
            if prev is not None and ideal_equal(current, prev, self.budgets):
                run += 1
            else:
                run = 1
            resolved = resolution is None or mu - lam < resolution
            if run >= self.consecutive_stable and resolved:
                return TauComputation(current, e)
            last_two = (prev, current)
            prev = current
            prev_mu = mu
        raise StabilizationError(
            f"tau did not stabilize by level {cap} for lambda={lam}",
            last_two=last_two,
        )

    # -- left limits -----------------------------------------------------------

    def tau_left(self, lam: Fraction) -> Ideal:
        """tau at lambda - epsilon for all small epsilon > 0.

        Probes lambda - 1/(p^k - 1) climbing toward lambda; discreteness
        makes the probe values eventually constant, detected as two
        consecutive agreements.  Probing starts only once the step is
        smaller than both lambda and 1/denominator(lambda), so coarse
        far-left probes cannot fake an agreement.
        """
        lam = Fraction(lam)
        if lam <= 0:
            raise ValidationError("left limits need lambda > 0")
        hit = self._left_cache.get(lam)
        if hit is not None:
            return hit
        p = self.ring.p
        k = 1
        while (
            Fraction(1, p**k - 1) >= lam or p**k - 1 <= lam.denominator
        ) and p**k - 1 < self.budgets.level_q_cap:
            k += 1
        prev_value: Optional[Ideal] = None
        for _ in range(self.budgets.probe_budget):
            probe = lam - Fraction(1, p**k - 1)
            # the approximation exponent must land inside (probe, lam),
            # otherwise a jump at lam itself would contaminate the value
            value = self.tau(probe, resolution=lam - probe)
            if prev_value is not None and ideal_equal(value, prev_value, self.budgets):
                self._left_cache[lam] = value
                return value
            prev_value = value
            k += 1
        raise ResourceBudgetError(
            f"left-limit probes did not settle within {self.budgets.probe_budget} tries"
        )

    def graded_piece(self, lam: Fraction) -> GradedPiece:
        lam = Fraction(lam)
        left = self.tau_left(lam)
        at = self.tau(lam)
        if not ideal_contains(left, at, self.budgets):
            raise InternalInvariantError("tau at lambda must sit inside its left limit")
        return GradedPiece(lam=lam, tau_left=left, tau_at=at,
                           is_jump=not ideal_equal(left, at, self.budgets))

    # -- jump search -----------------------------------------------------------

    def _candidates(self, window: Window, bounds: Tuple[int, int]) -> List[Fraction]:
        lo, hi = window
        A, B = bounds
        p = self.ring.p
        if lo < 0 or hi < lo:
            raise ValidationError("window must satisfy 0 <= lo <= hi")
        if hi > 8:
            raise ValidationError("window upper end is capped at 8")
        if not (0 <= A <= self.budgets.bounds_cap_i and 1 <= B <= self.budgets.bounds_cap_j):
            raise ValidationError(
                f"denominator bounds {bounds} outside configured limits "
                f"({self.budgets.bounds_cap_i}, {self.budgets.bounds_cap_j})"
            )
        dens = sorted({p**i * (p**j - 1) for i in range(A + 1) for j in range(1, B + 1)})
        estimate = sum(int((hi - lo) * d) + 1 for d in dens)
        if estimate > self.budgets.candidate_budget:
            raise ResourceBudgetError(
                f"candidate estimate {estimate} exceeds budget {self.budgets.candidate_budget}"
            )
        values = {lo, hi}
        for d in dens:
            a0 = rational_ceil_mul(lo, d)
            a1 = (hi.numerator * d) // hi.denominator
            for a in range(a0, a1 + 1):
                values.add(Fraction(a, d))
        return sorted(values)

    def jumping_numbers(
        self,
        window: Window,
        bounds: Tuple[int, int] = (2, 2),
        use_periodicity: bool = False,
    ) -> JumpReport:
        """All detected jumps in the window, each with its tau ideal.

        With ``use_periodicity`` and a window wider than one unit, only the
        first unit is scanned and later jumps are produced by the
        Briancon-Skoda shift tau(lambda+1) = f*tau(lambda).
        """
        lo, hi = window = (Fraction(window[0]), Fraction(window[1]))
        warnings = (CANDIDATE_CAVEAT,)
        if use_periodicity and hi - lo > 1:
            base = self.jumping_numbers((lo, lo + 1), bounds, use_periodicity=False)
            jumps = list(base.jumps)
            shift = 1
            while lo + shift < hi:
                for lam, ideal in base.jumps:
                    lifted = lam + shift
                    if lo + 1 < lifted <= hi:
                        jumps.append((lifted, ideal_product_poly(self.f**shift, ideal)))
                shift += 1
            jumps.sort(key=lambda pair: pair[0])
            return JumpReport(tuple(jumps), window, bounds, warnings)

        cands = self._candidates(window, bounds)
        values: Dict[int, Ideal] = {}

        def tau_at(idx: int) -> Ideal:
            if idx not in values:
                lam = cands[idx]
                resolution = cands[idx + 1] - lam if idx + 1 < len(cands) else None
                values[idx] = self.tau(lam, resolution)
            return values[idx]

        drops: List[int] = []

        def scan(i: int, j: int) -> None:
            # precondition: tau_at(i) != tau_at(j); monotonicity localizes drops
            if j - i == 1:
                drops.append(j)
                return
            mid = (i + j) // 2
            if not ideal_equal(tau_at(i), tau_at(mid), self.budgets):
                scan(i, mid)
            if not ideal_equal(tau_at(mid), tau_at(j), self.budgets):
                scan(mid, j)

        if len(cands) > 1 and not ideal_equal(tau_at(0), tau_at(len(cands) - 1), self.budgets):
            scan(0, len(cands) - 1)

        jumps = []
        for idx in sorted(drops):
            if not ideal_strictly_contains(tau_at(idx - 1), tau_at(idx), self.budgets):
                raise InternalInvariantError("detected drop is not a strict containment")
            jumps.append((cands[idx], tau_at(idx)))
        return JumpReport(tuple(jumps), window, bounds, warnings)

    def fpt(self, bounds: Tuple[int, int] = (2, 2)) -> Fraction:
        """Smallest positive jump; scans [0, 1], then (1, 2] if needed."""
        report = self.jumping_numbers((Fraction(0), Fraction(1)), bounds)
        positive = [lam for lam, _ in report.jumps if lam > 0]
        if not positive:
            report = self.jumping_numbers((Fraction(1), Fraction(2)), bounds)
            positive = [lam for lam, _ in report.jumps if lam > 1]
        if not positive:
            raise StabilizationError("no jump detected in [0, 2]")
        value = min(positive)
        self._fpt_consistency(value)
        return value

    def _fpt_consistency(self, lam: Fraction) -> None:
        # the threshold avoids every open interval (a/p^e, a/(p^e-1)): when
        # lambda*(p^e - 1) is fractional its ceiling must reach lambda*p^e
        p = self.ring.p
        for e in range(1, max_level(p, self.budgets) + 1):
            if not rational_is_integer(lam, p**e - 1):
                if Fraction(rational_ceil_mul(lam, p**e - 1)) < lam * p**e:
                    raise InternalInvariantError(
                        f"threshold {lam} lands in a forbidden interval at level {e}"
                    )

    # -- nilpotence -------------------------------------------------------------

    def nilpotence_verdict(
        self, lam: Fraction, e: int, a_e: int, k_max: Optional[int] = None
    ) -> NilpotenceVerdict:
        """Decide nilpotence of kappa^e f^(a_e) on the graded piece at lambda.

        Iterates J -> kappa_g^e(f^(a_e) J) + tau(lambda) from the left limit;
        the operator maps the left limit into itself, so the chain descends
        and ends at tau(lambda) (nilpotent, index = step count) or at a
        strictly larger fixed point (non-nilpotent).
        """
        lam = Fraction(lam)
        p = self.ring.p
        if k_max is None:
            k_max = self.budgets.chain_max_steps
        if not validate_a_e(lam, e, a_e, p):
            raise ValidationError(
                f"a_e={a_e} below ceil(lambda*(p^e-1)); no induced structure on the piece"
            )
        predicted_nilpotent = not (
            rational_is_integer(lam, p**e - 1)
            and a_e == (lam * (p**e - 1))
        )
        piece = self.graded_piece(lam)
        tau_at = piece.tau_at
        if not piece.is_jump:
            return NilpotenceVerdict(
                lam=lam, e=e, a_e=a_e, nilpotent=True, index=0,
                predicted_nilpotent=True, agree=True, trivial_piece=True,
            )
        power = self.f**a_e
        current = piece.tau_left
        for k in range(k_max + 1):
            if ideal_contains(tau_at, current, self.budgets):
                return NilpotenceVerdict(
                    lam=lam, e=e, a_e=a_e, nilpotent=True, index=k,
                    predicted_nilpotent=predicted_nilpotent,
                    agree=predicted_nilpotent,
                )
            nxt = ideal_sum(cartier_image(self.module, power, current, e, self.budgets), tau_at)
            if not ideal_contains(current, nxt, self.budgets):
                raise InternalInvariantError("nilpotence iteration must descend")
            if ideal_equal(nxt, current, self.budgets):
                return NilpotenceVerdict(
                    lam=lam, e=e, a_e=a_e, nilpotent=False, index=None,
                    predicted_nilpotent=predicted_nilpotent,
                    agree=not predicted_nilpotent,
                )
            current = nxt
        raise StabilizationError(f"nilpotence iteration inconclusive after {k_max} steps")

    # -- classical identities ------------------------------------------------

    def check_skoda(self, lam: Fraction) -> bool:
        """tau(lambda + 1) == f * tau(lambda)."""
        lam = Fraction(lam)
        lhs = self.tau(lam + 1)
        rhs = ideal_product_poly(self.f, self.tau(lam))
        return ideal_equal(lhs, rhs, self.budgets)

    def check_kappa_division(self, lam: Fraction) -> bool:
        """kappa_g(tau(lambda)) == tau(lambda / p)."""
        lam = Fraction(lam)
        lhs = cartier_image(self.module, self.ring.one(), self.tau(lam), 1, self.budgets)
        rhs = self.tau(lam / self.ring.p)
        return ideal_equal(lhs, rhs, self.budgets)


# -- free-function layer ------------------------------------------------------


def tau(request: TauRequest) -> Ideal:
    return tau_full(request).ideal


def tau_full(request: TauRequest) -> TauComputation:
    engine = TestModuleFiltration(
        request.module, request.f, consecutive_stable=request.consecutive_stable
    )
    return engine.tau_full(request.lam, request.resolution, request.e_start, request.e_cap)


def tau_left(
    module: CartierModuleDescriptor,
    f: Polynomial,
    lam: Fraction,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> Ideal:
    return TestModuleFiltration(module, f, budgets).tau_left(lam)


def jumping_numbers(
    module: CartierModuleDescriptor,
    f: Polynomial,
    window: Window,
    bounds: Tuple[int, int] = (2, 2),
    budgets: Budgets = DEFAULT_BUDGETS,
    use_periodicity: bool = False,
) -> JumpReport:
    return TestModuleFiltration(module, f, budgets).jumping_numbers(
        window, bounds, use_periodicity
    )


def fpt(
    module: CartierModuleDescriptor,
    f: Polynomial,
    bounds: Tuple[int, int] = (2, 2),
    budgets: Budgets = DEFAULT_BUDGETS,
) -> Fraction:
    return TestModuleFiltration(module, f, budgets).fpt(bounds)


def graded_piece(
    module: CartierModuleDescriptor,
    f: Polynomial,
    lam: Fraction,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> GradedPiece:
    return TestModuleFiltration(module, f, budgets).graded_piece(lam)


def nilpotence_verdict(
    module: CartierModuleDescriptor,
    f: Polynomial,
    lam: Fraction,
    e: int,
    a_e: int,
    k_max: Optional[int] = None,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> NilpotenceVerdict:
    return TestModuleFiltration(module, f, budgets).nilpotence_verdict(lam, e, a_e, k_max)


def check_skoda(
    module: CartierModuleDescriptor,
    f: Polynomial,
    lam: Fraction,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> bool:
    return TestModuleFiltration(module, f, budgets).check_skoda(lam)


def check_kappa_division(
    module: CartierModuleDescriptor,
    f: Polynomial,
    lam: Fraction,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> bool:
    return TestModuleFiltration(module, f, budgets).check_kappa_division(lam)
