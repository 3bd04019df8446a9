"""Cartier module descriptors, stable images, and the test module at zero.

A descriptor is the pair (R, kappa o (g.)) for a nonzero twist polynomial g;
submodules of the module are ideals of R.  The stable image is the limit of
the descending chain R, kappa_g(R), kappa_g^2(R), ...; one-step fixedness
certifies stability because the Cartier algebra here is generated in
degree one.

The test module at exponent zero is assembled from a single test element c
as the stabilized sum of the iterates kappa_g^e(c * stable_image), which is
the single-minimal-prime presentation.  Consecutive equal partial sums are
not just a heuristic here: the partial-sum operator satisfies
kappa_g(S_E) = T_1 + ... + T_(E+1), so S_(E+1) = S_E is equivalent to
closure of S_E under kappa_g, which absorbs the whole tail.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .budgets import Budgets, DEFAULT_BUDGETS
from .errors import StabilizationError, ValidationError, InternalInvariantError
from .frobenius import cartier_image
from .ideals import Ideal, ideal_contains, ideal_equal, ideal_product_poly, ideal_sum
from .ring import Polynomial, RingSpec


@dataclass(frozen=True)
class CartierModuleDescriptor:
    """(R, kappa o (g.)) with an optional test element."""

    ring: RingSpec
    twist: Polynomial
    test_element: Optional[Polynomial] = None
    assert_f_regular: bool = False

    def __post_init__(self):
        if self.twist.ring != self.ring:
            raise ValidationError("twist polynomial must live in the ambient ring")
        if self.twist.is_zero():
            raise ValidationError("twist polynomial must be nonzero")
        if self.test_element is not None:
            if self.test_element.ring != self.ring:
                raise ValidationError("test element must live in the ambient ring")
            if self.test_element.is_zero():
                raise ValidationError("test element must be nonzero")

    @classmethod
    def from_strings(
        cls,
        p: int,
        variables: Sequence[str],
        twist: str = "1",
        test_element: Optional[str] = None,
        assert_f_regular: bool = False,
    ) -> "CartierModuleDescriptor":
        ring = RingSpec(p, tuple(variables))
        return cls(
            ring=ring,
            twist=ring.parse(twist),
            test_element=ring.parse(test_element) if test_element is not None else None,
            assert_f_regular=assert_f_regular,
        )

    def to_json(self) -> dict:
        return {
            "p": self.ring.p,
            "vars": list(self.ring.vars),
            "twist": str(self.twist),
            "test_element": None if self.test_element is None else str(self.test_element),
            "assert_f_regular": self.assert_f_regular,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "CartierModuleDescriptor":
        return cls.from_strings(
            p=doc["p"],
            variables=doc["vars"],
            twist=doc.get("twist", "1"),
            test_element=doc.get("test_element"),
            assert_f_regular=bool(doc.get("assert_f_regular", False)),
        )


@dataclass(frozen=True)
class StableImage:
    ideal: Ideal
    stabilization_level: int
    certified: bool


def underline(
    module: CartierModuleDescriptor, budgets: Budgets = DEFAULT_BUDGETS
) -> StableImage:
    """Stable image of the full module under the twisted Cartier operator."""
    ring = module.ring
    one = ring.one()
    current = Ideal.unit(ring)
    for step in range(budgets.underline_max_steps):
        nxt = cartier_image(module, one, current, 1, budgets)
        if ideal_equal(nxt, current, budgets):
            return StableImage(ideal=current, stabilization_level=step, certified=True)
        current = nxt
    raise StabilizationError(
        f"stable image did not settle within {budgets.underline_max_steps} steps",
    )


def fpure_replacement(
    module: CartierModuleDescriptor, budgets: Budgets = DEFAULT_BUDGETS
) -> StableImage:
    """The F-pure model used for graded and eigenspace computations."""
    return underline(module, budgets)


def tau_zero(module: CartierModuleDescriptor, budgets: Budgets = DEFAULT_BUDGETS) -> Ideal:
    """The test module at exponent zero.

    Priority: an explicit test element wins; a twist of 1 means the ring
    with its canonical structure, which is F-regular; an asserted-F-regular
    descriptor falls back to the stable image (equal to the unit ideal
    exactly when the assertion is truthful).
    """
    ring = module.ring
    if module.test_element is not None:
        return _tau_zero_from_test_element(module, module.test_element, budgets)
    if module.twist.is_one():
        return Ideal.unit(ring)
    if module.assert_f_regular:
        return underline(module, budgets).ideal
    raise ValidationError(
        "descriptor needs a test element (or assert_f_regular, or twist 1) "
        "to compute the test module at exponent zero"
    )


def _tau_zero_from_test_element(
    module: CartierModuleDescriptor,
    c: Polynomial,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> Ideal:
    if c.is_zero():
        raise ValidationError("test element must be nonzero")
    ring = module.ring
    one = ring.one()
    stable = underline(module, budgets).ideal
    term = ideal_product_poly(c, stable)
    total = term
    for _ in range(budgets.tau_sum_max_steps):
        term = cartier_image(module, one, term, 1, budgets)
        new_total = ideal_sum(total, term)
        if ideal_equal(new_total, total, budgets):
            _certify_tau_zero(module, c, total, budgets)
            return total
        if not ideal_contains(new_total, total, budgets):
            raise InternalInvariantError("partial sums must be increasing")
        total = new_total
    raise StabilizationError(
        f"test-module sum did not settle within {budgets.tau_sum_max_steps} steps",
        last_two=(total, new_total),
    )


def _certify_tau_zero(module, c, total, budgets) -> None:
    # equal consecutive partial sums already imply kappa_g-closure; verify it
    # anyway, along with closure against the test-element twist.
    one = module.ring.one()
    if not ideal_contains(total, cartier_image(module, one, total, 1, budgets), budgets):
        raise InternalInvariantError("stabilized sum is not closed under the Cartier operator")
    if not ideal_contains(total, cartier_image(module, c, total, 1, budgets), budgets):
        raise InternalInvariantError("stabilized sum is not closed under the twisted generator")


@dataclass(frozen=True)
class TestElementReport:
    baseline: Polynomial
    baseline_ideal: Ideal
    trials: Tuple[Tuple[Polynomial, Ideal, bool], ...]
    all_agree: bool


def validate_test_element(
    module: CartierModuleDescriptor,
    c: Polynomial,
    trial_list: Sequence[Polynomial],
    budgets: Budgets = DEFAULT_BUDGETS,
) -> TestElementReport:
    """Heuristic cross-validation of a test element.

    Recomputes the test module at zero with each trial; any disagreement
    proves at least one candidate invalid, agreement is evidence only.
    """
    if c.is_zero():
        raise ValidationError("test element must be nonzero")
    baseline = _tau_zero_from_test_element(module, c, budgets)
    trials: List[Tuple[Polynomial, Ideal, bool]] = []
    all_agree = True
    for trial in trial_list:
        ideal = _tau_zero_from_test_element(module, trial, budgets)
        agrees = ideal_equal(ideal, baseline, budgets)
        all_agree = all_agree and agrees
        trials.append((trial, ideal, agrees))
    return TestElementReport(
        baseline=c, baseline_ideal=baseline, trials=tuple(trials), all_agree=all_agree
    )
