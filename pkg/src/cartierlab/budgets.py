"""Resource budgets.

Every potentially unbounded loop in the package is guarded by one of these
limits and raises :class:`~cartierlab.errors.ResourceBudgetError` (or the
:class:`~cartierlab.errors.StabilizationError` subclass) instead of hanging.
All operations accept an optional ``budgets`` argument; the module-level
``DEFAULT_BUDGETS`` is used otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Budgets:
    # Buchberger
    groebner_max_pairs: int = 200_000
    groebner_max_degree: int = 512
    # polynomial multiplication guard used while building Cartier images
    term_budget: int = 5_000_000
    # Frobenius levels e: 1 <= e <= level_cap and p**e <= level_q_cap
    level_cap: int = 12
    level_q_cap: int = 1 << 20
    # stable-image and test-module-at-zero iterations
    underline_max_steps: int = 64
    tau_sum_max_steps: int = 64
    # left/right limit probes
    probe_budget: int = 16
    # jump search
    candidate_budget: int = 500_000
    bounds_cap_i: int = 4
    bounds_cap_j: int = 6
    # nilpotence and sigma chains
    chain_max_steps: int = 64
    # multiplicative-order computation
    order_denominator_cap: int = 10**6

    def with_overrides(self, **kwargs) -> "Budgets":
        return replace(self, **kwargs)


DEFAULT_BUDGETS = Budgets()


def max_level(p: int, budgets: Budgets = DEFAULT_BUDGETS) -> int:
    """Largest admissible Frobenius level for characteristic ``p``."""
    e = 0
    q = 1
    while e < budgets.level_cap and q * p <= budgets.level_q_cap:
        e += 1
        q *= p
    return e


def validate_level(e: int, p: int, budgets: Budgets = DEFAULT_BUDGETS) -> None:
    from .errors import ValidationError

    if not isinstance(e, int) or e < 1:
        raise ValidationError(f"Frobenius level must be a positive integer, got {e!r}")
    if e > budgets.level_cap or p**e > budgets.level_q_cap:
        raise ValidationError(
            f"Frobenius level {e} out of bounds for p={p} "
            f"(cap {budgets.level_cap}, p^e <= {budgets.level_q_cap})"
        )
