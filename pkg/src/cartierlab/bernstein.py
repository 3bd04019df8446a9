"""Bernstein-Sato polynomials of Cartier modules via eigenvalue supports.

The level-e support set Gamma collects the integers m in [0, p^e - 1] whose
higher-Euler eigenspace is nontrivial; on the F-pure model that is decided
by an ideal comparison: m belongs to Gamma exactly when the Cartier images
kappa_g^e(f^m M) and kappa_g^e(f^(m+1) M) differ.  The roots of the level-e
polynomial are the values m / p^e, all in [0, 1); the polynomial is
square-free by construction.

The level-e root m/p^e corresponds to the exponent lambda = m/(p^e - 1),
for which lambda (p^e - 1) is integral and lambda - lambda/p^e = m/p^e.
``check_bs_roots_sigma`` verifies that each such exponent exhibits a
nontrivial sigma graded piece.  A root present at a small level can be a
pre-asymptotic artifact that vanishes at larger aligned levels; the checker
therefore reports per-level results only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .budgets import Budgets, DEFAULT_BUDGETS, validate_level
from .cartmod import CartierModuleDescriptor, fpure_replacement
from .errors import ValidationError
from .frobenius import _mul_guarded, _twist_prefactor, pe_root
from .ideals import Ideal, ideal_equal
from .ring import Polynomial
from .sigma import gr_sigma


@dataclass(frozen=True)
class BSReport:
    e: int
    gamma: Tuple[int, ...]
    digits: Tuple[Tuple[int, ...], ...]  # base-p digits of each m, least significant first
    roots: Tuple[Fraction, ...]
    fpure_model: Ideal


@dataclass(frozen=True)
class BSJumpCheckEntry:
    m: int
    lam: Fraction
    nontrivial: bool


@dataclass(frozen=True)
class BSJumpCheck:
    e: int
    entries: Tuple[BSJumpCheckEntry, ...]
    violations: Tuple[BSJumpCheckEntry, ...]


def _digits(m: int, p: int, e: int) -> Tuple[int, ...]:
    out = []
    for _ in range(e):
        m, digit = divmod(m, p)
        out.append(digit)
    return tuple(out)


def gamma_set(
    module: CartierModuleDescriptor,
    f: Polynomial,
    e: int,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> List[int]:
    """Eigenvalue indices with nontrivial eigenspace at level e."""
    ring = module.ring
    if f.ring != ring:
        raise ValidationError("f must live in the module's ring")
    if f.is_zero():
        raise ValidationError("f must be nonzero")
    validate_level(e, ring.p, budgets)
    model = fpure_replacement(module, budgets).ideal
    base = list(model.reduced_basis(budgets)) or list(model.generators)
    prefactor = _twist_prefactor(module.twist, e)
    scaled_base = [_mul_guarded(prefactor, u, budgets) for u in base]

    def image(f_power: Polynomial) -> Ideal:
        gens = [_mul_guarded(f_power, u, budgets) for u in scaled_base]
        return pe_root(Ideal(ring, gens), e, budgets)

    q = ring.p**e
    out = []
    f_power = ring.one()
    current = image(f_power)
    for m in range(q):
        f_power = f_power * f
        nxt = image(f_power)
        if not ideal_equal(current, nxt, budgets):
            out.append(m)
        current = nxt
    return out


def bs_polynomial(
    module: CartierModuleDescriptor,
    f: Polynomial,
    e: int,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> BSReport:
    """The level-e Bernstein-Sato data: support set, digits, roots."""
    gamma = gamma_set(module, f, e, budgets)
    p = module.ring.p
    q = p**e
    return BSReport(
        e=e,
        gamma=tuple(gamma),
        digits=tuple(_digits(m, p, e) for m in gamma),
        roots=tuple(Fraction(m, q) for m in gamma),
        fpure_model=fpure_replacement(module, budgets).ideal,
    )


def check_bs_roots_sigma(
    module: CartierModuleDescriptor,
    f: Polynomial,
    e: int,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> BSJumpCheck:
    """Verify each level-e root detects a nontrivial sigma graded piece."""
    gamma = gamma_set(module, f, e, budgets)
    q1 = module.ring.p**e - 1
    entries = []
    violations = []
    for m in gamma:
        lam = Fraction(m, q1)
        piece = gr_sigma(module, f, lam, budgets)
        entry = BSJumpCheckEntry(m=m, lam=lam, nontrivial=piece.nontrivial)
        entries.append(entry)
        if not piece.nontrivial:
            violations.append(entry)
    return BSJumpCheck(e=e, entries=tuple(entries), violations=tuple(violations))
