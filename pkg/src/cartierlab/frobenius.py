"""Frobenius bracket powers, p^e-th roots, and twisted Cartier images.

The canonical Cartier operator on R = F_p[x_1..x_n] is modeled so that the
image of an R-submodule I under its e-th iterate is exactly the Frobenius
root I^[1/p^e], the smallest ideal J with I contained in J^[p^e].  A twisted
structure (R, kappa o (g.)) then acts on ideals by

    kappa_g^e (h * I)  =  pe_root( g^(nu_e) * h * I, e ),
    nu_e = 1 + p + ... + p^(e-1),

because e-fold composition of kappa o (g.) collects the twist as g^(nu_e).
"""

from __future__ import annotations

from functools import lru_cache
from typing import TYPE_CHECKING, Dict, List

from .budgets import Budgets, DEFAULT_BUDGETS, validate_level
from .errors import ResourceBudgetError, RingMismatchError
from .ideals import Ideal
from .ring import Monomial, Polynomial

if TYPE_CHECKING:  # pragma: no cover
    from .cartmod import CartierModuleDescriptor


def bracket_power(ideal: Ideal, e: int, budgets: Budgets = DEFAULT_BUDGETS) -> Ideal:
    """I^[p^e]: generated by the p^e-th powers of the generators."""
    validate_level(e, ideal.ring.p, budgets)
    return Ideal(ideal.ring, [g.frobenius(e) for g in ideal.generators])


def _root_components(g: Polynomial, q: int) -> List[Polynomial]:
    """Split g = sum over residues a of (g_a)^q * x^a and return the g_a.

    Every exponent vector u decomposes uniquely as u = q*v + r with r in
    [0, q)^n, so each term of g lands in exactly one residue bucket and no
    coefficient collisions occur.
    """
    buckets: Dict[Monomial, Dict[Monomial, int]] = {}
    for mon, c in g.terms():
        q_part = tuple(u // q for u in mon)
        r_part = tuple(u % q for u in mon)
        buckets.setdefault(r_part, {})[q_part] = c
    return [Polynomial(g.ring, terms) for terms in buckets.values()]


def pe_root(ideal: Ideal, e: int, budgets: Budgets = DEFAULT_BUDGETS) -> Ideal:
    """Smallest ideal J with I contained in J^[p^e].

    Componentwise splitting of each generator in the x^a basis of R over
    R^(p^e); roots add over sums of ideals, so generator-wise splitting
    gives the root of the whole ideal.
    """
    validate_level(e, ideal.ring.p, budgets)
    if ideal.is_zero():
        return ideal
    q = ideal.ring.p**e
    components = []
    seen = set()
    for g in ideal.generators:
        for comp in _root_components(g, q):
            if comp not in seen:
                seen.add(comp)
                components.append(comp)
    components.sort(key=lambda f: f.sort_key())
    return Ideal(ideal.ring, components)


@lru_cache(maxsize=512)
def _twist_prefactor(twist: Polynomial, e: int) -> Polynomial:
    """g^(nu_e) via the all-ones base-p digit pattern of nu_e."""
    result = twist.ring.one()
    for i in range(e):
        result = result * twist.frobenius(i)
    return result


def _mul_guarded(a: Polynomial, b: Polynomial, budgets: Budgets) -> Polynomial:
    if len(a) * len(b) > budgets.term_budget:
        raise ResourceBudgetError(
            f"term budget exceeded: {len(a)} x {len(b)} term product "
            f"(budget {budgets.term_budget})"
        )
    return a * b


def cartier_image(
    module: "CartierModuleDescriptor",
    h: Polynomial,
    ideal: Ideal,
    e: int,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> Ideal:
    """kappa_g^e(h * I) for the twisted Cartier structure of ``module``."""
    ring = module.ring
    if h.ring != ring or ideal.ring != ring:
        raise RingMismatchError("module, multiplier and ideal must share a ring")
    validate_level(e, ring.p, budgets)
    if h.is_zero() or ideal.is_zero():
        return Ideal.zero(ring)
    prefactor = _mul_guarded(_twist_prefactor(module.twist, e), h, budgets)
    scaled = [_mul_guarded(prefactor, g, budgets) for g in ideal.generators]
    return pe_root(Ideal(ring, scaled), e, budgets)
