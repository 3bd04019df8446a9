"""Ideals with decidable membership via reduced Groebner bases.

Buchberger's algorithm with the product and chain criteria (the update
procedure of Becker-Weispfenning, p. 230) and normal-strategy pair
selection.  The reduced basis is unique for grevlex, so ideal equality is
plain basis comparison.  Work is bounded by two budgets: a cap on enqueued
S-pairs and a cap on the degree of any basis element.

Ideals are immutable except for one-shot population of the cached basis;
the fill is idempotent (both racers compute the same canonical basis and
one tuple assignment wins), which is race-safe under the GIL.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .budgets import Budgets, DEFAULT_BUDGETS
from .errors import ResourceBudgetError, RingMismatchError, ValidationError
from .ring import (
    Monomial,
    Polynomial,
    RingSpec,
    grevlex_key,
    monomial_div,
    monomial_divides,
    monomial_lcm,
    monomial_mul,
)


class Ideal:
    """Finitely generated ideal of F_p[x_1..x_n]."""

    __slots__ = ("ring", "generators", "_basis")

    def __init__(self, ring: RingSpec, generators: Iterable[Polynomial]):
        gens: List[Polynomial] = []
        seen = set()
        for g in generators:
            if g.ring != ring:
                raise RingMismatchError("generator lives in a different ring")
            if g.is_zero():
                continue
            if g not in seen:
                seen.add(g)
                gens.append(g)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "generators", tuple(gens))
        object.__setattr__(self, "_basis", None)

    def __setattr__(self, name, value):
        raise AttributeError("Ideal is immutable")

    @classmethod
    def zero(cls, ring: RingSpec) -> "Ideal":
        return cls(ring, [])

    @classmethod
    def unit(cls, ring: RingSpec) -> "Ideal":
        return cls(ring, [ring.one()])

    @classmethod
    def from_strings(cls, ring: RingSpec, texts: Sequence[str]) -> "Ideal":
        return cls(ring, [ring.parse(t) for t in texts])

    def is_zero(self) -> bool:
        return not self.generators

    def reduced_basis(self, budgets: Budgets = DEFAULT_BUDGETS) -> Tuple[Polynomial, ...]:
        """The unique reduced grevlex Groebner basis, cached after first call."""
        basis = self._basis
        if basis is None:
            basis = groebner_basis(list(self.generators), self.ring, budgets)
            object.__setattr__(self, "_basis", basis)
        return basis

    def is_unit(self, budgets: Budgets = DEFAULT_BUDGETS) -> bool:
        basis = self.reduced_basis(budgets)
        return len(basis) == 1 and basis[0].is_one()

    def basis_strings(self, budgets: Budgets = DEFAULT_BUDGETS) -> Tuple[str, ...]:
        return tuple(str(g) for g in self.reduced_basis(budgets))

    def __repr__(self) -> str:
        inner = ", ".join(str(g) for g in self.generators) or "0"
        return f"Ideal({inner})"


# -- division ---------------------------------------------------------------


def _normal_form_terms(
    terms: Dict[Monomial, int],
    basis: Sequence[Polynomial],
    ring: RingSpec,
) -> Dict[Monomial, int]:
    """Remainder of division by ``basis`` (assumed monic).

    Divisor choice is the basis element of smallest index whose leading
    term divides, which makes reduction deterministic.
    """
    p = ring.p
    leads = [g.leading_monomial() for g in basis]
    work = dict(terms)
    remainder: Dict[Monomial, int] = {}
    while work:
        lm = max(work, key=grevlex_key)
        lc = work.pop(lm)
        divisor = None
        for g, lead in zip(basis, leads):
            if monomial_divides(lead, lm):
                divisor = g
                break
        if divisor is None:
            remainder[lm] = lc
            continue
        # subtract lc * x^shift * divisor from work (divisor is monic)
        shift = monomial_div(lm, divisor.leading_monomial())
        for mon, c in divisor._terms.items():
            target = monomial_mul(mon, shift)
            if target == lm:
                continue
            s = (work.get(target, 0) - lc * c) % p
            if s:
                work[target] = s
            else:
                work.pop(target, None)
    return remainder


def normal_form(f: Polynomial, basis: Sequence[Polynomial]) -> Polynomial:
    """Fully reduced remainder of f modulo a monic basis."""
    if f.is_zero() or not basis:
        return f
    return Polynomial(f.ring, _normal_form_terms(f.term_dict(), basis, f.ring))


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    """S-poly of two monic polynomials."""
    lf, lg = f.leading_monomial(), g.leading_monomial()
    lcm = monomial_lcm(lf, lg)
    return f.scale_term(monomial_div(lcm, lf), 1) - g.scale_term(monomial_div(lcm, lg), 1)


# -- Buchberger -------------------------------------------------------------


def _minimal_monomials(monomials: Iterable[Monomial]) -> List[Monomial]:
    """Minimal generators of the monomial ideal spanned by the input."""
    ordered = sorted(set(monomials), key=lambda m: (sum(m), grevlex_key(m)))
    minimal: List[Monomial] = []
    for m in ordered:
        if not any(monomial_divides(b, m) for b in minimal):
            minimal.append(m)
    return minimal


def _drop_terms_in_monomial_ideal(f: Polynomial, staircase: Sequence[Monomial]) -> Polynomial:
    """Normal form modulo a monomial ideal: delete every divisible term."""
    kept = {
        m: c
        for m, c in f._terms.items()
        if not any(monomial_divides(b, m) for b in staircase)
    }
    if len(kept) == len(f._terms):
        return f
    return Polynomial(f.ring, kept)


def _autoreduce(polys: List[Polynomial], ring: RingSpec) -> List[Polynomial]:
    """Reduce each element by the others until stable (all monic)."""
    current = [g.monic() for g in polys if not g.is_zero()]
    while True:
        reduced: List[Polynomial] = []
        changed = False
        for i, g in enumerate(current):
            others = reduced + current[i + 1 :]
            h = normal_form(g, others) if others else g
            if h != g:
                changed = True
            if not h.is_zero():
                reduced.append(h.monic())
        current = reduced
        if not changed:
            return current


def _interreduce_final(basis: List[Polynomial]) -> Tuple[Polynomial, ...]:
    """Minimalize leading terms, tail-reduce, sort ascending by LM."""
    basis = [g.monic() for g in basis if not g.is_zero()]
    leads = [g.leading_monomial() for g in basis]
    keep = []
    for i, lm in enumerate(leads):
        if not any(
            j != i
            and monomial_divides(leads[j], lm)
            and (leads[j] != lm or j < i)
            for j in range(len(basis))
        ):
            keep.append(basis[i])
    reduced = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1 :]
        h = normal_form(g, others)
        reduced.append(h.monic())
    reduced.sort(key=lambda g: grevlex_key(g.leading_monomial()))
    return tuple(reduced)


def groebner_basis(
    generators: List[Polynomial],
    ring: RingSpec,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> Tuple[Polynomial, ...]:
    """The reduced grevlex Groebner basis of the generated ideal."""
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        return ()

    monos = [g for g in gens if g.is_monomial()]
    polys = [g for g in gens if not g.is_monomial()]
    staircase = _minimal_monomials([g.leading_monomial() for g in monos])
    if staircase and polys:
        polys = [
            h
            for h in (_drop_terms_in_monomial_ideal(g, staircase) for g in polys)
            if not h.is_zero()
        ]
    mono_polys = [ring.monomial(m) for m in staircase]

    if not polys:
        # a minimal monomial set is already its own reduced basis
        mono_polys.sort(key=lambda g: grevlex_key(g.leading_monomial()))
        return tuple(mono_polys)

    f = _autoreduce(mono_polys + polys, ring)
    if not f:
        return ()
    if any(g.is_one() for g in f):
        return (ring.one(),)
    worst = max(g.total_degree() for g in f)
    if worst > budgets.groebner_max_degree:
        raise ResourceBudgetError(
            f"Groebner degree budget exceeded ({worst} > {budgets.groebner_max_degree})"
        )

    pair_count = len(f)

    def check_budgets(new_poly: Optional[Polynomial] = None):
        nonlocal pair_count
        if pair_count > budgets.groebner_max_pairs:
            raise ResourceBudgetError(
                f"Groebner S-pair budget exceeded ({budgets.groebner_max_pairs})"
            )
        if new_poly is not None and new_poly.total_degree() > budgets.groebner_max_degree:
            raise ResourceBudgetError(
                f"Groebner degree budget exceeded ({budgets.groebner_max_degree})"
            )

    # Becker-Weispfenning update: installs a new index ih into the basis set G
    # and refreshes the critical-pair set B with the product and chain criteria.
    def update(G: set, B: set, ih: int) -> Tuple[set, set]:
        nonlocal pair_count
        mh = f[ih].leading_monomial()
        C = set(G)
        D = set()
        while C:
            ig = min(C)
            C.remove(ig)
            mg = f[ig].leading_monomial()
            lcm_hg = monomial_lcm(mh, mg)

            def lcm_divides(ip):
                return monomial_divides(monomial_lcm(mh, f[ip].leading_monomial()), lcm_hg)

            if monomial_mul(mh, mg) == lcm_hg or (
                not any(lcm_divides(ip) for ip in C)
                and not any(lcm_divides(pair[1]) for pair in D)
            ):
                D.add((ih, ig))
        E = set()
        for ih2, ig in D:
            mg = f[ig].leading_monomial()
            if monomial_mul(mh, mg) != monomial_lcm(mh, mg):
                E.add((ih2, ig))
        B_new = set()
        for ig1, ig2 in B:
            m1 = f[ig1].leading_monomial()
            m2 = f[ig2].leading_monomial()
            lcm12 = monomial_lcm(m1, m2)
            if (
                not monomial_divides(mh, lcm12)
                or monomial_lcm(m1, mh) == lcm12
                or monomial_lcm(m2, mh) == lcm12
            ):
                B_new.add((ig1, ig2))
        B_new |= E
        pair_count += len(E)
        check_budgets()
        G_new = {ig for ig in G if not monomial_divides(mh, f[ig].leading_monomial())}
        G_new.add(ih)
        return G_new, B_new

    G: set = set()
    B: set = set()
    for i in range(len(f)):
        G, B = update(G, B, i)

    def pair_key(pair):
        i, j = pair
        lcm = monomial_lcm(f[i].leading_monomial(), f[j].leading_monomial())
        return (grevlex_key(lcm), i, j)

    while B:
        pair = min(B, key=pair_key)
        B.remove(pair)
        i, j = pair
        s = s_polynomial(f[i], f[j])
        ordered = sorted(G, key=lambda k: grevlex_key(f[k].leading_monomial()))
        h = normal_form(s, [f[k] for k in ordered])
        if h.is_zero():
            continue
        check_budgets(h)
        f.append(h.monic())
        G, B = update(G, B, len(f) - 1)

    return _interreduce_final([f[i] for i in sorted(G)])


# -- decision procedures ----------------------------------------------------


def ideal_member(f: Polynomial, ideal: Ideal, budgets: Budgets = DEFAULT_BUDGETS) -> bool:
    """f in I, decided by normal form against the reduced basis."""
    if f.ring != ideal.ring:
        raise RingMismatchError("polynomial and ideal rings differ")
    if f.is_zero():
        return True
    return normal_form(f, ideal.reduced_basis(budgets)).is_zero()


def ideal_contains(big: Ideal, small: Ideal, budgets: Budgets = DEFAULT_BUDGETS) -> bool:
    """Does ``big`` contain ``small``?"""
    if big.ring != small.ring:
        raise RingMismatchError("ideal rings differ")
    basis = big.reduced_basis(budgets)
    return all(normal_form(g, basis).is_zero() for g in small.generators)


def ideal_equal(a: Ideal, b: Ideal, budgets: Budgets = DEFAULT_BUDGETS) -> bool:
    if a.ring != b.ring:
        raise RingMismatchError("ideal rings differ")
    return a.reduced_basis(budgets) == b.reduced_basis(budgets)


def ideal_strictly_contains(big: Ideal, small: Ideal, budgets: Budgets = DEFAULT_BUDGETS) -> bool:
    return ideal_contains(big, small, budgets) and not ideal_equal(big, small, budgets)


def ideal_sum(a: Ideal, b: Ideal) -> Ideal:
    if a.ring != b.ring:
        raise RingMismatchError("ideal rings differ")
    return Ideal(a.ring, list(a.generators) + list(b.generators))


def ideal_product_poly(h: Polynomial, ideal: Ideal) -> Ideal:
    """The ideal h * I (generator-wise product)."""
    if h.ring != ideal.ring:
        raise RingMismatchError("polynomial and ideal rings differ")
    if h.is_zero():
        return Ideal.zero(ideal.ring)
    return Ideal(ideal.ring, [h * g for g in ideal.generators])
