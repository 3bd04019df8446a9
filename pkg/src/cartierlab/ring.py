"""Sparse multivariate polynomials over a prime field, plus exact rationals.

A polynomial is a map from exponent vectors (tuples of non-negative ints,
one slot per ring variable) to nonzero residues in ``[1, p-1]``.  The zero
polynomial is the empty map.  All values are immutable after construction
and every operation is a pure function, so they are safe to share across
threads.

Exact rationals are ``fractions.Fraction`` throughout; the two helpers that
the rest of the package needs (exact ceilings of products and integrality
tests) live here.

The monomial order is graded reverse lexicographic everywhere: printing,
Groebner bases, leading terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, Optional, Tuple

from .errors import ParseError, RingMismatchError, ValidationError

Monomial = Tuple[int, ...]

_MAX_PRIME = 97
_MAX_VARS = 6


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class RingSpec:
    """The ambient ring F_p[x_1, ..., x_n]."""

    p: int
    vars: Tuple[str, ...]

    def __post_init__(self):
        if not isinstance(self.p, int) or not (2 <= self.p <= _MAX_PRIME):
            raise ValidationError(f"characteristic must be a prime in [2, {_MAX_PRIME}], got {self.p!r}")
        if not _is_prime(self.p):
            raise ValidationError(f"characteristic {self.p} is not prime")
        object.__setattr__(self, "vars", tuple(self.vars))
        if not (1 <= len(self.vars) <= _MAX_VARS):
            raise ValidationError(f"need between 1 and {_MAX_VARS} variables, got {len(self.vars)}")
        for name in self.vars:
            if not name or not (name[0].isalpha() or name[0] == "_") or not all(
                c.isalnum() or c == "_" for c in name
            ):
                raise ValidationError(f"invalid variable name {name!r}")
        if len(set(self.vars)) != len(self.vars):
            raise ValidationError("variable names must be unique")

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c: int) -> "Polynomial":
        c %= self.p
        return Polynomial(self, {} if c == 0 else {(0,) * self.nvars: c})

    def variable(self, which) -> "Polynomial":
        """Variable by name or index."""
        idx = self.vars.index(which) if isinstance(which, str) else which
        exp = [0] * self.nvars
        exp[idx] = 1
        return Polynomial(self, {tuple(exp): 1})

    def monomial(self, exponents, coeff: int = 1) -> "Polynomial":
        c = coeff % self.p
        exps = tuple(int(u) for u in exponents)
        if len(exps) != self.nvars or any(u < 0 for u in exps):
            raise ValidationError(f"bad exponent vector {exponents!r}")
        return Polynomial(self, {} if c == 0 else {exps: c})

    def parse(self, text: str) -> "Polynomial":
        return poly_parse(text, self)


def grevlex_key(m: Monomial) -> tuple:
    """Sort key: bigger key means bigger monomial in grevlex."""
    return (sum(m),) + tuple(-m[i] for i in range(len(m) - 1, -1, -1))


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    """Does x^a divide x^b?"""
    return all(x <= y for x, y in zip(a, b))


def monomial_div(a: Monomial, b: Monomial) -> Monomial:
    """Exponent vector of x^a / x^b; caller guarantees divisibility."""
    return tuple(x - y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


class Polynomial:
    """Immutable sparse polynomial attached to a :class:`RingSpec`."""

    __slots__ = ("ring", "_terms", "_hash", "_lm")

    def __init__(self, ring: RingSpec, terms: Dict[Monomial, int]):
        clean: Dict[Monomial, int] = {}
        n, p = ring.nvars, ring.p
        for mon, c in terms.items():
            c %= p
            if c == 0:
                continue
            if len(mon) != n:
                raise ValidationError(f"exponent vector {mon!r} has wrong length for {ring.vars}")
            clean[mon] = c
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_lm", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- inspection ---------------------------------------------------------

    def terms(self) -> Iterator[Tuple[Monomial, int]]:
        return iter(self._terms.items())

    def term_dict(self) -> Dict[Monomial, int]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_one(self) -> bool:
        return self._terms == {(0,) * self.ring.nvars: 1}

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {(0,) * self.ring.nvars}

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def total_degree(self) -> int:
        """Total degree; the zero polynomial reports -1."""
        if not self._terms:
            return -1
        return max(sum(m) for m in self._terms)

    def leading_monomial(self) -> Optional[Monomial]:
        if not self._terms:
            return None
        lm = self._lm
        if lm is None:
            lm = max(self._terms, key=grevlex_key)
            object.__setattr__(self, "_lm", lm)
        return lm

    def leading_coeff(self) -> int:
        lm = self.leading_monomial()
        return 0 if lm is None else self._terms[lm]

    def coeff(self, mon: Monomial) -> int:
        return self._terms.get(tuple(mon), 0)

    # -- arithmetic ---------------------------------------------------------

    def _check_ring(self, other: "Polynomial") -> None:
        if self.ring != other.ring:
            raise RingMismatchError(f"cannot combine polynomials over {self.ring} and {other.ring}")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        self._check_ring(other)
        out = dict(self._terms)
        p = self.ring.p
        for mon, c in other._terms.items():
            s = (out.get(mon, 0) + c) % p
            if s:
                out[mon] = s
            else:
                out.pop(mon, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {m: p - c for m, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            c = other % self.ring.p
            if c == 0:
                return self.ring.zero()
            return Polynomial(self.ring, {m: (c * v) % self.ring.p for m, v in self._terms.items()})
        self._check_ring(other)
        a, b = self._terms, other._terms
        if len(a) > len(b):
            a, b = b, a
        out: Dict[Monomial, int] = {}
        p = self.ring.p
        for ma, ca in a.items():
            for mb, cb in b.items():
                mon = tuple(x + y for x, y in zip(ma, mb))
                s = (out.get(mon, 0) + ca * cb) % p
                if s:
                    out[mon] = s
                else:
                    out.pop(mon, None)
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def scale_term(self, mon: Monomial, coeff: int) -> "Polynomial":
        """Multiply by the single term coeff * x^mon."""
        c = coeff % self.ring.p
        if c == 0:
            return self.ring.zero()
        p = self.ring.p
        return Polynomial(
            self.ring,
            {tuple(x + y for x, y in zip(m, mon)): (c * v) % p for m, v in self._terms.items()},
        )

    def frobenius(self, e: int = 1) -> "Polynomial":
        """f^(p^e) by exponent scaling; coefficients are Frobenius-fixed in F_p."""
        if e < 0:
            raise ValidationError("Frobenius power must be non-negative")
        q = self.ring.p**e
        return Polynomial(self.ring, {tuple(u * q for u in m): c for m, c in self._terms.items()})

    def _small_pow(self, k: int) -> "Polynomial":
        # binary powering for 0 <= k < p
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __pow__(self, k: int) -> "Polynomial":
        """f^k through the base-p digits of k.

        Writes k = sum k_i p^i and multiplies the Frobenius twists
        (f^{k_i})^{[p^i]}, so the work tracks the digit count rather than k.
        """
        if not isinstance(k, int) or k < 0:
            raise ValidationError(f"exponent must be a non-negative integer, got {k!r}")
        if k == 0:
            return self.ring.one()
        p = self.ring.p
        result = self.ring.one()
        i = 0
        while k:
            k, digit = divmod(k, p)
            if digit:
                result = result * self._small_pow(digit).frobenius(i)
            i += 1
        return result

    def monic(self) -> "Polynomial":
        lc = self.leading_coeff()
        if lc in (0, 1):
            return self
        inv = pow(lc, -1, self.ring.p)
        return self * inv

    # -- identity -----------------------------------------------------------

    def sort_key(self) -> tuple:
        """Canonical total order on polynomials of one ring (for determinism)."""
        items = sorted(self._terms.items(), key=lambda kv: grevlex_key(kv[0]), reverse=True)
        return tuple((grevlex_key(m), c) for m, c in items)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.ring, tuple(sorted(self._terms.items()))))
            object.__setattr__(self, "_hash", h)
        return h

    def __str__(self) -> str:
        return poly_format(self)

    def __repr__(self) -> str:
        return f"Polynomial({poly_format(self)!r}, p={self.ring.p}, vars={','.join(self.ring.vars)})"


# -- printing ---------------------------------------------------------------


def poly_format(f: Polynomial) -> str:
    """Canonical form: grevlex-descending terms, coefficients in [1, p-1]."""
    if f.is_zero():
        return "0"
    parts = []
    for mon in sorted(f._terms, key=grevlex_key, reverse=True):
        c = f._terms[mon]
        factors = []
        if c != 1 or not any(mon):
            factors.append(str(c))
        for name, u in zip(f.ring.vars, mon):
            if u == 1:
                factors.append(name)
            elif u > 1:
                factors.append(f"{name}^{u}")
        parts.append("*".join(factors))
    return "+".join(parts)


# -- parsing ----------------------------------------------------------------


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens = []
        self._scan()
        self.index = 0

    def _scan(self):
        text = self.text
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.tokens.append(("INT", text[i:j], i))
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.tokens.append(("NAME", text[i:j], i))
                i = j
            elif ch in "+-*^()":
                self.tokens.append((ch, ch, i))
                i += 1
            else:
                raise ParseError(f"unexpected character {ch!r}", i)
        self.tokens.append(("END", "", len(text)))

    def peek(self):
        return self.tokens[self.index]

    def next(self):
        tok = self.tokens[self.index]
        self.index += 1
        return tok


class _Parser:
    """Recursive descent for: expr := ['-'] term (('+'|'-') term)*;
    term := factor ('*' factor)*; factor := base ('^' INT)?;
    base := INT | NAME | '(' expr ')'."""

    def __init__(self, text: str, ring: RingSpec):
        self.toks = _Tokenizer(text)
        self.ring = ring

    def parse(self) -> Polynomial:
        f = self.expression()
        kind, _, pos = self.toks.peek()
        if kind != "END":
            raise ParseError("trailing input", pos)
        return f

    def expression(self) -> Polynomial:
        negate = False
        if self.toks.peek()[0] == "-":
            self.toks.next()
            negate = True
        f = self.term()
        if negate:
            f = -f
        while self.toks.peek()[0] in ("+", "-"):
            op = self.toks.next()[0]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self) -> Polynomial:
        f = self.factor()
        while self.toks.peek()[0] == "*":
            self.toks.next()
            f = f * self.factor()
        return f

    def factor(self) -> Polynomial:
        f = self.base()
        if self.toks.peek()[0] == "^":
            self.toks.next()
            kind, value, pos = self.toks.next()
            if kind != "INT":
                raise ParseError("expected integer exponent after '^'", pos)
            f = f ** int(value)
        return f

    def base(self) -> Polynomial:
        kind, value, pos = self.toks.next()
        if kind == "INT":
            return self.ring.constant(int(value))
        if kind == "NAME":
            if value not in self.ring.vars:
                raise ParseError(f"unknown variable {value!r}", pos)
            return self.ring.variable(value)
        if kind == "(":
            f = self.expression()
            kind2, _, pos2 = self.toks.next()
            if kind2 != ")":
                raise ParseError("expected ')'", pos2)
            return f
        raise ParseError(f"unexpected token {value!r}", pos)


def poly_parse(text: str, ring: RingSpec) -> Polynomial:
    """Parse polynomial text; parse(print(f)) == f."""
    return _Parser(text, ring).parse()


def poly_pow(f: Polynomial, k: int) -> Polynomial:
    return f**k


# -- exact rationals --------------------------------------------------------


def rational_ceil_mul(lam: Fraction, m: int) -> int:
    """ceil(lam * m), exactly."""
    num = lam.numerator * m
    den = lam.denominator
    return -((-num) // den)


def rational_floor_mul(lam: Fraction, m: int) -> int:
    return (lam.numerator * m) // lam.denominator


def rational_is_integer(lam: Fraction, m: int) -> bool:
    """Is lam * m an integer?"""
    return (lam.numerator * m) % lam.denominator == 0


def parse_rational(text: str) -> Fraction:
    """Parse 'a/b' or 'a' into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"invalid rational {text!r}: {exc}") from None


def format_rational(lam: Fraction) -> str:
    return f"{lam.numerator}/{lam.denominator}" if lam.denominator != 1 else str(lam.numerator)
