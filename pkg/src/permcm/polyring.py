"""Sparse exact polynomials over Z, Q and F_p, with the shape machinery on monomials.

A monomial is a tuple of exponents.  Its shape is the same tuple sorted into weakly
decreasing order, trailing zeros kept, so shapes of monomials in n variables all have
length n and add coordinatewise.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import (
    DegreeMismatch,
    DomainMismatch,
    IndexOutOfRange,
    LengthMismatch,
    NonIntegerCoefficientInZMode,
    NotPrime,
    NotSymmetric,
    ParseError,
)
from .permgrp import Permutation, PermutationGroup

Monomial = tuple[int, ...]
Shape = tuple[int, ...]


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class Domain:
    """Coefficient domain: ``z``, ``q`` or ``fp`` with a prime modulus."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("z", "q", "fp"):
            raise ValueError(f"unknown coefficient domain {self.kind!r}")
        if self.kind == "fp" and not (_is_prime(self.p) and self.p < 2**31):
            raise NotPrime(f"{self.p} is not a prime below 2^31")

    @classmethod
    def parse(cls, text: str) -> "Domain":
        text = text.strip().lower()
        if text in ("z", "q"):
            return cls(text)
        m = re.fullmatch(r"(?:fp|f):?(\d+)", text)
        if m:
            return cls("fp", int(m.group(1)))
        raise ParseError(f"unknown coefficient domain {text!r}")

    @property
    def is_field(self) -> bool:
        return self.kind != "z"

    def __call__(self, value) -> int | Fraction:
        """Coerce an int or Fraction into this domain's canonical representation."""
        if self.kind == "q":
            return Fraction(value)
        if isinstance(value, Fraction):
            if self.kind == "z":
                if value.denominator != 1:
                    raise DomainMismatch(f"{value} is not an integer")
                return int(value)
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        if self.kind == "fp":
            return int(value) % self.p
        return int(value)

    def is_unit(self, value) -> bool:
        value = self(value)
        if self.kind == "z":
            return value in (1, -1)
        return value != 0

    def inverse(self, value):
        value = self(value)
        if not self.is_unit(value):
            raise ZeroDivisionError(f"{value} is not invertible in {self}")
        if self.kind == "z":
            return value
        if self.kind == "q":
            return 1 / value
        return pow(value, -1, self.p)

    def __str__(self) -> str:
        return f"fp:{self.p}" if self.kind == "fp" else self.kind


Z = Domain("z")
Q = Domain("q")


class Polynomial:
    """Element of A[x_1..x_n] stored as a map from exponent tuples to nonzero coefficients."""

    __slots__ = ("nvars", "domain", "terms")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] | Iterable = (),
                 domain: Domain = Z):
        self.nvars = nvars
        self.domain = domain
        clean: dict[Monomial, object] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for m, c in items:
            m = tuple(m)
            if len(m) != nvars:
                raise DegreeMismatch(f"monomial {m} has {len(m)} exponents, expected {nvars}")
            c = domain(c) + clean.get(m, 0)
            if domain.kind == "fp":
                c %= domain.p
            if c:
                clean[m] = c
            else:
                clean.pop(m, None)
        self.terms = clean

    @classmethod
    def _raw(cls, nvars: int, terms: dict, domain: Domain) -> "Polynomial":
        f = cls.__new__(cls)
        f.nvars, f.domain, f.terms = nvars, domain, terms
        return f

    @classmethod
    def constant(cls, nvars: int, c=1, domain: Domain = Z) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c}, domain)

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1, domain: Domain = Z) -> "Polynomial":
        return cls(len(exps), {tuple(exps): c}, domain)

    @classmethod
    def var(cls, nvars: int, i: int, domain: Domain = Z) -> "Polynomial":
        """The variable x_i, 1-based."""
        if not 1 <= i <= nvars:
            raise IndexOutOfRange(f"variable index {i} outside 1..{nvars}")
        return cls.monomial(tuple(int(j == i - 1) for j in range(nvars)), 1, domain)

    def _check(self, other: "Polynomial") -> None:
        if self.nvars != other.nvars:
            raise DegreeMismatch(f"{self.nvars} variables vs {other.nvars}")
        if self.domain != other.domain:
            raise DomainMismatch(f"{self.domain} vs {other.domain}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.nvars, other, self.domain)

    def _normal(self, c):
        return c % self.domain.p if self.domain.kind == "fp" else c

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            v = self._normal(terms.get(m, 0) + c)
            if v:
                terms[m] = v
            else:
                terms.pop(m, None)
        return Polynomial._raw(self.nvars, terms, self.domain)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.nvars, {m: self._normal(-c) for m, c in self.terms.items()},
                               self.domain)

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def scale(self, c) -> "Polynomial":
        c = self.domain(c)
        if not c:
            return Polynomial._raw(self.nvars, {}, self.domain)
        terms = {}
        for m, v in self.terms.items():
            v = self._normal(v * c)
            if v:
                terms[m] = v
        return Polynomial._raw(self.nvars, terms, self.domain)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                terms[m] = terms.get(m, 0) + c1 * c2
        out = {}
        for m, c in terms.items():
            c = self._normal(c)
            if c:
                out[m] = c
        return Polynomial._raw(self.nvars, out, self.domain)

    def __rmul__(self, other) -> "Polynomial":
        return self.scale(other)

    def __pow__(self, k: int) -> "Polynomial":
        result = Polynomial.constant(self.nvars, 1, self.domain)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if not self.terms:
            return other == 0
        return self.terms == {(0,) * self.nvars: self.domain(other)}

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, m: Sequence[int]):
        return self.terms.get(tuple(m), 0)

    def monomials(self) -> list[Monomial]:
        return sorted(self.terms, key=_display_key)

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def with_domain(self, domain: Domain) -> "Polynomial":
        return Polynomial(self.nvars, self.terms, domain)

    def format(self, var: str = "x") -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in self.monomials():
            c = self.terms[m]
            negative = self.domain.kind != "fp" and c < 0
            mag = -c if negative else c
            factors = [f"{var}{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e]
            if mag != 1 or not factors:
                factors.insert(0, str(mag))
            body = "*".join(factors)
            if not parts:
                parts.append(("-" if negative else "") + body)
            else:
                parts.append(("- " if negative else "+ ") + body)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Polynomial({self.format()!r}, nvars={self.nvars}, domain={self.domain})"


def _display_key(m: Monomial):
    # graded lexicographic, largest first
    return (-sum(m), tuple(-e for e in m))


def _permute_exps(m: Monomial, img: Sequence[int]) -> Monomial:
    out = [0] * len(m)
    for i, e in enumerate(m):
        out[img[i]] = e
    return tuple(out)


def act(p: Permutation, f: Polynomial) -> Polynomial:
    """Apply ``p`` to ``f`` by the substitution x_i -> x_p(i)."""
    if p.degree != f.nvars:
        raise DegreeMismatch(f"permutation of degree {p.degree} on {f.nvars} variables")
    return Polynomial._raw(f.nvars, {_permute_exps(m, p.img): c for m, c in f.terms.items()},
                           f.domain)


def shape(m: Sequence[int]) -> Shape:
    return tuple(sorted(m, reverse=True))


def deglex_key(lam: Sequence[int]) -> tuple:
    return (sum(lam), tuple(lam))


def deglex_compare(lam: Sequence[int], mu: Sequence[int]) -> int:
    """Compare shapes by total degree, then at the leftmost differing part.
    Returns -1, 0 or 1."""
    if len(lam) != len(mu):
        raise LengthMismatch(f"shapes of lengths {len(lam)} and {len(mu)}")
    a, b = deglex_key(lam), deglex_key(mu)
    return (a > b) - (a < b)


def stacks_up(m: Sequence[int], m2: Sequence[int]) -> bool:
    """True when some ordering of the variables sorts both exponent vectors weakly
    decreasingly at once, i.e. no pair of variables is ordered oppositely."""
    if len(m) != len(m2):
        raise LengthMismatch(f"monomials in {len(m)} and {len(m2)} variables")
    return not any((m[i] - m[j]) * (m2[i] - m2[j]) < 0
                   for i, j in itertools.combinations(range(len(m)), 2))


def leading_shape(f: Polynomial) -> Shape | None:
    if not f.terms:
        return None
    return max((shape(m) for m in f.terms), key=deglex_key)


def shape_layer(f: Polynomial, lam: Sequence[int]) -> Polynomial:
    """The part of ``f`` made of monomials of shape ``lam``."""
    lam = tuple(lam)
    return Polynomial._raw(f.nvars, {m: c for m, c in f.terms.items() if shape(m) == lam},
                           f.domain)


def orbit(group: PermutationGroup, m: Sequence[int]) -> frozenset[Monomial]:
    m = tuple(m)
    return frozenset(_permute_exps(m, g) for g in group._elements)


def orbit_monomial(group: PermutationGroup, m: Sequence[int], domain: Domain = Z) -> Polynomial:
    """Sum of the distinct monomials in the ``group``-orbit of ``m``."""
    if len(m) != group.degree:
        raise DegreeMismatch(f"monomial in {len(m)} variables, group of degree {group.degree}")
    return Polynomial._raw(len(m), {u: domain(1) for u in orbit(group, m)}, domain)


def is_invariant(f: Polynomial, group: PermutationGroup) -> bool:
    return all(act(g, f) == f for g in group.generators)


def elementary_symmetric(n: int, i: int, domain: Domain = Z) -> Polynomial:
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"elementary symmetric index {i} outside 1..{n}")
    terms = {}
    for subset in itertools.combinations(range(n), i):
        m = [0] * n
        for j in subset:
            m[j] = 1
        terms[tuple(m)] = domain(1)
    return Polynomial._raw(n, terms, domain)


@lru_cache(maxsize=4096)
def sigma_power_product(exps: tuple[int, ...], domain: Domain = Z) -> Polynomial:
    """The product of sigma_i^exps[i-1] over i, expanded."""
    n = len(exps)
    result = Polynomial.constant(n, 1, domain)
    for i, e in enumerate(exps, start=1):
        if e:
            result = result * elementary_symmetric(n, i, domain) ** e
    return result


def substitute_sigma(F: Polynomial, domain: Domain | None = None) -> Polynomial:
    """Evaluate a polynomial in s_1..s_n at s_i = sigma_i."""
    domain = domain or F.domain
    n = F.nvars
    result = Polynomial(n, {}, domain)
    for exps, c in F.terms.items():
        result = result + sigma_power_product(exps, domain).scale(c)
    return result


@dataclass(frozen=True)
class SpecialDecomposition:
    is_special: bool
    associated_special: Monomial
    sigma_exponents: tuple[int, ...]


def is_special(m: Sequence[int]) -> bool:
    lam = shape(m)
    return lam[-1] == 0 and all(lam[i] - lam[i + 1] <= 1 for i in range(len(lam) - 1))


def special_decompose(m: Sequence[int]) -> SpecialDecomposition:
    """Split ``m`` into a special monomial and a product of sigma leading terms.

    With shape lam and gaps d_i = lam_i - lam_{i+1} (lam_{n+1} = 0), the sigma exponents
    are f_i = max(0, d_i - 1) for i < n and f_n = lam_n.  The variable holding the k-th
    largest exponent loses f_k + ... + f_n.
    """
    m = tuple(m)
    n = len(m)
    lam = shape(m)
    gaps = [lam[i] - lam[i + 1] for i in range(n - 1)] + [lam[-1]]
    f = tuple(max(0, g - 1) for g in gaps[:-1]) + (gaps[-1],)
    if not any(f):
        return SpecialDecomposition(True, m, (0,) * n)
    taken = list(itertools.accumulate(reversed(f)))[::-1]
    # stable ranking: ties get equal reductions, so the choice among them is irrelevant
    order = sorted(range(n), key=lambda j: -m[j])
    star = [0] * n
    for rank, j in enumerate(order):
        star[j] = m[j] - taken[rank]
    return SpecialDecomposition(False, tuple(star), f)


def check_symmetric(f: Polynomial) -> None:
    n = f.nvars
    if n >= 2:
        gens = [Permutation.from_cycles([(1, 2)], n),
                Permutation.from_cycles([tuple(range(1, n + 1))], n)]
        if any(act(g, f) != f for g in gens):
            raise NotSymmetric("polynomial is not symmetric")


def ftsp_represent(f: Polynomial) -> Polynomial:
    """Write a symmetric polynomial as a polynomial in s_1..s_n (s_i standing for sigma_i).

    Works down the deglex-leading shape: the layer of shape lam is c times the monomial
    symmetric function of lam, and prod sigma_i^(lam_i - lam_{i+1}) has that same leading
    layer with coefficient 1.
    """
    check_symmetric(f)
    n, domain = f.nvars, f.domain
    remainder = f
    out: dict = {}
    while remainder.terms:
        lam = leading_shape(remainder)
        c = remainder.terms[lam]
        a = tuple(lam[i] - (lam[i + 1] if i + 1 < n else 0) for i in range(n))
        out[a] = out.get(a, 0) + c
        remainder = remainder - sigma_power_product(a, domain).scale(c)
    return Polynomial(n, out, domain)


# Parsing

_TOKEN_RE = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z]+)(\d+)|(\S))")


class _Parser:
    def __init__(self, text: str, nvars: int, domain: Domain, var: str):
        self.text, self.nvars, self.domain, self.var = text, nvars, domain, var
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if not m or m.end() == pos:
                break
            start = m.start(m.lastindex)
            if m.group(1) is not None:
                self.tokens.append(("num", m.group(1), start))
            elif m.group(2) is not None:
                self.tokens.append(("var", (m.group(2), int(m.group(3))), start))
            else:
                self.tokens.append(("op", m.group(4), start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise ParseError("empty expression", 0)
        result = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return result

    def expr(self) -> Polynomial:
        result = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            _, op, _ = self.take()
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self) -> Polynomial:
        result = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                result = result * rhs
            else:
                result = self.divide(result, rhs, pos)
        return result

    def divide(self, num: Polynomial, den: Polynomial, pos: int) -> Polynomial:
        if any(any(m) for m in den.terms) or not den.terms:
            raise ParseError("division only by a nonzero constant", pos)
        d = next(iter(den.terms.values()))
        if self.domain.kind == "z":
            if any(Fraction(c, d).denominator != 1 for c in num.terms.values()):
                raise NonIntegerCoefficientInZMode("non-integer coefficient", pos)
            return Polynomial(num.nvars, {m: c // d for m, c in num.terms.items()}, self.domain)
        return num.scale(self.domain.inverse(d))

    def unary(self) -> Polynomial:
        kind, val, pos = self.peek()
        if (kind, val) == ("op", "-"):
            self.take()
            return -self.unary()
        if (kind, val) == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            kind, val, pos = self.take()
            if kind != "num" or "." in val:
                raise ParseError("exponent must be a nonnegative integer", pos)
            return base ** int(val)
        return base

    def atom(self) -> Polynomial:
        kind, val, pos = self.take()
        if kind == "num":
            value = Fraction(val)
            if value.denominator != 1 and self.domain.kind == "z":
                raise NonIntegerCoefficientInZMode(f"coefficient {val} is not an integer", pos)
            return Polynomial.constant(self.nvars, value, self.domain)
        if kind == "var":
            name, idx = val
            if name != self.var:
                raise ParseError(f"unknown variable {name}{idx}", pos)
            if not 1 <= idx <= self.nvars:
                raise ParseError(f"variable {name}{idx} outside 1..{self.nvars}", pos)
            return Polynomial.var(self.nvars, idx, self.domain)
        if (kind, val) == ("op", "("):
            inner = self.expr()
            kind, val, pos = self.take()
            if (kind, val) != ("op", ")"):
                raise ParseError("expected ')'", pos)
            return inner
        raise ParseError(f"unexpected {'end of input' if kind == 'end' else repr(val)}", pos)


def parse_polynomial(text: str, nvars: int, domain: Domain = Z, var: str = "x") -> Polynomial:
    """Parse expressions such as ``x1^2*x2 + 3*x2*x3 - x4``."""
    return _Parser(text, nvars, domain, var).parse()
