"""The Stanley-Reisner ring S of the boolean lattice B_n with the empty set removed.

S has a variable y_U for every nonempty U in [n], and y_U y_V = 0 unless U and V are
comparable.  Subsets are n-bit masks (bit j stands for point j+1).  A chain monomial is
stored as ``((mask, exponent), ...)`` sorted by decreasing subset size; in a chain the
sizes are distinct, so this order is total.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (
    DegreeMismatch,
    DomainMismatch,
    IndexOutOfRange,
    NotAnOrbitMonomial,
    ParseError,
)
from .permgrp import Permutation, PermutationGroup
from .polyring import Domain, Monomial, Polynomial, Z


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(points: Iterable[int]) -> int:
    """Bitmask of a set of 1-based points."""
    mask = 0
    for p in points:
        mask |= 1 << (p - 1)
    return mask


def points_of(mask: int) -> tuple[int, ...]:
    return tuple(j + 1 for j in range(mask.bit_length()) if mask >> j & 1)


def is_chain(masks: Iterable[int]) -> bool:
    ordered = sorted(set(masks), key=popcount)
    return all(a & b == a for a, b in zip(ordered, ordered[1:]))


@dataclass(frozen=True)
class ChainMonomial:
    """A nonzero monomial of S: a product of y_U over a chain of nonempty subsets."""

    n: int
    factors: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_factors(cls, n: int, factors: Iterable[tuple[int, int]]) -> "ChainMonomial | None":
        """Build from (mask, exponent) pairs, merging repeats; None if not a chain."""
        merged: dict[int, int] = {}
        for mask, e in factors:
            if not 0 < mask < 1 << n:
                raise IndexOutOfRange(f"subset mask {mask} is not a nonempty subset of [{n}]")
            if e:
                merged[mask] = merged.get(mask, 0) + e
        if not is_chain(merged):
            return None
        return cls(n, tuple(sorted(merged.items(), key=lambda t: -popcount(t[0]))))

    @classmethod
    def from_subsets(cls, n: int, subsets: Iterable[Iterable[int]]) -> "ChainMonomial | None":
        """Product of y_U over 1-based subsets U, with repeats giving powers."""
        return cls.from_factors(n, ((mask_of(u), 1) for u in subsets))

    @property
    def degree(self) -> int:
        return sum(popcount(m) * e for m, e in self.factors)

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(m for m, _ in self.factors)

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        parts = []
        for mask, e in reversed(self.factors):
            parts.append("y{" + ",".join(map(str, points_of(mask))) + "}" + (f"^{e}" if e > 1 else ""))
        return "*".join(parts)

    def to_json(self) -> list[dict]:
        return [{"subset": list(points_of(m)), "exp": e} for m, e in reversed(self.factors)]

    @classmethod
    def from_json(cls, n: int, data: Sequence[Mapping]) -> "ChainMonomial | None":
        return cls.from_factors(n, ((mask_of(d["subset"]), int(d["exp"])) for d in data))


_Y_RE = re.compile(r"\s*y\{([\d,\s]*)\}(?:\^(\d+))?\s*")


def parse_chain_monomial(text: str, n: int) -> ChainMonomial | None:
    """Parse ``y{2}*y{1,2}^2*y{1,2,3}``; ``1`` is the empty monomial."""
    text = text.strip()
    if text == "1":
        return ChainMonomial(n)
    factors = []
    pos = 0
    for i, piece in enumerate(text.split("*")):
        m = _Y_RE.fullmatch(piece)
        if not m or not m.group(1).strip():
            raise ParseError(f"bad factor {piece.strip()!r}", pos)
        points = [int(t) for t in re.split(r"[,\s]+", m.group(1).strip())]
        if any(not 1 <= p <= n for p in points) or len(set(points)) != len(points):
            raise ParseError(f"bad subset {points} for n={n}", pos)
        factors.append((mask_of(points), int(m.group(2) or 1)))
        pos += len(piece) + 1
    return ChainMonomial.from_factors(n, factors)


def garsia(m: ChainMonomial) -> Monomial:
    """Image of a chain monomial in R: y_U goes to the product of x_j over j in U."""
    exps = [0] * m.n
    for mask, e in m.factors:
        for j in range(m.n):
            if mask >> j & 1:
                exps[j] += e
    return tuple(exps)


def garsia_inverse(exps: Sequence[int]) -> ChainMonomial:
    """The unique chain monomial mapping to the monomial with these exponents."""
    n = len(exps)
    levels = sorted({e for e in exps if e > 0}, reverse=True)
    factors = []
    for k, v in enumerate(levels):
        below = levels[k + 1] if k + 1 < len(levels) else 0
        mask = sum(1 << j for j in range(n) if exps[j] >= v)
        factors.append((mask, v - below))
    return ChainMonomial(n, tuple(sorted(factors, key=lambda t: -popcount(t[0]))))


def s_multiply(m: ChainMonomial, m2: ChainMonomial) -> ChainMonomial | None:
    """Product in S; None stands for zero (the factors do not form a chain)."""
    if m.n != m2.n:
        raise DegreeMismatch(f"n={m.n} vs n={m2.n}")
    return ChainMonomial.from_factors(m.n, m.factors + m2.factors)


def fine_grade(m: ChainMonomial) -> tuple[int, ...]:
    """Entry i-1 counts the factors y_U with |U| = i."""
    grade = [0] * m.n
    for mask, e in m.factors:
        grade[popcount(mask) - 1] += e
    return tuple(grade)


def act_chain(p: Permutation | Sequence[int], m: ChainMonomial) -> ChainMonomial:
    img = p.img if isinstance(p, Permutation) else p
    factors = []
    for mask, e in m.factors:
        image = 0
        for j in range(m.n):
            if mask >> j & 1:
                image |= 1 << img[j]
        factors.append((image, e))
    return ChainMonomial(m.n, tuple(factors))


class SPolynomial:
    """Element of S: a map from chain monomials to nonzero coefficients."""

    __slots__ = ("n", "domain", "terms")

    def __init__(self, n: int, terms: Mapping[ChainMonomial, object] | Iterable = (),
                 domain: Domain = Z):
        self.n = n
        self.domain = domain
        self.terms: dict[ChainMonomial, object] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for m, c in items:
            if m is None:
                continue
            if m.n != n:
                raise DegreeMismatch(f"chain monomial for n={m.n}, expected {n}")
            self._accumulate(self.terms, m, domain(c))

    def _accumulate(self, terms: dict, m: ChainMonomial, c) -> None:
        v = terms.get(m, 0) + c
        if self.domain.kind == "fp":
            v %= self.domain.p
        if v:
            terms[m] = v
        else:
            terms.pop(m, None)

    @classmethod
    def monomial(cls, m: ChainMonomial, c=1, domain: Domain = Z) -> "SPolynomial":
        return cls(m.n, {m: c}, domain)

    def _check(self, other: "SPolynomial") -> None:
        if self.n != other.n:
            raise DegreeMismatch(f"n={self.n} vs n={other.n}")
        if self.domain != other.domain:
            raise DomainMismatch(f"{self.domain} vs {other.domain}")

    def __add__(self, other: "SPolynomial") -> "SPolynomial":
        self._check(other)
        out = SPolynomial(self.n, (), self.domain)
        out.terms = dict(self.terms)
        for m, c in other.terms.items():
            self._accumulate(out.terms, m, c)
        return out

    def scale(self, c) -> "SPolynomial":
        return SPolynomial(self.n, {m: v * self.domain(c) for m, v in self.terms.items()},
                           self.domain)

    def __neg__(self) -> "SPolynomial":
        return self.scale(-1)

    def __sub__(self, other: "SPolynomial") -> "SPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "SPolynomial":
        if not isinstance(other, SPolynomial):
            return self.scale(other)
        self._check(other)
        out = SPolynomial(self.n, (), self.domain)
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                prod = s_multiply(m1, m2)
                if prod is not None:
                    self._accumulate(out.terms, prod, c1 * c2)
        return out

    __rmul__ = scale

    def __pow__(self, k: int) -> "SPolynomial":
        result = SPolynomial(self.n, {ChainMonomial(self.n): 1}, self.domain)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, SPolynomial) and self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def act(self, p: Permutation) -> "SPolynomial":
        return SPolynomial(self.n, {act_chain(p, m): c for m, c in self.terms.items()}, self.domain)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=_chain_display_key):
            c = self.terms[m]
            negative = self.domain.kind != "fp" and c < 0
            mag = -c if negative else c
            body = str(m) if mag == 1 else (f"{mag}" if not m.factors else f"{mag}*{m}")
            sign = "-" if negative else "+"
            parts.append(("-" if negative else "") + body if not parts else f"{sign} {body}")
        return " ".join(parts)

    __repr__ = __str__


def _chain_display_key(m: ChainMonomial):
    return (-m.degree, tuple(-e for e in garsia(m)))


def theta(n: int, i: int, domain: Domain = Z) -> SPolynomial:
    """Rank-row sum: the sum of y_U over all i-subsets U of [n]."""
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"rank {i} outside 1..{n}")
    return SPolynomial(n, {ChainMonomial(n, ((mask_of(u), 1),)): 1
                           for u in itertools.combinations(range(1, n + 1), i)}, domain)


def theta_product(exps: Sequence[int], domain: Domain = Z) -> SPolynomial:
    n = len(exps)
    result = SPolynomial(n, {ChainMonomial(n): 1}, domain)
    for i, e in enumerate(exps, start=1):
        for _ in range(e):
            result = result * theta(n, i, domain)
    return result


def s_orbit_monomial(group: PermutationGroup, m: ChainMonomial, domain: Domain = Z) -> SPolynomial:
    if group.degree != m.n:
        raise DegreeMismatch(f"group of degree {group.degree}, chain monomial for n={m.n}")
    images = {act_chain(g, m) for g in group._elements}
    return SPolynomial(m.n, {u: 1 for u in images}, domain)


def s_orbit_to_theta(f: SPolynomial) -> tuple[int, ...]:
    """Exponents a with prod theta_i^a_i equal to the full S_n-orbit monomial ``f``."""
    if not f.terms:
        raise NotAnOrbitMonomial("zero is not an orbit monomial")
    a = fine_grade(next(iter(f.terms)))
    if theta_product(a, f.domain) != f:
        raise NotAnOrbitMonomial(f"{f} is not an orbit monomial under S_{f.n}")
    return a


def garsia_poly(f: SPolynomial) -> Polynomial:
    return Polynomial(f.n, {garsia(m): c for m, c in f.terms.items()}, f.domain)


def garsia_inverse_poly(f: Polynomial) -> SPolynomial:
    return SPolynomial(f.nvars, {garsia_inverse(m): c for m, c in f.terms.items()}, f.domain)
