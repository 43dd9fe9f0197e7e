"""Permutations of [n], finitely generated permutation groups, cosets and double cosets.

Permutations are stored as 0-based image tuples; the public interface speaks
1-based points.  Products follow the right-action convention: ``p * q`` applies
``p`` first and then ``q``, so ``(p * q)(i) == q(p(i))``.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter, deque
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence, TypeVar

from .errors import (
    CapExceeded,
    NotApplicable,
    NotASubgroup,
    ParseError,
    PointOutOfRange,
    Unclassifiable,
)

DEFAULT_CAP = 10**6

T = TypeVar("T", bound=Hashable)


class Permutation:
    """A bijection of {1..n}, given by the sequence of images of 1..n."""

    __slots__ = ("img",)

    def __init__(self, images: Iterable[int]):
        img = tuple(i - 1 for i in images)
        if sorted(img) != list(range(len(img))):
            raise ValueError(f"not a permutation: {tuple(i + 1 for i in img)}")
        self.img = img

    @classmethod
    def _raw(cls, img: tuple[int, ...]) -> "Permutation":
        p = cls.__new__(cls)
        p.img = img
        return p

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls._raw(tuple(range(n)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        img = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a - 1] = b - 1
        return cls(i + 1 for i in img)

    @property
    def degree(self) -> int:
        return len(self.img)

    @property
    def images(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in self.img)

    def __call__(self, point: int) -> int:
        return self.img[point - 1] + 1

    def __mul__(self, other: "Permutation") -> "Permutation":
        if len(other.img) != len(self.img):
            raise ValueError("degrees differ")
        o = other.img
        return Permutation._raw(tuple(o[i] for i in self.img))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.img)
        for i, j in enumerate(self.img):
            inv[j] = i
        return Permutation._raw(tuple(inv))

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else self.inverse()
        result = Permutation.identity(self.degree)
        for _ in range(abs(k)):
            result = result * base
        return result

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.img))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, 1-based, each starting at its smallest point."""
        seen = set()
        out = []
        for start in range(len(self.img)):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self.img[start]
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self.img[j]
            if len(cyc) > 1:
                out.append(tuple(c + 1 for c in cyc))
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.img == other.img

    def __lt__(self, other: "Permutation") -> bool:
        return self.img < other.img

    def __le__(self, other: "Permutation") -> bool:
        return self.img <= other.img

    def __hash__(self) -> int:
        return hash(self.img)

    def __str__(self) -> str:
        cyc = self.cycles()
        return "".join("(" + ",".join(map(str, c)) + ")" for c in cyc) or "()"

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"


def _mul(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(q[i] for i in p)


def _inv(p: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def _closure(gens: Sequence[tuple[int, ...]], n: int, cap: int = DEFAULT_CAP,
             start: Iterable[tuple[int, ...]] = ()) -> frozenset:
    identity = tuple(range(n))
    seen = set(start) or {identity}
    seen.add(identity)
    queue = deque(seen)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = tuple(g[i] for i in x)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise CapExceeded(f"group closure exceeded {cap} elements")
                queue.append(y)
    return frozenset(seen)


class PermutationGroup:
    """The subgroup of S_n generated by a finite set of permutations."""

    def __init__(self, degree: int, generators: Iterable[Permutation] = (), cap: int = DEFAULT_CAP):
        if degree < 1:
            raise ValueError("degree must be positive")
        gens = []
        for g in generators:
            if g.degree != degree:
                raise ValueError(f"generator {g} has degree {g.degree}, expected {degree}")
            if not g.is_identity() and g not in gens:
                gens.append(g)
        self.degree = degree
        self.generators: tuple[Permutation, ...] = tuple(gens) or (Permutation.identity(degree),)
        self.cap = cap

    @cached_property
    def _elements(self) -> frozenset:
        return _closure([g.img for g in self.generators], self.degree, self.cap)

    def elements(self) -> frozenset[Permutation]:
        return frozenset(Permutation._raw(e) for e in self._elements)

    @property
    def order(self) -> int:
        return len(self._elements)

    def __contains__(self, p: Permutation) -> bool:
        return p.degree == self.degree and p.img in self._elements

    def is_subgroup_of(self, other: "PermutationGroup") -> bool:
        return self.degree == other.degree and all(g in other for g in self.generators)

    def __eq__(self, other) -> bool:
        return (isinstance(other, PermutationGroup) and self.is_subgroup_of(other)
                and other.is_subgroup_of(self))

    def __hash__(self) -> int:
        return hash((self.degree, self.order))

    @cached_property
    def subset_tables(self) -> tuple[tuple[int, ...], ...]:
        """For each element g (in sorted order), the table sending a subset bitmask of
        {0..n-1} to the bitmask of its image under g."""
        n = self.degree
        tables = []
        for g in sorted(self._elements):
            bit = [1 << g[j] for j in range(n)]
            table = [0] * (1 << n)
            for mask in range(1, 1 << n):
                low = mask & -mask
                table[mask] = table[mask ^ low] | bit[low.bit_length() - 1]
            tables.append(tuple(table))
        return tuple(tables)

    def is_transitive(self) -> bool:
        return len(orbit_of(self, 1, lambda p, i: p(i))) == self.degree

    def __str__(self) -> str:
        return "<" + ", ".join(map(str, self.generators)) + ">"

    def __repr__(self) -> str:
        return f"PermutationGroup({self.degree}, [{', '.join(map(str, self.generators))}])"


def elements(group: PermutationGroup) -> frozenset[Permutation]:
    return group.elements()


def symmetric_group(n: int) -> PermutationGroup:
    if n == 1:
        return PermutationGroup(1)
    gens = [Permutation.from_cycles([(1, 2)], n)]
    if n > 2:
        gens.append(Permutation.from_cycles([tuple(range(1, n + 1))], n))
    return PermutationGroup(n, gens)


def alternating_group(n: int) -> PermutationGroup:
    return PermutationGroup(n, [Permutation.from_cycles([(1, 2, k)], n) for k in range(3, n + 1)])


def trivial_group(n: int) -> PermutationGroup:
    return PermutationGroup(n)


def orbit_of(group: PermutationGroup, item: T, action: Callable[[Permutation, T], T]) -> frozenset[T]:
    """Orbit of ``item`` under ``group``, with ``action(p, item)`` giving the image."""
    seen = {item}
    queue = deque([item])
    while queue:
        x = queue.popleft()
        for g in group.generators:
            y = action(g, x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def cycle_structure(p: Permutation) -> tuple[tuple[int, int], ...]:
    """Sorted (cycle length, multiplicity) pairs over the nontrivial cycles of ``p``."""
    counts = Counter(len(c) for c in p.cycles())
    return tuple(sorted(counts.items()))


RR_CYCLE_TYPES = frozenset({((2, 1),), ((2, 2),), ((3, 1),)})


def _cycle_type_raw(p: tuple[int, ...]) -> tuple[tuple[int, int], ...]:
    return cycle_structure(Permutation._raw(p))


def rr_subgroup(group: PermutationGroup) -> tuple[PermutationGroup, int]:
    """Subgroup generated by the transpositions, double transpositions and 3-cycles of
    ``group``, together with its index."""
    gens = sorted(Permutation._raw(e) for e in group._elements
                  if _cycle_type_raw(e) in RR_CYCLE_TYPES)
    sub = PermutationGroup(group.degree, gens, cap=group.cap)
    return sub, group.order // sub.order


def _check_subgroup(sub: PermutationGroup, ambient: PermutationGroup) -> None:
    if sub.degree != ambient.degree or not sub.is_subgroup_of(ambient):
        raise NotASubgroup(f"{sub} is not contained in {ambient}")


def _coset_map(sub_elems: Iterable[tuple[int, ...]], ambient_elems: Iterable[tuple[int, ...]]) -> dict:
    """Send each ambient element t to the lex-least element of its right coset sub*t."""
    sub_elems = list(sub_elems)
    rep_of: dict = {}
    for t in sorted(ambient_elems):
        if t in rep_of:
            continue
        coset = [tuple(t[i] for i in g) for g in sub_elems]
        rep = min(coset)
        for c in coset:
            rep_of[c] = rep
    return rep_of


def lex_transversal(sub: PermutationGroup, ambient: PermutationGroup | None = None
                    ) -> tuple[list[Permutation], dict[Permutation, Permutation]]:
    """Lex-least representatives of the right cosets ``sub * t`` in ``ambient`` (default
    S_n), sorted, plus the map sending every ambient element to its representative."""
    ambient = ambient or symmetric_group(sub.degree)
    _check_subgroup(sub, ambient)
    raw = _coset_map(sub._elements, ambient._elements)
    reps = sorted({Permutation._raw(r) for r in raw.values()})
    return reps, {Permutation._raw(k): Permutation._raw(v) for k, v in raw.items()}


def _double_coset_blocks(left_elems, right_gens, ambient_elems) -> list[tuple[tuple[int, ...], ...]]:
    rep_of = _coset_map(left_elems, ambient_elems)
    reps = sorted(set(rep_of.values()))
    parent = {r: r for r in reps}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for r in reps:
        for h in right_gens:
            a, b = find(r), find(rep_of[_mul(r, h)])
            if a != b:
                parent[max(a, b)] = min(a, b)
    blocks: dict = {}
    for r in reps:
        blocks.setdefault(find(r), []).append(r)
    return sorted(tuple(sorted(b)) for b in blocks.values())


def double_cosets(left: PermutationGroup, right: PermutationGroup,
                  ambient: PermutationGroup | None = None) -> list[tuple[Permutation, ...]]:
    """Partition the right-coset representatives of ``left`` into double cosets
    ``left * b * right``.  Each block is sorted and blocks are ordered by first element."""
    ambient = ambient or symmetric_group(left.degree)
    _check_subgroup(left, ambient)
    _check_subgroup(right, ambient)
    blocks = _double_coset_blocks(left._elements, [g.img for g in right.generators],
                                  ambient._elements)
    return [tuple(Permutation._raw(r) for r in b) for b in blocks]


def _has_pair_blocks(group: PermutationGroup) -> bool:
    """True if ``group`` preserves some partition of the points into pairs."""
    n = group.degree
    if n % 2:
        return False
    gens = [g.img for g in group.generators]
    for j in range(1, n):
        # smallest block system in which 0 and j share a block
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        pairs = [(0, j)]
        while pairs:
            a, b = pairs.pop()
            ra, rb = find(a), find(b)
            if ra == rb:
                continue
            parent[ra] = rb
            for g in gens:
                pairs.append((g[a], g[b]))
        sizes = Counter(find(x) for x in range(n))
        if all(s == 2 for s in sizes.values()):
            return True
    return False


HUFFMAN_LABELS = ("S_n", "A_n", "Wreath(S_2≀S_m)", "A∩Wreath", "D10@5", "A5@6", "PSL(2,7)@7",
                  "AGL(3,2)@8")


def huffman_classify(group: PermutationGroup) -> str:
    """Place a transitive group equal to its own rr-subgroup in Huffman's case list."""
    n = group.degree
    if not group.is_transitive():
        raise NotApplicable("group is not transitive")
    grr, index = rr_subgroup(group)
    if index != 1:
        raise NotApplicable(f"group is not generated by its rr-elements (index {index})")
    types = {_cycle_type_raw(e) for e in group._elements}
    has_transposition = ((2, 1),) in types
    has_three_cycle = ((3, 1),) in types
    order = group.order
    all_even = all(sum((length - 1) * mult for length, mult in t) % 2 == 0 for t in types)
    if n == 1:
        return "S_n"
    if has_transposition and has_three_cycle:
        if order == math.factorial(n):
            return "S_n"
    elif has_three_cycle:
        if order == math.factorial(n) // 2:
            return "A_n"
    elif has_transposition:
        m = n // 2
        if n % 2 == 0 and order == 2**m * math.factorial(m) and _has_pair_blocks(group):
            return "Wreath(S_2≀S_m)"
    else:
        m = n // 2
        if (n % 2 == 0 and n >= 4 and all_even and order == 2 ** (m - 1) * math.factorial(m)
                and _has_pair_blocks(group)):
            return "A∩Wreath"
        sporadic = {(5, 10): "D10@5", (6, 60): "A5@6", (7, 168): "PSL(2,7)@7",
                    (8, 1344): "AGL(3,2)@8"}
        if (n, order) in sporadic:
            return sporadic[(n, order)]
    raise Unclassifiable(f"no case matches {group} (order {order})")


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int) -> PermutationGroup:
    """Parse generators written in cycle notation.

    Generators are separated by commas or semicolons between cycles.  Adjacent cycles
    with no separator belong to the same generator as long as they are disjoint; a cycle
    that meets a point already used by the current generator starts a new one, so
    ``"(1,2,3,4)(1,3)"`` has two generators and ``"(1,2,3,4,5)(2,5)(3,4)"`` has the
    generators (1,2,3,4,5) and (2,5)(3,4).
    """
    generators: list[list[tuple[int, ...]]] = []
    current: list[tuple[int, ...]] = []
    used: set[int] = set()
    pos = 0
    text_len = len(text)

    def flush():
        nonlocal current, used
        if current:
            generators.append(current)
        current, used = [], set()

    while pos < text_len:
        ch = text[pos]
        if ch.isspace():
            pos += 1
        elif ch in ",;":
            flush()
            pos += 1
        elif ch == "(":
            m = _CYCLE_RE.match(text, pos)
            if not m:
                raise ParseError("unclosed cycle", pos)
            body = m.group(1).strip()
            tokens = [t for t in re.split(r"[,\s]+", body) if t] if body else []
            cyc = []
            for tok in tokens:
                if not tok.isdigit():
                    raise ParseError(f"expected a point, found {tok!r}", pos)
                point = int(tok)
                if not 1 <= point <= degree:
                    raise PointOutOfRange(f"point {point} outside 1..{degree}")
                if point in cyc:
                    raise ParseError(f"point {point} repeated in a cycle", pos)
                cyc.append(point)
            if used & set(cyc):
                flush()
            if len(cyc) > 1:
                current.append(tuple(cyc))
                used.update(cyc)
            pos = m.end()
        else:
            raise ParseError(f"unexpected character {ch!r}", pos)
    flush()
    perms = [Permutation.from_cycles(g, degree) for g in generators]
    return PermutationGroup(degree, perms)


def format_group(group: PermutationGroup) -> str:
    """Inverse of :func:`parse_cycles` on its own output."""
    return ", ".join(str(g) for g in group.generators if not g.is_identity())


# Subgroup classes of S_n, used by the survey.

def _group_key(elems: frozenset, n: int) -> tuple:
    types = Counter(_cycle_type_raw(e) for e in elems)
    orbits = []
    seen = set()
    for start in range(n):
        if start in seen:
            continue
        orb = {e[start] for e in elems}
        seen |= orb
        orbits.append(len(orb))
    return len(elems), tuple(sorted(types.items())), tuple(sorted(orbits))


def _conjugate(x: tuple[int, ...], s: tuple[int, ...]) -> tuple[int, ...]:
    # s^-1 * x * s as a right action: relabel points through s
    out = [0] * len(x)
    for i, j in enumerate(x):
        out[s[i]] = s[j]
    return tuple(out)


def are_conjugate(a: PermutationGroup, b: PermutationGroup) -> bool:
    """True if ``b`` is a conjugate of ``a`` inside S_n."""
    if a.degree != b.degree or a.order != b.order:
        return False
    gens = [g.img for g in a.generators]
    for s in itertools.permutations(range(a.degree)):
        if all(_conjugate(g, s) in b._elements for g in gens):
            return True
    return False


def subgroup_classes(n: int, cap: int = DEFAULT_CAP) -> list[PermutationGroup]:
    """Representatives of the conjugacy classes of subgroups of S_n.

    Grows subgroups one cyclic subgroup of prime-power order at a time, starting from
    the trivial group, and keeps one representative per conjugacy class.  Every finite
    group is generated by elements of prime-power order, so every class is reached.
    """
    all_elems = list(itertools.permutations(range(n)))
    cyclic: dict[frozenset, tuple[int, ...]] = {}
    for g in all_elems:
        c = _closure([g], n)
        order = len(c)
        if order == 1 or len(set(_prime_factors(order))) != 1:
            continue
        cyclic.setdefault(c, g)
    cyclic_list = sorted(cyclic.items(), key=lambda kv: (len(kv[0]), kv[1]))

    reps: list[tuple[frozenset, list]] = []
    buckets: dict[tuple, list[int]] = {}
    visited: set[frozenset] = set()

    def add(elems: frozenset, gens: list) -> bool:
        key = _group_key(elems, n)
        for idx in buckets.get(key, []):
            other, _ = reps[idx]
            if any(all(_conjugate(g, s) in other for g in gens) for s in all_elems):
                return False
        buckets.setdefault(key, []).append(len(reps))
        reps.append((elems, gens))
        return True

    identity = tuple(range(n))
    add(frozenset([identity]), [])
    i = 0
    while i < len(reps):
        elems, gens = reps[i]
        i += 1
        for c, g in cyclic_list:
            if g in elems:
                continue
            new = _closure(gens + [g], n, cap, start=elems)
            if new in visited:
                continue
            visited.add(new)
            add(new, gens + [g])
    ordered = sorted(reps, key=lambda r: (_group_key(r[0], n), sorted(r[0])))
    return [PermutationGroup(n, [Permutation._raw(g) for g in gens]) for _, gens in ordered]


def _prime_factors(k: int) -> list[int]:
    out = []
    d = 2
    while d * d <= k:
        while k % d == 0:
            out.append(d)
            k //= d
        d += 1
    if k > 1:
        out.append(k)
    return out


def prime_factors(k: int) -> list[int]:
    """Distinct prime divisors of ``k`` in increasing order."""
    return sorted(set(_prime_factors(k)))
