"""The quotient complex of the boundary of the barycentric subdivision of the simplex.

Faces of the quotient by G are G-orbits of strict chains of subsets strictly between the
empty set and [n]; the empty chain is the minimal face.  A chain is a tuple of bitmasks
listed largest subset first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import ForeignFace, NotAFace
from .homology import HomologyGroup, chain_complex_homology, field_betti
from .permgrp import PermutationGroup, _coset_map, _double_coset_blocks, symmetric_group
from .polyring import Domain, Polynomial, Z, orbit_monomial
from .srring import ChainMonomial, SPolynomial, garsia, garsia_inverse, popcount, s_orbit_monomial

Chain = tuple[int, ...]


def all_chains(n: int) -> list[Chain]:
    """Every strict chain of proper nonempty subsets of [n], largest subset first."""
    full = (1 << n) - 1
    proper = list(range(1, full))
    out: list[Chain] = [()]

    def extend(chain: Chain):
        last = chain[-1] if chain else full
        for m in proper:
            if m != last and m & last == m:
                new = chain + (m,)
                out.append(new)
                extend(new)

    extend(())
    return out


def chain_monomial(chain: Chain, n: int) -> ChainMonomial:
    return ChainMonomial(n, tuple((m, 1) for m in chain))


def chain_exponents(chain: Chain, n: int) -> tuple[int, ...]:
    """Exponent vector of the monomial in R attached to a chain."""
    return tuple(sum(m >> j & 1 for m in chain) for j in range(n))


def _canonical_key(chain: Chain, n: int) -> tuple:
    # prefer the chain whose monomial puts the largest exponents on the earliest variables
    return tuple(-e for e in chain_exponents(chain, n))


def format_label(exps: Sequence[int]) -> str:
    """``(2,1,1,0)`` -> ``"1^2 2 3"``; the empty face is ``"∅"``."""
    parts = [f"{j + 1}" + (f"^{e}" if e > 1 else "") for j, e in enumerate(exps) if e]
    return " ".join(parts) or "∅"


@dataclass(frozen=True)
class Face:
    """A G-orbit of chains, identified by its canonical representative chain."""

    rep: Chain
    rank_set: tuple[int, ...]
    orbit_size: int
    n: int

    @property
    def rank(self) -> int:
        return len(self.rank_set)

    @property
    def exponents(self) -> tuple[int, ...]:
        return chain_exponents(self.rep, self.n)

    @property
    def label(self) -> str:
        return format_label(self.exponents)

    def subsets(self) -> list[list[int]]:
        """Representative subsets, smallest first, as 1-based point lists."""
        return [[j + 1 for j in range(self.n) if m >> j & 1] for m in reversed(self.rep)]

    def __str__(self) -> str:
        return self.label


class QuotientComplex:
    """The boolean complex whose faces are the G-orbits of chains in B_n minus {empty, [n]}."""

    def __init__(self, group: PermutationGroup):
        n = group.degree
        if n < 2:
            raise ValueError("the quotient complex needs degree at least 2")
        self.group = group
        self.n = n
        tables = group.subset_tables
        chain_to_face: dict[Chain, int] = {}
        raw_faces = []
        for chain in all_chains(n):
            if chain in chain_to_face:
                continue
            orbit = {tuple(t[m] for m in chain) for t in tables}
            rep = min(orbit, key=lambda c: _canonical_key(c, n))
            rank_set = tuple(sorted(popcount(m) for m in chain))
            raw_faces.append((rep, rank_set, len(orbit), orbit))
            for c in orbit:
                chain_to_face[c] = -1
        raw_faces.sort(key=lambda f: face_sort_key(f[0], f[1], n))
        self.faces: list[Face] = []
        for idx, (rep, rank_set, size, orbit) in enumerate(raw_faces):
            self.faces.append(Face(rep, rank_set, size, n))
            for c in orbit:
                chain_to_face[c] = idx
        self.chain_to_face = chain_to_face
        self.index = {f: i for i, f in enumerate(self.faces)}
        full = tuple(range(1, n))
        self.facets: list[int] = [i for i, f in enumerate(self.faces) if f.rank_set == full]

    def __len__(self) -> int:
        return len(self.faces)

    def index_of(self, face: Face) -> int:
        idx = self.index.get(face)
        if idx is None:
            raise ForeignFace(f"face {face} does not belong to this complex")
        return idx

    def face_of_chain(self, chain: Iterable[int]) -> int:
        chain = tuple(sorted(chain, key=lambda m: -popcount(m)))
        try:
            return self.chain_to_face[chain]
        except KeyError:
            raise NotAFace(f"{chain} is not a strict chain of proper nonempty subsets") from None

    def face_of_monomial(self, exps: Sequence[int]) -> Face:
        """The face whose orbit monomial contains the given squarefree-chain monomial."""
        cm = garsia_inverse(exps)
        if not cm.is_squarefree() or any(m == (1 << self.n) - 1 for m in cm.masks):
            raise NotAFace(f"monomial {tuple(exps)} is not special")
        return self.faces[self.face_of_chain(cm.masks)]

    def face_by_label(self, label: str) -> Face:
        """Look a face up by a label such as ``"1^2 2 3"`` or ``"1²23"``."""
        return self.face_of_monomial(parse_label(label, self.n))

    def restrict(self, idx: int, ranks: Iterable[int]) -> int:
        ranks = set(ranks)
        return self.chain_to_face[tuple(m for m in self.faces[idx].rep if popcount(m) in ranks)]

    def leq(self, a: int, b: int) -> bool:
        """Whether face a lies below face b: some G-image of a's chain is a subchain of b's."""
        ka, kb = self.faces[a].rank_set, self.faces[b].rank_set
        return set(ka) <= set(kb) and self.restrict(b, ka) == a

    @cached_property
    def below(self) -> list[frozenset[int]]:
        """For each face, the set of faces below or equal to it."""
        out = []
        for b, face in enumerate(self.faces):
            rep = face.rep
            subs = {self.chain_to_face[sub] for r in range(len(rep) + 1)
                    for sub in itertools.combinations(rep, r)}
            out.append(frozenset(subs))
        return out

    @cached_property
    def above(self) -> list[frozenset[int]]:
        up: list[set[int]] = [set() for _ in self.faces]
        for b, downs in enumerate(self.below):
            for a in downs:
                up[a].add(b)
        return [frozenset(u) for u in up]

    @cached_property
    def facet_masks(self) -> list[int]:
        """Bit j of entry i is set when face i lies in the j-th facet."""
        out = []
        for i in range(len(self.faces)):
            mask = 0
            for j, f in enumerate(self.facets):
                if i in self.below[f]:
                    mask |= 1 << j
            out.append(mask)
        return out

    def facet_vector(self, face: Face | int) -> tuple[int, ...]:
        i = face if isinstance(face, int) else self.index_of(face)
        mask = self.facet_masks[i]
        return tuple(mask >> j & 1 for j in range(len(self.facets)))

    def incidence_matrix(self, faces: Sequence[Face | int]) -> list[tuple[int, ...]]:
        """Rows are the facet vectors of ``faces`` in the complex's facet order."""
        return [self.facet_vector(f) for f in faces]

    def face_poset_complex(self) -> "SimplicialComplex":
        """Order complex of the face poset with the empty face removed."""
        return order_complex(range(1, len(self.faces)), self.above)

    def to_json(self) -> dict:
        facet_pos = {f: j for j, f in enumerate(self.facets)}
        return {
            "degree": self.n,
            "group_order": self.group.order,
            "faces": [{"repr": face.subsets(), "rank_set": list(face.rank_set),
                       "facets": [j for j in range(len(self.facets))
                                  if self.facet_masks[i] >> j & 1]}
                      for i, face in enumerate(self.faces)],
            "facets": [facet_pos[f] for f in self.facets],
        }


def face_sort_key(rep: Chain, rank_set: Sequence[int], n: int) -> tuple:
    """Level order: rank-set size, then rank set, then the representative's exponent
    vector in increasing lex order."""
    return (len(rank_set), tuple(rank_set), chain_exponents(rep, n))


_SUPERSCRIPTS = str.maketrans("⁰¹²³⁴⁵⁶⁷⁸⁹", "0123456789")


def parse_label(label: str, n: int) -> tuple[int, ...]:
    """Exponent vector of a face label: ``"1^2 2 3"``, ``"1²23"`` and ``"∅"`` are accepted."""
    text = label.strip()
    exps = [0] * n
    if text in ("∅", ""):
        return tuple(exps)
    if " " not in text and "^" not in text:
        # single-digit points followed by optional superscript exponents
        i = 0
        while i < len(text):
            point = int(text[i])
            i += 1
            digits = ""
            while i < len(text) and text[i] in "⁰¹²³⁴⁵⁶⁷⁸⁹":
                digits += text[i].translate(_SUPERSCRIPTS)
                i += 1
            exps[point - 1] += int(digits or 1)
        return tuple(exps)
    for tok in label.split():
        base, _, e = tok.partition("^")
        base = base.translate(_SUPERSCRIPTS)
        exps[int(base) - 1] += int(e or 1)
    return tuple(exps)


def build_quotient_complex(group: PermutationGroup) -> QuotientComplex:
    return QuotientComplex(group)


def face_to_orbit_monomial(complex_: QuotientComplex, face: Face, target: str = "R",
                           domain: Domain = Z) -> Polynomial | SPolynomial:
    """Orbit monomial of a face: in S the orbit sum of the product of y_U over the chain,
    in R its Garsia image.  The empty face gives 1."""
    complex_.index_of(face)
    cm = chain_monomial(face.rep, face.n)
    if target.upper() == "S":
        return s_orbit_monomial(complex_.group, cm, domain)
    return orbit_monomial(complex_.group, garsia(cm), domain)


# Independent construction through double cosets of parabolic subgroups.

def parabolic_generators(n: int, J: Iterable[int]) -> list[tuple[int, ...]]:
    """Adjacent transpositions (i, i+1) for i in J, as 0-based image tuples."""
    gens = []
    for i in J:
        img = list(range(n))
        img[i - 1], img[i] = img[i], img[i - 1]
        gens.append(tuple(img))
    return gens


@dataclass
class SigmaPoset:
    """Pairs (double coset G pi Y_J, J), ordered by reverse inclusion in both slots."""

    elements: list[tuple[frozenset, frozenset]]

    def leq(self, a: int, b: int) -> bool:
        (da, ja), (db, jb) = self.elements[a], self.elements[b]
        return da >= db and ja >= jb


def sigma_poset(group: PermutationGroup) -> SigmaPoset:
    n = group.degree
    ambient = symmetric_group(n)._elements
    elements = []
    for r in range(n):
        for J in itertools.combinations(range(1, n), r):
            blocks = _double_coset_blocks(group._elements, parabolic_generators(n, J), ambient)
            for block in blocks:
                elements.append((frozenset(block), frozenset(J)))
    return SigmaPoset(elements)


def _chain_permutation(chain: Chain, n: int) -> tuple[int, ...]:
    """A permutation pi (0-based images) whose maximal chain {i : pi(i) < k} refines
    ``chain``: points of the smallest subset get the smallest values, and so on."""
    order: list[int] = []
    for m in reversed(chain):
        order += [j for j in range(n) if m >> j & 1 and j not in order]
    order += [j for j in range(n) if j not in order]
    img = [0] * n
    for value, j in enumerate(order):
        img[j] = value
    return tuple(img)


def compare_constructions(complex_: QuotientComplex, sigma: SigmaPoset | None = None) -> bool:
    """Check that face -> (double coset, complementary rank set) is an order isomorphism
    from the chain-orbit poset onto the double-coset poset."""
    group, n = complex_.group, complex_.n
    sigma = sigma or sigma_poset(group)
    rep_of = _coset_map(group._elements, symmetric_group(n)._elements)
    lookup = {}
    for k, (block, J) in enumerate(sigma.elements):
        for r in block:
            lookup[(r, J)] = k
    image = []
    for face in complex_.faces:
        J = frozenset(range(1, n)) - frozenset(face.rank_set)
        pi = _chain_permutation(face.rep, n)
        image.append(lookup[(rep_of[pi], J)])
    if len(set(image)) != len(image) or len(image) != len(sigma.elements):
        return False
    size = len(image)
    return all(complex_.leq(a, b) == sigma.leq(image[a], image[b])
               for a in range(size) for b in range(size))


# Simplicial complexes, links and homology.

class SimplicialComplex:
    """A finite simplicial complex given by its facets (vertex sets)."""

    def __init__(self, facets: Iterable[Iterable]):
        fs = {frozenset(f) for f in facets}
        # keep only maximal sets; the empty complex is {frozenset()}
        self.facets = sorted((f for f in fs if not any(f < g for g in fs)),
                             key=lambda f: (len(f), sorted(map(repr, f))))
        if not self.facets:
            self.facets = [frozenset()]
        self.vertices = sorted({v for f in self.facets for v in f}, key=repr)

    @property
    def dim(self) -> int:
        return max(len(f) for f in self.facets) - 1

    @cached_property
    def faces(self) -> set[frozenset]:
        out = set()
        for f in self.facets:
            items = sorted(f, key=repr)
            for r in range(len(items) + 1):
                out.update(frozenset(c) for c in itertools.combinations(items, r))
        return out

    def __contains__(self, face) -> bool:
        face = frozenset(face)
        return any(face <= f for f in self.facets)

    def __len__(self) -> int:
        return len(self.faces)


def order_complex(elements: Iterable[int], above: Sequence[Iterable[int]]) -> SimplicialComplex:
    """Order complex of the poset on ``elements`` where ``above[x]`` holds the elements
    greater than or equal to x."""
    elements = set(elements)
    strict_up = {x: (set(above[x]) & elements) - {x} for x in elements}
    facets = []

    def grow(chain: list[int], candidates: set[int]):
        if not candidates:
            facets.append(chain)
            return
        for y in candidates:
            grow(chain + [y], candidates & strict_up[y])

    minimal = {x for x in elements if not any(x in strict_up[y] for y in elements)}
    for x in minimal:
        grow([x], strict_up[x])
    return SimplicialComplex(facets)


def link(complex_: SimplicialComplex, face: Iterable) -> SimplicialComplex:
    face = frozenset(face)
    if face not in complex_:
        raise NotAFace(f"{sorted(face, key=repr)} is not a face")
    return SimplicialComplex(f - face for f in complex_.facets if face <= f)


def homology(complex_: SimplicialComplex, reduced: bool = True) -> list[HomologyGroup]:
    """Integer homology in dimensions -1..dim (entry k is dimension k-1)."""
    by_dim: dict[int, list[tuple]] = {}
    for f in complex_.faces:
        by_dim.setdefault(len(f) - 1, []).append(tuple(sorted(f, key=repr)))
    top = complex_.dim
    cells = [sorted(by_dim.get(d, []), key=lambda c: [repr(v) for v in c])
             for d in range(-1, top + 1)]
    index = [{c: i for i, c in enumerate(level)} for level in cells]
    boundaries: list[list[dict[int, int]]] = [[]]
    for k in range(1, len(cells)):
        cols = []
        for cell in cells[k]:
            col = {}
            for pos in range(len(cell)):
                col[index[k - 1][cell[:pos] + cell[pos + 1:]]] = -1 if pos % 2 else 1
            cols.append(col)
        boundaries.append(cols)
    groups = chain_complex_homology([len(level) for level in cells], boundaries)
    if not reduced:
        groups[0] = HomologyGroup()
        if len(groups) > 1:
            groups[1] = HomologyGroup(groups[1].free_rank + 1, groups[1].torsion)
    return groups


def quotient_homology(complex_: QuotientComplex) -> list[HomologyGroup]:
    """Reduced homology of the quotient from its cellular chain complex.

    Every group element fixing a chain fixes each of its subsets, so the cells of the
    quotient carry consistent orientations and the boundary of the cell of a chain
    U_1 < ... < U_k is the alternating sum of the cells of its codimension-one subchains.
    """
    n = complex_.n
    levels: list[list[int]] = [[] for _ in range(n)]
    for i, face in enumerate(complex_.faces):
        levels[face.rank].append(i)
    pos = [{f: k for k, f in enumerate(level)} for level in levels]
    boundaries: list[list[dict[int, int]]] = [[]]
    for r in range(1, n):
        cols = []
        for i in levels[r]:
            ascending = tuple(reversed(complex_.faces[i].rep))
            col: dict[int, int] = {}
            for k in range(len(ascending)):
                sub = ascending[:k] + ascending[k + 1:]
                j = complex_.chain_to_face[tuple(reversed(sub))]
                row = pos[r - 1][j]
                col[row] = col.get(row, 0) + (-1 if k % 2 else 1)
            cols.append({k: v for k, v in col.items() if v})
        boundaries.append(cols)
    return chain_complex_homology([len(level) for level in levels], boundaries)


@dataclass(frozen=True)
class CMResult:
    is_cm: bool
    witness: tuple | None = None  # (face label or chain, dimension, group)

    def __bool__(self) -> bool:
        return self.is_cm


def _vanishes(groups: Sequence[HomologyGroup], i: int, p: int | None, coeff: str) -> bool:
    """Whether reduced H_i (groups[i+1]) vanishes with the requested coefficients."""
    g = groups[i + 1]
    if coeff == "z":
        return g.is_zero()
    return field_betti(groups, p)[i + 1] == 0


def _coefficients(coefficients) -> tuple[str, int | None]:
    if isinstance(coefficients, Domain):
        return coefficients.kind, coefficients.p or None
    d = Domain.parse(str(coefficients))
    return d.kind, d.p or None


def is_cm_complex(complex_: QuotientComplex, coefficients="z", mode: str = "intervals") -> CMResult:
    """Reisner's criterion on the order complex of the face poset (empty face removed).

    ``mode="full"`` checks the link of every simplex of the order complex.  The default
    ``"intervals"`` checks, for the empty face and every face x of the quotient, the order
    complex of the faces strictly above x.  Links in the order complex are joins of those
    upper intervals with open lower intervals, and lower intervals of a boolean complex
    are spheres, so the two checks agree.
    """
    coeff, p = _coefficients(coefficients)
    top = complex_.n - 2
    if mode == "full":
        K = complex_.face_poset_complex()
        for sigma in sorted(K.faces, key=lambda f: (len(f), sorted(f))):
            lk = link(K, sigma)
            groups = homology(lk)
            for i in range(-1, top - len(sigma)):
                if not _vanishes(groups, i, p, coeff):
                    labels = tuple(complex_.faces[v].label for v in sorted(sigma))
                    return CMResult(False, (labels, i, groups[i + 1]))
        return CMResult(True)
    if mode != "intervals":
        raise ValueError(f"unknown mode {mode!r}")
    above = complex_.above
    for x, face in enumerate(complex_.faces):
        ups = set(above[x]) - {x} if x else set(range(1, len(complex_.faces)))
        lk = order_complex(ups, above)
        groups = homology(lk)
        for i in range(-1, top - face.rank):
            if not _vanishes(groups, i, p, coeff):
                return CMResult(False, (face.label, i, groups[i + 1]))
    return CMResult(True)
