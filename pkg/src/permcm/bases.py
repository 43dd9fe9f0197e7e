"""Module bases of invariant rings over the symmetric polynomials.

Coefficient polynomials returned here live in n variables s_1..s_n standing for the
elementary symmetric polynomials sigma_1..sigma_n (or, on the Stanley-Reisner side, for
the rank-row sums theta_1..theta_n).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    CellBasisNotFound,
    DegreeMismatch,
    DomainMismatch,
    InvalidShelling,
    NotInvariant,
    NotPrime,
    SizeMismatch,
    SystemUnsolvable,
)
from .permgrp import PermutationGroup, format_group, prime_factors, rr_subgroup
from .polyring import (
    Domain,
    Polynomial,
    Q,
    Z,
    _is_prime,
    is_invariant,
    leading_shape,
    orbit,
    orbit_monomial,
    shape,
    sigma_power_product,
    substitute_sigma,
    special_decompose,
)
from .qcomplex import (
    QuotientComplex,
    build_quotient_complex,
    face_to_orbit_monomial,
    is_cm_complex,
)
from .srring import ChainMonomial, SPolynomial, popcount, s_orbit_monomial, theta_product

DEFAULT_SHELLING_BUDGET = 10**6


def _s_monomial(exps: Sequence[int], c, domain: Domain) -> Polynomial:
    return Polynomial(len(exps), {tuple(exps): c}, domain)


# Exact linear algebra over Z (through Q), Q and F_p.

def _field(domain: Domain):
    """Coercion into the working field: Fractions for Z and Q, residues for F_p."""
    if domain.kind == "fp":
        p = domain.p
        return (lambda v: int(v) % p if not isinstance(v, Fraction)
                else v.numerator * pow(v.denominator, -1, p) % p), (lambda a, b: a * pow(b, -1, p) % p), p
    return Fraction, (lambda a, b: a / b), None


def _row_reduce(rows: list[list], domain: Domain) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns."""
    conv, div, p = _field(domain)
    A = [[conv(v) for v in r] for r in rows]
    pivots = []
    r = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv_row = [div(v, A[r][c]) for v in A[r]]
        A[r] = inv_row
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
                if p:
                    A[i] = [a % p for a in A[i]]
        pivots.append(c)
        r += 1
    return A, pivots


def solve(matrix: Sequence[Sequence], rhs: Sequence, domain: Domain) -> list:
    """The unique x with matrix @ x = rhs over ``domain``; SystemUnsolvable otherwise."""
    ncols = len(matrix[0]) if matrix else 0
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    R, pivots = _row_reduce(aug, domain)
    if ncols in pivots:
        raise SystemUnsolvable("inconsistent system")
    if len(pivots) < ncols:
        raise SystemUnsolvable("system has no unique solution")
    x = [R[i][ncols] for i in range(ncols)]
    if domain.kind == "z":
        if any(v.denominator != 1 for v in x):
            raise SystemUnsolvable("solution is not integral")
        x = [int(v) for v in x]
    return x


def determinant(matrix: Sequence[Sequence[int]]) -> Fraction:
    A = [[Fraction(v) for v in r] for r in matrix]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] / A[c][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return det


# Goebel decomposition.

@dataclass
class GoebelDecomposition:
    """f = sum over faces of coefficient(sigma) * (orbit monomial of the face)."""

    complex: QuotientComplex
    coefficients: dict[int, Polynomial]
    domain: Domain = Z

    def items(self):
        return sorted(self.coefficients.items())

    def coefficient(self, label: str) -> Polynomial:
        idx = self.complex.index_of(self.complex.face_by_label(label))
        return self.coefficients.get(idx, Polynomial(self.complex.n, {}, self.domain))

    def reconstruct(self) -> Polynomial:
        n = self.complex.n
        total = Polynomial(n, {}, self.domain)
        for idx, F in self.coefficients.items():
            face = self.complex.faces[idx]
            total = total + substitute_sigma(F) * face_to_orbit_monomial(self.complex, face, "R",
                                                                    self.domain)
        return total

    def to_json(self) -> list[dict]:
        return [{"face": self.complex.faces[i].subsets(), "label": self.complex.faces[i].label,
                 "coeff": F.format("s")} for i, F in self.items()]



def _add_coeff(coeffs: dict, key, exps: Sequence[int], c, domain: Domain) -> None:
    term = _s_monomial(exps, c, domain)
    coeffs[key] = coeffs[key] + term if key in coeffs else term
    if not coeffs[key]:
        del coeffs[key]


def goebel_decompose(group: PermutationGroup, f: Polynomial, domain: Domain | None = None,
                     complex_: QuotientComplex | None = None) -> GoebelDecomposition:
    """Write a G-invariant f over special orbit monomials with symmetric coefficients.

    Repeatedly takes a monomial m of deglex-leading shape in the remainder.  A special m
    contributes its coefficient on its own orbit; otherwise m = (leading term of
    prod sigma_i^f_i) * m_star with m_star special, and c * prod sigma_i^f_i * G m_star has
    the same leading layer as c * G m, so subtracting it strictly lowers that orbit away.
    """
    n = group.degree
    if f.nvars != n:
        raise DegreeMismatch(f"polynomial in {f.nvars} variables, group of degree {n}")
    if domain is not None and domain != f.domain:
        raise DomainMismatch(f"polynomial over {f.domain}, requested {domain}")
    domain = f.domain
    if not is_invariant(f, group):
        raise NotInvariant("polynomial is not invariant under the group")
    complex_ = complex_ or build_quotient_complex(group)
    coeffs: dict[int, Polynomial] = {}
    remainder = f
    while remainder.terms:
        lam = leading_shape(remainder)
        m = max(u for u in remainder.terms if shape(u) == lam)
        c = remainder.terms[m]
        dec = special_decompose(m)
        face = complex_.index_of(complex_.face_of_monomial(dec.associated_special))
        _add_coeff(coeffs, face, dec.sigma_exponents, c, domain)
        orbit_poly = orbit_monomial(group, dec.associated_special, domain)
        if not dec.is_special:
            orbit_poly = orbit_poly * sigma_power_product(dec.sigma_exponents, domain)
        remainder = remainder - orbit_poly.scale(c)
    result = GoebelDecomposition(complex_, coeffs, domain)
    if result.reconstruct() != f:
        raise ArithmeticError("Goebel decomposition failed its round-trip check")
    return result


def s_goebel_decompose(group: PermutationGroup, F: SPolynomial,
                       complex_: QuotientComplex | None = None) -> dict[int, Polynomial]:
    """The same decomposition in S, where it is exact term by term: for a chain monomial m,
    G m = prod theta^f * G m_star with m_star the product of the distinct y_U, U != [n]."""
    n = group.degree
    complex_ = complex_ or build_quotient_complex(group)
    if any(act_invariant_fails(group, F)):
        raise NotInvariant("element of S is not invariant under the group")
    full = (1 << n) - 1
    coeffs: dict[int, Polynomial] = {}
    done: set[ChainMonomial] = set()
    for m in sorted(F.terms, key=lambda m: m.factors):
        if m in done:
            continue
        c = F.terms[m]
        done |= set(s_orbit_monomial(group, m).terms)
        f = [0] * n
        star = []
        for mask, e in m.factors:
            if mask == full:
                f[n - 1] += e
            else:
                f[popcount(mask) - 1] += e - 1
                star.append(mask)
        _add_coeff(coeffs, complex_.face_of_chain(star), f, c, F.domain)
    return coeffs


def act_invariant_fails(group: PermutationGroup, F: SPolynomial):
    return (F.act(g) != F for g in group.generators)


# Shellings.

@dataclass(frozen=True)
class Shelling:
    facets: tuple[int, ...]
    minimal_faces: tuple[int, ...]

    def intervals(self, complex_: QuotientComplex) -> list[frozenset[int]]:
        """The faces of [alpha_j, F_j] for each step j."""
        return [complex_.above[a] & complex_.below[f]
                for a, f in zip(self.minimal_faces, self.facets)]


def _new_faces(complex_: QuotientComplex, facet: int, covered: frozenset[int]) -> frozenset[int]:
    return complex_.below[facet] - covered


def _step_minimum(complex_: QuotientComplex, facet: int, covered: frozenset[int]) -> int | None:
    """The unique minimal new face when ``facet`` is added, or None if there is not one."""
    new = _new_faces(complex_, facet, covered)
    minimal = [a for a in new if not any(b != a and b in complex_.below[a] for b in new)]
    if len(minimal) != 1:
        return None
    alpha = minimal[0]
    if complex_.above[alpha] & complex_.below[facet] != new:
        return None
    return alpha


def check_shelling(complex_: QuotientComplex, order: Sequence[int], partial: bool = False
                   ) -> Shelling:
    """Validate a facet order (face indices); InvalidShelling names the failing step."""
    if not partial and sorted(order) != sorted(complex_.facets):
        raise InvalidShelling("order must list every facet exactly once")
    if len(set(order)) != len(order) or any(f not in complex_.facets for f in order):
        raise InvalidShelling("order must list distinct facets")
    covered: frozenset[int] = frozenset()
    alphas = []
    for step, f in enumerate(order):
        alpha = _step_minimum(complex_, f, covered)
        if alpha is None:
            raise InvalidShelling(f"step {step + 1} ({complex_.faces[f].label}) has no unique "
                                  "minimal new face")
        alphas.append(alpha)
        covered |= complex_.below[f]
    return Shelling(tuple(order), tuple(alphas))


def is_shelling_prefix(complex_: QuotientComplex, order: Sequence[int]) -> bool:
    try:
        check_shelling(complex_, order, partial=True)
    except InvalidShelling:
        return False
    return True


def find_shelling(complex_: QuotientComplex, budget: int = DEFAULT_SHELLING_BUDGET
                  ) -> Shelling | None:
    """Depth-first search for a shelling.  Returns None once the search space is
    exhausted; raises BudgetExceeded if ``budget`` nodes were visited first."""
    facets = complex_.facets
    nodes = 0
    dead: set[frozenset[int]] = set()

    def extend(order: list[int], alphas: list[int], covered: frozenset[int]):
        nonlocal nodes
        if len(order) == len(facets):
            return Shelling(tuple(order), tuple(alphas))
        used = frozenset(order)
        if used in dead:
            return None
        for f in facets:
            if f in used:
                continue
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"shelling search exceeded {budget} nodes")
            alpha = _step_minimum(complex_, f, covered)
            if alpha is None:
                continue
            found = extend(order + [f], alphas + [alpha], covered | complex_.below[f])
            if found:
                return found
        dead.add(used)
        return None

    return extend([], [], frozenset())


def shelling_basis(complex_: QuotientComplex, shelling: Shelling, side: str = "R",
                   domain: Domain = Z) -> list[Polynomial | SPolynomial]:
    """Orbit monomials of the minimal new faces of a shelling."""
    shelling = check_shelling(complex_, shelling.facets)
    M = [[int(a in complex_.below[f]) for f in shelling.facets] for a in shelling.minimal_faces]
    r = len(M)
    if any(M[i][i] != 1 for i in range(r)) or any(M[j][i] for i in range(r) for j in range(i + 1, r)):
        raise InvalidShelling("incidence matrix of the minimal faces is not unitriangular")
    return [face_to_orbit_monomial(complex_, complex_.faces[a], side, domain)
            for a in shelling.minimal_faces]


# Cell bases.

@dataclass
class CellBasis:
    complex: QuotientComplex
    faces: tuple[int, ...]
    domain: Domain
    determinant: Fraction

    @property
    def labels(self) -> list[str]:
        return _labels(self.complex, self.faces)

    def orbit_monomials(self, side: str = "R") -> list[Polynomial | SPolynomial]:
        return [face_to_orbit_monomial(self.complex, self.complex.faces[i], side, self.domain)
                for i in self.faces]


@dataclass
class CellBasisReport:
    ok: bool
    determinant: Fraction
    determinant_is_unit: bool
    violations: list[tuple[str, list[str]]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def verify_cell_basis(complex_: QuotientComplex, faces: Sequence[int], domain: Domain,
                      facet_order: Sequence[int] | None = None) -> CellBasisReport:
    """Check the unit-determinant and rank-set support conditions for a candidate basis.

    The determinant is taken with columns in ``facet_order`` (default: the complex's
    facet order); only its sign depends on that choice."""
    faces = list(faces)
    r = len(complex_.facets)
    if len(faces) != r:
        raise SizeMismatch(f"{len(faces)} faces for {r} facets")
    M = complex_.incidence_matrix(faces)
    if facet_order is not None:
        cols = [complex_.facets.index(f) for f in facet_order]
        det = determinant([[row[j] for j in cols] for row in M])
    else:
        det = determinant(M)
    unit = domain.is_unit(det) if det.denominator == 1 else False
    if not unit:
        return CellBasisReport(False, det, False)
    transposed = [list(col) for col in zip(*M)]
    violations = []
    for i, face in enumerate(complex_.faces):
        coeffs = solve(transposed, complex_.facet_vector(i), domain)
        bad = [complex_.faces[b].label for b, c in zip(faces, coeffs)
               if c and not set(complex_.faces[b].rank_set) <= set(face.rank_set)]
        if bad:
            violations.append((face.label, bad))
    return CellBasisReport(not violations, det, True, violations)


def _labels(complex_: QuotientComplex, faces: Iterable[int]) -> list[str]:
    return [complex_.faces[i].label for i in faces]


def greedy_order(complex_: QuotientComplex) -> list[int]:
    """Face order for the greedy search: rank-set size, rank set, then faces lying in
    earlier facets first, then representative."""
    def key(i):
        face = complex_.faces[i]
        vec = complex_.facet_vector(i)
        return (face.rank, face.rank_set, tuple(-v for v in vec), face.exponents)
    return sorted(range(len(complex_.faces)), key=key)


def greedy_cell_basis(complex_: QuotientComplex, domain: Domain = Q) -> CellBasis:
    """Select faces whose facet vectors leave the span of those already selected."""
    if not domain.is_field:
        raise DomainMismatch("the greedy search needs a field (q or fp:<p>)")
    selected: list[int] = []
    rows: list[list] = []
    r = len(complex_.facets)
    for i in greedy_order(complex_):
        vec = list(complex_.facet_vector(i))
        _, pivots = _row_reduce(rows + [vec], domain)
        if len(pivots) > len(rows):
            selected.append(i)
            rows.append(vec)
            if len(selected) == r:
                break
    if len(selected) < r:
        raise CellBasisNotFound("facet vectors do not span", _labels(complex_, selected))
    report = verify_cell_basis(complex_, selected, domain)
    if not report.ok:
        blocking = [label for label, _ in report.violations]
        raise CellBasisNotFound("support condition fails", _labels(complex_, selected), blocking)
    return CellBasis(complex_, tuple(selected), domain, report.determinant)


def cell_basis_from_shelling(complex_: QuotientComplex, shelling: Shelling,
                             domain: Domain = Z) -> CellBasis:
    shelling = check_shelling(complex_, shelling.facets)
    faces = shelling.minimal_faces
    report = verify_cell_basis(complex_, faces, domain, shelling.facets)
    if not report.ok:
        raise InvalidShelling(f"minimal faces do not form a cell basis: {report.violations}")
    return CellBasis(complex_, tuple(faces), domain, report.determinant)


def _face_expansion(basis: CellBasis, beta: int) -> list[tuple[int, object, tuple[int, ...]]]:
    """Write the S-side orbit monomial of face beta as sum of c * theta_{K - J} * b_alpha.

    For a basis face alpha with rank set J inside K = rank set of beta, theta_{K - J} b_alpha
    is the sum of the orbit monomials of the faces above alpha with rank set K.  Matching
    coefficients over the faces with rank set K gives a square system."""
    cx = basis.complex
    K = cx.faces[beta].rank_set
    cols = [a for a in basis.faces if set(cx.faces[a].rank_set) <= set(K)]
    rows = [i for i, f in enumerate(cx.faces) if f.rank_set == K]
    matrix = [[int(a in cx.below[b]) for a in cols] for b in rows]
    rhs = [int(b == beta) for b in rows]
    if len(rows) != len(cols):
        raise SystemUnsolvable(f"rank set {K}: {len(rows)} faces against {len(cols)} basis faces")
    x = solve(matrix, rhs, basis.domain)
    out = []
    for a, c in zip(cols, x):
        if c:
            J = set(cx.faces[a].rank_set)
            exps = tuple(int(i in K and i not in J) for i in range(1, cx.n + 1))
            out.append((a, c, exps))
    return out


def represent_s_on_basis(basis: CellBasis, F: SPolynomial) -> dict[int, Polynomial]:
    """Exact representation of an invariant of S on a cell basis, coefficients in theta."""
    cx = basis.complex
    dec = s_goebel_decompose(cx.group, F, cx)
    coeffs: dict[int, Polynomial] = {}
    cache: dict[int, list] = {}
    for beta, Fb in dec.items():
        for a, c, exps in cache.setdefault(beta, _face_expansion(basis, beta)):
            term = Fb * _s_monomial(exps, c, basis.domain)
            coeffs[a] = coeffs[a] + term if a in coeffs else term
    coeffs = {a: v for a, v in coeffs.items() if v}
    check = SPolynomial(cx.n, {}, basis.domain)
    monos = dict(zip(basis.faces, basis.orbit_monomials("S")))
    for a, v in coeffs.items():
        for exps, c in v.terms.items():
            check = check + theta_product(exps, basis.domain) * monos[a].scale(c)
    if check != F:
        raise SystemUnsolvable("representation failed its substitution check")
    return coeffs


def represent_on_basis(group: PermutationGroup, f: Polynomial, basis: CellBasis,
                       max_rounds: int = 1000) -> dict[int, Polynomial]:
    """Coefficients (polynomials in s) of an invariant f on the orbit monomials of a basis.

    Each round Goebel-decomposes what is left, rewrites each special orbit monomial through
    the S-side identity, and maps back to R.  The Garsia map is multiplicative only up to
    lower shapes, so the leftover has strictly smaller leading shape and the rounds end."""
    cx = basis.complex
    if f.domain != basis.domain:
        f = f.with_domain(basis.domain)
    coeffs: dict[int, Polynomial] = {}
    cache: dict[int, list] = {}
    monos = dict(zip(basis.faces, basis.orbit_monomials("R")))
    remainder = f
    for _ in range(max_rounds):
        if not remainder.terms:
            break
        dec = goebel_decompose(group, remainder, complex_=cx)
        for beta, Fb in dec.coefficients.items():
            for a, c, exps in cache.setdefault(beta, _face_expansion(basis, beta)):
                term = Fb * _s_monomial(exps, c, basis.domain)
                coeffs[a] = coeffs[a] + term if a in coeffs else term
        coeffs = {a: v for a, v in coeffs.items() if v}
        total = Polynomial(cx.n, {}, basis.domain)
        for a, v in coeffs.items():
            total = total + substitute_sigma(v) * monos[a]
        remainder = f - total
    if remainder.terms:
        raise SystemUnsolvable("representation did not converge")
    return coeffs


# Minimal generator counts and the Cohen-Macaulay report.

def _monomials_of_degree(n: int, d: int) -> list[tuple[int, ...]]:
    out = []
    for cuts in itertools.combinations(range(d + n - 1), n - 1):
        prev = -1
        exps = []
        for c in cuts:
            exps.append(c - prev - 1)
            prev = c
        exps.append(d + n - 2 - prev)
        out.append(tuple(exps))
    return out


def _orbit_reps(group: PermutationGroup, d: int) -> tuple[list[frozenset], dict]:
    n = group.degree
    rep_index: dict = {}
    orbits = []
    for m in _monomials_of_degree(n, d):
        if m in rep_index:
            continue
        orb = orbit(group, m)
        for u in orb:
            rep_index[u] = len(orbits)
        orbits.append(orb)
    return orbits, rep_index


def minimal_generator_count(group: PermutationGroup, p: int | None,
                            shuffle_seed: int | None = None) -> tuple[int, int]:
    """(count, expected) where count = sum over d of dim (R^G)_d / (sum_i sigma_i (R^G)_{d-i})
    over F_p (over Q when p is None), for d up to n(n-1)/2, and expected = n!/|G|."""
    if p is not None and not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    n = group.degree
    expected = math.factorial(n) // group.order
    top = n * (n - 1) // 2
    rng = random.Random(shuffle_seed) if shuffle_seed is not None else None
    by_degree = [_orbit_reps(group, d) for d in range(top + 1)]
    subsets = [[s for s in itertools.combinations(range(n), i)] for i in range(n + 1)]
    count = 0
    for d in range(top + 1):
        orbits, _ = by_degree[d]
        reps = [min(o) for o in orbits]
        rep_pos = {r: k for k, r in enumerate(reps)}
        vectors = []
        for i in range(1, min(n, d) + 1):
            for orb in by_degree[d - i][0]:
                vec: dict[int, int] = {}
                for u in orb:
                    for s in subsets[i]:
                        prod = list(u)
                        for j in s:
                            prod[j] += 1
                        k = rep_pos.get(tuple(prod))
                        if k is not None:
                            vec[k] = vec.get(k, 0) + 1
                vectors.append(vec)
        if rng:
            rng.shuffle(vectors)
            perm = list(range(len(reps)))
            rng.shuffle(perm)
            vectors = [{perm[k]: v for k, v in vec.items()} for vec in vectors]
        rank = _sparse_rank(vectors, None) if p is None else _rank_mod_p(vectors, len(reps), p)
        count += len(reps) - rank
    return count, expected


def _rank_mod_p(vectors: Sequence[dict[int, int]], ncols: int, p: int, block: int = 512) -> int:
    """Rank over F_p, reducing blocks of rows against a reduced echelon basis at once.

    Entries stay in [0, p), so a dot product of two rows is below ncols * p^2 and is exact
    in float64 (float32 when small enough), which lets the products run through BLAS.
    """
    if not vectors or not ncols:
        return 0
    dtype = np.float32 if ncols * (p - 1) ** 2 < 2**24 else np.float64
    if ncols * (p - 1) ** 2 >= 2**53:
        return _sparse_rank(vectors, p)
    echelon = np.zeros((0, ncols), dtype=dtype)
    pivots: list[int] = []
    for start in range(0, len(vectors), block):
        chunk = vectors[start:start + block]
        B = np.zeros((len(chunk), ncols), dtype=dtype)
        for r, vec in enumerate(chunk):
            for k, v in vec.items():
                B[r, k] = v % p
        if pivots:
            B = np.mod(B - B[:, pivots] @ echelon, p)
        new_rows, new_pivots = _rref_mod_p(B, p)
        if new_pivots:
            if pivots:
                echelon = np.mod(echelon - echelon[:, new_pivots] @ new_rows, p)
            echelon = np.vstack([echelon, new_rows])
            pivots += new_pivots
            if len(pivots) == ncols:
                break
    return len(pivots)


def _rref_mod_p(B: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced echelon form of a small block over F_p: (nonzero rows, pivot columns)."""
    B = B.copy()
    pivots = []
    row = 0
    while row < B.shape[0]:
        nz = np.nonzero(B[row:])
        if not len(nz[0]):
            break
        # leftmost nonzero column among the remaining rows
        c = int(nz[1].min())
        r = row + int(nz[0][nz[1] == c][0])
        if r != row:
            B[[row, r]] = B[[r, row]]
        B[row] = np.mod(B[row] * pow(int(B[row, c]), -1, p), p)
        col = B[:, c].copy()
        col[row] = 0
        hits = np.nonzero(col)[0]
        if len(hits):
            B[hits] = np.mod(B[hits] - np.outer(col[hits], B[row]), p)
        pivots.append(c)
        row += 1
    return B[:row], pivots


def _sparse_rank(vectors: Iterable[dict[int, int]], p: int | None) -> int:
    pivots: dict[int, dict] = {}
    for vec in vectors:
        v = {k: (c % p if p else Fraction(c)) for k, c in vec.items()}
        v = {k: c for k, c in v.items() if c}
        while v:
            lead = min(v)
            if lead not in pivots:
                inv = pow(v[lead], -1, p) if p else 1 / v[lead]
                pivots[lead] = {k: (c * inv % p if p else c * inv) for k, c in v.items()}
                break
            row = pivots[lead]
            f = v[lead]
            for k, c in row.items():
                nv = v.get(k, 0) - f * c
                if p:
                    nv %= p
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
    return len(pivots)


@dataclass
class CMReport:
    group: str
    degree: int
    order: int
    grr_generators: list[str]
    grr_index: int
    primes: list[int]
    prediction: bool
    algebraic: dict[int, dict]
    topological: bool | None = None
    topological_witness: tuple | None = None

    @property
    def algebraic_cm(self) -> bool:
        return all(v["cm"] for v in self.algebraic.values())

    @property
    def agree(self) -> bool:
        ok = self.algebraic_cm == self.prediction
        if self.topological is not None:
            ok = ok and self.topological == self.prediction
        return ok

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "degree": self.degree,
            "order": self.order,
            "grr_generators": self.grr_generators,
            "grr_index": self.grr_index,
            "primes": self.primes,
            "prediction": "CM" if self.prediction else "not CM",
            "algebraic": {str(p): v for p, v in self.algebraic.items()},
            "topological": self.topological,
            "agree": self.agree,
        }


def cm_report(group: PermutationGroup, primes: Sequence[int] | None = None,
              topological: bool = False) -> CMReport:
    """Compare the prediction (CM exactly when G equals its rr-subgroup) with generator
    counts at the primes dividing the index, and optionally with link homology over Z."""
    grr, index = rr_subgroup(group)
    if primes is None:
        primes = prime_factors(index)
    algebraic = {}
    for p in primes:
        count, expected = minimal_generator_count(group, p)
        algebraic[p] = {"expected": expected, "count": count, "cm": count == expected}
    report = CMReport(
        group=format_group(group),
        degree=group.degree,
        order=group.order,
        grr_generators=[str(g) for g in grr.generators],
        grr_index=index,
        primes=list(primes),
        prediction=index == 1,
        algebraic=algebraic,
    )
    if topological and group.degree >= 2:
        result = is_cm_complex(build_quotient_complex(group), "z")
        report.topological = result.is_cm
        report.topological_witness = result.witness
    return report
