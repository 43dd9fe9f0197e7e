import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import classes, monomials, permutations
from permcm.errors import (
    DegreeMismatch,
    IndexOutOfRange,
    LengthMismatch,
    NonIntegerCoefficientInZMode,
    NotPrime,
    NotSymmetric,
    ParseError,
)
from permcm.permgrp import Permutation, parse_cycles, symmetric_group
from permcm.polyring import (
    Domain,
    Polynomial,
    Q,
    Z,
    act,
    deglex_compare,
    elementary_symmetric,
    ftsp_represent,
    is_invariant,
    is_special,
    leading_shape,
    orbit_monomial,
    parse_polynomial,
    shape,
    shape_layer,
    sigma_power_product,
    special_decompose,
    stacks_up,
    substitute_sigma,
)

F2 = Domain("fp", 2)


def P(text, n, domain=Z):
    return parse_polynomial(text, n, domain)


def perm(cycles, n):
    return Permutation.from_cycles(cycles, n)


class TestDomain:
    def test_parse(self):
        assert Domain.parse("z") == Z
        assert Domain.parse("Q") == Q
        assert Domain.parse("fp:7") == Domain("fp", 7)

    def test_bad(self):
        with pytest.raises(NotPrime):
            Domain.parse("fp:9")
        with pytest.raises(ParseError):
            Domain.parse("r")

    def test_coercion(self):
        assert Domain("fp", 5)(-1) == 4
        assert Domain("fp", 5)(Fraction(1, 2)) == 3
        assert Q(3) == Fraction(3)
        assert Z.is_unit(-1) and not Z.is_unit(2)
        assert Domain("fp", 7).inverse(3) == 5


class TestArithmetic:
    def test_ring_ops(self):
        f = P("x1 + x2", 2)
        assert f * f == P("x1^2 + 2*x1*x2 + x2^2", 2)
        assert f - f == Polynomial(2)
        assert (f ** 0) == Polynomial.constant(2, 1)

    def test_no_zero_terms(self):
        f = P("2*x1 + 2*x2", 2, F2)
        assert f.is_zero() and f.terms == {}

    def test_big_integers(self):
        f = P("x1", 1) * (2 ** 100)
        assert f.coefficient((1,)) == 2 ** 100

    def test_rational(self):
        f = P("x1/2 + x1/2", 1, Q)
        assert f == P("x1", 1, Q)

    def test_display_order(self):
        assert str(P("x2 + x1^2 + x1*x2 + 3", 2)) == "x1^2 + x1*x2 + x2 + 3"

    def test_nvars_checked(self):
        with pytest.raises(DegreeMismatch):
            P("x1", 2) + P("x1", 3)


class TestAct:
    def test_examples(self):
        assert act(perm([(1, 2)], 2), P("x1^2*x2", 2)) == P("x1*x2^2", 2)
        f = P("x1 + 2*x2", 3)
        assert act(Permutation.identity(3), f) == f
        assert act(perm([(1, 2, 3)], 3), f) == P("x2 + 2*x3", 3)

    def test_degree_mismatch(self):
        with pytest.raises(DegreeMismatch):
            act(Permutation.identity(3), P("x1", 2))

    @given(permutations(3), permutations(3))
    def test_automorphism(self, g, h):
        f, k = P("x1^2*x2 - x3", 3), P("x1 + 5*x2*x3", 3)
        assert act(g, f * k) == act(g, f) * act(g, k)
        assert act(g, f + k) == act(g, f) + act(g, k)
        # right action: g first, then h
        assert act(g * h, f) == act(h, act(g, f))


class TestShape:
    def test_examples(self):
        assert shape((3, 4, 1)) == (4, 3, 1)
        assert shape((0, 0, 0)) == (0, 0, 0)
        assert shape((0, 2, 0)) == (2, 0, 0)

    def test_deglex(self):
        assert deglex_compare((2, 1, 0), (1, 1, 1)) == 1
        assert deglex_compare((3, 0), (2, 2)) == -1
        assert deglex_compare((2, 1), (2, 1)) == 0
        with pytest.raises(LengthMismatch):
            deglex_compare((1,), (1, 0))

    def test_stacks_up(self):
        assert stacks_up((2, 3, 1), (1, 2, 0))
        assert not stacks_up((2, 3, 1), (2, 1, 0))
        assert stacks_up((2, 3, 1), (0, 0, 0))

    def test_leading_shape_and_layer(self):
        f = P("x1*x2 + x3^2 + x1", 3)
        assert leading_shape(f) == (2, 0, 0)
        assert shape_layer(f, (1, 1, 0)) == P("x1*x2", 3)
        assert leading_shape(Polynomial(3)) is None


@st.composite
def monomial_pairs(draw):
    n = draw(st.integers(1, 5))
    return draw(monomials(n, 3)), draw(monomials(n, 3))


@given(monomial_pairs())
def test_shape_additivity(pair):
    m, m2 = pair
    prod = tuple(a + b for a, b in zip(m, m2))
    added = tuple(a + b for a, b in zip(shape(m), shape(m2)))
    assert stacks_up(m, m2) == (shape(prod) == added)
    if not stacks_up(m, m2):
        assert deglex_compare(shape(prod), added) == -1


def test_shape_additivity_exhaustive_small():
    for m in itertools.product(range(3), repeat=3):
        for m2 in itertools.product(range(3), repeat=3):
            prod = tuple(a + b for a, b in zip(m, m2))
            added = tuple(a + b for a, b in zip(shape(m), shape(m2)))
            assert stacks_up(m, m2) == (shape(prod) == added)


@given(st.integers(2, 4).flatmap(lambda n: st.tuples(monomials(n, 3), monomials(n, 3))),
       st.randoms(use_true_random=False))
def test_filtration(pair, rnd):
    lam, mu = shape(pair[0]), shape(pair[1])
    n = len(lam)
    # random elements of R_lam and R_mu: combinations of permutations of lam and mu
    f = Polynomial(n, {m: rnd.randint(-3, 3) for m in set(itertools.permutations(lam))})
    g = Polynomial(n, {m: rnd.randint(-3, 3) for m in set(itertools.permutations(mu))})
    bound = tuple(a + b for a, b in zip(lam, mu))
    for m in (f * g).terms:
        assert deglex_compare(shape(m), bound) <= 0


class TestOrbitMonomial:
    def test_examples(self):
        C3 = parse_cycles("(1,2,3)", 3)
        assert orbit_monomial(C3, (2, 1, 0)) == P("x1^2*x2 + x2^2*x3 + x3^2*x1", 3)
        assert orbit_monomial(symmetric_group(4), (1, 0, 0, 0)) == elementary_symmetric(4, 1)
        D4 = parse_cycles("(1,2,3,4)(1,3)", 4)
        assert orbit_monomial(D4, (1, 0, 1, 0)) == P("x1*x3 + x2*x4", 4)

    def test_degree_mismatch(self):
        with pytest.raises(DegreeMismatch):
            orbit_monomial(symmetric_group(3), (1, 0))

    @given(st.sampled_from(classes(4)), monomials(4, 3))
    def test_invariant(self, G, m):
        f = orbit_monomial(G, m)
        assert is_invariant(f, G)
        assert all(act(g, f) == f for g in G.generators)


class TestElementarySymmetric:
    def test_examples(self):
        assert elementary_symmetric(3, 1) == P("x1 + x2 + x3", 3)
        assert elementary_symmetric(3, 3) == P("x1*x2*x3", 3)
        assert len(elementary_symmetric(4, 2).terms) == 6

    @pytest.mark.parametrize("i", [0, 4])
    def test_range(self, i):
        with pytest.raises(IndexOutOfRange):
            elementary_symmetric(3, i)

    def test_power_product(self):
        s1, s2 = elementary_symmetric(3, 1), elementary_symmetric(3, 2)
        assert sigma_power_product((2, 1, 0)) == s1 * s1 * s2


class TestSpecial:
    def test_examples(self):
        d = special_decompose((2, 1, 0))
        assert d.is_special and d.associated_special == (2, 1, 0) and d.sigma_exponents == (0, 0, 0)
        d = special_decompose((1, 1, 1))
        assert not d.is_special
        assert d.associated_special == (0, 0, 0) and d.sigma_exponents == (0, 0, 1)
        d = special_decompose((2, 0))
        assert not d.is_special
        assert d.associated_special == (1, 0) and d.sigma_exponents == (1, 0)

    @given(st.integers(1, 5).flatmap(lambda n: monomials(n, 4)))
    def test_reconstruction(self, m):
        n = len(m)
        d = special_decompose(m)
        assert is_special(d.associated_special)
        assert d.is_special == is_special(m)
        # shape identity: lam(m) = lam(m*) + sum f_i (1^i 0^(n-i))
        total = list(shape(d.associated_special))
        for i, f in enumerate(d.sigma_exponents, start=1):
            for j in range(i):
                total[j] += f
        assert tuple(total) == shape(m)
        # m* sorts the same way as m, so m is the product of m* with the
        # sigma leading terms on the same variables
        assert stacks_up(m, d.associated_special)
        prod = list(d.associated_special)
        for i, f in enumerate(d.sigma_exponents, start=1):
            top = sorted(range(n), key=lambda j: -m[j])[:i]
            for j in top:
                prod[j] += f
        assert tuple(prod) == m


class TestFTSP:
    def test_examples(self):
        f = ftsp_represent(P("x1^2 + x2^2 + x3^2", 3))
        assert f == Polynomial(3, {(2, 0, 0): 1, (0, 1, 0): -2})
        assert ftsp_represent(elementary_symmetric(4, 2)) == Polynomial(4, {(0, 1, 0, 0): 1})
        assert ftsp_represent(P("x1^2*x2^2", 2)) == Polynomial(2, {(0, 2): 1})

    def test_not_symmetric(self):
        with pytest.raises(NotSymmetric):
            ftsp_represent(P("x1", 2))

    @pytest.mark.parametrize("domain", [Z, F2], ids=["Z", "F2"])
    def test_round_trip(self, domain):
        rng = random.Random(11)
        for _ in range(200):
            n = rng.randint(1, 5)
            G = symmetric_group(n)
            f = Polynomial(n, {}, domain)
            for _ in range(rng.randint(1, 3)):
                m = [rng.randint(0, 3) for _ in range(n)]
                f = f + orbit_monomial(G, m, domain).scale(rng.randint(-4, 4))
            F = ftsp_represent(f)
            assert substitute_sigma(F) == f


class TestParser:
    def test_basic(self):
        f = P("x1^2*x2 + 3*x2*x3 - x4", 4)
        assert f.terms == {(2, 1, 0, 0): 1, (0, 1, 1, 0): 3, (0, 0, 0, 1): -1}

    def test_parens(self):
        assert P("(x1 + x2)^2", 2) == P("x1^2 + 2*x1*x2 + x2^2", 2)

    def test_z_mode_rejects_fractions(self):
        with pytest.raises(NonIntegerCoefficientInZMode):
            P("x1/2", 2)

    @pytest.mark.parametrize("text", ["x1 +", "x3", "y1", "x1^", "(x1", "x1 ** 2 $"])
    def test_errors(self, text):
        with pytest.raises(ParseError):
            P(text, 2)

    @given(st.integers(1, 4).flatmap(
        lambda n: st.dictionaries(monomials(n, 3), st.integers(-50, 50), max_size=6)
        .map(lambda d: Polynomial(n, d))))
    def test_round_trip(self, f):
        assert P(str(f), f.nvars) == f
