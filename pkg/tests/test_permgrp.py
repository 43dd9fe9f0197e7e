import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import classes, permutations, random_group
from permcm.errors import CapExceeded, NotApplicable, NotASubgroup, ParseError, PointOutOfRange
from permcm.permgrp import (
    Permutation,
    PermutationGroup,
    alternating_group,
    are_conjugate,
    cycle_structure,
    double_cosets,
    elements,
    format_group,
    huffman_classify,
    lex_transversal,
    orbit_of,
    parse_cycles,
    prime_factors,
    rr_subgroup,
    symmetric_group,
    trivial_group,
)
from permcm.polyring import _permute_exps


def cyc(text, n):
    return Permutation.from_cycles([tuple(int(c) for c in part.split(","))
                                    for part in text.strip("()").split(")(")], n)


class TestPermutation:
    def test_right_action(self):
        p, q = cyc("(1,2)", 3), cyc("(2,3)", 3)
        # p first, then q: 1 -> 2 -> 3
        assert (p * q)(1) == 3
        assert (q * p)(1) == 2

    def test_identity_and_inverse(self):
        p = cyc("(1,3,4)", 5)
        assert (p * p.inverse()).is_identity()
        assert Permutation.identity(5).images == (1, 2, 3, 4, 5)
        assert p ** 3 == Permutation.identity(5)
        assert p ** -1 == p.inverse()

    def test_bad_images_rejected(self):
        with pytest.raises(ValueError):
            Permutation([1, 1, 2])

    def test_str(self):
        assert str(cyc("(1,2)(3,4)", 4)) == "(1,2)(3,4)"
        assert str(Permutation.identity(3)) == "()"

    @given(permutations(5), permutations(5), permutations(5))
    def test_associative(self, a, b, c):
        assert (a * b) * c == a * (b * c)


class TestElements:
    def test_small_groups(self):
        assert elements(parse_cycles("(1,2)", 2)) == {Permutation([1, 2]), Permutation([2, 1])}
        assert parse_cycles("(1,2,3,4)", 4).order == 4
        assert parse_cycles("(1,2,3,4)(1,3)", 4).order == 8

    def test_cap(self):
        with pytest.raises(CapExceeded):
            symmetric_group(5).__class__(5, symmetric_group(5).generators, cap=100).order

    def test_lagrange(self):
        for G in classes(4):
            assert math.factorial(4) % G.order == 0

    def test_closed(self):
        G = parse_cycles("(1,2,3,4)(1,3)", 4)
        els = elements(G)
        assert all(a * b in els for a in els for b in els)
        assert all(a.inverse() in els for a in els)


class TestOrbits:
    def test_point_orbit(self):
        G = parse_cycles("(1,2,3)", 3)
        assert orbit_of(G, 1, lambda g, x: g(x)) == {1, 2, 3}

    def test_set_orbit(self):
        G = parse_cycles("(1,2)(3,4)", 4)
        act = lambda g, s: frozenset(g(x) for x in s)  # noqa: E731
        assert orbit_of(G, frozenset({1, 3}), act) == {frozenset({1, 3}), frozenset({2, 4})}

    def test_monomial_orbit(self):
        G = parse_cycles("(1,2,3,4)", 4)
        orb = orbit_of(G, (1, 1, 0, 0), lambda g, m: _permute_exps(m, g.img))
        assert orb == {(1, 1, 0, 0), (0, 1, 1, 0), (0, 0, 1, 1), (1, 0, 0, 1)}

    def test_orbit_size_divides_order(self):
        rng = random.Random(4)
        for _ in range(20):
            G = random_group(rng, 5)
            m = tuple(rng.randrange(3) for _ in range(5))
            orb = orbit_of(G, m, lambda g, x: _permute_exps(x, g.img))
            assert G.order % len(orb) == 0


class TestCycleStructure:
    @pytest.mark.parametrize("text,expected", [
        ("(1,2)", ((2, 1),)),
        ("(1,2)(3,4)", ((2, 2),)),
        ("(1,2,3,4)", ((4, 1),)),
    ])
    def test_examples(self, text, expected):
        assert cycle_structure(cyc(text, 4)) == expected

    def test_identity(self):
        assert cycle_structure(Permutation.identity(4)) == ()

    @given(st.integers(1, 7).flatmap(lambda n: st.tuples(permutations(n), permutations(n))))
    def test_conjugation_invariant(self, pair):
        g, p = pair
        assert cycle_structure(g * p * g.inverse()) == cycle_structure(p)


class TestRR:
    def test_examples(self):
        S4 = symmetric_group(4)
        assert rr_subgroup(S4) == (S4, 1)
        sub, index = rr_subgroup(parse_cycles("(1,2,3,4)", 4))
        assert index == 2 and sub == parse_cycles("(1,3)(2,4)", 4)
        sub, index = rr_subgroup(parse_cycles("(1,2,3,4,5)", 5))
        assert index == 5 and sub.order == 1

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_normal(self, n):
        for G in classes(n):
            sub, index = rr_subgroup(G)
            assert index * sub.order == G.order
            for g in G.generators:
                for h in sub.generators:
                    assert g * h * g.inverse() in sub


class TestTransversal:
    def test_whole_group(self):
        reps, _ = lex_transversal(symmetric_group(3))
        assert reps == [Permutation.identity(3)]

    def test_trivial(self):
        reps, _ = lex_transversal(trivial_group(3))
        assert reps == sorted(elements(symmetric_group(3)))

    def test_A3(self):
        reps, _ = lex_transversal(alternating_group(3))
        assert reps == [Permutation.identity(3), cyc("(2,3)", 3)]

    def test_reps_are_lex_least(self):
        G = parse_cycles("(1,2,3,4)(1,3)", 4)
        reps, rep_of = lex_transversal(G)
        for t, r in rep_of.items():
            coset = {g * t for g in elements(G)}
            assert r == min(coset)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_counting(self, n):
        for G in classes(n):
            assert G.order * len(lex_transversal(G)[0]) == math.factorial(n)

    def test_counting_six(self):
        rng = random.Random(6)
        for _ in range(5):
            G = random_group(rng, 6)
            if G.order >= 60:
                assert G.order * len(lex_transversal(G)[0]) == 720

    def test_not_a_subgroup(self):
        with pytest.raises(NotASubgroup):
            lex_transversal(symmetric_group(3), alternating_group(3))


def brute_double_cosets(left, right):
    """Oracle: group S_n into sets G b Y directly."""
    seen, blocks = set(), []
    for b in sorted(elements(symmetric_group(left.degree))):
        if b in seen:
            continue
        dc = {g * b * y for g in elements(left) for y in elements(right)}
        seen |= dc
        blocks.append(dc)
    return blocks


class TestDoubleCosets:
    def test_examples(self):
        S4 = symmetric_group(4)
        D4 = parse_cycles("(1,2,3,4)(1,3)", 4)
        assert [len(b) for b in double_cosets(D4, S4)] == [3]
        Y = parse_cycles("(1,2)", 4)
        blocks = double_cosets(trivial_group(4), Y)
        assert len(blocks) == 12 and all(len(b) == 2 for b in blocks)

    @pytest.mark.parametrize("right", ["(1,2)", "(2,3)", "(1,2),(3,4)", "(1,2),(2,3)"])
    def test_against_brute_force(self, right):
        Y = parse_cycles(right, 4)
        for G in classes(4):
            blocks = double_cosets(G, Y)
            reps = lex_transversal(G)[0]
            flat = [r for b in blocks for r in b]
            assert sorted(flat) == reps
            oracle = brute_double_cosets(G, Y)
            assert len(blocks) == len(oracle)
            for b in blocks:
                dc = next(d for d in oracle if b[0] in d)
                assert len(dc) == len(b) * G.order
                assert all(r in dc for r in b)


class TestHuffman:
    def test_examples(self):
        assert huffman_classify(symmetric_group(4)) == "S_n"
        assert huffman_classify(alternating_group(5)) == "A_n"
        assert huffman_classify(parse_cycles("(1,2,3,4,5)(2,5)(3,4)", 5)) == "D10@5"

    def test_wreath(self):
        W = parse_cycles("(1,2),(1,3)(2,4)", 4)
        assert W.order == 8
        assert huffman_classify(W) == "Wreath(S_2≀S_m)"

    def test_not_applicable(self):
        with pytest.raises(NotApplicable):
            huffman_classify(parse_cycles("(1,2)", 4))
        with pytest.raises(NotApplicable):
            huffman_classify(parse_cycles("(1,2,3,4)", 4))


class TestParse:
    def test_dihedral(self):
        G = parse_cycles("(1,2,3,4)(1,3)", 4)
        assert G.order == 8 and len(G.generators) == 2

    def test_empty_is_trivial(self):
        assert parse_cycles("", 3).order == 1

    def test_d10(self):
        G = parse_cycles("(1,2,3,4,5)(2,5)(3,4)", 5)
        assert G.order == 10

    def test_separators(self):
        a = parse_cycles("(1 2 3 4),(1 3)", 4)
        b = parse_cycles("(1,2,3,4); (1,3)", 4)
        assert a == b == parse_cycles("(1,2,3,4)(1,3)", 4)

    def test_disjoint_cycles_form_one_generator(self):
        G = parse_cycles("(1,2)(3,4)", 4)
        assert G.order == 2

    @pytest.mark.parametrize("text", ["(1,2", "(1,a)", "x", "(1,1)"])
    def test_errors(self, text):
        with pytest.raises(ParseError):
            parse_cycles(text, 3)

    def test_point_range(self):
        with pytest.raises(PointOutOfRange):
            parse_cycles("(1,5)", 4)

    @given(st.integers(2, 6).flatmap(
        lambda n: st.tuples(st.just(n), st.lists(permutations(n), min_size=1, max_size=3))))
    def test_round_trip(self, data):
        n, perms = data
        G = PermutationGroup(n, perms)
        again = parse_cycles(format_group(G), n)
        assert again == G
        assert format_group(again) == format_group(G)


def test_subgroup_class_counts():
    assert [len(classes(n)) for n in range(1, 6)] == [1, 2, 4, 11, 19]


def test_classes_pairwise_non_conjugate():
    reps = classes(4)
    for i, a in enumerate(reps):
        for b in reps[i + 1:]:
            assert not are_conjugate(a, b)


def test_prime_factors():
    assert prime_factors(12) == [2, 3]
    assert prime_factors(1) == []
