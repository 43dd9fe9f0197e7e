import os
import random
from functools import lru_cache

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from permcm.permgrp import (
    Permutation,
    PermutationGroup,
    alternating_group,
    parse_cycles,
    subgroup_classes,
    symmetric_group,
    trivial_group,
)
from permcm.qcomplex import build_quotient_complex

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=500,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SLOW = bool(os.environ.get("PERMCM_SLOW"))
slow = pytest.mark.skipif(not SLOW, reason="set PERMCM_SLOW=1 to run")


@lru_cache(maxsize=None)
def classes(n):
    return tuple(subgroup_classes(n))


@lru_cache(maxsize=None)
def qcomplex_of(spec, n):
    return build_quotient_complex(parse_cycles(spec, n))


@pytest.fixture(scope="session")
def D4():
    return parse_cycles("(1,2,3,4)(1,3)", 4)


@pytest.fixture(scope="session")
def C4():
    return parse_cycles("(1,2,3,4)", 4)


@pytest.fixture(scope="session")
def A3():
    return alternating_group(3)


@pytest.fixture(scope="session")
def D4_complex():
    return qcomplex_of("(1,2,3,4)(1,3)", 4)


@pytest.fixture(scope="session")
def C4_complex():
    return qcomplex_of("(1,2,3,4)", 4)


def small_groups():
    """All class representatives of S_2..S_4 plus a few named groups."""
    out = [G for n in (2, 3, 4) for G in classes(n)]
    out += [symmetric_group(3), trivial_group(3), alternating_group(4)]
    return out


def permutations(n):
    return st.permutations(range(1, n + 1)).map(Permutation)


@st.composite
def monomials(draw, n, max_exp=4):
    return tuple(draw(st.lists(st.integers(0, max_exp), min_size=n, max_size=n)))


def random_group(rng: random.Random, n: int, gens: int = 2):
    """Subgroup generated by a few random permutations."""
    perms = []
    for _ in range(gens):
        img = list(range(1, n + 1))
        rng.shuffle(img)
        perms.append(Permutation(img))
    return PermutationGroup(n, perms)


# One summary line per acceptance criterion, after the normal report.

_criteria: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.skipped:
        return
    number, title = mark.args
    entry = _criteria.setdefault(number, [title, True, 0])
    if report.when == "call":
        entry[2] += 1
    if report.failed:
        entry[1] = False


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok, checks = _criteria[number]
        terminalreporter.write_line(
            f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title} ({checks} checks)")
