"""Shared fixtures.

Heavy analyses (TOBL membership, wiring scans, the claims report) are cached
inside the library by value, so fixtures here simply name the canonical
objects; the first test to touch a heavy result pays for it once per
session.
"""

import itertools

import pytest

from nsbox import Behavior, Bipartition, Scenario, TRIPARTITE_BINARY, table1
from nsbox.rational import Q


@pytest.fixture(scope="session")
def box():
    return table1()


@pytest.fixture(scope="session")
def cut_a_bc():
    return Bipartition(0, (1, 2))


def make_pr_embedding() -> Behavior:
    """PR box between parties 0 and 1, party 2 uniform and uncorrelated."""
    half, zero = Q(1, 2), Q(0)
    table = {}
    for x, y, z in itertools.product((0, 1), repeat=3):
        for a, b, c in itertools.product((0, 1), repeat=3):
            pr = half if (a ^ b) == (x & y) else zero
            table[((a, b, c), (x, y, z))] = pr * half
    return Behavior.from_cells(TRIPARTITE_BINARY, table)


def make_pr_box() -> Behavior:
    half, zero = Q(1, 2), Q(0)
    table = {}
    for x, y in itertools.product((0, 1), repeat=2):
        for a, b in itertools.product((0, 1), repeat=2):
            table[((a, b), (x, y))] = half if (a ^ b) == (x & y) else zero
    return Behavior.from_cells(Scenario(2, 2, 2), table)


@pytest.fixture(scope="session")
def pr_embedding():
    return make_pr_embedding()


@pytest.fixture(scope="session")
def pr_box():
    return make_pr_box()
