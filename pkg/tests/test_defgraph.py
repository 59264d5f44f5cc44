from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmtl.defgraph import (
    DefGraph,
    DefGraphError,
    clique_number,
    crossing_connected,
    has_induced_c4,
    hyperbolicity_profile,
    is_connected,
)

PATH4 = DefGraph.build("abcd", [("a", "b"), ("b", "c"), ("c", "d")])
PATH3 = DefGraph.build("abc", [("a", "b"), ("b", "c")])
C4 = DefGraph.build("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
C4_CHORD = DefGraph.build("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"), ("a", "c")])
TWO = DefGraph.build("uv", [])
ONE = DefGraph.build("a", [])


def test_clique_number():
    assert clique_number(PATH4) == 2
    assert clique_number(TWO) == 1
    assert clique_number(C4) == 2
    assert clique_number(C4_CHORD) == 3
    k5 = DefGraph.build("abcde", [(x, y) for x in "abcde" for y in "abcde" if x < y])
    assert clique_number(k5) == 5


def test_induced_c4():
    assert has_induced_c4(C4)
    assert not has_induced_c4(PATH4)
    assert not has_induced_c4(C4_CHORD)


def test_crossing_connected():
    assert crossing_connected(PATH3)
    assert not crossing_connected(TWO)
    assert crossing_connected(ONE)


def test_profile_path3():
    p = hyperbolicity_profile(PATH3)
    assert p.delta_crossing == Fraction(9, 2)
    assert p.delta_contact == 3
    assert p.qm_delta == 10
    assert p.denom_bound_gp == 3**80
    assert p.denom_bound_hyperbolic == 3 ** (8 * 10)


def test_profile_c4_not_hyperbolic():
    p = hyperbolicity_profile(C4)
    assert p.qm_delta is None
    assert p.denom_bound_hyperbolic is None


def test_profile_single_vertex():
    assert hyperbolicity_profile(ONE).delta_crossing == Fraction(7, 2)


@pytest.mark.parametrize(
    "vertices, edges",
    [("ab", [("a", "a")]), ("ab", [("a", "z")]), ("aa", [])],
)
def test_invalid_graphs(vertices, edges):
    with pytest.raises(DefGraphError):
        DefGraph.build(vertices, edges)


@st.composite
def graphs(draw):
    n = draw(st.integers(1, 7))
    names = [chr(ord("a") + i) for i in range(n)]
    pairs = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n)]
    edges = [p for p in pairs if draw(st.booleans())]
    return DefGraph.build(names, edges)


def brute_clique(g):
    n = len(g)
    best = 0
    for mask in range(1 << n):
        vs = [i for i in range(n) if mask >> i & 1]
        if all(g.adjacent(i, j) for i in vs for j in vs if i < j):
            best = max(best, len(vs))
    return best


def components(g):
    n = len(g)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for i in range(n):
        for j in g.neighbours(i):
            parent[find(i)] = find(j)
    return len({find(i) for i in range(n)})


@settings(max_examples=150, deadline=None)
@given(graphs())
def test_profile_properties(g):
    p = hyperbolicity_profile(g)
    n = len(g)
    assert p.delta_crossing == 3 + Fraction(n, 2)
    assert p.clique_number == brute_clique(g)
    assert p.denom_bound_gp == n ** (40 * p.clique_number)
    assert (p.qm_delta is None) == has_induced_c4(g)
    assert crossing_connected(g) == (components(g) == 1) == is_connected(g)
