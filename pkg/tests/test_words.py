import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmtl.defgraph import DefGraph
from qmtl.groups import VertexGroupSpec
from qmtl.words import GraphProduct, WordError, down_sets, linear_extensions

PATH3 = GraphProduct(DefGraph.build("abc", [("a", "b"), ("b", "c")]), [VertexGroupSpec.integers()] * 3)
RACG = GraphProduct(
    DefGraph.build("abcd", [("a", "b"), ("b", "c"), ("c", "d")]), [VertexGroupSpec.cyclic(2)] * 4
)
MIXED = GraphProduct(
    DefGraph.build("stu", [("s", "t")]),
    [VertexGroupSpec.cyclic(3), VertexGroupSpec.cyclic(2), VertexGroupSpec.integers()],
)
PRODUCTS = [PATH3, RACG, MIXED]


def letters(gp):
    def payload(v):
        spec = gp.specs[v]
        if spec.kind == "integers":
            return st.integers(-3, 3)
        return st.sampled_from(spec.elements())

    return st.integers(0, len(gp.graph) - 1).flatmap(lambda v: payload(v).map(lambda p: (v, p)))


def words(gp, max_size=8):
    return st.lists(letters(gp), max_size=max_size).map(gp.reduce)


@pytest.mark.parametrize("gp", PRODUCTS, ids=["raag", "racg", "mixed"])
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_group_laws(gp, data):
    x, y, z = (data.draw(words(gp)) for _ in range(3))
    assert gp.mul(gp.mul(x, y), z) == gp.mul(x, gp.mul(y, z))
    assert gp.mul(x, gp.inv(x)) == gp.identity
    assert gp.mul(gp.identity, x) == x
    assert gp.inv(gp.mul(x, y)) == gp.mul(gp.inv(y), gp.inv(x))


@settings(max_examples=100, deadline=None)
@given(words(PATH3, 10))
def test_normal_form_is_stable(x):
    # re-reducing a normal form, or its text, changes nothing
    assert PATH3.reduce(x.syllables) == x
    assert PATH3.parse(PATH3.format(x)) == x


@settings(max_examples=100, deadline=None)
@given(words(RACG, 8))
def test_normal_form_has_no_reducible_pair(x):
    syl = x.syllables
    for i, j in itertools.combinations(range(len(syl)), 2):
        if syl[i].vertex == syl[j].vertex:
            between = syl[i + 1 : j]
            # two equal-vertex syllables must be blocked by a non-commuting one
            assert any(RACG.dependent(syl[i].vertex, s.vertex) for s in between)


def test_shuffle_and_cancel():
    assert PATH3.parse("a b a^-1") == PATH3.parse("b")
    assert PATH3.parse("a c a^-1") != PATH3.parse("c")
    assert RACG.parse("a a") == RACG.identity
    assert RACG.parse("a d a") != RACG.parse("d")
    assert RACG.parse("b a b") == RACG.parse("a")
    assert MIXED.parse("s t s") == MIXED.parse("s^2 t")


def test_power_and_generator():
    a = PATH3.generator("a")
    assert PATH3.power(a, 5) == PATH3.parse("a^5")
    assert PATH3.power(a, -2) == PATH3.parse("a^-2")
    assert PATH3.power(PATH3.parse("a c"), 0) == PATH3.identity
    assert MIXED.power(MIXED.generator("s"), 3) == MIXED.identity


def test_concatenated_tokens():
    assert RACG.parse("ad") == RACG.parse("a d")
    assert PATH3.parse("ab^2") == PATH3.parse("a b^2")


@pytest.mark.parametrize("text", ["x", "a^q", "a:b"])
def test_parse_errors(text):
    with pytest.raises((WordError, ValueError)):
        PATH3.parse(text)


def test_cyclic_reduce_conjugates_back():
    for text in ["a b c a^-1", "a b a^-1", "b a c b^-1", "a^2 c a^-1"]:
        g = PATH3.parse(text)
        h, c = PATH3.cyclic_reduce(g)
        assert PATH3.mul_many(c, h, PATH3.inv(c)) == g
        assert h.syllable_length <= g.syllable_length


@settings(max_examples=80, deadline=None)
@given(words(PATH3, 6))
def test_cyclic_reduction_is_idempotent(g):
    h, c = PATH3.cyclic_reduce(g)
    assert PATH3.mul_many(c, h, PATH3.inv(c)) == g
    assert PATH3.cyclic_reduce(h) == (h, PATH3.identity)


@settings(max_examples=60, deadline=None)
@given(words(RACG, 6))
def test_downsets_are_prefixes(x):
    p = RACG.poset(x)
    prefixes = {RACG.sub_element(x, m) for m in down_sets(p)}
    # every down-set spells a prefix x = prefix * rest with lengths adding up
    for w in prefixes:
        rest = RACG.mul(RACG.inv(w), x)
        assert w.syllable_length + rest.syllable_length == x.syllable_length


@settings(max_examples=60, deadline=None)
@given(words(PATH3, 5))
def test_linear_extensions_spell_the_element(x):
    p = PATH3.poset(x)
    exts = list(linear_extensions(p))
    assert exts
    for order in exts:
        assert PATH3.reduce([x.syllables[i] for i in order]) == x
        for a, b in p.relations():
            assert order.index(a) < order.index(b)
