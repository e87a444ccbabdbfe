import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cxgkit.errors import DuplicateNameError, UnknownCategoryError, UnknownNameError
from cxgkit.grammar import CategorialNetwork, ConditionalUnit, Construction, Grammar
from tests.conftest import make_dog_cxn


def named(name, score=0.5):
    cxn = make_dog_cxn()
    cxn.name = name
    cxn.set_score(score)
    return cxn


def test_add_dog_to_demo_gives_seven(demo_grammar):
    assert demo_grammar.size() == 6
    demo_grammar.add_cxn(make_dog_cxn())
    assert demo_grammar.size() == 7
    assert demo_grammar.find_cxn("dog-cxn").name == "dog-cxn"


def test_add_to_empty_and_duplicate():
    g = Grammar()
    g.add_cxn(named("a"))
    assert g.size() == 1
    with pytest.raises(DuplicateNameError):
        g.add_cxn(named("a"))
    g.add_cxn(named("a", 0.9), replace=True)
    assert g.find_cxn("a").score == 0.9


def test_delete():
    g = Grammar()
    g.add_cxn(named("a"))
    g.delete_cxn("a")
    assert g.size() == 0 and "a" not in g
    with pytest.raises(UnknownNameError):
        g.delete_cxn("a")


def test_delete_then_readd_is_independent():
    g = Grammar()
    old = named("a", 0.9)
    g.add_cxn(old)
    g.delete_cxn(old)
    g.add_cxn(named("a"))
    assert g.size() == 1 and g.find_cxn("a").score == 0.5


def test_insertion_order_and_search_order():
    g = Grammar()
    for name, score in [("b", 0.5), ("a", 0.5), ("c", 0.9)]:
        g.add_cxn(named(name, score))
    assert list(g.cxns) == ["b", "a", "c"]
    assert [c.name for c in g.ordered()] == ["c", "a", "b"]


def test_score_updates():
    c = named("a")
    c.increase_score(0.1)
    assert c.get_score() == 0.6
    c.set_score(0.1)
    c.decrease_score(0.2)
    assert c.get_score() == 0.0
    c.set_score(0.95)
    c.increase_score(0.1)
    assert c.get_score() == 1.0
    with pytest.raises(ValueError):
        c.increase_score(-0.1)


def test_initial_score_default():
    assert make_dog_cxn().score == 0.5


def test_conditional_unit_hash_placement():
    with pytest.raises(ValueError):
        Construction("bad", [], [("?u", {"#form": [("sequence", '"x"', "?l", "?r")]}, {})])
    cu = make_dog_cxn().conditional_pole[0]
    assert isinstance(cu, ConditionalUnit)
    assert "#meaning" in cu.formulation_lock and "#form" in cu.comprehension_lock


def test_construction_needs_a_conditional_unit():
    with pytest.raises(ValueError):
        Construction("empty", [], [])


def test_categorial_network():
    net = CategorialNetwork()
    net.add_category("dog-cxn")
    net.add_category("np-cxn-n")
    net.add_category("resultative-cxn")
    net.add_link("dog-cxn", "np-cxn-n")
    assert net.linked("dog-cxn", "np-cxn-n") and net.linked("np-cxn-n", "dog-cxn")
    assert net.linked("dog-cxn", "dog-cxn")
    assert not net.linked("dog-cxn", "resultative-cxn")
    with pytest.raises(UnknownCategoryError):
        net.add_link("dog-cxn", "nope")


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 1), st.lists(st.tuples(st.booleans(), st.floats(0, 1)), max_size=30))
def test_score_stays_in_unit_interval(start, updates):
    c = named("a", start)
    for up, delta in updates:
        (c.increase_score if up else c.decrease_score)(delta)
        assert 0.0 <= c.get_score() <= 1.0


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from("abcdef"), unique=True, max_size=6), st.sampled_from("xyz"))
def test_add_then_delete_restores(names, extra):
    g = Grammar()
    for n in names:
        g.add_cxn(named(n))
    before = list(g.cxns)
    g.add_cxn(named(extra))
    g.delete_cxn(extra)
    assert list(g.cxns) == before and g.size() == len(before)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.sampled_from("abcd"), st.sampled_from("abcd")), max_size=6),
       st.sampled_from("abcd"), st.sampled_from("abcd"))
def test_linked_symmetric(links, a, b):
    net = CategorialNetwork()
    for c in "abcd":
        net.add_category(c)
    for x, y in links:
        net.add_link(x, y)
    assert net.linked(a, b) == net.linked(b, a)
