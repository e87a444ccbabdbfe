import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cxgkit.amr import (
    PredicateNetwork, canonicalize_whitespace, format_predicates, parse_predicates,
    penman_to_predicate_network, predicate_network_to_penman, pretty_penman, topic_network,
)
from cxgkit.errors import (
    CycleError, DisconnectedNetworkError, MultipleRootsError, PenmanParseError,
    UndeclaredVariableError,
)
from cxgkit.fs import predicate
from tests.conftest import CHILD_PENMAN, CHILD_PRETTY, DOG_AMR

CONCEPTS = ["dog", "cut-01", "child", "cause-01", "person", "fire", "free-04", "apple"]
ROLES = [f"arg{i}{suffix}" for i in range(4) for suffix in ("", "-of")]


def net(*preds):
    return PredicateNetwork(predicate(p) for p in preds)


def test_single_node():
    assert penman_to_predicate_network("(d / dog)") == net(("dog", "d"))
    assert predicate_network_to_penman(net(("dog", "d"))) == "(d / dog)"


def test_dog_amr_translation():
    # hand translation, node by node
    want = net(("cut-01", "c"), ("person", "p"), ("fight-01", "f"), ("fire", "f2"),
               ("cause-01", "c2"), ("free-04", "f3"), ("dog", "d"),
               ("arg0", "c", "p"), ("arg0-of", "p", "f"), ("arg1", "f", "f2"),
               ("arg0-of", "c", "c2"), ("arg1", "c2", "f3"), ("arg1", "f3", "d"))
    got = penman_to_predicate_network(DOG_AMR)
    assert got == want
    assert len(got.concepts()) == 7 and len(got.roles()) == 6


def test_child_roundtrip_and_pretty():
    n = penman_to_predicate_network(CHILD_PRETTY)
    assert predicate_network_to_penman(n) == CHILD_PENMAN
    assert predicate_network_to_penman(n, pretty=True) == CHILD_PRETTY
    assert pretty_penman(CHILD_PENMAN) == CHILD_PRETTY
    assert canonicalize_whitespace(CHILD_PRETTY) == CHILD_PENMAN


def test_variable_names_from_concepts():
    n = net(("cut-01", "x1"), ("child", "x2"), ("cause-01", "x3"),
            ("arg0", "x1", "x2"), ("arg1", "x1", "x3"))
    assert predicate_network_to_penman(n) == "(c / cut-01 :arg0 (c2 / child) :arg1 (c3 / cause-01))"


def test_child_order_args_then_other_then_inverse():
    n = net(("a", "r"), ("b", "x"), ("c", "y"), ("d", "z"), ("e", "w"),
            ("arg1-of", "r", "x"), ("manner", "r", "y"), ("arg2", "r", "z"), ("arg0", "r", "w"))
    assert predicate_network_to_penman(n) == \
        "(a / a :arg0 (e / e) :arg2 (d / d) :manner (c / c) :arg1-of (b / b))"


def test_parse_errors():
    with pytest.raises(PenmanParseError) as info:
        penman_to_predicate_network("(d / dog")
    assert info.value.position is not None
    with pytest.raises(PenmanParseError):
        penman_to_predicate_network("(d dog)")
    with pytest.raises(UndeclaredVariableError):
        penman_to_predicate_network("(d / dog :arg0 x)")


def test_reentrancy_parses_and_serializes():
    n = penman_to_predicate_network("(w / want-01 :arg0 (b / boy) :arg1 (g / go-02 :arg0 b))")
    assert len(n.roles()) == 3
    assert predicate_network_to_penman(n) == \
        "(w / want-01 :arg0 (b / boy) :arg1 (g / go-02 :arg0 b))"


def test_shape_errors():
    with pytest.raises(MultipleRootsError):
        predicate_network_to_penman(net(("dog", "d"), ("cat", "c")))
    with pytest.raises(CycleError):
        predicate_network_to_penman(net(("a", "x"), ("b", "y"), ("arg0", "x", "y"), ("arg0", "y", "x")))
    with pytest.raises(DisconnectedNetworkError):
        predicate_network_to_penman(net(("a", "x"), ("b", "y"), ("c", "z"),
                                        ("arg0", "x", "y"), ("arg0", "z", "z")))


def test_predicates_text_roundtrip():
    n = penman_to_predicate_network(CHILD_PENMAN)
    assert parse_predicates(format_predicates(n)) == n


def test_topic_network():
    assert [repr(p) for p in topic_network("obj-3")] == ["(obj-3 ?x)"]


def test_equivalent_up_to_renaming():
    a = penman_to_predicate_network("(d / dog :arg0 (c / cat))")
    b = penman_to_predicate_network("(x / dog :arg0 (y / cat))")
    assert a != b and a.equivalent(b)


# --- properties ----------------------------------------------------------------

@st.composite
def trees(draw, max_nodes=8):
    n = draw(st.integers(1, max_nodes))
    preds = []
    names = [f"n{i}" for i in range(n)]
    for name in names:
        preds.append((draw(st.sampled_from(CONCEPTS)), name))
    for i in range(1, n):
        parent = names[draw(st.integers(0, i - 1))]
        preds.append((draw(st.sampled_from(ROLES)), parent, names[i]))
    order = draw(st.permutations(range(len(preds))))
    return net(*(preds[i] for i in order))


def as_graph(network):
    g = nx.DiGraph()
    for p in network.concepts():
        g.add_node(p.args[0], concept=p.name)
    for p in network.roles():
        g.add_edge(*p.args, role=p.name)
    return g


def isomorphic(a, b):
    return nx.is_isomorphic(as_graph(a), as_graph(b),
                            node_match=lambda x, y: x["concept"] == y["concept"],
                            edge_match=lambda x, y: x["role"] == y["role"])


@settings(max_examples=1000, deadline=None)
@given(trees())
def test_network_roundtrip_up_to_renaming(n):
    back = penman_to_predicate_network(predicate_network_to_penman(n))
    assert isomorphic(n, back)


@settings(max_examples=100, deadline=None)
@given(trees())
def test_canonical_string_roundtrip(n):
    p = predicate_network_to_penman(n)
    assert predicate_network_to_penman(penman_to_predicate_network(p)) == p
    assert canonicalize_whitespace(pretty_penman(p)) == p


@settings(max_examples=200, deadline=None)
@given(trees())
def test_variable_names_injective(n):
    tokens = predicate_network_to_penman(n).replace("(", " ").split()
    declared = [tokens[i - 1] for i, t in enumerate(tokens) if t == "/"]
    assert len(declared) == len(set(declared)) == len(n.concepts())
