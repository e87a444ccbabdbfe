import pytest

from cxgkit import Construction, load_demo_grammar
from cxgkit.agent import reset_agent_ids
from cxgkit.engine import reset_name_counter

CHILD_PENMAN = ("(c / cut-01 :arg0 (p / person :arg0-of (f / fight-01 :arg1 (f2 / fire))) "
                ":arg0-of (c2 / cause-01 :arg1 (f3 / free-04 :arg1 (c3 / child))))")

CHILD_PRETTY = """(c / cut-01
      :arg0 (p / person
           :arg0-of (f / fight-01
                :arg1 (f2 / fire)))
      :arg0-of (c2 / cause-01
           :arg1 (f3 / free-04
                :arg1 (c3 / child))))"""

DOG_AMR = """(c / cut-01
             :arg0 (p / person
                 :arg0-of (f / fight-01
                     :arg1 (f2 / fire)))
             :arg0-of (c2 / cause-01
                 :arg1 (f3 / free-04
                     :arg1 (d / dog))))"""


def make_dog_cxn():
    return Construction(
        name="dog-cxn",
        contributing_pole=[("?dog-unit", {"referent": "?d", "category": "dog-cxn",
                                          "boundaries": ("?left", "?right")})],
        conditional_pole=[("?dog-unit",
                           {"#meaning": [("dog", "?d")]},
                           {"#form": [("sequence", '"dog"', "?left", "?right")]})])


@pytest.fixture(autouse=True)
def _fresh_counters():
    reset_agent_ids()
    reset_name_counter()
    yield


@pytest.fixture
def demo_grammar():
    return load_demo_grammar()


@pytest.fixture
def dog_grammar():
    g = load_demo_grammar()
    g.add_cxn(make_dog_cxn())
    g.add_category("dog-cxn")
    g.add_link("dog-cxn", "np-cxn-n")
    return g
