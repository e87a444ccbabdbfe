import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cxgkit import Agent, load_resource
from cxgkit.agent import naming_cxn, reset_agent_ids
from cxgkit.errors import MissingAppliedCxnError
from tests.conftest import CHILD_PENMAN, DOG_AMR, make_dog_cxn


def test_new_agent():
    sue = Agent(name="Sue")
    assert sue.id == "sue-1"
    assert repr(sue) == "<Agent: Sue (id: sue-1) ~ 0 cxns>"
    assert sue.grammar.size() == 0


def test_anonymous_ids():
    assert [Agent().id, Agent().id] == ["agent-1", "agent-2"]


def test_grammars_not_shared():
    a, b = Agent(), Agent()
    assert a.grammar is not b.grammar
    a.learn("bagofu", "obj-1")
    assert b.grammar.size() == 0


def test_walkthrough():
    sue = Agent(name="Sue")
    sue.load_grammar_from_file(load_resource("demo-resultative.json"))
    assert repr(sue) == "<Agent: Sue (id: sue-1) ~ 6 cxns>"
    from cxgkit import predicate_network_to_penman

    assert predicate_network_to_penman(sue.comprehend("Firefighters cut the child free.")) == CHILD_PENMAN
    sue.add_cxn(make_dog_cxn())
    sue.add_category("dog-cxn")
    sue.add_link("dog-cxn", "np-cxn-n")
    assert repr(sue) == "<Agent: Sue (id: sue-1) ~ 7 cxns>"
    assert sue.formulate(DOG_AMR) == "Firefighters cut the dog free."


def test_hearer_without_cxn():
    h = Agent()
    assert h.comprehend("bagofu") is None
    assert h.applied_cxn is None


def test_single_cxn_formulation():
    a = Agent()
    a.learn("bagofu", "obj-3")
    assert a.formulate("obj-3") == "bagofu"
    assert a.applied_cxn.name == "bagofu-cxn" and a.competitor_cxns == []


def test_synonyms_rank_by_score():
    a = Agent()
    a.add_cxn(naming_cxn("bagofu-cxn", "bagofu", "obj-1", 0.6))
    a.add_cxn(naming_cxn("wemido-cxn", "wemido", "obj-1", 0.4))
    assert a.formulate("obj-1") == "bagofu"
    assert [c.name for c in a.competitor_cxns] == ["wemido-cxn"]


def test_learn_names_and_collisions():
    a = Agent()
    assert a.learn("bagofu", "obj-3") == "bagofu-cxn"
    assert a.learn("bagofu", "obj-4") == "bagofu-cxn-2"
    assert a.grammar.size() == 2
    assert a.grammar.find_cxn("bagofu-cxn").score == 0.5
    with pytest.raises(ValueError):
        a.learn("", "obj-1")


def _success_setup(applied_score, competitor_score):
    a = Agent()
    a.add_cxn(naming_cxn("bagofu-cxn", "bagofu", "obj-1", applied_score))
    a.add_cxn(naming_cxn("wemido-cxn", "wemido", "obj-1", competitor_score))
    a.add_cxn(naming_cxn("other-cxn", "other", "obj-2", 0.5))
    a.formulate("obj-1")
    return a


def test_reward_success_inhibits_and_deletes():
    a = _success_setup(0.5, 0.1)
    a.communicated_successfully = True
    a.reward()
    assert a.grammar.find_cxn("bagofu-cxn").get_score() == 0.6
    assert "wemido-cxn" not in a.grammar
    assert a.grammar.find_cxn("other-cxn").get_score() == 0.5


def test_reward_success_competitor_survives():
    a = _success_setup(0.5, 0.4)
    a.communicated_successfully = True
    a.reward()
    assert a.grammar.find_cxn("wemido-cxn").get_score() == 0.2


def test_reward_speaker_failure_deletes():
    a = Agent()
    a.add_cxn(naming_cxn("bagofu-cxn", "bagofu", "obj-1", 0.2))
    a.formulate("obj-1")
    a.discourse_role = "speaker"
    a.reward()
    assert a.grammar.size() == 0


def test_reward_speaker_failure_decrements():
    a = Agent()
    a.add_cxn(naming_cxn("bagofu-cxn", "bagofu", "obj-1", 0.5))
    a.formulate("obj-1")
    a.discourse_role = "speaker"
    a.reward()
    assert a.grammar.find_cxn("bagofu-cxn").get_score() == 0.3


def test_reward_hearer_failure_changes_nothing():
    a = _success_setup(0.5, 0.1)
    a.discourse_role = "hearer"
    before = {c.name: c.score for c in a.grammar}
    a.reward()
    assert {c.name: c.score for c in a.grammar} == before


def test_reward_requires_applied_cxn():
    a = Agent()
    a.communicated_successfully = True
    with pytest.raises(MissingAppliedCxnError):
        a.reward()


def test_reward_clamps_at_one():
    a = _success_setup(0.95, 0.5)
    a.communicated_successfully = True
    a.reward()
    assert a.grammar.find_cxn("bagofu-cxn").get_score() == 1.0


def test_reset_interaction_state():
    a = _success_setup(0.5, 0.5)
    a.communicated_successfully = True
    a.discourse_role = "speaker"
    a.reset_interaction_state()
    assert (a.applied_cxn, a.competitor_cxns, a.communicated_successfully, a.discourse_role) == \
        (None, [], False, None)


def test_image_save_load(tmp_path):
    a = Agent()
    a.learn("bagofu", "obj-1")
    a.save_grammar_image(tmp_path / "a.ofgi")
    b = Agent()
    b.load_grammar_image(tmp_path / "a.ofgi")
    assert b.formulate("obj-1") == "bagofu"


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0.05, 1.0), min_size=1, max_size=5), st.floats(0.05, 1.0), st.booleans())
def test_inhibition_is_lateral_only(synonym_scores, other_score, success):
    a = Agent()
    top = max(synonym_scores) + 0.001
    a.add_cxn(naming_cxn("top-cxn", "top", "obj-1", min(top, 1.0)))
    for i, s in enumerate(synonym_scores):
        a.add_cxn(naming_cxn(f"s{i}-cxn", f"s{i}", "obj-1", s))
    a.add_cxn(naming_cxn("other-cxn", "other", "obj-2", other_score))
    a.formulate("obj-1")
    applied = a.applied_cxn
    before = {c.name: c.score for c in a.grammar}
    a.communicated_successfully = success
    a.discourse_role = "hearer"
    a.reward()
    assert a.grammar.find_cxn("other-cxn").score == before["other-cxn"]
    if success:
        assert applied.score > before[applied.name] or before[applied.name] == 1.0
        for c in a.competitor_cxns:
            if c.name in a.grammar:
                assert c.score < before[c.name]


def test_ids_strictly_increasing():
    reset_agent_ids()
    ids = [int(Agent().id.rsplit("-", 1)[1]) for _ in range(20)]
    assert ids == sorted(ids) and len(set(ids)) == 20
