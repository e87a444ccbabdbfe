"""The Agent: an identity that owns exactly one grammar."""

from __future__ import annotations

import itertools
import threading
from collections import defaultdict
from typing import Optional

from . import engine, ofef
from .amr import PredicateNetwork, penman_to_predicate_network, topic_network
from .errors import MissingAppliedCxnError
from .grammar import INITIAL_SCORE, Construction, Grammar

_id_counters = defaultdict(lambda: itertools.count(1))
_id_lock = threading.Lock()


def _make_id(name: str) -> str:
    base = name.lower().replace(" ", "-")
    with _id_lock:
        return f"{base}-{next(_id_counters[base])}"


def reset_agent_ids() -> None:
    with _id_lock:
        _id_counters.clear()


def naming_cxn(name: str, form: str, meaning: str, score: float = INITIAL_SCORE) -> Construction:
    """Single-unit construction pairing a word form with an object symbol."""
    return Construction(
        name=name,
        contributing_pole=[("?word-unit", {"referent": "?x", "boundaries": ("?left", "?right")})],
        conditional_pole=[("?word-unit",
                           {"#meaning": [(meaning, "?x")]},
                           {"#form": [("sequence", f'"{form}"', "?left", "?right")]})],
        score=score)


class Agent:
    """A language user with its own, initially empty, grammar.

    Ids are ``<name>-<n>`` with a separate counter per name, so the first
    agent called Sue is ``sue-1`` and the first anonymous one ``agent-1``.
    """

    reward_delta = 0.1
    inhibit_delta = 0.2

    def __init__(self, name: Optional[str] = None):
        self.name = name or "agent"
        self.id = _make_id(self.name)
        self.grammar = Grammar()
        self.solutions: list = []
        self.reset_interaction_state()

    def reset_interaction_state(self) -> None:
        self.utterance = None
        self.topic = None
        self.applied_cxn: Optional[Construction] = None
        self.competitor_cxns: list = []
        self.communicated_successfully = False
        self.discourse_role = None

    def __repr__(self):
        return f"<Agent: {self.name} (id: {self.id}) ~ {self.grammar.size()} cxns>"

    # -- grammar management ------------------------------------------------

    def add_cxn(self, cxn: Construction, replace: bool = False) -> None:
        self.grammar.add_cxn(cxn, replace=replace)

    def delete_cxn(self, cxn) -> None:
        self.grammar.delete_cxn(cxn)

    def add_category(self, category: str) -> None:
        self.grammar.add_category(category)

    def add_link(self, a: str, b: str) -> None:
        self.grammar.add_link(a, b)

    def load_grammar_from_file(self, path) -> None:
        self.grammar = ofef.load_grammar_from_file(path)

    def save_grammar_to_file(self, path) -> None:
        ofef.save_grammar_to_file(self.grammar, path)

    def save_grammar_image(self, path) -> None:
        ofef.save_grammar_image(self.grammar, path)

    def load_grammar_image(self, path) -> None:
        self.grammar = ofef.load_grammar_image(path)

    # -- processing --------------------------------------------------------

    def _record(self, best, competitors) -> None:
        self.solutions = ([best] if best else []) + list(competitors)
        if best is None:
            self.applied_cxn = None
            self.competitor_cxns = []
            return
        used = best.cxn_names
        self.applied_cxn = self.grammar.cxns.get(used[0]) if used else None
        seen = set(used)
        comps = []
        for sol in competitors:
            for name in sol.cxn_names:
                if name not in seen and name in self.grammar.cxns:
                    seen.add(name)
                    comps.append(self.grammar.cxns[name])
        self.competitor_cxns = comps

    def comprehend(self, utterance: str, observer=None):
        """Comprehend ``utterance``; returns the meaning network or None."""
        best, competitors = engine.search(engine.de_render(utterance), self.grammar,
                                          engine.Direction.COMPREHENSION, observer=observer)
        self._record(best, competitors)
        return best.output if best else None

    def formulate(self, meaning, observer=None):
        """Formulate a network, Penman string or bare object symbol."""
        if isinstance(meaning, str):
            meaning = (penman_to_predicate_network(meaning) if meaning.lstrip().startswith("(")
                       else topic_network(meaning))
        elif not isinstance(meaning, PredicateNetwork):
            meaning = PredicateNetwork(meaning)
        best, competitors = engine.search(engine.initial_structure(meaning=meaning.predicates),
                                          self.grammar, engine.Direction.FORMULATION,
                                          observer=observer)
        self._record(best, competitors)
        return best.output if best else None

    # -- learning and alignment -------------------------------------------

    def learn(self, form: str, meaning: str) -> str:
        """Add a naming construction for ``form`` -> ``meaning``; returns its name."""
        if not form:
            raise ValueError("cannot learn an empty form")
        base = f"{form}-cxn"
        name, n = base, 1
        while name in self.grammar:
            n += 1
            name = f"{base}-{n}"
        self.grammar.add_cxn(naming_cxn(name, form, meaning))
        return name

    def reward(self) -> None:
        if self.communicated_successfully:
            if self.applied_cxn is None:
                raise MissingAppliedCxnError(f"{self.id}: success flagged but no applied construction")
            self.applied_cxn.increase_score(self.reward_delta)
            for cxn in self.competitor_cxns:
                cxn.decrease_score(self.inhibit_delta)
                if cxn.get_score() <= 0.0 and cxn.name in self.grammar:
                    self.delete_cxn(cxn)
        elif self.discourse_role == "speaker" and self.applied_cxn is not None:
            self.applied_cxn.decrease_score(self.inhibit_delta)
            if self.applied_cxn.get_score() <= 0.0 and self.applied_cxn.name in self.grammar:
                self.delete_cxn(self.applied_cxn)
