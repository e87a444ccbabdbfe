"""Constructions, the categorial network and the construction inventory."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional

from .errors import DuplicateNameError, UnknownCategoryError, UnknownNameError
from .fs import Term, Unit, feature_value, term, unit, variables

INITIAL_SCORE = 0.5

DEFAULT_CONFIG = {
    "max_depth": 32,
    "max_solutions": 16,
    "max_nodes": 2000,
}

# scores are rounded after each update so repeated +0.1/-0.2 steps stay exact
_SCORE_DIGITS = 12


def _clamp(x: float) -> float:
    return round(min(1.0, max(0.0, x)), _SCORE_DIGITS)


class Direction(enum.Enum):
    COMPREHENSION = "comprehension"
    FORMULATION = "formulation"

    @property
    def hash_feature(self) -> str:
        """The hash feature matched against the root in this direction."""
        return "#form" if self is Direction.COMPREHENSION else "#meaning"

    @property
    def root_feature(self) -> str:
        return "form" if self is Direction.COMPREHENSION else "meaning"


@dataclass(frozen=True)
class ConditionalUnit:
    name: Term
    formulation_lock: Mapping = field(default_factory=dict)
    comprehension_lock: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if "#form" in self.formulation_lock:
            raise ValueError("#form belongs in the comprehension lock")
        if "#meaning" in self.comprehension_lock:
            raise ValueError("#meaning belongs in the formulation lock")

    def lock(self, direction: Direction) -> Mapping:
        if direction is Direction.COMPREHENSION:
            return self.comprehension_lock
        return self.formulation_lock

    def other_lock(self, direction: Direction) -> Mapping:
        if direction is Direction.COMPREHENSION:
            return self.formulation_lock
        return self.comprehension_lock


def conditional_unit(name, formulation_lock: Mapping, comprehension_lock: Mapping) -> ConditionalUnit:
    def lock(m):
        return {str(k).lower(): feature_value(str(k).lower(), v) for k, v in m.items()}

    return ConditionalUnit(term(name), lock(formulation_lock), lock(comprehension_lock))


class Construction:
    """A named, scored pairing of a conditional and a contributing pole.

    Poles may be given in the compact tuple notation::

        Construction(
            name='dog-cxn',
            contributing_pole=[('?dog-unit', {'referent': '?d', 'category': 'dog-cxn',
                                              'boundaries': ('?left', '?right')})],
            conditional_pole=[('?dog-unit', {'#meaning': [('dog', '?d')]},
                               {'#form': [('sequence', '"dog"', '?left', '?right')]})])
    """

    def __init__(self, name: str, contributing_pole=(), conditional_pole=(),
                 score: float = INITIAL_SCORE, attributes: Optional[Mapping] = None):
        if not conditional_pole:
            raise ValueError(f"{name}: a construction needs at least one conditional unit")
        self.name = str(name).lower()
        self.contributing_pole = tuple(
            u if isinstance(u, Unit) else unit(*u) for u in contributing_pole)
        self.conditional_pole = tuple(
            u if isinstance(u, ConditionalUnit) else conditional_unit(*u) for u in conditional_pole)
        self._score = _clamp(float(score))
        self.attributes = {str(k).lower(): term(v) for k, v in (attributes or {}).items()}
        # unknown OFEF record fields, carried through load/save untouched
        self.extra: dict = {}
        self._variables = None

    # -- scores ------------------------------------------------------------

    def get_score(self) -> float:
        return self._score

    @property
    def score(self) -> float:
        return self._score

    def set_score(self, value: float) -> None:
        self._score = _clamp(float(value))

    def increase_score(self, delta: float) -> None:
        if delta < 0:
            raise ValueError("delta must be non-negative")
        self._score = _clamp(self._score + delta)

    def decrease_score(self, delta: float) -> None:
        if delta < 0:
            raise ValueError("delta must be non-negative")
        self._score = _clamp(self._score - delta)

    # -- helpers -----------------------------------------------------------

    def variables(self) -> list:
        if self._variables is None:
            acc: dict = {}
            for u in self.contributing_pole:
                variables(u, acc)
            for cu in self.conditional_pole:
                variables(cu.name, acc)
                for lock in (cu.formulation_lock, cu.comprehension_lock):
                    for v in lock.values():
                        variables(v, acc)
            self._variables = list(acc.values())
        return self._variables

    def __eq__(self, other):
        if not isinstance(other, Construction):
            return NotImplemented
        return (self.name == other.name
                and self.contributing_pole == other.contributing_pole
                and self.conditional_pole == other.conditional_pole
                and self._score == other._score
                and self.attributes == other.attributes)

    __hash__ = object.__hash__

    def __repr__(self):
        return f"<Construction: {self.name} (score: {self._score})>"


class CategorialNetwork:
    """Categories and undirected links between them.

    Matching only consults direct links; :meth:`connected` answers the
    transitive question for callers who need it.
    """

    def __init__(self):
        self.categories: dict = {}
        self.links: dict = {}

    def add_category(self, category: str) -> None:
        self.categories.setdefault(str(category).lower(), None)

    def add_link(self, a: str, b: str) -> None:
        a, b = str(a).lower(), str(b).lower()
        for c in (a, b):
            if c not in self.categories:
                raise UnknownCategoryError(f"unknown category: {c}")
        self.links.setdefault(frozenset((a, b)), (a, b))

    def linked(self, a: str, b: str) -> bool:
        a, b = a.lower(), b.lower()
        return a == b or frozenset((a, b)) in self.links

    def neighbours(self, c: str) -> list:
        c = c.lower()
        out = []
        for pair in self.links:
            if c in pair:
                other = [x for x in pair if x != c]
                out.append(other[0] if other else c)
        return out

    def connected(self, a: str, b: str) -> bool:
        a, b = a.lower(), b.lower()
        seen, todo = {a}, [a]
        while todo:
            c = todo.pop()
            if c == b:
                return True
            for n in self.neighbours(c):
                if n not in seen:
                    seen.add(n)
                    todo.append(n)
        return False

    def __eq__(self, other):
        if not isinstance(other, CategorialNetwork):
            return NotImplemented
        return list(self.categories) == list(other.categories) and set(self.links) == set(other.links)


class Grammar:
    """Ordered construction inventory plus categorial network and search config."""

    def __init__(self, config: Optional[Mapping] = None):
        self.cxns: dict = {}
        self.categorial_network = CategorialNetwork()
        self.config = {**DEFAULT_CONFIG, **(config or {})}
        self.name: Optional[str] = None
        # unknown top-level OFEF fields
        self.extra: dict = {}

    def size(self) -> int:
        return len(self.cxns)

    def __len__(self):
        return len(self.cxns)

    def __iter__(self) -> Iterator[Construction]:
        return iter(list(self.cxns.values()))

    def __contains__(self, name):
        if isinstance(name, Construction):
            name = name.name
        return str(name).lower() in self.cxns

    def add_cxn(self, cxn: Construction, replace: bool = False) -> None:
        if cxn.name in self.cxns and not replace:
            raise DuplicateNameError(f"construction already present: {cxn.name}")
        self.cxns[cxn.name] = cxn

    def delete_cxn(self, cxn) -> None:
        name = cxn.name if isinstance(cxn, Construction) else str(cxn).lower()
        try:
            del self.cxns[name]
        except KeyError:
            raise UnknownNameError(f"no construction named {name}") from None

    def find_cxn(self, name: str) -> Construction:
        try:
            return self.cxns[str(name).lower()]
        except KeyError:
            raise UnknownNameError(f"no construction named {name}") from None

    def add_category(self, category: str) -> None:
        self.categorial_network.add_category(category)

    def add_link(self, a: str, b: str) -> None:
        self.categorial_network.add_link(a, b)

    def ordered(self) -> list:
        """Constructions in search order: score descending, then name."""
        return sorted(self.cxns.values(), key=lambda c: (-c.score, c.name))

    def __repr__(self):
        return f"<Grammar: {self.size()} cxns>"
