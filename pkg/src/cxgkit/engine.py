"""Construction application, search, rendering and the two processing directions.

A processing episode starts from a transient structure whose root unit
holds the ``form`` and ``meaning`` inventories.  Constructions are applied
depth-first; each application matches the direction's lock against the
structure, creates units for conditional units that only matched root
material, merges the contributing pole and the opposite lock, and claims
the matched root predicates so they cannot be consumed twice.
"""

from __future__ import annotations

import itertools
import re
import threading
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional

from .amr import PredicateNetwork
from .errors import EmptyUtteranceError, ResourceExhausted
from .fs import (Atom, Predicate, PredicateSet, Str, Unit, Var, is_sequence_pattern,
                 match_predicate_set, match_sequence, merge_unit, substitute, unify_terms,
                 unify_values, walk)
from .grammar import Construction, Direction, Grammar

__all__ = [
    "Direction", "TransientStructure", "SearchNode", "Solution", "TraceEvent",
    "de_render", "apply_cxn", "search", "goal_test", "render", "comprehend",
    "formulate", "register_observer", "unregister_observer", "reset_name_counter",
]

ROOT = Atom("root")

# ---------------------------------------------------------------------------
# fresh names

_counter = itertools.count(1)
_counter_lock = threading.Lock()


def _fresh() -> int:
    with _counter_lock:
        return next(_counter)


def reset_name_counter() -> None:
    """Restart fresh unit/variable numbering (for reproducible traces)."""
    global _counter
    with _counter_lock:
        _counter = itertools.count(1)


_SUFFIX = re.compile(r"-\d+$")


def _base(name) -> str:
    text = name.name[1:] if isinstance(name, Var) else str(name)
    return _SUFFIX.sub("", text) or "unit"


# ---------------------------------------------------------------------------
# tracing


@dataclass(frozen=True)
class TraceEvent:
    kind: str
    data: Mapping


_observers: list = []


def register_observer(fn: Callable[[TraceEvent], None]) -> None:
    if fn not in _observers:
        _observers.append(fn)


def unregister_observer(fn: Callable[[TraceEvent], None]) -> None:
    if fn in _observers:
        _observers.remove(fn)


def _emitter(observer):
    targets = list(_observers)
    if observer is not None:
        targets.append(observer)
    if not targets:
        return None

    def emit(kind, **data):
        ev = TraceEvent(kind, data)
        for t in targets:
            t(ev)

    return emit


# ---------------------------------------------------------------------------
# structures


@dataclass(frozen=True)
class TransientStructure:
    units: tuple
    root: Unit
    footprints: Mapping = field(default_factory=dict)
    unit_footprints: Mapping = field(default_factory=dict)
    provenance: Mapping = field(default_factory=dict)

    @property
    def form(self) -> PredicateSet:
        return self.root.features.get("form", PredicateSet())

    @property
    def meaning(self) -> PredicateSet:
        return self.root.features.get("meaning", PredicateSet())

    def claimed(self) -> set:
        out = set()
        for preds in self.footprints.values():
            out.update(preds)
        return out

    def claimed_spans(self) -> list:
        spans = []
        for p in self.claimed():
            if p.name == "sequence" and len(p.args) == 3:
                _, l, r = p.args
                if isinstance(l, int) and isinstance(r, int):
                    spans.append((l, r))
        return spans

    def unit(self, name) -> Unit:
        for u in self.units:
            if u.name == name:
                return u
        raise KeyError(name)


def initial_structure(form=(), meaning=()) -> TransientStructure:
    root = Unit(ROOT, {"form": PredicateSet(form), "meaning": PredicateSet(meaning)})
    return TransientStructure(units=(), root=root)


@dataclass(frozen=True)
class SearchNode:
    structure: TransientStructure
    applied: tuple = ()
    signature: frozenset = frozenset()
    id: int = 0
    parent: Optional[int] = None

    @property
    def depth(self) -> int:
        return len(self.applied)

    def applied_names(self) -> list:
        return [name for name, _ in self.applied]


@dataclass
class Solution:
    node: SearchNode
    output: object
    rank_key: tuple

    @property
    def cxn_names(self) -> list:
        return self.node.applied_names()

    def sort_key(self):
        mean, neg_depth, names = self.rank_key
        return (-mean, -neg_depth, names)


# ---------------------------------------------------------------------------
# de-rendering and rendering


def de_render(utterance: str) -> TransientStructure:
    if not utterance:
        raise EmptyUtteranceError("cannot de-render an empty utterance")
    return initial_structure(form=[Predicate("sequence", (Str(utterance), 0, len(utterance)))])


class RenderError(Exception):
    pass


def _render_blocks(form: Iterable[Predicate]) -> str:
    seqs = [p.args for p in form if is_sequence_pattern(p)]
    if not seqs:
        raise RenderError("no sequence predicates to render")
    ground = [(l, r) for _, l, r in seqs if isinstance(l, int) and isinstance(r, int)]
    for (l1, r1), (l2, r2) in itertools.combinations(ground, 2):
        if l1 < r2 and l2 < r1:
            raise RenderError(f"overlapping spans ({l1} {r1}) and ({l2} {r2})")
    succ = {}
    pred = {}
    for i, (_, _, r) in enumerate(seqs):
        for j, (_, l, _) in enumerate(seqs):
            if i != j and type(l) is type(r) and l == r:
                if i in succ or j in pred:
                    raise RenderError("a boundary is shared by more than two sequences")
                succ[i] = j
                pred[j] = i
    blocks = []
    seen = set()
    for i in range(len(seqs)):
        if i in pred:
            continue
        block = []
        while i is not None:
            seen.add(i)
            block.append(i)
            i = succ.get(i)
        blocks.append(block)
    if len(seen) != len(seqs):
        raise RenderError("cyclic boundary constraints")
    starts = [seqs[b[0]][1] for b in blocks]
    if all(isinstance(s, int) for s in starts):
        blocks.sort(key=lambda b: seqs[b[0]][1])
    else:
        blocks.sort(key=lambda b: b[0])
    return " ".join("".join(seqs[i][0].text for i in b) for b in blocks)


def render(node) -> Optional[str]:
    """Linearize the root form of a formulation node, or None when inconsistent.

    Sequences sharing a boundary variable are chained into blocks; blocks
    are ordered by ground offsets when every block has one, otherwise by
    the order in which their sequences were added, and joined by a space.
    """
    structure = node.structure if isinstance(node, SearchNode) else node
    try:
        return _render_blocks(structure.form)
    except RenderError:
        return None


# ---------------------------------------------------------------------------
# construction application


def _prefilter(cxn: Construction, direction: Direction, structure: TransientStructure,
               unclaimed_names: set, texts: list) -> bool:
    """Cheap necessary conditions checked before renaming and matching."""
    hashf = direction.hash_feature
    needs_unit = False
    for cu in cxn.conditional_pole:
        lock = cu.lock(direction)
        for p in lock.get(hashf, ()):
            if is_sequence_pattern(p):
                if not any(p.args[0].text in t for t in texts):
                    return False
            elif p.name not in unclaimed_names:
                return False
        if any(not k.startswith("#") for k in lock):
            needs_unit = True
    return not needs_unit or bool(structure.units)


def _rename(cxn: Construction):
    n = _fresh()
    mapping = {v.name: Var(f"{v.name}-{n}") for v in cxn.variables()}

    def lock(m):
        return {k: substitute(mapping, v) for k, v in m.items()}

    conds = [(cu, substitute(mapping, cu.name), lock(cu.formulation_lock), lock(cu.comprehension_lock))
             for cu in cxn.conditional_pole]
    contrib = [(u, substitute(mapping, u)) for u in cxn.contributing_pole]
    return conds, contrib


def _split(lock: Mapping, hashf: str):
    plain = [(k, v) for k, v in lock.items() if not k.startswith("#")]
    return plain, tuple(lock.get(hashf, ()))


def _match_hash(preds, bindings, inventory, unclaimed, spans, taken):
    """Match hash-feature predicates against root material; yields (bindings, claims)."""
    seqs = [p for p in preds if is_sequence_pattern(p)]
    others = [p for p in preds if not is_sequence_pattern(p)]
    partial = [(bindings, taken)]
    for p in seqs:
        nxt = []
        for b, cl in partial:
            claimed_spans = spans + [(c.args[1], c.args[2]) for c in cl if c.name == "sequence"]
            for b2 in match_sequence(p, inventory, b, claimed_spans):
                l, r = walk(p.args[1], b2), walk(p.args[2], b2)
                nxt.append((b2, cl + (Predicate("sequence", (p.args[0], l, r)),)))
        partial = nxt
    if not others:
        return partial
    out = []
    for b, cl in partial:
        avail = [q for q in unclaimed if q not in cl]
        for b2, matched in match_predicate_set(others, avail, b):
            out.append((b2, cl + matched))
    return out


def apply_cxn(cxn: Construction, node, direction: Direction, grammar: Grammar) -> list:
    """All ways ``cxn`` applies to ``node``; one new :class:`SearchNode` each."""
    if isinstance(node, TransientStructure):
        node = SearchNode(node)
    structure = node.structure
    hashf = direction.hash_feature
    inventory = list(structure.root.features.get(direction.root_feature, ()))
    claimed = structure.claimed()
    unclaimed = [p for p in inventory if p not in claimed]
    texts = [p.args[0].text for p in inventory if is_sequence_pattern(p)]
    if not _prefilter(cxn, direction, structure, {p.name for p in unclaimed}, texts):
        return []

    net = grammar.categorial_network
    conds, contrib = _rename(cxn)
    spans = structure.claimed_spans()
    blocked = {u.name for u in structure.units if cxn.name in structure.unit_footprints.get(u.name, ())}
    matches = []

    def step(i, b, assigned, claims):
        if i == len(conds):
            matches.append((b, assigned, claims))
            return
        _, name, flock, clock = conds[i]
        lock = clock if direction is Direction.COMPREHENSION else flock
        plain, hashp = _split(lock, hashf)
        if plain:
            for u in structure.units:
                if u.name in assigned or u.name in blocked:
                    continue
                b2 = unify_terms(name, u.name, b)
                for feat, value in plain:
                    if b2 is None:
                        break
                    have = u.features.get(feat)
                    b2 = None if have is None else unify_values(value, have, b2, net)
                if b2 is None:
                    continue
                for b3, cl in _match_hash(hashp, b2, inventory, unclaimed, spans, claims):
                    step(i + 1, b3, assigned + (u.name,), cl)
        else:
            for b3, cl in _match_hash(hashp, b, inventory, unclaimed, spans, claims):
                step(i + 1, b3, assigned + (None,), cl)

    step(0, {}, (), ())

    results = []
    for b, assigned, claims in matches:
        child = _instantiate(cxn, direction, structure, conds, contrib, b, assigned, claims, net)
        if child is None:
            continue
        new_structure, app_key, bindings = child
        results.append(SearchNode(
            structure=new_structure,
            applied=node.applied + ((cxn.name, bindings),),
            signature=node.signature | {app_key},
            parent=node.id,
        ))
    return results


def _instantiate(cxn, direction, structure, conds, contrib, b, assigned, claims, net):
    units = {u.name: u for u in structure.units}
    provenance = dict(structure.provenance)
    app_key = (cxn.name, frozenset(claims),
               tuple(provenance.get(a, a) for a in assigned if a is not None))
    created = []

    for (orig, name, _, _), a in zip(conds, assigned):
        if a is not None:
            continue
        fresh = Atom(f"{_base(orig.name)}-{_fresh()}")
        b = unify_terms(name, fresh, b)
        if b is None:
            return None
        units[fresh] = Unit(fresh, {})
        provenance[fresh] = (app_key, len(created))
        created.append(fresh)

    other_hash = "#meaning" if direction is Direction.COMPREHENSION else "#form"
    added = []
    for _, name, flock, clock in conds:
        other = flock if direction is Direction.COMPREHENSION else clock
        plain = {k: v for k, v in other.items() if not k.startswith("#")}
        added.extend(other.get(other_hash, ()))
        if plain:
            target = walk(name, b)
            merged = merge_unit(Unit(name, plain), units[target], b, net)
            if merged is None:
                return None
            units[target], b = merged

    for orig, u in contrib:
        target = walk(u.name, b)
        if isinstance(target, Var):
            fresh = Atom(f"{_base(orig.name)}-{_fresh()}")
            b = unify_terms(target, fresh, b)
            units[fresh] = Unit(fresh, {})
            provenance[fresh] = (app_key, len(created))
            created.append(fresh)
            target = fresh
        merged = merge_unit(u, units[target], b, net)
        if merged is None:
            return None
        units[target], b = merged

    touched = [a for a in assigned if a is not None] + created
    unit_footprints = dict(structure.unit_footprints)
    for name in touched:
        unit_footprints[name] = unit_footprints.get(name, frozenset()) | {cxn.name}

    footprints = {k: frozenset(substitute(b, p) for p in v) for k, v in structure.footprints.items()}
    footprints[cxn.name] = footprints.get(cxn.name, frozenset()) | {substitute(b, p) for p in claims}

    root = structure.root
    other_root = "meaning" if direction is Direction.COMPREHENSION else "form"
    root_features = {k: substitute(b, v) for k, v in root.features.items()}
    root_features[other_root] = PredicateSet(root_features.get(other_root, ())).union(
        substitute(b, p) for p in added)

    new = TransientStructure(
        units=tuple(substitute(b, u) for u in units.values()),
        root=Unit(root.name, root_features),
        footprints=footprints,
        unit_footprints=unit_footprints,
        provenance=provenance,
    )
    return new, app_key, b


# ---------------------------------------------------------------------------
# search


def goal_test(node, direction: Direction) -> bool:
    structure = node.structure if isinstance(node, SearchNode) else node
    depth = node.depth if isinstance(node, SearchNode) else 0
    if direction is Direction.COMPREHENSION:
        return bool(structure.meaning) and depth >= 1
    if not structure.form:
        return False
    claimed = structure.claimed()
    if any(p not in claimed for p in structure.meaning):
        return False
    return render(structure) is not None


def _output(node: SearchNode, direction: Direction):
    if direction is Direction.COMPREHENSION:
        return PredicateNetwork(node.structure.meaning)
    return render(node.structure)


def _rank_key(node: SearchNode, grammar: Grammar) -> tuple:
    names = node.applied_names()
    scores = [grammar.cxns[n].score if n in grammar.cxns else 0.0 for n in names]
    mean = sum(scores) / len(scores) if scores else 0.0
    return (mean, -node.depth, tuple(sorted(names)))


def search(initial, grammar: Grammar, direction: Direction,
           observer: Optional[Callable] = None, stats: Optional[dict] = None):
    """Depth-first search for solutions; returns ``(best, competitors)``.

    Candidate constructions are tried in (score desc, name asc) order.
    States already reached along another application order are skipped.
    Best is the solution with the highest mean construction score, then
    fewest applications, then alphabetically smallest construction names;
    competitors are the other solutions that use a different multiset of
    constructions.
    """
    cfg = grammar.config
    max_depth, max_solutions, max_nodes = cfg["max_depth"], cfg["max_solutions"], cfg["max_nodes"]
    emit = _emitter(observer)
    if isinstance(initial, TransientStructure):
        initial = SearchNode(initial)
    ids = itertools.count(1)
    initial = SearchNode(initial.structure, initial.applied, initial.signature, next(ids), None)
    if emit:
        emit("initial", direction=direction, structure=initial.structure, node_id=initial.id)

    cxns = grammar.ordered()
    solutions = []
    visited = {initial.signature}
    stack = [initial]
    explored = 0
    while stack and len(solutions) < max_solutions and explored < max_nodes:
        node = stack.pop()
        explored += 1
        children = []
        if node.depth < max_depth:
            for cxn in cxns:
                children.extend(apply_cxn(cxn, node, direction, grammar))
        if not children:
            ok = goal_test(node, direction)
            output = _output(node, direction) if ok else None
            if emit:
                emit("goal-test", node_id=node.id, passed=ok, applied=node.applied_names())
            if ok:
                solutions.append(Solution(node, output, _rank_key(node, grammar)))
            continue
        fresh = []
        for child in children:
            if child.signature in visited:
                continue
            visited.add(child.signature)
            child = SearchNode(child.structure, child.applied, child.signature, next(ids), node.id)
            fresh.append(child)
            if emit:
                name, bindings = child.applied[-1]
                emit("application", node_id=child.id, parent_id=node.id, cxn=name,
                     bindings=bindings, structure=child.structure, depth=child.depth)
        stack.extend(reversed(fresh))

    if stats is not None:
        stats.update(nodes=explored, solutions=len(solutions))
    if not solutions and explored >= max_nodes and stack:
        if emit:
            emit("exhausted", nodes=explored)
        raise ResourceExhausted(f"node cap of {max_nodes} reached without a solution")

    solutions.sort(key=Solution.sort_key)
    best = solutions[0] if solutions else None
    competitors = []
    if best is not None:
        best_set = Counter(best.cxn_names)
        competitors = [s for s in solutions[1:] if Counter(s.cxn_names) != best_set]
    if emit:
        emit("solutions", best=best, competitors=competitors, direction=direction)
    return best, competitors


def comprehend(grammar: Grammar, utterance: str, observer=None, stats=None):
    """Map an utterance to ``(PredicateNetwork or None, competitors)``."""
    best, competitors = search(de_render(utterance), grammar, Direction.COMPREHENSION,
                               observer=observer, stats=stats)
    return (best.output if best else None), competitors


def formulate(grammar: Grammar, meaning, observer=None, stats=None):
    """Map a predicate network to ``(utterance or None, competitors)``."""
    if not isinstance(meaning, PredicateNetwork):
        meaning = PredicateNetwork(meaning)
    best, competitors = search(initial_structure(meaning=meaning.predicates), grammar,
                               Direction.FORMULATION, observer=observer, stats=stats)
    return (best.output if best else None), competitors
