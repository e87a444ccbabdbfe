"""Terms, predicates, units and the unification machinery.

Terms are plain immutable values:

* :class:`Atom` -- case-insensitive symbol (``dog-cxn``)
* :class:`Str` -- exact string literal (``"dog"``)
* ``int`` -- integer (character offsets)
* :class:`Var` -- logic variable, name starts with ``?``
* ``tuple`` -- compound term

Bindings are ordinary dicts from variable name to term.  Every operation
returns a fresh dict and leaves its input untouched.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __post_init__(self):
        if not self.name.startswith("?") or len(self.name) < 2:
            raise ValueError(f"variable name must start with '?': {self.name!r}")

    def __repr__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Atom:
    symbol: str

    def __post_init__(self):
        if not self.symbol or self.symbol[0] in '?"':
            raise ValueError(f"invalid atom symbol: {self.symbol!r}")
        object.__setattr__(self, "symbol", self.symbol.lower())

    def __repr__(self):
        return self.symbol


@dataclass(frozen=True, slots=True)
class Str:
    text: str

    def __repr__(self):
        return f'"{self.text}"'


Term = Union[Atom, Str, int, Var, tuple]


@dataclass(frozen=True, slots=True)
class Predicate:
    name: str
    args: tuple = ()

    def __post_init__(self):
        if not self.name or self.name.startswith("?"):
            raise ValueError(f"predicate name must be a non-variable symbol: {self.name!r}")
        object.__setattr__(self, "name", self.name.lower())

    def __repr__(self):
        return "(" + " ".join([self.name, *map(repr, self.args)]) + ")"


@dataclass(frozen=True, slots=True)
class Pair:
    left: Term
    right: Term

    def __repr__(self):
        return f"({self.left!r} {self.right!r})"


class PredicateSet(tuple):
    """Ordered, duplicate-free collection of predicates.

    Order is insertion order; it drives deterministic matching and the
    rendering order of form predicates.
    """

    def __new__(cls, predicates: Iterable[Predicate] = ()):
        return super().__new__(cls, dict.fromkeys(predicates))

    def union(self, other: Iterable[Predicate]) -> "PredicateSet":
        return PredicateSet((*self, *other))

    def __repr__(self):
        return "{" + " ".join(map(repr, self)) + "}"


FeatureValue = Union[Term, Pair, PredicateSet]


@dataclass(frozen=True)
class Unit:
    name: Term
    features: Mapping[str, FeatureValue] = field(default_factory=dict)

    def get(self, feature, default=None):
        return self.features.get(feature, default)

    def with_features(self, **updates) -> "Unit":
        return Unit(self.name, {**self.features, **updates})

    def __repr__(self):
        feats = ", ".join(f"{k}: {v!r}" for k, v in self.features.items())
        return f"<{self.name!r} {{{feats}}}>"


Bindings = dict


# ---------------------------------------------------------------------------
# coercion from the compact notation used in construction specs


def term(x) -> Term:
    """Coerce Python data in construction-spec notation to a term.

    ``'?x'`` is a variable, ``'"dog"'`` a string literal, any other string
    an atom; ints stay ints and sequences become compound terms.
    """
    if isinstance(x, (Atom, Str, Var)):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not terms")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        if x.startswith("?"):
            return Var(x)
        if len(x) >= 2 and x[0] == '"' and x[-1] == '"':
            return Str(x[1:-1])
        return Atom(x)
    if isinstance(x, (list, tuple)):
        return tuple(term(e) for e in x)
    raise TypeError(f"cannot coerce {x!r} to a term")


def predicate(x) -> Predicate:
    if isinstance(x, Predicate):
        return x
    name, *args = x
    if isinstance(name, Atom):
        name = name.symbol
    return Predicate(name, tuple(term(a) for a in args))


def feature_value(feature: str, x) -> FeatureValue:
    """Coerce a feature value; hash features hold predicate sets, 2-tuples are pairs."""
    if isinstance(x, (Pair, PredicateSet)):
        return x
    if feature.startswith("#"):
        return PredicateSet(predicate(p) for p in x)
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return Pair(term(x[0]), term(x[1]))
    return term(x)


def unit(name, features: Mapping) -> Unit:
    return Unit(term(name), {str(k).lower(): feature_value(str(k).lower(), v) for k, v in features.items()})


# ---------------------------------------------------------------------------
# variables and substitution


def walk(t: Term, bindings: Mapping) -> Term:
    while isinstance(t, Var) and t.name in bindings:
        t = bindings[t.name]
    return t


def substitute(bindings: Mapping, x):
    """Replace every bound variable in ``x`` by its fully walked value."""
    if not bindings:
        return x
    if isinstance(x, Var):
        v = walk(x, bindings)
        return v if isinstance(v, Var) else substitute(bindings, v)
    if isinstance(x, tuple) and not isinstance(x, PredicateSet):
        return tuple(substitute(bindings, e) for e in x)
    if isinstance(x, Predicate):
        return Predicate(x.name, tuple(substitute(bindings, a) for a in x.args))
    if isinstance(x, Pair):
        return Pair(substitute(bindings, x.left), substitute(bindings, x.right))
    if isinstance(x, PredicateSet):
        return PredicateSet(substitute(bindings, p) for p in x)
    if isinstance(x, Unit):
        return Unit(substitute(bindings, x.name),
                    {k: substitute(bindings, v) for k, v in x.features.items()})
    return x


def variables(x, acc: Optional[dict] = None) -> dict:
    """Collect the variables of ``x`` in first-occurrence order."""
    if acc is None:
        acc = {}
    if isinstance(x, Var):
        acc.setdefault(x.name, x)
    elif isinstance(x, tuple):
        for e in x:
            variables(e, acc)
    elif isinstance(x, Predicate):
        variables(x.args, acc)
    elif isinstance(x, Pair):
        variables(x.left, acc)
        variables(x.right, acc)
    elif isinstance(x, Unit):
        variables(x.name, acc)
        for v in x.features.values():
            variables(v, acc)
    return acc


# ---------------------------------------------------------------------------
# unification


def unify_terms(a: Term, b: Term, bindings: Mapping, categorial_net=None) -> Optional[dict]:
    """Most general unifier of ``a`` and ``b`` extending ``bindings``, or None.

    Two distinct atoms unify when ``categorial_net`` holds a direct link
    between them.  No occurs-check is performed.
    """
    a = walk(a, bindings)
    b = walk(b, bindings)
    if a == b and type(a) is type(b):
        return dict(bindings)
    if isinstance(a, Var):
        return {**bindings, a.name: b}
    if isinstance(b, Var):
        return {**bindings, b.name: a}
    if isinstance(a, Atom) and isinstance(b, Atom):
        if categorial_net is not None and categorial_net.linked(a.symbol, b.symbol):
            return dict(bindings)
        return None
    if isinstance(a, tuple) and isinstance(b, tuple) and len(a) == len(b):
        out = dict(bindings)
        for x, y in zip(a, b):
            out = unify_terms(x, y, out, categorial_net)
            if out is None:
                return None
        return out
    return None


def unify_predicates(p: Predicate, q: Predicate, bindings: Mapping, categorial_net=None) -> Optional[dict]:
    if p.name != q.name or len(p.args) != len(q.args):
        return None
    return unify_terms(p.args, q.args, bindings, categorial_net)


def unify_values(a: FeatureValue, b: FeatureValue, bindings: Mapping, categorial_net=None) -> Optional[dict]:
    """Unify two feature values of the same kind (pairs pointwise)."""
    if isinstance(a, Pair) and isinstance(b, Pair):
        out = unify_terms(a.left, b.left, bindings, categorial_net)
        if out is None:
            return None
        return unify_terms(a.right, b.right, out, categorial_net)
    if isinstance(a, PredicateSet) or isinstance(b, PredicateSet):
        if not (isinstance(a, PredicateSet) and isinstance(b, PredicateSet)):
            return None
        results = match_predicate_set(a, b, bindings, categorial_net)
        return results[0][0] if results else None
    if isinstance(a, Pair) or isinstance(b, Pair):
        return None
    return unify_terms(a, b, bindings, categorial_net)


# ---------------------------------------------------------------------------
# matching


def match_predicate_set(pattern: Iterable[Predicate], target: Iterable[Predicate],
                        bindings: Mapping, categorial_net=None) -> list:
    """All injective matches of ``pattern`` into ``target``.

    Returns a list of ``(bindings, matched)`` where ``matched`` lists the
    target predicates in pattern order.  Results come out ordered by the
    positions of the matched target predicates.
    """
    pattern = list(pattern)
    target = list(target)
    results = []
    used = [False] * len(target)
    chosen = []

    def step(i, b):
        if i == len(pattern):
            results.append((b, tuple(target[j] for j in chosen)))
            return
        p = pattern[i]
        for j, q in enumerate(target):
            if used[j]:
                continue
            b2 = unify_predicates(p, q, b, categorial_net)
            if b2 is None:
                continue
            used[j] = True
            chosen.append(j)
            step(i + 1, b2)
            chosen.pop()
            used[j] = False

    step(0, dict(bindings))
    return results


def is_sequence_pattern(p: Predicate) -> bool:
    return p.name == "sequence" and len(p.args) == 3 and isinstance(p.args[0], Str)


def _overlaps(start, end, spans):
    return any(start < r and l < end for l, r in spans)


def match_sequence(pattern: Predicate, inventory: Iterable[Predicate], bindings: Mapping,
                   claimed: Iterable[tuple] = ()) -> list:
    """Bind a ``(sequence "text" ?l ?r)`` pattern to every occurrence of
    ``text`` inside the ground sequence predicates of ``inventory``.

    Offsets are character positions in utterance coordinates, start
    inclusive and end exclusive.  Occurrences overlapping a ``claimed``
    span are skipped.
    """
    if not is_sequence_pattern(pattern):
        return []
    text, left, right = pattern.args
    needle = text.text
    if not needle:
        return []
    claimed = list(claimed)
    results = []
    for q in inventory:
        if q.name != "sequence" or len(q.args) != 3:
            continue
        hay, start, _end = q.args
        if not isinstance(hay, Str) or not isinstance(start, int):
            continue
        i = hay.text.find(needle)
        while i != -1:
            lo, hi = start + i, start + i + len(needle)
            if not _overlaps(lo, hi, claimed):
                b = unify_terms(left, lo, bindings)
                if b is not None:
                    b = unify_terms(right, hi, b)
                if b is not None:
                    results.append(b)
            i = hay.text.find(needle, i + 1)
    return results


def merge_unit(contribution: Unit, target: Unit, bindings: Mapping, categorial_net=None):
    """Merge the features of ``contribution`` into ``target``.

    Returns ``(unit, bindings)`` or None when a shared feature clashes.
    Predicate-set values are unioned; for other shared features the
    target's value is kept once both unify.
    """
    b = unify_terms(contribution.name, target.name, bindings)
    if b is None:
        return None
    features = dict(target.features)
    for feat, value in contribution.features.items():
        if feat not in features:
            features[feat] = value
            continue
        old = features[feat]
        if isinstance(old, PredicateSet) and isinstance(value, PredicateSet):
            features[feat] = old.union(value)
            continue
        b = unify_values(value, old, b, categorial_net)
        if b is None:
            return None
    return substitute(b, Unit(target.name, features)), b
