"""AMR-style predicate networks and Penman conversion.

A network is a set of unary concept predicates ``(dog d)`` and binary role
predicates ``(arg1 f d)``.  Role predicates keep the direction in which they
were written, so ``:arg0-of`` edges stay ``(arg0-of p f)``.
"""

from __future__ import annotations

import re
from typing import Iterable

from .errors import (CycleError, DisconnectedNetworkError, MalformedInputError,
                     MultipleRootsError, PenmanParseError, UndeclaredVariableError)
from .fs import Atom, Predicate, PredicateSet, Var, predicate

_ARG_ROLE = re.compile(r"arg(\d+)(-of)?")

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<open>\()
  | (?P<close>\))
  | (?P<slash>/)
  | (?P<role>:[^\s()/]+)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<symbol>[^\s()/:"][^\s()]*)
""", re.VERBOSE)


class PredicateNetwork:
    """Meaning as an ordered, duplicate-free set of concept and role predicates."""

    def __init__(self, predicates: Iterable = ()):
        self.predicates = PredicateSet(predicate(p) for p in predicates)
        for p in self.predicates:
            if len(p.args) not in (1, 2):
                raise MalformedInputError(f"network predicates must be unary or binary: {p!r}")

    def concepts(self) -> list:
        return [p for p in self.predicates if len(p.args) == 1]

    def roles(self) -> list:
        return [p for p in self.predicates if len(p.args) == 2]

    def __iter__(self):
        return iter(self.predicates)

    def __len__(self):
        return len(self.predicates)

    def __eq__(self, other):
        if not isinstance(other, PredicateNetwork):
            return NotImplemented
        return set(self.predicates) == set(other.predicates)

    def __hash__(self):
        return hash(frozenset(self.predicates))

    def equivalent(self, other: "PredicateNetwork") -> bool:
        """Equality up to consistent renaming of instance variables."""
        return predicate_network_to_penman(self) == predicate_network_to_penman(other)

    def __repr__(self):
        return f"PredicateNetwork({list(self.predicates)!r})"


# ---------------------------------------------------------------------------
# Penman -> network


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise PenmanParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.declared = {}
        self.references = []
        self.predicates = []

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("eof", "", len(self.text))

    def expect(self, kind):
        tok = self.peek()
        if tok[0] != kind:
            found = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise PenmanParseError(f"expected {kind}, found {found}", tok[2])
        self.i += 1
        return tok

    def node(self):
        self.expect("open")
        _, var, pos = self.expect("symbol")
        if var in self.declared:
            raise PenmanParseError(f"variable {var} declared twice", pos)
        self.declared[var] = pos
        self.expect("slash")
        _, concept, _ = self.expect("symbol")
        self.predicates.append(Predicate(concept, (Atom(var),)))
        while True:
            tok = self.peek()
            if tok[0] == "close":
                self.i += 1
                return var
            _, role, _ = self.expect("role")
            nxt = self.peek()
            if nxt[0] == "open":
                edge = len(self.predicates)
                self.predicates.append(None)
                target = self.node()
            elif nxt[0] == "symbol":
                self.i += 1
                target = nxt[1]
                self.references.append((target, nxt[2]))
                edge = len(self.predicates)
                self.predicates.append(None)
            elif nxt[0] == "string":
                raise PenmanParseError("constant role values are not supported", nxt[2])
            else:
                found = "end of input" if nxt[0] == "eof" else repr(nxt[1])
                raise PenmanParseError(f"expected a node or variable, found {found}", nxt[2])
            self.predicates[edge] = Predicate(role[1:], (Atom(var), Atom(target)))

    def parse(self):
        if not self.tokens:
            raise PenmanParseError("empty input", 0)
        self.node()
        if self.i != len(self.tokens):
            raise PenmanParseError("trailing input after the top node", self.tokens[self.i][2])
        for var, pos in self.references:
            if var not in self.declared:
                raise UndeclaredVariableError(f"undeclared variable {var} (at character {pos})")
        return PredicateNetwork(self.predicates)


def penman_to_predicate_network(text: str) -> PredicateNetwork:
    """Parse Penman notation into a predicate network (whitespace-insensitive)."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# network -> Penman


def _role_key(role: str):
    m = _ARG_ROLE.fullmatch(role)
    inverted = role.endswith("-of")
    if m:
        return (inverted, 0, int(m.group(1)), role)
    return (inverted, 1, 0, role)


def _analyse(network: PredicateNetwork):
    concept = {}
    order = []
    for p in network.concepts():
        inst = p.args[0]
        if inst in concept:
            raise MalformedInputError(f"instance {inst!r} has more than one concept")
        concept[inst] = p.name
        order.append(inst)
    children = {inst: [] for inst in order}
    incoming = {inst: 0 for inst in order}
    for p in network.roles():
        src, tgt = p.args
        for x in (src, tgt):
            if x not in concept:
                raise MalformedInputError(f"role {p!r} refers to {x!r}, which has no concept")
        children[src].append((p.name, tgt))
        incoming[tgt] += 1
    if not order:
        raise MalformedInputError("empty network")
    roots = [inst for inst in order if incoming[inst] == 0]
    if not roots:
        raise CycleError("network has no root: every instance has an incoming role")
    if len(roots) > 1:
        raise MultipleRootsError(f"network has {len(roots)} roots: {roots!r}")
    root = roots[0]

    # cycle and reachability check
    state = {}
    stack = [(root, iter(children[root]))]
    state[root] = 1
    while stack:
        node, it = stack[-1]
        for _, child in it:
            s = state.get(child)
            if s == 1:
                raise CycleError(f"cycle through {child!r}")
            if s is None:
                state[child] = 1
                stack.append((child, iter(children[child])))
                break
        else:
            state[node] = 2
            stack.pop()
    unreachable = [inst for inst in order if inst not in state]
    if unreachable:
        raise DisconnectedNetworkError(f"instances not reachable from the root: {unreachable!r}")
    return root, concept, children


def _structure_keys(root, concept, children):
    memo = {}

    def key(inst):
        if inst not in memo:
            kids = sorted((_role_key(r), key(c)) for r, c in children[inst])
            memo[inst] = (concept[inst], tuple(kids))
        return memo[inst]

    key(root)
    return memo


def _tokens_for(network: PredicateNetwork) -> list:
    root, concept, children = _analyse(network)
    keys = _structure_keys(root, concept, children)
    names = {}
    counters = {}
    out = []

    def name_for(inst):
        c = concept[inst][0]
        letter = c if c.isalpha() else "x"
        n = counters.get(letter, 0) + 1
        counters[letter] = n
        return letter if n == 1 else f"{letter}{n}"

    def emit(inst):
        names[inst] = name_for(inst)
        out.extend(["(", names[inst], "/", concept[inst]])
        kids = sorted(enumerate(children[inst]),
                      key=lambda e: (_role_key(e[1][0]), keys[e[1][1]], e[0]))
        for _, (role, child) in kids:
            out.append(":" + role)
            if child in names:
                out.append(names[child])
            else:
                emit(child)
        out.append(")")

    emit(root)
    return out


def _join(tokens: list, pretty: bool = False) -> str:
    parts = []
    depth = 0
    prev = None
    for tok in tokens:
        if tok == "(":
            if prev is not None and prev != "(":
                parts.append(" ")
            depth += 1
            parts.append(tok)
        elif tok == ")":
            depth -= 1
            parts.append(tok)
        elif pretty and tok.startswith(":"):
            parts.append("\n" + " " * (6 + 5 * (depth - 1)) + tok)
        else:
            if prev != "(":
                parts.append(" ")
            parts.append(tok)
        prev = tok
    return "".join(parts)


def predicate_network_to_penman(network, pretty: bool = False) -> str:
    """Serialize a network as canonical single-line Penman.

    The root is the one instance without incoming roles.  Variables are the
    concept's first letter plus a counter from 2 (``c``, ``c2``, ...), given
    out in depth-first order.  Children come in the order: ``argN`` roles
    ascending, other roles, then the ``-of`` roles in the same order.
    """
    if not isinstance(network, PredicateNetwork):
        network = PredicateNetwork(network)
    return _join(_tokens_for(network), pretty)


def canonicalize_whitespace(text: str) -> str:
    """Re-space Penman text without touching variables or order."""
    return _join([t for _, t, _ in _tokenize(text)])


def pretty_penman(text: str) -> str:
    """Multi-line layout: one role per line, indented by nesting depth."""
    return _join([t for _, t, _ in _tokenize(text)], pretty=True)


def topic_network(topic: str, var: str = "?x") -> PredicateNetwork:
    """Wrap an object symbol as the one-predicate network ``{(topic ?x)}``."""
    return PredicateNetwork([Predicate(topic, (Var(var),))])


def parse_predicates(text: str) -> PredicateNetwork:
    """Read whitespace-separated s-expression predicates, e.g. ``(dog d) (arg1 f d)``."""
    preds = []
    for m in re.finditer(r"\(([^()]*)\)|(\S)", text):
        if m.group(2) is not None:
            raise MalformedInputError(f"unexpected {m.group(2)!r} at character {m.start()}")
        items = m.group(1).split()
        if not items:
            raise MalformedInputError(f"empty predicate at character {m.start()}")
        preds.append(predicate(items))
    return PredicateNetwork(preds)


def format_predicates(network: PredicateNetwork) -> str:
    return "\n".join(repr(p) for p in network)
