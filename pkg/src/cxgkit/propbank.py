"""Construction induction from PropBank-style CoNLL annotations, and frame extraction.

Training file format (``# propbank-lite conll v1``), one token per line,
tab-separated, sentences separated by blank lines, ``#`` lines ignored::

    surface  lemma  pos  roleset-or-"-"  role-column-1 ... role-column-K

There is one BIO role column (``B-arg0``, ``I-arg0``, ``B-v``, ``O``) per
predicate token, in the order the predicates occur.  POS tags come from
the tagset ``det adj noun propn verb aux prep punct``.

Three kinds of constructions are induced:

* lexical ``<lemma>(v)-cxn``: recognises the lemma's surface forms on a
  verb chunk and contributes the category ``<lemma>(v)``;
* sense ``<roleset>-cxn``: maps that category to the roleset;
* argument structure, e.g. ``arg0(np)+v(v)+arg1(np)+arg2(pp)-cxn``: one
  conditional unit per role, constrained by chunk label and strict
  adjacency, contributing the role.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .agent import Agent
from .errors import ConllFormatError, UntaggedTokenError
from .fs import Atom, Str
from .grammar import Construction, Grammar

TAGSET = frozenset({"det", "adj", "noun", "propn", "verb", "aux", "prep", "punct"})
_NOMINAL = {"noun", "propn"}
_ARG = re.compile(r"arg(\d+)")


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: str


@dataclass
class AnnotatedFrame:
    roleset: str
    spans: list  # (role, start, end) token spans, end exclusive


@dataclass
class AnnotatedSentence:
    tokens: list
    frames: list = field(default_factory=list)

    @property
    def text(self) -> str:
        return " ".join(t.surface for t in self.tokens)


@dataclass(frozen=True)
class PhraseChunk:
    label: str
    start: int
    end: int
    head: Optional[int] = None

    def __post_init__(self):
        if self.end <= self.start:
            raise ValueError("empty chunk")


@dataclass
class Frame:
    roleset: str
    roles: list

    def as_dict(self) -> dict:
        return {"roleset": self.roleset, "roles": [tuple(r) for r in self.roles]}


def role_order(role: str):
    if role == "v":
        return (0, 0, role)
    m = _ARG.fullmatch(role)
    if m:
        return (1, int(m.group(1)), role)
    return (2, 0, role)


# ---------------------------------------------------------------------------
# reading


def _parse_bio(labels: list, lineno: int) -> list:
    spans = []
    current = None
    for i, lab in enumerate(labels):
        if lab == "O":
            if current:
                spans.append(tuple(current))
            current = None
        elif lab.startswith("B-"):
            if current:
                spans.append(tuple(current))
            current = [lab[2:].lower(), i, i + 1]
        elif lab.startswith("I-"):
            if current is None or current[0] != lab[2:].lower():
                raise ConllFormatError(f"{lab} does not continue a span", lineno + i)
            current[2] = i + 1
        else:
            raise ConllFormatError(f"bad role label {lab!r}", lineno + i)
    if current:
        spans.append(tuple(current))
    return spans


def _sentence(rows: list) -> AnnotatedSentence:
    first = rows[0][0]
    width = len(rows[0][1])
    for lineno, cols in rows:
        if len(cols) < 4:
            raise ConllFormatError(f"expected at least 4 columns, found {len(cols)}", lineno)
        if len(cols) != width:
            raise ConllFormatError(f"expected {width} columns like the sentence's first line, "
                                   f"found {len(cols)}", lineno)
        if cols[2] not in TAGSET:
            raise ConllFormatError(f"unknown POS tag {cols[2]!r}", lineno)
    tokens = [Token(c[0], c[1], c[2]) for _, c in rows]
    predicates = [i for i, (_, c) in enumerate(rows) if c[3] != "-"]
    if len(predicates) != width - 4:
        raise ConllFormatError(f"{len(predicates)} predicates but {width - 4} role columns", first)
    frames = []
    for k, pi in enumerate(predicates):
        spans = _parse_bio([c[4 + k] for _, c in rows], first)
        verbs = [s for s in spans if s[0] == "v"]
        if len(verbs) != 1:
            raise ConllFormatError(f"frame {k + 1} needs exactly one v span", rows[pi][0])
        frames.append(AnnotatedFrame(rows[pi][1][3], spans))
    return AnnotatedSentence(tokens, frames)


def read_conll(lines: Iterable[str]) -> list:
    sentences = []
    rows = []
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\n")
        if line.startswith("#"):
            continue
        if not line.strip():
            if rows:
                sentences.append(_sentence(rows))
                rows = []
            continue
        rows.append((lineno, line.split("\t")))
    if rows:
        sentences.append(_sentence(rows))
    return sentences


def parse_conll(path) -> list:
    with open(path, encoding="utf-8") as fh:
        return read_conll(fh)


# ---------------------------------------------------------------------------
# chunking


def _as_tokens(tokens) -> list:
    out = []
    for i, t in enumerate(tokens):
        if isinstance(t, Token):
            out.append(t)
            continue
        if isinstance(t, str) or len(t) < 2 or not t[1]:
            raise UntaggedTokenError(f"token {i} ({t!r}) has no POS tag")
        surface, pos = t[0], str(t[1]).lower()
        if pos not in TAGSET:
            raise UntaggedTokenError(f"token {i} ({surface!r}) has unknown tag {pos!r}")
        out.append(Token(surface, surface.lower(), pos))
    return out


def _np_end(toks, i, absorb_of=True) -> Optional[int]:
    n = len(toks)
    j = i
    if j < n and toks[j].pos == "det":
        j += 1
    while j < n and toks[j].pos == "adj":
        j += 1
    k = j
    while j < n and toks[j].pos in _NOMINAL:
        j += 1
    if j == k:
        return None
    if absorb_of and j < n and toks[j].pos == "prep" and toks[j].surface.lower() == "of":
        inner = _np_end(toks, j + 1, absorb_of=False)
        if inner is not None:
            j = inner
    return j


def chunk(tokens) -> list:
    """Deterministic left-to-right chunking into np, pp and v chunks."""
    toks = _as_tokens(tokens)
    chunks = []
    i, n = 0, len(toks)
    while i < n:
        pos = toks[i].pos
        if pos in ("det", "adj", "noun", "propn"):
            end = _np_end(toks, i)
            if end is not None:
                chunks.append(PhraseChunk("np", i, end))
                i = end
                continue
        elif pos == "prep":
            end = _np_end(toks, i + 1)
            if end is not None:
                chunks.append(PhraseChunk("pp", i, end))
                i = end
                continue
        elif pos in ("aux", "verb"):
            j = i
            while j < n and toks[j].pos == "aux":
                j += 1
            if j < n and toks[j].pos == "verb":
                chunks.append(PhraseChunk("v", i, j + 1, head=j))
                i = j + 1
                continue
        i += 1
    return chunks


# ---------------------------------------------------------------------------
# induction


def _span_label(chunks, toks, start, end) -> str:
    for c in chunks:
        if c.start == start and c.end == end:
            return c.label
    return "pp" if toks[start].pos == "prep" else "np"


def lexical_cxn(lemma: str, forms: list) -> Construction:
    category = f"{lemma}(v)"
    return Construction(
        name=f"{category}-cxn",
        contributing_pole=[("?verb-unit", {"category": category, "lemma": lemma})],
        conditional_pole=[("?verb-unit", {"category": category},
                           {"phrase-type": "v", "head": "?form"})],
        attributes={"kind": "lexical", "lemma": lemma,
                    "forms": tuple(f'"{f}"' for f in forms)})


def sense_cxn(roleset: str, lemma: str) -> Construction:
    return Construction(
        name=f"{roleset}-cxn",
        contributing_pole=[("?verb-unit", {"roleset": roleset})],
        conditional_pole=[("?verb-unit", {"roleset": roleset}, {"category": f"{lemma}(v)"})],
        attributes={"kind": "sense", "lemma": lemma})


def argument_structure_cxn(pattern: list) -> Construction:
    name = "+".join(f"{role}({label})" for role, label in pattern) + "-cxn"
    conditional = []
    contributing = []
    for i, (role, label) in enumerate(pattern):
        unit_name = f"?{role}-unit"
        conditional.append((unit_name, {"role": role},
                            {"phrase-type": label, "boundaries": (f"?b{i}", f"?b{i + 1}")}))
        contributing.append((unit_name, {"role": role}))
    return Construction(name=name, contributing_pole=contributing, conditional_pole=conditional,
                        attributes={"kind": "argument-structure"})


def induce_grammar(sentences: list) -> Grammar:
    """Lexical, sense and argument-structure constructions, each group in
    order of first occurrence."""
    if not sentences:
        raise ValueError("cannot induce a grammar from zero sentences")
    forms: dict = {}
    senses: dict = {}
    patterns: dict = {}
    for sent in sentences:
        toks = sent.tokens
        chunks = chunk(toks)
        for frame in sent.frames:
            (_, vs, _), = [s for s in frame.spans if s[0] == "v"]
            lemma = toks[vs].lemma.lower()
            surface = toks[vs].surface.lower()
            forms.setdefault(lemma, [])
            if surface not in forms[lemma]:
                forms[lemma].append(surface)
            senses.setdefault(frame.roleset, lemma)
            pattern = tuple((role, "v" if role == "v" else _span_label(chunks, toks, s, e))
                            for role, s, e in sorted(frame.spans, key=lambda sp: sp[1]))
            patterns.setdefault(pattern, None)

    grammar = Grammar()
    for lemma, fs in forms.items():
        grammar.add_cxn(lexical_cxn(lemma, fs))
    for roleset, lemma in senses.items():
        grammar.add_cxn(sense_cxn(roleset, lemma))
    for pattern in patterns:
        cxn = argument_structure_cxn(list(pattern))
        if cxn.name not in grammar:
            grammar.add_cxn(cxn)
    return grammar


# ---------------------------------------------------------------------------
# extraction


def _kind(cxn) -> Optional[str]:
    k = cxn.attributes.get("kind")
    return k.symbol if isinstance(k, Atom) else None


def _pattern(cxn) -> list:
    return [(cu.formulation_lock["role"].symbol, cu.comprehension_lock["phrase-type"].symbol)
            for cu in cxn.conditional_pole]


def extract_frames(grammar: Grammar, tokens) -> list:
    """Frames for every verb chunk the grammar recognises, in verb order."""
    toks = _as_tokens(tokens)
    chunks = chunk(toks)
    ordered = grammar.ordered()
    lexical = [c for c in ordered if _kind(c) == "lexical"]
    senses = [c for c in ordered if _kind(c) == "sense"]
    structures = [c for c in ordered if _kind(c) == "argument-structure"]

    frames = []
    for j, ch in enumerate(chunks):
        if ch.label != "v":
            continue
        head = toks[ch.head].surface.lower()
        lex = next((c for c in lexical
                    if head in [f.text for f in c.attributes["forms"] if isinstance(f, Str)]), None)
        if lex is None:
            continue
        lemma = lex.attributes["lemma"].symbol
        sense = next((c for c in senses if c.attributes["lemma"].symbol == lemma), None)
        if sense is None:
            continue
        roleset = sense.contributing_pole[0].features["roleset"].symbol

        best = None
        for cxn in structures:
            pattern = _pattern(cxn)
            labels = [label for _, label in pattern]
            if "v" not in labels:
                continue
            k = labels.index("v")
            lo, hi = j - k, j - k + len(pattern)
            if lo < 0 or hi > len(chunks):
                continue
            window = chunks[lo:hi]
            if [c.label for c in window] != labels:
                continue
            if any(a.end != b.start for a, b in zip(window, window[1:])):
                continue
            if best is None or len(pattern) > len(best[0]):
                best = (pattern, window)

        roles = [("v", toks[ch.head].surface)]
        if best is not None:
            for (role, _), c in zip(*best):
                if role != "v":
                    roles.append((role, " ".join(t.surface for t in toks[c.start:c.end])))
        roles.sort(key=lambda r: role_order(r[0]))
        frames.append(Frame(roleset, roles))
    return frames


def gold_frames(sentence: AnnotatedSentence) -> list:
    out = []
    for frame in sentence.frames:
        roles = []
        for role, s, e in frame.spans:
            if role == "v":
                roles.append(("v", sentence.tokens[s].surface))
            else:
                roles.append((role, " ".join(t.surface for t in sentence.tokens[s:e])))
        roles.sort(key=lambda r: role_order(r[0]))
        out.append(Frame(frame.roleset, roles))
    return out


def split_tagged(text: str) -> list:
    """``"The/det King/noun ..."`` -> ``[("The", "det"), ("King", "noun"), ...]``."""
    out = []
    for i, item in enumerate(text.split()):
        surface, sep, pos = item.rpartition("/")
        if not sep or not surface:
            raise UntaggedTokenError(f"token {i} ({item!r}) has no /pos tag")
        out.append((surface, pos))
    return out


class PropBankAgent(Agent):
    """Agent whose grammar is induced from annotations and used for frame extraction."""

    def learn_grammar_from_conll_file(self, path) -> None:
        self.grammar = induce_grammar(parse_conll(path))

    def comprehend(self, tokens, observer=None) -> list:
        """Frames as dicts; ``tokens`` are (surface, pos) pairs or ``word/pos`` text."""
        if isinstance(tokens, str):
            tokens = split_tagged(tokens)
        return [f.as_dict() for f in extract_frames(self.grammar, tokens)]


def load_tokens(path) -> list:
    """Read a token file: ``{"tokens": [[surface, pos], ...]}`` or the bare list."""
    import json

    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(data, dict):
        data = data.get("tokens")
    if not isinstance(data, list):
        raise UntaggedTokenError("token file must hold a list of [surface, pos] pairs")
    return [tuple(t) if isinstance(t, list) else t for t in data]
