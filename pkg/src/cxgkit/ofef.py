"""Grammar serialization: OFEF JSON documents and OFGI binary images.

OFEF document (``format_version`` ``"ofef-inspired-1"``)::

    {
      "format_version": "ofef-inspired-1",
      "name": "demo-resultative",                      # optional
      "constructions": [
        {"name": "dog-cxn",
         "score": 0.5,
         "attributes": {},
         "contributing_pole": [["?dog-unit", {"referent": "?d", "category": "dog-cxn",
                                             "boundaries": ["?left", "?right"]}]],
         "conditional_pole": [["?dog-unit",
                               {"#meaning": [["dog", "?d"]]},
                               {"#form": [["sequence", "\\"dog\\"", "?left", "?right"]]}]]}
      ],
      "categories": ["dog-cxn", "np-cxn-n"],
      "links": [["dog-cxn", "np-cxn-n"]],
      "config": {"max_depth": 32, "max_nodes": 2000, "max_solutions": 16}
    }

Term encoding: ``"?x"`` variable, ``"\\"dog\\""`` string literal, other
strings atoms, JSON integers integers, lists compound terms.  Inside a
unit's feature map a two-element list is a boundary pair; a two-element
compound is written ``{"compound": [a, b]}``.  Hash features (``#form``,
``#meaning``) hold lists of predicates ``[name, arg, ...]``.  Unknown keys
are kept and written back unchanged.

OFGI image: ``b"OFGI"``, little-endian uint16 version (1), a tagged binary
encoding of the same document, and a CRC-32 of that payload.
"""

from __future__ import annotations

import json
import struct
import zlib
from pathlib import Path

from .errors import (BadMagicError, CorruptImageError, MalformedDocumentError,
                     UnsupportedVersionError)
from .fs import Atom, Pair, PredicateSet, Str, Unit, Var, predicate, term
from .grammar import ConditionalUnit, Construction, Grammar

FORMAT_VERSION = "ofef-inspired-1"
SUPPORTED_VERSIONS = {FORMAT_VERSION}

IMAGE_MAGIC = b"OFGI"
IMAGE_VERSION = 1

_CXN_KEYS = {"name", "score", "attributes", "contributing_pole", "conditional_pole"}
_DOC_KEYS = {"format_version", "name", "constructions", "categories", "links", "config"}


# ---------------------------------------------------------------------------
# terms and feature values


def encode_term(t):
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Atom):
        return t.symbol
    if isinstance(t, Str):
        return f'"{t.text}"'
    if isinstance(t, int):
        return t
    if isinstance(t, tuple):
        return [encode_term(e) for e in t]
    raise TypeError(f"not a term: {t!r}")


def decode_term(x, path="$"):
    if isinstance(x, bool) or not isinstance(x, (str, int, list)):
        raise MalformedDocumentError(f"expected a term, found {type(x).__name__}", path)
    if isinstance(x, list):
        return tuple(decode_term(e, f"{path}[{i}]") for i, e in enumerate(x))
    try:
        return term(x)
    except ValueError as exc:
        raise MalformedDocumentError(str(exc), path) from None


def encode_value(feature: str, v):
    if isinstance(v, PredicateSet):
        return [[p.name, *map(encode_term, p.args)] for p in v]
    if isinstance(v, Pair):
        return [encode_term(v.left), encode_term(v.right)]
    if isinstance(v, tuple) and len(v) == 2:
        return {"compound": encode_term(v)}
    return encode_term(v)


def decode_value(feature: str, x, path="$"):
    if feature.startswith("#"):
        if not isinstance(x, list):
            raise MalformedDocumentError("hash feature must be a list of predicates", path)
        preds = []
        for i, p in enumerate(x):
            if not isinstance(p, list) or not p or not isinstance(p[0], str):
                raise MalformedDocumentError("predicate must be [name, args...]", f"{path}[{i}]")
            args = [decode_term(a, f"{path}[{i}][{j + 1}]") for j, a in enumerate(p[1:])]
            try:
                preds.append(predicate([p[0], *args]))
            except ValueError as exc:
                raise MalformedDocumentError(str(exc), f"{path}[{i}]") from None
        return PredicateSet(preds)
    if isinstance(x, dict):
        if set(x) != {"compound"} or not isinstance(x["compound"], list):
            raise MalformedDocumentError("object values must be {\"compound\": [...]}", path)
        return decode_term(x["compound"], f"{path}.compound")
    if isinstance(x, list) and len(x) == 2:
        return Pair(decode_term(x[0], f"{path}[0]"), decode_term(x[1], f"{path}[1]"))
    return decode_term(x, path)


def _encode_map(m):
    return {k: encode_value(k, v) for k, v in m.items()}


def _decode_map(m, path):
    if not isinstance(m, dict):
        raise MalformedDocumentError("expected a feature map", path)
    return {k.lower(): decode_value(k.lower(), v, f"{path}.{k}") for k, v in m.items()}


# ---------------------------------------------------------------------------
# documents


def cxn_to_record(cxn: Construction) -> dict:
    record = dict(cxn.extra)
    record.update({
        "name": cxn.name,
        "score": cxn.score,
        "attributes": {k: encode_term(v) for k, v in cxn.attributes.items()},
        "contributing_pole": [[encode_term(u.name), _encode_map(u.features)]
                              for u in cxn.contributing_pole],
        "conditional_pole": [[encode_term(cu.name), _encode_map(cu.formulation_lock),
                              _encode_map(cu.comprehension_lock)]
                             for cu in cxn.conditional_pole],
    })
    return record


def record_to_cxn(record, path="$") -> Construction:
    if not isinstance(record, dict):
        raise MalformedDocumentError("construction record must be an object", path)
    for key in ("name", "conditional_pole"):
        if key not in record:
            raise MalformedDocumentError(f"missing field {key!r}", path)
    name = record["name"]
    if not isinstance(name, str) or not name:
        raise MalformedDocumentError("name must be a non-empty string", f"{path}.name")
    score = record.get("score", 0.5)
    if isinstance(score, bool) or not isinstance(score, (int, float)):
        raise MalformedDocumentError("score must be a number", f"{path}.score")

    contributing = []
    for i, u in enumerate(record.get("contributing_pole", [])):
        p = f"{path}.contributing_pole[{i}]"
        if not isinstance(u, list) or len(u) != 2:
            raise MalformedDocumentError("contributing unit must be [name, features]", p)
        contributing.append(Unit(decode_term(u[0], f"{p}[0]"), _decode_map(u[1], f"{p}[1]")))

    conditional = []
    for i, u in enumerate(record["conditional_pole"]):
        p = f"{path}.conditional_pole[{i}]"
        if not isinstance(u, list) or len(u) != 3:
            raise MalformedDocumentError(
                "conditional unit must be [name, formulation-lock, comprehension-lock]", p)
        try:
            conditional.append(ConditionalUnit(decode_term(u[0], f"{p}[0]"),
                                               _decode_map(u[1], f"{p}[1]"),
                                               _decode_map(u[2], f"{p}[2]")))
        except ValueError as exc:
            raise MalformedDocumentError(str(exc), p) from None

    attributes = record.get("attributes", {})
    if not isinstance(attributes, dict):
        raise MalformedDocumentError("attributes must be an object", f"{path}.attributes")
    try:
        cxn = Construction(name, contributing, conditional, score=score,
                           attributes={k: decode_term(v, f"{path}.attributes.{k}")
                                       for k, v in attributes.items()})
    except ValueError as exc:
        raise MalformedDocumentError(str(exc), path) from None
    cxn.extra = {k: v for k, v in record.items() if k not in _CXN_KEYS}
    return cxn


def grammar_to_document(grammar: Grammar) -> dict:
    doc = dict(grammar.extra)
    doc.update({
        "format_version": FORMAT_VERSION,
        "constructions": [cxn_to_record(c) for c in grammar],
        "categories": list(grammar.categorial_network.categories),
        "links": [list(pair) for pair in grammar.categorial_network.links.values()],
        "config": dict(grammar.config),
    })
    if grammar.name is not None:
        doc["name"] = grammar.name
    return doc


def document_to_grammar(doc) -> Grammar:
    if not isinstance(doc, dict):
        raise MalformedDocumentError("document must be a JSON object")
    version = doc.get("format_version")
    if version is None:
        raise MalformedDocumentError("missing field 'format_version'")
    if version not in SUPPORTED_VERSIONS:
        raise UnsupportedVersionError(f"unsupported format_version {version!r}")
    config = doc.get("config", {})
    if not isinstance(config, dict):
        raise MalformedDocumentError("config must be an object", "$.config")
    grammar = Grammar(config)
    if "name" in doc:
        grammar.name = doc["name"]
    cxns = doc.get("constructions", [])
    if not isinstance(cxns, list):
        raise MalformedDocumentError("constructions must be a list", "$.constructions")
    for i, record in enumerate(cxns):
        cxn = record_to_cxn(record, f"$.constructions[{i}]")
        if cxn.name in grammar:
            raise MalformedDocumentError(f"duplicate construction {cxn.name}", f"$.constructions[{i}]")
        grammar.add_cxn(cxn)
    for i, c in enumerate(doc.get("categories", [])):
        if not isinstance(c, str):
            raise MalformedDocumentError("category must be a string", f"$.categories[{i}]")
        grammar.add_category(c)
    for i, link in enumerate(doc.get("links", [])):
        if not (isinstance(link, list) and len(link) == 2 and all(isinstance(x, str) for x in link)):
            raise MalformedDocumentError("link must be a pair of category names", f"$.links[{i}]")
        if any(x.lower() not in grammar.categorial_network.categories for x in link):
            raise MalformedDocumentError("link endpoint is not a declared category", f"$.links[{i}]")
        grammar.add_link(*link)
    grammar.extra = {k: v for k, v in doc.items() if k not in _DOC_KEYS}
    return grammar


def dumps(grammar: Grammar) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(grammar_to_document(grammar), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> Grammar:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocumentError(f"invalid JSON: {exc}") from None
    return document_to_grammar(doc)


def save_grammar_to_file(grammar: Grammar, path) -> None:
    Path(path).write_text(dumps(grammar), encoding="utf-8")


def load_grammar_from_file(path) -> Grammar:
    return loads(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# binary image


def _pack(x, out: bytearray) -> None:
    if x is None:
        out += b"N"
    elif x is True:
        out += b"T"
    elif x is False:
        out += b"F"
    elif isinstance(x, int):
        out += b"I" + struct.pack("<q", x)
    elif isinstance(x, float):
        out += b"D" + struct.pack("<d", x)
    elif isinstance(x, str):
        data = x.encode("utf-8")
        out += b"S" + struct.pack("<I", len(data)) + data
    elif isinstance(x, (list, tuple)):
        out += b"L" + struct.pack("<I", len(x))
        for e in x:
            _pack(e, out)
    elif isinstance(x, dict):
        out += b"M" + struct.pack("<I", len(x))
        for k in sorted(x):
            _pack(str(k), out)
            _pack(x[k], out)
    else:
        raise TypeError(f"cannot encode {type(x).__name__}")


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n):
        if self.pos + n > len(self.data):
            raise CorruptImageError("image is truncated")
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def value(self):
        tag = self.take(1)
        if tag == b"N":
            return None
        if tag == b"T":
            return True
        if tag == b"F":
            return False
        if tag == b"I":
            return struct.unpack("<q", self.take(8))[0]
        if tag == b"D":
            return struct.unpack("<d", self.take(8))[0]
        if tag == b"S":
            n = struct.unpack("<I", self.take(4))[0]
            try:
                return self.take(n).decode("utf-8")
            except UnicodeDecodeError:
                raise CorruptImageError("invalid UTF-8 in image") from None
        if tag == b"L":
            n = struct.unpack("<I", self.take(4))[0]
            return [self.value() for _ in range(n)]
        if tag == b"M":
            n = struct.unpack("<I", self.take(4))[0]
            out = {}
            for _ in range(n):
                k = self.value()
                out[k] = self.value()
            return out
        raise CorruptImageError(f"unknown tag {tag!r} at offset {self.pos - 1}")


def image_bytes(grammar: Grammar) -> bytes:
    payload = bytearray()
    _pack(grammar_to_document(grammar), payload)
    return (IMAGE_MAGIC + struct.pack("<H", IMAGE_VERSION) + bytes(payload)
            + struct.pack("<I", zlib.crc32(payload)))


def grammar_from_image_bytes(data: bytes) -> Grammar:
    if data[:4] != IMAGE_MAGIC:
        if len(data) < 4 and IMAGE_MAGIC.startswith(data):
            raise CorruptImageError("image is truncated")
        raise BadMagicError("not a grammar image (bad magic)")
    if len(data) < 10:
        raise CorruptImageError("image is truncated")
    version = struct.unpack("<H", data[4:6])[0]
    if version != IMAGE_VERSION:
        raise UnsupportedVersionError(f"unsupported image version {version}")
    payload, crc = data[6:-4], struct.unpack("<I", data[-4:])[0]
    if zlib.crc32(payload) != crc:
        raise CorruptImageError("image checksum mismatch (truncated or corrupted)")
    reader = _Reader(payload)
    doc = reader.value()
    if reader.pos != len(payload):
        raise CorruptImageError("trailing bytes in image payload")
    return document_to_grammar(doc)


def save_grammar_image(grammar: Grammar, path) -> None:
    Path(path).write_bytes(image_bytes(grammar))


def load_grammar_image(path) -> Grammar:
    return grammar_from_image_bytes(Path(path).read_bytes())


def load_any(path) -> Grammar:
    """Load either an OFGI image or an OFEF document, sniffing the magic."""
    data = Path(path).read_bytes()
    if data[:4] == IMAGE_MAGIC:
        return grammar_from_image_bytes(data)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise MalformedDocumentError("file is neither a grammar image nor UTF-8 JSON") from None
    return loads(text)
