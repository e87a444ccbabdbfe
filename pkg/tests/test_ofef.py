import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cxgkit import amr, engine, ofef
from cxgkit.errors import (
    BadMagicError, CorruptImageError, MalformedDocumentError, UnsupportedVersionError,
)
from cxgkit.grammar import Grammar
from cxgkit.propbank import extract_frames, gold_frames, induce_grammar, parse_conll
from cxgkit.resources import load_resource
from tests.conftest import CHILD_PENMAN
from tests.gen import random_grammar

DEMO_NAMES = ["firefighters-cxn", "child-cxn", "cut-cxn", "free-cxn", "np-cxn", "resultative-cxn"]


def test_demo_resource_loads_in_order(tmp_path):
    g = ofef.load_grammar_from_file(load_resource("demo-resultative.json"))
    assert list(g.cxns) == DEMO_NAMES
    assert g.categorial_network.linked("child-cxn", "np-cxn-n")


def test_bundled_demo_is_canonical():
    text = load_resource("demo-resultative.json").read_text(encoding="utf-8")
    assert ofef.dumps(ofef.loads(text)) == text


def test_empty_document():
    g = ofef.loads(json.dumps({"format_version": ofef.FORMAT_VERSION, "constructions": []}))
    assert g.size() == 0


def test_missing_score_defaults():
    doc = json.loads(ofef.dumps(ofef.loads(load_resource("demo-resultative.json").read_text())))
    del doc["constructions"][0]["score"]
    assert ofef.document_to_grammar(doc).find_cxn("firefighters-cxn").score == 0.5


def test_truncated_json():
    text = load_resource("demo-resultative.json").read_text()
    with pytest.raises(MalformedDocumentError):
        ofef.loads(text[: len(text) // 2])


def test_error_carries_json_path():
    doc = json.loads(load_resource("demo-resultative.json").read_text())
    doc["constructions"][2]["conditional_pole"] = "oops"
    with pytest.raises(MalformedDocumentError) as info:
        ofef.document_to_grammar(doc)
    assert info.value.path.startswith("$.constructions[2]")


def test_unsupported_version():
    with pytest.raises(UnsupportedVersionError):
        ofef.loads(json.dumps({"format_version": "ofef-9"}))


def test_unknown_fields_preserved():
    doc = json.loads(load_resource("demo-resultative.json").read_text())
    doc["x-top"] = {"a": 1}
    doc["constructions"][0]["x-cxn"] = [1, 2]
    again = json.loads(ofef.dumps(ofef.document_to_grammar(doc)))
    assert again["x-top"] == {"a": 1}
    assert again["constructions"][0]["x-cxn"] == [1, 2]


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        ofef.load_grammar_from_file(tmp_path / "nope.json")


def test_image_roundtrip_learned_grammar(tmp_path):
    g = induce_grammar(parse_conll(load_resource("pb-annotations.conll")))
    path = tmp_path / "g.ofgi"
    ofef.save_grammar_image(g, path)
    back = ofef.load_grammar_image(path)
    assert back.size() == 6 and list(back.cxns) == list(g.cxns)
    ofef.save_grammar_image(back, tmp_path / "again.ofgi")
    assert (tmp_path / "again.ofgi").read_bytes() == path.read_bytes()
    for sent in parse_conll(load_resource("pb-annotations.conll")):
        assert extract_frames(back, sent.tokens) == gold_frames(sent)


def test_empty_image_roundtrip():
    assert ofef.grammar_from_image_bytes(ofef.image_bytes(Grammar())).size() == 0


def test_image_preserves_comprehension(tmp_path, demo_grammar):
    path = tmp_path / "demo.ofgi"
    ofef.save_grammar_image(demo_grammar, path)
    net, _ = engine.comprehend(ofef.load_grammar_image(path), "Firefighters cut the child free.")
    assert amr.predicate_network_to_penman(net) == CHILD_PENMAN


def test_image_errors(demo_grammar):
    data = ofef.image_bytes(demo_grammar)
    with pytest.raises(BadMagicError):
        ofef.grammar_from_image_bytes(b"XFGI" + data[4:])
    with pytest.raises(CorruptImageError):
        ofef.grammar_from_image_bytes(data[:-7])
    with pytest.raises(CorruptImageError):
        ofef.grammar_from_image_bytes(data[:3])
    flipped = bytearray(data)
    flipped[20] ^= 0xFF
    with pytest.raises(CorruptImageError):
        ofef.grammar_from_image_bytes(bytes(flipped))
    with pytest.raises(UnsupportedVersionError):
        ofef.grammar_from_image_bytes(data[:4] + b"\x02\x00" + data[6:])


def test_load_any_sniffs_format(tmp_path, demo_grammar):
    ofef.save_grammar_image(demo_grammar, tmp_path / "g.bin")
    ofef.save_grammar_to_file(demo_grammar, tmp_path / "g.json")
    for p in ("g.bin", "g.json"):
        assert list(ofef.load_any(tmp_path / p).cxns) == DEMO_NAMES


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_random_grammar_roundtrips(seed):
    g = random_grammar(random.Random(seed))
    text = ofef.dumps(g)
    back = ofef.loads(text)
    assert ofef.dumps(back) == text
    assert list(back.cxns) == list(g.cxns)
    assert [c.score for c in back] == [c.score for c in g]
    image = ofef.image_bytes(g)
    assert ofef.image_bytes(ofef.grammar_from_image_bytes(image)) == image
