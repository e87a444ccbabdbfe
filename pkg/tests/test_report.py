import xml.etree.ElementTree as ET
from html.parser import HTMLParser

from cxgkit import amr, engine
from cxgkit.report import TraceRecorder, render_report
from tests.conftest import DOG_AMR

VOID = {"meta", "br", "hr", "img", "link", "input"}


class _Balance(HTMLParser):
    def __init__(self):
        super().__init__()
        self.stack = []
        self.errors = []

    def handle_starttag(self, tag, attrs):
        if tag not in VOID:
            self.stack.append(tag)

    def handle_startendtag(self, tag, attrs):
        pass

    def handle_endtag(self, tag):
        if not self.stack or self.stack.pop() != tag:
            self.errors.append(tag)


def well_formed(text):
    p = _Balance()
    p.feed(text)
    p.close()
    ET.fromstring(text.split("\n", 1)[1])
    return not p.errors and not p.stack


def test_report_sections(demo_grammar):
    rec = TraceRecorder()
    best, _ = engine.search(engine.de_render("Firefighters cut the child free."), demo_grammar,
                            engine.Direction.COMPREHENSION, observer=rec)
    html = render_report(rec, "Comprehension trace", "Firefighters cut the child free.", best.output)
    assert well_formed(html)
    for name in demo_grammar.cxns:
        assert name in html
    assert "Initial transient structure" in html and "Solutions" in html
    assert "(c / cut-01" in html
    assert html.count('class="application') == len(rec.of_kind("application"))


def test_report_for_failed_search(demo_grammar):
    rec = TraceRecorder()
    engine.search(engine.de_render("xyzzy"), demo_grammar, engine.Direction.COMPREHENSION, observer=rec)
    html = render_report(rec, "Comprehension trace", "xyzzy")
    assert well_formed(html)
    assert "No solution was found." in html


def test_report_escapes_markup(dog_grammar):
    rec = TraceRecorder()
    best, _ = engine.search(engine.initial_structure(
        meaning=amr.penman_to_predicate_network(DOG_AMR).predicates),
        dog_grammar, engine.Direction.FORMULATION, observer=rec)
    html = render_report(rec, "<Formulation & trace>", DOG_AMR, best.output, error="a < b")
    assert well_formed(html)
    assert "&lt;Formulation &amp; trace&gt;" in html
    assert "Firefighters cut the dog free." in html


def test_report_without_events():
    assert well_formed(render_report(TraceRecorder(), "t", "x"))
