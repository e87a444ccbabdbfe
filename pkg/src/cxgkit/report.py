"""Static HTML trace reports for a single comprehension or formulation run.

The document is self-contained (inline CSS, no scripts or external
resources) and is written as well-formed XHTML-compatible markup, so it
parses both as HTML and as XML.
"""

from __future__ import annotations

from html import escape
from pathlib import Path
from typing import Optional

from .engine import TraceEvent

_CSS = """
body { font-family: sans-serif; margin: 2em; color: #222; }
h1 { font-size: 1.4em; }
h2 { font-size: 1.15em; border-bottom: 1px solid #ccc; margin-top: 1.6em; }
section.application { border-left: 3px solid #4a7ab5; padding-left: 1em; margin: 1em 0; }
section.failed { border-left-color: #b54a4a; }
table { border-collapse: collapse; margin: 0.5em 0; }
td, th { border: 1px solid #ccc; padding: 2px 8px; text-align: left; font-family: monospace; }
pre { background: #f5f5f5; padding: 0.6em; white-space: pre-wrap; }
.ok { color: #2a7a2a; } .bad { color: #a02a2a; }
"""


class TraceRecorder:
    """Observer that keeps every trace event of one search."""

    def __init__(self):
        self.events: list = []

    def __call__(self, event: TraceEvent) -> None:
        self.events.append(event)

    def of_kind(self, kind: str) -> list:
        return [e for e in self.events if e.kind == kind]


def _units(structure) -> str:
    rows = [f"<tr><td>root</td><td>{escape(repr(v))}</td><td>{escape(k)}</td></tr>"
            for k, v in structure.root.features.items()]
    for u in structure.units:
        for k, v in u.features.items():
            rows.append(f"<tr><td>{escape(repr(u.name))}</td><td>{escape(repr(v))}</td>"
                        f"<td>{escape(k)}</td></tr>")
    return ("<table><tr><th>unit</th><th>value</th><th>feature</th></tr>"
            + "".join(rows) + "</table>")


def _bindings(bindings) -> str:
    if not bindings:
        return "<p>no bindings</p>"
    rows = "".join(f"<tr><td>{escape(str(k))}</td><td>{escape(repr(v))}</td></tr>"
                   for k, v in sorted(bindings.items()))
    return f"<table><tr><th>variable</th><th>value</th></tr>{rows}</table>"


def _output_text(output) -> str:
    if output is None:
        return ""
    if isinstance(output, str):
        return output
    from .amr import predicate_network_to_penman
    from .errors import NetworkShapeError

    try:
        return predicate_network_to_penman(output, pretty=True)
    except NetworkShapeError:
        return repr(output)


def render_report(recorder: TraceRecorder, title: str, input_text: str,
                  output=None, error: Optional[str] = None) -> str:
    parts = ["<!DOCTYPE html>",
             '<html xmlns="http://www.w3.org/1999/xhtml" lang="en">',
             f'<head><meta charset="utf-8"/><title>{escape(title)}</title>'
             f"<style>{_CSS}</style></head>",
             "<body>",
             f"<h1>{escape(title)}</h1>",
             "<h2>Input</h2>",
             f"<pre>{escape(input_text)}</pre>"]

    initial = recorder.of_kind("initial")
    if initial:
        direction = initial[0].data["direction"].value
        parts.append(f"<p>Direction: {escape(direction)}</p>")
        parts.append("<h2>Initial transient structure</h2>")
        parts.append(_units(initial[0].data["structure"]))

    applications = recorder.of_kind("application")
    verdicts = {e.data["node_id"]: e.data["passed"] for e in recorder.of_kind("goal-test")}
    parts.append(f"<h2>Construction applications ({len(applications)})</h2>")
    for ev in applications:
        d = ev.data
        verdict = verdicts.get(d["node_id"])
        cls = "application failed" if verdict is False else "application"
        note = {True: ' <span class="ok">goal test passed</span>',
                False: ' <span class="bad">goal test failed</span>'}.get(verdict, "")
        parts.append(f'<section class="{cls}" id="node-{d["node_id"]}">'
                     f"<h3>node {d['node_id']} (parent {d['parent_id']}, depth {d['depth']}): "
                     f"{escape(d['cxn'])}{note}</h3>"
                     f"{_bindings(d['bindings'])}{_units(d['structure'])}</section>")

    parts.append("<h2>Solutions</h2>")
    final = recorder.of_kind("solutions")
    solutions = []
    if final:
        best = final[0].data["best"]
        solutions = ([best] if best else []) + list(final[0].data["competitors"])
    if solutions:
        rows = []
        for rank, sol in enumerate(solutions, start=1):
            mean = sol.rank_key[0]
            rows.append(f"<tr><td>{rank}</td><td>{mean:.3f}</td>"
                        f"<td>{escape(', '.join(sol.cxn_names))}</td>"
                        f"<td>{escape(_output_text(sol.output))}</td></tr>")
        parts.append("<table><tr><th>rank</th><th>mean score</th><th>constructions</th>"
                     "<th>output</th></tr>" + "".join(rows) + "</table>")
    else:
        parts.append('<p class="bad">No solution was found.</p>')
    if recorder.of_kind("exhausted"):
        n = recorder.of_kind("exhausted")[0].data["nodes"]
        parts.append(f'<p class="bad">Search stopped at the node cap after {n} nodes.</p>')
    if error:
        parts.append(f'<p class="bad">{escape(error)}</p>')

    parts.append("<h2>Output</h2>")
    text = _output_text(output)
    parts.append(f"<pre>{escape(text)}</pre>" if text else "<p>(none)</p>")
    parts.append("</body></html>")
    return "\n".join(parts) + "\n"


def write_report(path, recorder: TraceRecorder, title: str, input_text: str,
                 output=None, error: Optional[str] = None) -> None:
    Path(path).write_text(render_report(recorder, title, input_text, output, error),
                          encoding="utf-8")
