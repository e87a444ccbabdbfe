"""Command-line interface.

Exit codes: 0 success, 1 malformed input, 2 i/o error, 3 no solution,
4 search resource cap reached.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import amr, engine, ofef
from .errors import CxgError, MalformedInputError, ResourceExhausted, UnknownNameError
from .resources import load_resource

EXIT_OK, EXIT_MALFORMED, EXIT_IO, EXIT_NO_SOLUTION, EXIT_EXHAUSTED = 0, 1, 2, 3, 4
BUILTIN_PREFIX = "builtin:"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_MALFORMED, f"{self.prog}: error: {message}\n")


def _load_grammar(spec: str):
    if spec.startswith(BUILTIN_PREFIX):
        return ofef.loads(load_resource(spec[len(BUILTIN_PREFIX):] + ".json").read_text())
    return ofef.load_any(spec)


def _run_search(args, initial, direction, input_text, title):
    grammar = _load_grammar(args.grammar)
    recorder = None
    if args.trace:
        from .report import TraceRecorder

        recorder = TraceRecorder()
    best, error = None, None
    try:
        best, _ = engine.search(initial, grammar, direction, observer=recorder)
    except ResourceExhausted as exc:
        error = str(exc)
        raise
    finally:
        if recorder is not None:
            from .report import write_report

            write_report(args.trace, recorder, title, input_text,
                         output=best.output if best else None, error=error)
    return best


def cmd_comprehend(args) -> int:
    initial = engine.de_render(args.utterance)
    best = _run_search(args, initial, engine.Direction.COMPREHENSION, args.utterance,
                       "Comprehension trace")
    if best is None:
        print("no solution", file=sys.stderr)
        return EXIT_NO_SOLUTION
    print(amr.predicate_network_to_penman(best.output, pretty=args.pretty))
    return EXIT_OK


def cmd_formulate(args) -> int:
    network = amr.penman_to_predicate_network(args.penman)
    initial = engine.initial_structure(meaning=network.predicates)
    best = _run_search(args, initial, engine.Direction.FORMULATION, args.penman,
                       "Formulation trace")
    if best is None:
        print("no solution", file=sys.stderr)
        return EXIT_NO_SOLUTION
    print(best.output)
    return EXIT_OK


def cmd_naming_game(args) -> int:
    from .naming_game import ExperimentConfig, NGExperiment, export_metrics

    settings = {}
    if args.config:
        settings.update(json.loads(Path(args.config).read_text()))
    interactions = settings.pop("interactions", 1500)
    for key, flag in (("nr_of_agents", "agents"), ("nr_of_objects", "objects"), ("seed", "seed")):
        value = getattr(args, flag)
        if value is not None:
            settings[key] = value
    if args.interactions is not None:
        interactions = args.interactions
    try:
        config = ExperimentConfig.from_dict(settings)
    except (ValueError, TypeError) as exc:
        raise MalformedInputError(str(exc)) from None
    if interactions < 1:
        raise MalformedInputError("--interactions must be at least 1")

    series = NGExperiment(config).run_series(interactions)
    out = Path(args.out)
    export_metrics(series, out, format=args.format)
    if not args.no_figure:
        from .plotting import plot_series

        plot_series(series, out.with_suffix(".png"), window=config.success_window,
                    title=f"{config.nr_of_agents} agents, {config.nr_of_objects} objects, "
                          f"seed {config.seed}")
    print(f"{series.final_success(config.success_window):.6f}")
    return EXIT_OK


def cmd_learn_propbank(args) -> int:
    from .propbank import induce_grammar, parse_conll

    grammar = induce_grammar(parse_conll(args.conll))
    if args.save_image:
        ofef.save_grammar_image(grammar, args.save_image)
    if args.save_json:
        ofef.save_grammar_to_file(grammar, args.save_json)
    for name in grammar.cxns:
        print(name)
    return EXIT_OK


def cmd_extract_frames(args) -> int:
    from .propbank import extract_frames, load_tokens, split_tagged

    grammar = ofef.load_any(args.image)
    if args.input:
        tokens = load_tokens(args.input)
    else:
        tokens = split_tagged(args.tagged)
    frames = [f.as_dict() for f in extract_frames(grammar, tokens)]
    print(json.dumps(frames, ensure_ascii=False))
    return EXIT_OK


def cmd_penman(args) -> int:
    text = sys.stdin.read()
    if args.to_network:
        print(amr.format_predicates(amr.penman_to_predicate_network(text)))
    else:
        network = amr.parse_predicates(text)
        print(amr.predicate_network_to_penman(network, pretty=args.pretty))
    return EXIT_OK


def cmd_grammar_info(args) -> int:
    grammar = _load_grammar(args.grammar)
    print(f"name: {grammar.name or '(unnamed)'}")
    print(f"size: {grammar.size()}")
    for cxn in grammar:
        print(f"  {cxn.name}  {cxn.score:.2f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cxgkit", description="Construction grammar engine.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("comprehend", help="map an utterance to a meaning network")
    c.add_argument("--grammar", required=True, help="grammar file (JSON or image) or builtin:NAME")
    c.add_argument("--utterance", required=True)
    c.add_argument("--trace", metavar="HTML")
    c.add_argument("--pretty", action="store_true", help="multi-line Penman")
    c.set_defaults(func=cmd_comprehend)

    f = sub.add_parser("formulate", help="map a Penman meaning to an utterance")
    f.add_argument("--grammar", required=True)
    f.add_argument("--penman", required=True)
    f.add_argument("--trace", metavar="HTML")
    f.set_defaults(func=cmd_formulate)

    n = sub.add_parser("naming-game", help="run a naming-game experiment")
    n.add_argument("--config", help="JSON file with experiment settings")
    n.add_argument("--agents", type=int)
    n.add_argument("--objects", type=int)
    n.add_argument("--interactions", type=int)
    n.add_argument("--seed", type=int)
    n.add_argument("--out", required=True, help="metrics file")
    n.add_argument("--format", choices=["csv", "json"], default="csv")
    n.add_argument("--no-figure", action="store_true", help="skip the PNG next to the metrics")
    n.set_defaults(func=cmd_naming_game)

    lp = sub.add_parser("learn-propbank", help="induce a grammar from annotated CoNLL")
    lp.add_argument("--conll", required=True)
    lp.add_argument("--save-image")
    lp.add_argument("--save-json")
    lp.set_defaults(func=cmd_learn_propbank)

    ef = sub.add_parser("extract-frames", help="extract frames from POS-tagged tokens")
    ef.add_argument("--image", required=True, help="grammar image or JSON")
    src = ef.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="token JSON file")
    src.add_argument("--tagged", help='inline text such as "John/propn sent/verb ..."')
    ef.set_defaults(func=cmd_extract_frames)

    pm = sub.add_parser("penman", help="convert between Penman and predicates (stdin to stdout)")
    mode = pm.add_mutually_exclusive_group(required=True)
    mode.add_argument("--to-network", action="store_true")
    mode.add_argument("--to-penman", action="store_true")
    pm.add_argument("--pretty", action="store_true")
    pm.set_defaults(func=cmd_penman)

    g = sub.add_parser("grammar", help="grammar inspection")
    gsub = g.add_subparsers(dest="grammar_command", required=True, parser_class=_Parser)
    gi = gsub.add_parser("info", help="name, size and constructions")
    gi.add_argument("grammar")
    gi.set_defaults(func=cmd_grammar_info)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ResourceExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except (MalformedInputError, UnknownNameError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except CxgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
