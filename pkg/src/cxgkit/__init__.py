"""cxgkit: a construction grammar engine with comprehension, formulation and language-game tooling."""

from .agent import Agent
from .amr import (
    PredicateNetwork,
    canonicalize_whitespace,
    penman_to_predicate_network,
    predicate_network_to_penman,
)
from .engine import Direction, comprehend, formulate, reset_name_counter
from .errors import CxgError, MalformedInputError, ResourceExhausted
from .fs import Atom, Pair, Predicate, PredicateSet, Str, Unit, Var
from .grammar import CategorialNetwork, Construction, Grammar
from .ofef import (
    load_grammar_from_file,
    load_grammar_image,
    save_grammar_image,
    save_grammar_to_file,
)
from .resources import load_resource


def load_demo_grammar() -> Grammar:
    """The bundled six-construction resultative grammar."""
    from .ofef import loads

    return loads(load_resource("demo-resultative.json").read_text(encoding="utf-8"))


__version__ = "0.1.0"

__all__ = [
    "Agent", "Atom", "CategorialNetwork", "Construction", "CxgError", "Direction", "Grammar",
    "MalformedInputError", "Pair", "Predicate", "PredicateNetwork", "PredicateSet",
    "ResourceExhausted", "Str", "Unit", "Var", "canonicalize_whitespace", "comprehend",
    "formulate", "load_demo_grammar", "load_grammar_from_file", "load_grammar_image",
    "load_resource", "penman_to_predicate_network", "predicate_network_to_penman",
    "reset_name_counter", "save_grammar_image", "save_grammar_to_file",
]
