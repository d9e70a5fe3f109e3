"""Three-valued membership for Boolean grammars under entailment semantics."""

from .grammar import Grammar, GrammarError, load_grammar, parse_grammar
from .gss import ParseResult, Recognizer, parse
from .oracle import classify, entailment_model
from .trivalue import FALSE, TRUE, UNKNOWN, TruthValue

__all__ = [
    "FALSE",
    "TRUE",
    "UNKNOWN",
    "Grammar",
    "GrammarError",
    "ParseResult",
    "Recognizer",
    "TruthValue",
    "classify",
    "entailment_model",
    "load_grammar",
    "parse",
    "parse_grammar",
]
