"""Seeded random grammars for differential testing."""

from __future__ import annotations

import random

from .grammar import (
    Concatenation,
    Conjunction,
    Disjunction,
    Epsilon,
    Expr,
    Grammar,
    Negation,
    Terminal,
    Variable,
    normalize,
)


def random_expr(rng: random.Random, names, alphabet: str, depth: int, boolean: bool = True) -> Expr:
    leaf_only = depth <= 0
    kinds = ["term", "term", "var", "var", "eps"]
    if not leaf_only:
        kinds += ["cat", "cat", "or"]
        if boolean:
            kinds += ["not", "and"]
    kind = rng.choice(kinds)
    if kind == "term":
        return Terminal(rng.choice(alphabet))
    if kind == "var":
        return Variable(rng.choice(names))
    if kind == "eps":
        return Epsilon()
    if kind == "not":
        return Negation(random_expr(rng, names, alphabet, depth - 1, boolean))
    n = rng.choice((2, 2, 2, 3))
    kids = [random_expr(rng, names, alphabet, depth - 1, boolean) for _ in range(n)]
    return {"cat": Concatenation, "or": Disjunction, "and": Conjunction}[kind](kids)


def random_grammar(seed: int, n_vars: int = 3, alphabet: str = "ab", depth: int = 3,
                   boolean: bool = True) -> Grammar:
    """A normalized, well-formed grammar over ``alphabet``.

    With ``boolean=False`` the bodies use only terminals, ``eps``,
    variables, disjunction and concatenation.
    """
    rng = random.Random(seed)
    names = [f"V{i}" for i in range(n_vars)]
    rules = []
    for name in names:
        body = normalize(random_expr(rng, names, alphabet, rng.randint(1, depth), boolean))
        rules.append((name, body))
    return Grammar.from_rules(rules, start=names[0], alphabet=alphabet)
