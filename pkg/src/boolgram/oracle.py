"""Reference semantics: the entailment model of a grammar on one word.

Each grammar rule ``X -> body`` stands for the ground logic rules
``X(v) <- body evaluated on v`` for every word ``v``; terminals and ``eps``
are facts (``t(v)`` holds iff ``v == t``).  Starting from the valuation
where every variable atom is unknown, the rules are applied to all atoms
at once until nothing changes.  Only substrings of the input word are ever
needed, since an atom depends on atoms over its own substrings.

Concatenation bodies are evaluated by literally enumerating every
partition; this module is the ground truth for the parser and deliberately
shares no machinery with it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

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
)
from .trivalue import (
    FALSE,
    TRUE,
    UNKNOWN,
    Atom,
    InconsistencyError,
    TruthValue,
    Valuation,
    conj,
    disj,
    leq_certainty,
    neg,
)


class ConvergenceError(Exception):
    """The Φ iteration broke one of its guaranteed properties."""


def substrings(w: str) -> list[str]:
    """Distinct substrings of ``w`` (``""`` included), shortest first."""
    seen = dict.fromkeys([""])
    for n in range(1, len(w) + 1):
        for i in range(len(w) - n + 1):
            seen.setdefault(w[i:i + n])
    return list(seen)


@dataclass
class AtomTable:
    word: str
    words: list[str]
    symbols: tuple[str, ...]

    @classmethod
    def for_word(cls, g: Grammar, w: str, extra: tuple[str, ...] = ()) -> "AtomTable":
        words = substrings(w)
        for x in extra:
            for v in substrings(x):
                if v not in words:
                    words.append(v)
        return cls(w, words, g.symbols)

    def __len__(self) -> int:
        return len(self.words) * len(self.symbols)

    @property
    def bound(self) -> int:
        n = len(self.word)
        return (1 + n * (n + 1) // 2) * len(self.symbols)


@dataclass
class FixpointTrace:
    iterations: list[Valuation] = field(default_factory=list)
    converged: bool = False

    def changes(self):
        """``(sweep number, atom, new value)`` for every atom that moved."""
        for n, (before, after) in enumerate(zip(self.iterations, self.iterations[1:]), start=1):
            for atom, value in after.items():
                if before[atom] is not value:
                    yield n, atom, value


def _fact(symbol: str, v: str) -> TruthValue:
    return TRUE if symbol == v else FALSE


def null_valuation(g: Grammar, table: AtomTable) -> Valuation:
    """Variables unknown, terminal and ``eps`` atoms at their fixed values."""
    I: Valuation = {}
    for v in table.words:
        for x in g.variables:
            I[Atom(x, v)] = UNKNOWN
        for t in g.alphabet:
            I[Atom(t, v)] = _fact(t, v)
        I[Atom("", v)] = _fact("", v)
    return I


def eval_body(g: Grammar, e: Expr, w: str, I: Valuation, memo: dict | None = None) -> TruthValue:
    """Value of ``e`` on the word ``w`` when variable atoms read from ``I``."""
    if memo is not None:
        key = (id(e), w)
        hit = memo.get(key)
        if hit is not None:
            return hit
    if isinstance(e, Epsilon):
        value = _fact("", w)
    elif isinstance(e, Terminal):
        value = _fact(e.symbol, w)
    elif isinstance(e, Variable):
        try:
            value = I[Atom(e.name, w)]
        except KeyError:
            raise KeyError(f"atom {e.name}({w!r}) is outside the valuation") from None
    elif isinstance(e, Negation):
        value = neg(eval_body(g, e.child, w, I, memo))
    elif isinstance(e, Disjunction):
        value = disj(eval_body(g, c, w, I, memo) for c in e.children)
    elif isinstance(e, Conjunction):
        value = conj(eval_body(g, c, w, I, memo) for c in e.children)
    elif isinstance(e, Concatenation):
        n = len(e.children)
        value = FALSE
        for cuts in itertools.combinations_with_replacement(range(len(w) + 1), n - 1):
            bounds = (0, *cuts, len(w))
            part = conj(
                eval_body(g, c, w[bounds[i]:bounds[i + 1]], I, memo)
                for i, c in enumerate(e.children)
            )
            if part is TRUE:
                value = TRUE
                break
            if part is UNKNOWN:
                value = UNKNOWN
    else:
        raise TypeError(f"not a grammar expression: {e!r}")
    if memo is not None:
        memo[key] = value
    return value


def step_phi(g: Grammar, words, I: Valuation) -> Valuation:
    """One synchronous application of every rule to every variable atom."""
    memo: dict = {}
    out = dict(I)
    for x in g.variables:
        body = g.body(x)
        for v in words:
            out[Atom(x, v)] = eval_body(g, body, v, I, memo)
    return out


def entailment_model(g: Grammar, w: str, trace: FixpointTrace | None = None,
                     table: AtomTable | None = None) -> Valuation:
    """Least fixpoint (in the certainty order) of :func:`step_phi` over the
    substrings of ``w``.

    Every sweep is checked against the previous one: an atom may only go
    from unknown to determinate, and the number of sweeps is capped at
    ``2·|atoms| + 2``.  Breaking either is a :class:`ConvergenceError`.
    """
    table = table or AtomTable.for_word(g, w)
    I = null_valuation(g, table)
    if trace is not None:
        trace.iterations.append(I)
    limit = 2 * len(table) + 2
    for _ in range(limit):
        nxt = step_phi(g, table.words, I)
        for atom, value in nxt.items():
            if not leq_certainty(I[atom], value):
                raise ConvergenceError(f"{atom} moved from {I[atom].glyph} to {value.glyph}")
        if trace is not None:
            trace.iterations.append(nxt)
        if nxt == I:
            if trace is not None:
                trace.converged = True
            return I
        I = nxt
    raise ConvergenceError(f"no fixpoint after {limit} sweeps")


def check_model(g: Grammar, I: Valuation, words) -> list[Atom]:
    """Variable atoms whose value differs from their re-evaluated body."""
    memo: dict = {}
    bad = []
    for x in g.variables:
        body = g.body(x)
        for v in words:
            if eval_body(g, body, v, I, memo) is not I[Atom(x, v)]:
                bad.append(Atom(x, v))
    return bad


def classify(g: Grammar, w: str, start: str | None = None) -> TruthValue:
    """Membership of ``w`` in the language of the start variable."""
    _check_word(g, w)
    return entailment_model(g, w)[Atom(start or g.start, w)]


def classify_prefixes(g: Grammar, w: str) -> list[TruthValue]:
    """Membership of every prefix ``w[:j]``, ``j = 0 .. |w|``.

    One fixpoint over the substrings of ``w`` answers all of them.
    """
    _check_word(g, w)
    model = entailment_model(g, w)
    return [model[Atom(g.start, w[:j])] for j in range(len(w) + 1)]


def _check_word(g: Grammar, w: str) -> None:
    for c in w:
        if c not in g.alphabet:
            raise ValueError(f"symbol {c!r} is not in the alphabet {''.join(g.alphabet)!r}")


def sup_valuations(a: Valuation, b: Valuation) -> Valuation:
    """Atomwise supremum; only defined when the two never contradict."""
    out = dict(a)
    for atom, value in b.items():
        old = out.get(atom, UNKNOWN)
        if old is UNKNOWN:
            out[atom] = value
        elif value is not UNKNOWN and value is not old:
            raise InconsistencyError(f"{atom}: {old.glyph} vs {value.glyph}")
    return out
