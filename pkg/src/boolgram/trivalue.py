"""Kleene's strong three-valued logic and brute-force three-valued languages.

Truth values are ordered two ways.  The *truth* order ``FALSE < UNKNOWN <
TRUE`` drives the connectives; the *certainty* order puts ``UNKNOWN`` below
both determinate values, which are themselves incomparable.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence


class TruthValue(enum.Enum):
    TRUE = "+"
    FALSE = "-"
    UNKNOWN = "~"

    @property
    def glyph(self) -> str:
        return self.value

    @classmethod
    def from_glyph(cls, glyph: str) -> "TruthValue":
        return cls(glyph)

    @property
    def determinate(self) -> bool:
        return self is not TruthValue.UNKNOWN

    def __str__(self) -> str:
        return self.value


TRUE = TruthValue.TRUE
FALSE = TruthValue.FALSE
UNKNOWN = TruthValue.UNKNOWN

# position in the truth order, used by the min/max folds below
_RANK = {FALSE: 0, UNKNOWN: 1, TRUE: 2}


class InconsistencyError(Exception):
    """Raised when two determinate, contradictory values meet."""


def neg(v: TruthValue) -> TruthValue:
    if v is TRUE:
        return FALSE
    if v is FALSE:
        return TRUE
    return UNKNOWN


def conj(vs: Iterable[TruthValue]) -> TruthValue:
    result = TRUE
    for v in vs:
        if v is FALSE:
            return FALSE
        if v is UNKNOWN:
            result = UNKNOWN
    return result


def disj(vs: Iterable[TruthValue]) -> TruthValue:
    result = FALSE
    for v in vs:
        if v is TRUE:
            return TRUE
        if v is UNKNOWN:
            result = UNKNOWN
    return result


def leq_certainty(a: TruthValue, b: TruthValue) -> bool:
    """``a`` is no more certain than ``b``."""
    return a is b or a is UNKNOWN


def sup(a: TruthValue, b: TruthValue) -> TruthValue:
    """Least upper bound in the certainty order.

    ``TRUE`` and ``FALSE`` have no upper bound; meeting them together means
    a supposedly monotone computation retracted a conclusion.
    """
    if leq_certainty(a, b):
        return b
    if leq_certainty(b, a):
        return a
    raise InconsistencyError(f"no supremum for {a.glyph} and {b.glyph}")


def truth_rank(v: TruthValue) -> int:
    return _RANK[v]


class Atom(NamedTuple):
    """``symbol(word)``: membership of ``word`` in the language of ``symbol``."""

    symbol: str
    word: str


# Atom -> TruthValue, total over whatever atom domain the caller declares
Valuation = dict


def valuation_leq(lo: Mapping[Atom, TruthValue], hi: Mapping[Atom, TruthValue]) -> bool:
    """Pointwise certainty order over the atoms of ``lo``."""
    return all(leq_certainty(v, hi[a]) for a, v in lo.items())


# ---------------------------------------------------------------------------
# Finite samples of three-valued languages


@dataclass(frozen=True)
class LanguageSample:
    """Characteristic function of a three-valued language, known up to ``bound``.

    Words of length at most ``bound`` that are missing from ``characteristic``
    map to ``default``.  Asking about a longer word is an error rather than
    an indeterminate answer.
    """

    alphabet: str
    bound: int
    characteristic: Mapping[str, TruthValue] = field(default_factory=dict)
    default: TruthValue = FALSE

    def __post_init__(self):
        for w in self.characteristic:
            if len(w) > self.bound:
                raise ValueError(f"word {w!r} exceeds sample bound {self.bound}")
            if any(c not in self.alphabet for c in w):
                raise ValueError(f"word {w!r} is not over {self.alphabet!r}")

    def __call__(self, w: str) -> TruthValue:
        if len(w) > self.bound:
            raise ValueError(f"word {w!r} is outside the sample bound {self.bound}")
        return self.characteristic.get(w, self.default)

    def words(self) -> Iterable[str]:
        return all_words(self.alphabet, self.bound)

    @property
    def included(self) -> frozenset[str]:
        return frozenset(w for w in self.words() if self(w) is TRUE)

    @property
    def excluded(self) -> frozenset[str]:
        return frozenset(w for w in self.words() if self(w) is FALSE)

    @classmethod
    def from_function(cls, alphabet: str, bound: int, fn) -> "LanguageSample":
        return cls(alphabet, bound, {w: fn(w) for w in all_words(alphabet, bound)})


def all_words(alphabet: str, max_len: int, min_len: int = 0) -> Iterable[str]:
    """Every word over ``alphabet`` by length, then lexicographically."""
    for n in range(min_len, max_len + 1):
        for letters in itertools.product(alphabet, repeat=n):
            yield "".join(letters)


def partitions(w: str, n: int) -> Iterable[tuple[str, ...]]:
    """All ``n``-partitions ``w = w_1 ... w_n`` (parts may be empty)."""
    for cuts in itertools.combinations_with_replacement(range(len(w) + 1), n - 1):
        bounds = (0, *cuts, len(w))
        yield tuple(w[bounds[i]:bounds[i + 1]] for i in range(n))


def _check_bound(langs: Sequence[LanguageSample], w: str) -> None:
    for lang in langs:
        if len(w) > lang.bound:
            raise ValueError(f"word {w!r} is outside the sample bound {lang.bound}")


def complement_characteristic(lang: LanguageSample, w: str) -> TruthValue:
    return neg(lang(w))


def union_characteristic(langs: Sequence[LanguageSample], w: str) -> TruthValue:
    _check_bound(langs, w)
    return disj(lang(w) for lang in langs)


def intersection_characteristic(langs: Sequence[LanguageSample], w: str) -> TruthValue:
    _check_bound(langs, w)
    return conj(lang(w) for lang in langs)


def concat_characteristic(langs: Sequence[LanguageSample], w: str) -> TruthValue:
    """Disjunction over every partition of ``w`` of the conjunction of the parts."""
    _check_bound(langs, w)
    if not langs:
        return TRUE if w == "" else FALSE
    return disj(
        conj(lang(part) for lang, part in zip(langs, parts))
        for parts in partitions(w, len(langs))
    )
