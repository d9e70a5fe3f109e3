"""Run the oracle and the parser side by side on every short word."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .grammar import Grammar
from .gss import Recognizer
from .oracle import classify_prefixes
from .trivalue import TruthValue, all_words

MAX_LEN_CAP = 10


@dataclass(frozen=True)
class Mismatch:
    word: str
    oracle: tuple[TruthValue, ...]
    parser: tuple[TruthValue, ...]

    def __str__(self) -> str:
        o = "".join(v.glyph for v in self.oracle)
        p = "".join(v.glyph for v in self.parser)
        return f"{self.word or '%eps'}\toracle={o}\tglr={p}"


@dataclass
class DiffReport:
    words: int = 0
    mismatches: list[Mismatch] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def compare_word(g: Grammar, rec: Recognizer, w: str) -> Mismatch | None:
    """``None`` when both engines agree on every prefix of ``w``."""
    oracle = tuple(classify_prefixes(g, w))
    parser = tuple(rec.parse(w).prefix_values())
    if oracle != parser:
        return Mismatch(w, oracle, parser)
    return None


def _compare_chunk(args):
    g, words = args
    rec = Recognizer(g)
    return [compare_word(g, rec, w) for w in words]


def diff_grammar(g: Grammar, max_len: int, jobs: int = 1, recognizer: Recognizer | None = None) -> DiffReport:
    if max_len > MAX_LEN_CAP:
        raise ValueError(f"--max-len is capped at {MAX_LEN_CAP}")
    words = list(all_words("".join(g.alphabet), max_len))
    report = DiffReport(words=len(words))
    if jobs <= 1 or recognizer is not None:
        rec = recognizer or Recognizer(g)
        results = [compare_word(g, rec, w) for w in words]
    else:
        chunks = [words[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_compare_chunk, [(g, c) for c in chunks]))
        by_word = {}
        for chunk, res in zip(chunks, parts):
            by_word.update(zip(chunk, res))
        results = [by_word[w] for w in words]
    report.mismatches = [m for m in results if m is not None]
    return report
