"""Command-line front end.

    boolgram --grammar ww.bg check abab aab %eps
    boolgram --grammar ww.bg diff --max-len 6
    boolgram --grammar ww.bg dump automaton --format dot
    boolgram --grammar ww.bg bench --lengths 8,16,32,64,128 --plot bench.png

Exit status: 0 ok, 1 I/O or bad input, 2 grammar error, 3 the two engines
disagree.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import oracle
from .automaton import to_dot
from .bench import run_bench, slopes
from .differential import MAX_LEN_CAP, diff_grammar
from .grammar import GrammarError, load_grammar
from .gss import Recognizer, gss_to_dot
from .nullability import compute_nullability

EXIT_OK, EXIT_IO, EXIT_GRAMMAR, EXIT_MISMATCH = 0, 1, 2, 3

EMPTY_WORD = "%eps"


class CliError(Exception):
    def __init__(self, message: str, status: int):
        super().__init__(message)
        self.status = status


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    def default(value):
        return argparse.SUPPRESS if suppress else value

    p.add_argument("--grammar", "-g", metavar="PATH", default=default(None), help="grammar file")
    p.add_argument("--engine", choices=("oracle", "glr", "both"), default=default("glr"))
    p.add_argument("--format", dest="fmt", choices=("plain", "tsv", "json-lines", "dot"), default=default("plain"))
    p.add_argument("--max-len", type=int, default=default(6), help=f"exhaustive length bound (at most {MAX_LEN_CAP})")
    p.add_argument("--seed", type=int, default=default(0))
    p.add_argument("--prefixes", action="store_true", default=default(False), help="also print a verdict per prefix")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="boolgram", description=__doc__.split("\n\n")[0])
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="classify words")
    _global_flags(check, suppress=True)
    check.add_argument("words", nargs="*", help=f"words to classify ({EMPTY_WORD} is the empty word)")
    check.add_argument("--input", "-i", metavar="FILE", help="read words from FILE, one per line ('-' for stdin)")

    diff = sub.add_parser("diff", help="compare the two engines on every word up to --max-len")
    _global_flags(diff, suppress=True)
    diff.add_argument("--jobs", "-j", type=int, default=1)

    dump = sub.add_parser("dump", help="print the automaton, nullability, a parse stack or a fixpoint trace")
    _global_flags(dump, suppress=True)
    dump.add_argument("what", choices=("automaton", "nullability", "gss", "trace"))
    dump.add_argument("word", nargs="?", help="input word (for gss and trace)")

    bench = sub.add_parser("bench", help="time the parser on random words of growing length")
    _global_flags(bench, suppress=True)
    bench.add_argument("--lengths", default="8,16,32,64,128", help="comma-separated word lengths")
    bench.add_argument("--plot", metavar="PATH", help="also render a log-log figure to PATH")
    return parser


def _load(args):
    if not args.grammar:
        raise CliError("no grammar given (use --grammar PATH)", EXIT_IO)
    try:
        return load_grammar(args.grammar)
    except OSError as exc:
        raise CliError(f"cannot read grammar: {exc}", EXIT_IO) from exc
    except GrammarError as exc:
        lines = [f"{args.grammar}: {exc}"] + [f"  {d}" for d in exc.diagnostics]
        raise CliError("\n".join(lines), EXIT_GRAMMAR) from exc


def _read_words(args) -> list[str]:
    words = list(args.words)
    if args.input:
        try:
            if args.input == "-":
                text = sys.stdin.read()
            else:
                with open(args.input, encoding="utf-8") as fh:
                    text = fh.read()
        except OSError as exc:
            raise CliError(f"cannot read words: {exc}", EXIT_IO) from exc
        words.extend(line.strip() for line in text.splitlines() if line.strip())
    elif not words and not sys.stdin.isatty():
        words.extend(line.strip() for line in sys.stdin.read().splitlines() if line.strip())
    return ["" if w == EMPTY_WORD else w for w in words]


def _show(w: str) -> str:
    return w if w else EMPTY_WORD


def _classify(args, g, rec, w: str):
    alphabet = "".join(g.alphabet)
    bad = [c for c in w if c not in alphabet]
    if bad:
        raise CliError(f"word {w!r} uses {bad[0]!r}, which is not in the alphabet {alphabet!r}", EXIT_IO)
    if args.engine == "oracle":
        return oracle.classify_prefixes(g, w)
    values = rec.parse(w).prefix_values()
    if args.engine == "both":
        expected = oracle.classify_prefixes(g, w)
        if expected != values:
            o = "".join(v.glyph for v in expected)
            p = "".join(v.glyph for v in values)
            raise CliError(f"engines disagree on {_show(w)}: oracle={o} glr={p}", EXIT_MISMATCH)
    return values


def cmd_check(args, out) -> int:
    g = _load(args)
    rec = Recognizer(g) if args.engine != "oracle" else None
    for w in _read_words(args):
        values = _classify(args, g, rec, w)
        verdict = values[-1].glyph
        prefixes = "".join(v.glyph for v in values)
        if args.fmt == "json-lines":
            record = {"word": w, "verdict": verdict}
            if args.prefixes:
                record["prefixes"] = [v.glyph for v in values]
            print(json.dumps(record), file=out)
        elif args.prefixes:
            print(f"{_show(w)}\t{verdict}\t{prefixes}", file=out)
        else:
            print(f"{_show(w)}\t{verdict}", file=out)
    return EXIT_OK


def cmd_diff(args, out) -> int:
    g = _load(args)
    if args.max_len > MAX_LEN_CAP:
        raise CliError(f"--max-len is capped at {MAX_LEN_CAP}", EXIT_IO)
    report = diff_grammar(g, args.max_len, jobs=args.jobs)
    for m in report.mismatches:
        if args.fmt == "json-lines":
            print(json.dumps({
                "word": m.word,
                "oracle": [v.glyph for v in m.oracle],
                "glr": [v.glyph for v in m.parser],
            }), file=out)
        else:
            print(f"mismatch\t{m}", file=out)
    print(f"# words {report.words}\tmismatches {len(report.mismatches)}", file=out)
    return EXIT_OK if report.ok else EXIT_MISMATCH


def cmd_dump(args, out) -> int:
    g = _load(args)
    if args.what == "nullability":
        m = compute_nullability(g)
        for x in g.variables:
            print(f"{x}\t{m.variables[x].glyph}", file=out)
        return EXIT_OK
    rec = Recognizer(g) if args.what != "trace" else None
    if args.what == "automaton":
        a = rec.automaton
        if args.fmt == "dot":
            out.write(to_dot(a))
        else:
            for st in a.states:
                print(f"state {st.id}", file=out)
                for it in st.items:
                    tag = "kernel" if it in st.kernel else "derived"
                    print(f"  {a.item_text(it)}\t{tag}", file=out)
                for label, target in st.transitions.items():
                    opt = "\toptional" if label in st.optional_labels else ""
                    print(f"  {a.label_text(label)} -> {target}{opt}", file=out)
        return EXIT_OK
    if args.word is None:
        raise CliError(f"dump {args.what} needs a word", EXIT_IO)
    w = "" if args.word == EMPTY_WORD else args.word
    _classify(argparse.Namespace(engine="oracle"), g, None, w)
    if args.what == "trace":
        trace = oracle.FixpointTrace()
        oracle.entailment_model(g, w, trace=trace)
        by_sweep: dict[int, list[str]] = {}
        for n, atom, value in trace.changes():
            by_sweep.setdefault(n, []).append(f"{atom.symbol}({_show(atom.word)})={value.glyph}")
        for n in range(1, len(trace.iterations)):
            print(f"sweep {n}\t{' '.join(by_sweep.get(n, []))}".rstrip(), file=out)
        return EXIT_OK
    result = rec.parse(w, keep_gss=True)
    out.write(gss_to_dot(rec.automaton, result))
    return EXIT_OK


def cmd_bench(args, out) -> int:
    g = _load(args)
    try:
        lengths = [int(x) for x in args.lengths.split(",") if x.strip()]
    except ValueError as exc:
        raise CliError(f"bad --lengths: {args.lengths}", EXIT_IO) from exc
    rows = run_bench(Recognizer(g), lengths, seed=args.seed)
    print("length\tnodes\tedges\tnanos", file=out)
    for r in rows:
        print(f"{r.length}\t{r.nodes}\t{r.edges}\t{r.nanos}", file=out)
    fitted = slopes(rows)
    if fitted:
        print(f"# slope edges {fitted['edges']:.3f}", file=out)
        print(f"# slope time {fitted['time']:.3f}", file=out)
    if args.plot:
        from .plotting import plot_bench

        try:
            plot_bench(rows, args.plot, title=args.grammar)
        except OSError as exc:
            raise CliError(f"cannot write {args.plot}: {exc}", EXIT_IO) from exc
    return EXIT_OK


COMMANDS = {"check": cmd_check, "diff": cmd_diff, "dump": cmd_dump, "bench": cmd_bench}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except CliError as exc:
        print(f"boolgram: {exc}", file=sys.stderr)
        return exc.status


if __name__ == "__main__":
    sys.exit(main())
