"""Boolean grammars: expression trees, the text format, normalization.

Grammar file format::

    # ww over {a, b}
    S -> !(A | B | A B | B A) ;
    A -> C A C | "a" ;
    B -> C B C | "b" ;
    C -> "a" | "b" ;

``|`` is disjunction, ``&`` conjunction, juxtaposition concatenation and
``!`` negation, binding in the order ``! > concat > & > |``.  ``eps`` is the
empty word, quoted strings are terminals (a multi-character string is the
concatenation of its characters), bare identifiers are variables.  Two
optional directives are accepted anywhere: ``%start NAME ;`` picks the start
variable (default: head of the first rule) and ``%alphabet "chars" ;`` adds
letters to the terminal alphabet beyond those used in rule bodies.

Expression nodes compare by identity.  Two ``"a"`` terminals in different
places are different nodes; use :func:`structure` for structural equality.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence


class GrammarError(Exception):
    """A grammar failed to parse or to validate."""

    def __init__(self, message: str, diagnostics: Sequence["Diagnostic"] = (), line=None, column=None):
        super().__init__(message)
        self.diagnostics = list(diagnostics)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


# ---------------------------------------------------------------------------
# Expressions


class Expr:
    __slots__ = ()
    kind = "expr"

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {render_expr(self)}>"


class Epsilon(Expr):
    __slots__ = ()
    kind = "eps"


class Terminal(Expr):
    __slots__ = ("symbol",)
    kind = "term"

    def __init__(self, symbol: str):
        if len(symbol) != 1:
            raise ValueError(f"terminals are single characters, got {symbol!r}")
        self.symbol = symbol


class Variable(Expr):
    __slots__ = ("name",)
    kind = "var"

    def __init__(self, name: str):
        self.name = name


class Negation(Expr):
    __slots__ = ("child",)
    kind = "not"

    def __init__(self, child: Expr):
        self.child = child


class _Nary(Expr):
    __slots__ = ("children",)

    def __init__(self, children: Sequence[Expr]):
        self.children = tuple(children)


class Disjunction(_Nary):
    __slots__ = ()
    kind = "or"


class Conjunction(_Nary):
    __slots__ = ()
    kind = "and"


class Concatenation(_Nary):
    __slots__ = ()
    kind = "cat"


def children_of(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, Negation):
        return (e.child,)
    if isinstance(e, _Nary):
        return e.children
    return ()


def structure(e: Expr):
    """Nested-tuple form of ``e``; equal iff the trees are structurally equal."""
    if isinstance(e, Terminal):
        return ("term", e.symbol)
    if isinstance(e, Variable):
        return ("var", e.name)
    if isinstance(e, Epsilon):
        return ("eps",)
    return (e.kind, *(structure(c) for c in children_of(e)))


def walk(e: Expr) -> Iterator[Expr]:
    yield e
    for c in children_of(e):
        yield from walk(c)


def normalize(e: Expr) -> Expr:
    """Flatten nested same-kind n-ary nodes, drop double negations and
    collapse single-child n-ary nodes.  Always returns a fresh tree."""
    if isinstance(e, Negation):
        inner = normalize(e.child)
        if isinstance(inner, Negation):
            return inner.child
        return Negation(inner)
    if isinstance(e, _Nary):
        flat: list[Expr] = []
        for c in e.children:
            c = normalize(c)
            if type(c) is type(e):
                flat.extend(c.children)
            else:
                flat.append(c)
        if not flat:
            raise ValueError(f"empty {e.kind} expression")
        if len(flat) == 1:
            return flat[0]
        return type(e)(flat)
    if isinstance(e, Terminal):
        return Terminal(e.symbol)
    if isinstance(e, Variable):
        return Variable(e.name)
    return Epsilon()


def is_normal(e: Expr) -> bool:
    for node in walk(e):
        kids = children_of(node)
        if isinstance(node, _Nary) and len(kids) < 2:
            return False
        if isinstance(node, (Negation, _Nary)) and any(type(c) is type(node) for c in kids):
            return False
    return True


# precedence levels for rendering: higher binds tighter
_PREC = {"or": 0, "and": 1, "cat": 2, "not": 3}


def render_expr(e: Expr, parent_prec: int = -1) -> str:
    if isinstance(e, Epsilon):
        return "eps"
    if isinstance(e, Terminal):
        return '"\\""' if e.symbol == '"' else ('"\\\\"' if e.symbol == "\\" else f'"{e.symbol}"')
    if isinstance(e, Variable):
        return e.name
    prec = _PREC[e.kind]
    if isinstance(e, Negation):
        text = "!" + render_expr(e.child, prec)
    else:
        sep = {"or": " | ", "and": " & ", "cat": " "}[e.kind]
        text = sep.join(render_expr(c, prec) for c in e.children)
    if prec <= parent_prec:
        return f"({text})"
    return text


# ---------------------------------------------------------------------------
# Grammars


@dataclass(frozen=True)
class Rule:
    head: str
    body: Expr


class NodeTable:
    """Every expression node of a grammar numbered in rule order, plus a
    synthetic reference to the start variable (the ``±S`` seed items)."""

    def __init__(self, grammar: "Grammar"):
        self.nodes: list[Expr] = []
        self.index: dict[Expr, int] = {}
        self.body: dict[str, int] = {}
        for rule in grammar.rules:
            self.body[rule.head] = self._add(rule.body)
        self.start = self._add(Variable(grammar.start))
        n = len(self.nodes)
        self.kind = [node.kind for node in self.nodes]
        self.children: list[tuple[int, ...]] = [
            tuple(self.index[c] for c in children_of(node)) for node in self.nodes
        ]
        self.target = [self.body[node.name] if isinstance(node, Variable) else -1 for node in self.nodes]
        self.symbol = [node.symbol if isinstance(node, Terminal) else None for node in self.nodes]
        # (concatenation id, 0-based position) for every concatenation child
        self.concat_slot: list[tuple[int, int] | None] = [None] * n
        for i, node in enumerate(self.nodes):
            if isinstance(node, Concatenation):
                for pos, c in enumerate(self.children[i]):
                    self.concat_slot[c] = (i, pos)

    def _add(self, e: Expr) -> int:
        if e in self.index:
            raise GrammarError("expression node shared between two positions")
        idx = len(self.nodes)
        self.nodes.append(e)
        self.index[e] = idx
        for c in children_of(e):
            self._add(c)
        return idx

    def __len__(self) -> int:
        return len(self.nodes)

    def render(self, i: int) -> str:
        return render_expr(self.nodes[i])


@dataclass
class Grammar:
    """``⟨V, Σ, P⟩`` plus a start variable.  Treated as immutable once built."""

    rules: tuple[Rule, ...]
    start: str
    alphabet: tuple[str, ...] = ()
    declared_alphabet: tuple[str, ...] = field(default=(), compare=False)

    @classmethod
    def from_rules(cls, rules, start: str | None = None, alphabet: str | Sequence[str] = "") -> "Grammar":
        """Build and validate a grammar from ``(head, body)`` pairs."""
        rules = tuple(r if isinstance(r, Rule) else Rule(r[0], normalize(r[1])) for r in rules)
        if not rules:
            raise GrammarError("grammar has no rules", [Diagnostic("empty", "grammar has no rules")])
        g = cls(rules, start or rules[0].head, (), tuple(alphabet))
        g.alphabet = g._collect_alphabet()
        problems = validate(g)
        if problems:
            raise GrammarError("grammar is not well-formed", problems)
        return g

    def _collect_alphabet(self) -> tuple[str, ...]:
        seen = dict.fromkeys(self.declared_alphabet)
        for rule in self.rules:
            for node in walk(rule.body):
                if isinstance(node, Terminal):
                    seen.setdefault(node.symbol)
        return tuple(seen)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(r.head for r in self.rules))

    def rule(self, head: str) -> Rule:
        for r in self.rules:
            if r.head == head:
                return r
        raise KeyError(head)

    def body(self, head: str) -> Expr:
        return self.rule(head).body

    @property
    def symbols(self) -> tuple[str, ...]:
        """``Γ = V ∪ Σ ∪ {ε}``, with ε spelled ``""``."""
        return (*self.variables, *self.alphabet, "")

    @cached_property
    def table(self) -> NodeTable:
        return NodeTable(self)

    def is_context_free(self) -> bool:
        return all(
            not isinstance(node, (Negation, Conjunction))
            for r in self.rules for node in walk(r.body)
        )

    def with_start(self, start: str) -> "Grammar":
        return Grammar(self.rules, start, self.alphabet, self.declared_alphabet)

    def render(self) -> str:
        lines = []
        if self.start != self.rules[0].head:
            lines.append(f"%start {self.start} ;")
        used = {n.symbol for r in self.rules for n in walk(r.body) if isinstance(n, Terminal)}
        if any(c not in used for c in self.alphabet):
            letters = "".join(self.alphabet).replace("\\", "\\\\").replace('"', '\\"')
            lines.append(f'%alphabet "{letters}" ;')
        lines.extend(f"{r.head} -> {render_expr(r.body)} ;" for r in self.rules)
        return "\n".join(lines) + "\n"


def validate(g: Grammar) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    if not g.rules:
        return [Diagnostic("empty", "grammar has no rules")]
    heads: set[str] = set()
    for r in g.rules:
        if r.head in heads:
            out.append(Diagnostic("duplicate-head", f"more than one rule for {r.head}"))
        heads.add(r.head)
        if r.head == "eps":
            out.append(Diagnostic("reserved", "'eps' cannot be a variable"))
    for r in g.rules:
        for node in walk(r.body):
            if isinstance(node, Variable) and node.name not in heads:
                out.append(Diagnostic("undefined", f"{node.name} is used in the rule for {r.head} but never defined"))
        if not is_normal(r.body):
            out.append(Diagnostic("not-normal", f"body of {r.head} is not in normal form"))
    if g.start not in heads:
        out.append(Diagnostic("undefined-start", f"start symbol {g.start} has no rule"))
    for c in g.alphabet:
        if len(c) != 1:
            out.append(Diagnostic("alphabet", f"alphabet symbol {c!r} is not a single character"))
        if c in heads:
            out.append(Diagnostic("alphabet", f"{c!r} is both a variable and a terminal"))
    return out


# ---------------------------------------------------------------------------
# Text format

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<arrow>->)
  | (?P<directive>%[A-Za-z_]+)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>[|&!;()])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            col = pos - line_start + 1
            raise GrammarError(f"line {line}, column {col}: unexpected character {text[pos]!r}", line=line, column=col)
        kind = m.lastgroup
        value = m.group()
        if kind != "ws":
            toks.append(_Tok(kind if kind != "op" else value, value, line, pos - line_start + 1))
        for i, ch in enumerate(value):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


def _unquote(s: str) -> str:
    return re.sub(r"\\(.)", r"\1", s[1:-1])


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message: str):
        t = self.tok
        where = "end of input" if t.kind == "eof" else repr(t.text)
        raise GrammarError(f"line {t.line}, column {t.col}: {message} (at {where})", line=t.line, column=t.col)

    def expect(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            self.error(f"expected {kind!r}")
        t = self.tok
        self.i += 1
        return t

    def grammar(self):
        rules, start, alphabet = [], None, ""
        while self.tok.kind != "eof":
            if self.tok.kind == "directive":
                name = self.tok.text
                self.i += 1
                if name == "%start":
                    start = self.expect("ident").text
                elif name == "%alphabet":
                    alphabet += _unquote(self.expect("string").text)
                else:
                    self.i -= 1
                    self.error(f"unknown directive {name}")
                self.expect(";")
                continue
            head = self.expect("ident")
            if head.text == "eps":
                self.i -= 1
                self.error("'eps' cannot be a rule head")
            self.expect("arrow")
            body = self.disjunction()
            self.expect(";")
            rules.append((head.text, body))
        return rules, start, alphabet

    def disjunction(self) -> Expr:
        parts = [self.conjunction()]
        while self.tok.kind == "|":
            self.i += 1
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else Disjunction(parts)

    def conjunction(self) -> Expr:
        parts = [self.concatenation()]
        while self.tok.kind == "&":
            self.i += 1
            parts.append(self.concatenation())
        return parts[0] if len(parts) == 1 else Conjunction(parts)

    def concatenation(self) -> Expr:
        parts = [self.unary()]
        while self.tok.kind in ("!", "(", "ident", "string"):
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else Concatenation(parts)

    def unary(self) -> Expr:
        t = self.tok
        if t.kind == "!":
            self.i += 1
            return Negation(self.unary())
        if t.kind == "(":
            self.i += 1
            e = self.disjunction()
            self.expect(")")
            return e
        if t.kind == "ident":
            self.i += 1
            return Epsilon() if t.text == "eps" else Variable(t.text)
        if t.kind == "string":
            self.i += 1
            chars = _unquote(t.text)
            if not chars:
                return Epsilon()
            if len(chars) == 1:
                return Terminal(chars)
            return Concatenation([Terminal(c) for c in chars])
        self.error("expected an expression")


def parse_grammar(text: str) -> Grammar:
    """Parse, normalize and validate grammar source text."""
    rules, start, alphabet = _Parser(text).grammar()
    if not rules:
        raise GrammarError("grammar has no rules", [Diagnostic("empty", "grammar has no rules")])
    return Grammar.from_rules(rules, start=start, alphabet=alphabet)


def load_grammar(path) -> Grammar:
    with open(path, encoding="utf-8") as fh:
        return parse_grammar(fh.read())
