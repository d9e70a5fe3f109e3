"""GLR-style recognizer over a graph-structured stack.

The input is scanned left to right.  Generation ``U_j`` holds at most one
node per automaton state; an edge from a node in ``U_j`` back to a node in
``U_i`` labeled ``±φ`` records that ``φ`` was proven (positively or
negatively) over ``w[i:j]``.  Wildcard edges stand for an arbitrary nonempty
segment skipped by a negative concatenation.  Nothing is ever removed.

Concatenations are reduced one edge at a time.  A negative concatenation
``-φ_r ... φ_n`` over ``(i, j)`` needs every split point ``k`` in ``i..j``
certified, either by ``-φ_r`` over ``(i, k)`` (a prefix proof, valid for
every later ``j``) or by ``-φ_{r+1} ... φ_n`` over ``(k, j)`` (a suffix
proof, only valid for the current ``j``).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .automaton import NEG, POS, WILDCARD, Automaton, Sign, build_automaton
from .grammar import Grammar
from .nullability import NullabilityMap, compute_nullability
from .trivalue import FALSE, TRUE, UNKNOWN, InconsistencyError, TruthValue


class ParserStateError(RuntimeError):
    """The automaton and the stack disagree; always a bug."""


class GssNode:
    __slots__ = ("state", "gen", "out", "id")

    def __init__(self, state: int, gen: int, id: int):
        self.state = state
        self.gen = gen
        self.id = id
        # label -> {target node: None}, insertion ordered
        self.out: dict = {}

    def edges(self):
        for label, targets in self.out.items():
            for target in targets:
                yield label, target

    def __repr__(self) -> str:
        return f"GssNode(s{self.state}, {self.gen})"


class _Marks:
    __slots__ = ("permanent", "transient", "gen", "count", "fired")

    def __init__(self):
        self.permanent: set = set()
        self.transient: set = set()
        self.gen = -1
        self.count = 0
        self.fired = False


@dataclass
class ParseResult:
    word: str
    verdicts: list
    nodes: int = 0
    edges: int = 0
    work: int = 0
    generations: list | None = field(default=None, repr=False)

    @property
    def final(self) -> TruthValue:
        return self.value_at(len(self.word))

    def value_at(self, j: int) -> TruthValue:
        signs = self.verdicts[j]
        if POS in signs:
            return TRUE
        if NEG in signs:
            return FALSE
        return UNKNOWN

    def prefix_values(self) -> list[TruthValue]:
        return [self.value_at(j) for j in range(len(self.word) + 1)]


class GssParser:
    """One parse of one word.  Not reusable and not thread-safe; the
    automaton it reads from is shared and never modified."""

    def __init__(self, automaton: Automaton, word: str):
        self.a = automaton
        self.states = automaton.states
        self.t = automaton.grammar.table
        self.null = automaton.nullability
        self.w = word
        for c in word:
            if c not in automaton.grammar.alphabet:
                raise ValueError(f"symbol {c!r} is not in the alphabet {''.join(automaton.grammar.alphabet)!r}")
        self.j = 0
        self.generations: list[dict] = []
        self.queue: deque = deque()
        self.seen: set = set()
        self.records: dict = {}
        self.marks: dict = {}
        self.verdicts: list[set] = []
        self.node_count = 0
        self.edge_count = 0
        self.work_count = 0

    # -- driver -----------------------------------------------------------

    def run(self) -> ParseResult:
        self.begin()
        while self.j < len(self.w):
            self.advance()
        return self.result()

    def begin(self) -> None:
        """Create the root and record the verdict on the empty prefix."""
        root = self._node(self.a.initial)
        self.root = root
        start_null = self.null.variables[self.a.grammar.start]
        self.verdicts.append({POS} if start_null is TRUE else {NEG} if start_null is FALSE else set())

    def advance(self) -> None:
        """Shift the next input symbol and reduce to a fixpoint."""
        self.j += 1
        self.generations.append({})
        self.verdicts.append(set())
        self.seen = set()
        self.shifter()
        self.reducer()

    def result(self) -> ParseResult:
        return ParseResult(
            self.w,
            [frozenset(v) for v in self.verdicts],
            self.node_count,
            self.edge_count,
            self.work_count,
            self.generations,
        )

    def _node(self, state: int) -> GssNode:
        if not self.generations:
            self.generations.append({})
        gen = self.generations[self.j]
        v = gen.get(state)
        if v is None:
            v = GssNode(state, self.j, self.node_count)
            self.node_count += 1
            gen[state] = v
        return v

    # -- scanning -----------------------------------------------------------

    def shifter(self) -> None:
        j = self.j
        c = self.w[j - 1]
        for i in range(j):
            single = i == j - 1
            for u in list(self.generations[i].values()):
                st = self.states[u.state]
                for sign, node, ch, _ in st.shifts:
                    if ch is None:
                        if sign < 0:
                            self.create_edge(u, (sign, node))
                    elif sign > 0:
                        if single and ch == c:
                            self.create_edge(u, (sign, node))
                    elif not single or ch != c:
                        self.create_edge(u, (sign, node))
                if WILDCARD in st.transitions:
                    self.create_edge(u, WILDCARD)

    def create_edge(self, u: GssNode, label) -> None:
        target = self.states[u.state].transitions.get(label)
        if target is None:
            raise ParserStateError(f"no transition on {label} from state {u.state}")
        v = self._node(target)
        targets = v.out.get(label)
        if targets is None:
            targets = v.out[label] = {}
        if u in targets:
            return
        targets[u] = None
        self.edge_count += 1
        if label != WILDCARD and label[1] == self.t.start and u is self.root:
            self._yield(Sign(label[0]))
        self._push(("E", v, label, u))

    def _yield(self, sign: Sign) -> None:
        here = self.verdicts[self.j]
        if -sign in here:
            raise InconsistencyError(f"start symbol proven both ways at position {self.j}")
        here.add(sign)

    def _push(self, work) -> None:
        if work not in self.seen:
            self.seen.add(work)
            self.queue.append(work)

    # -- reducing -----------------------------------------------------------

    def reducer(self) -> None:
        queue = self.queue
        while queue:
            work = queue.popleft()
            self.work_count += 1
            tag = work[0]
            if tag == "E":
                self._reduce_edge(work[1], work[2], work[3])
            elif tag == "P":
                self.continue_positive(work[1], work[2], work[3])
            else:
                self.continue_negative(work[1], work[2], work[3])

    def _reduce_edge(self, v: GssNode, label, u: GssNode) -> None:
        t = self.t
        suffix = self.null.suffix
        kernel = self.states[v.state].kernel
        if label == WILDCARD:
            u_items = self.states[u.state].item_set
            for sign, x, d1 in kernel:
                if sign < 0 and t.kind[x] == "cat" and suffix[(x, d1)] is FALSE and (NEG, x, d1 - 1) in u_items:
                    self._mark(u, x, d1 - 1, self.j, False)
            return
        sign, node = label
        self.finish_reduction(u, sign, node)
        slot = t.concat_slot[node]
        if slot is None:
            return
        x, d = slot
        if (sign, x, d + 1) not in kernel:
            return
        if sign > 0:
            if suffix[(x, d + 1)] is TRUE:
                self.extend_positive(u, x, d)
        elif d == len(t.children[x]) - 1:
            self._negative_proven(u, x, d)
        else:
            self._mark(u, x, d, self.j, True)

    def finish_reduction(self, u: GssNode, sign: int, node: int) -> None:
        """``node`` was proven with ``sign`` from ``u`` to the current position;
        propagate to the items that generated ``•node`` in ``u``."""
        t = self.t
        st = self.states[u.state]
        for parent in st.parents.get((sign, node, 0), ()):
            ps, px, _ = parent
            kind = t.kind[px]
            if kind == "var" or kind == "not" or (kind == "or" and ps > 0) or (kind == "and" and ps < 0):
                self.create_edge(u, (ps, px))
                continue
            key = (u, parent)
            rec = self.records.get(key)
            if rec is None or rec[0] != self.j:
                rec = self.records[key] = (self.j, set())
            rec[1].add(node)
            if len(rec[1]) == len(t.children[px]):
                self.create_edge(u, (ps, px))

    # positive concatenations

    def extend_positive(self, v: GssNode, x: int, d: int) -> None:
        """Children ``d..n-1`` of ``x`` are matched from ``v`` to here."""
        if d == 0:
            self.finish_reduction(v, POS, x)
        else:
            self._push(("P", v, x, d))

    def continue_positive(self, v: GssNode, x: int, d: int) -> None:
        prev = self.t.children[x][d - 1]
        st = self.states[v.state]
        if (POS, x, d - 1) in st.item_set and self.null.value[prev] is TRUE:
            self.extend_positive(v, x, d - 1)
        if (POS, x, d) in st.kernel:
            for target in v.out.get((POS, prev), ()):
                self.extend_positive(target, x, d - 1)

    # negative concatenations

    def _negative_proven(self, v: GssNode, x: int, d: int) -> None:
        """Children ``d..n-1`` of ``x`` are negatively proven from ``v`` to here."""
        if d == 0:
            self.finish_reduction(v, NEG, x)
        else:
            self._push(("Q", v, x, d))

    def continue_negative(self, v: GssNode, x: int, d: int) -> None:
        i = v.gen
        prev = self.t.children[x][d - 1]
        st = self.states[v.state]
        if (NEG, x, d - 1) in st.item_set:
            self._mark(v, x, d - 1, i, False)
        if (NEG, x, d) in st.kernel:
            for label in ((NEG, prev), WILDCARD):
                for target in v.out.get(label, ()):
                    if (NEG, x, d - 1) in self.states[target.state].item_set:
                        self._mark(target, x, d - 1, i, False)

    def extend_negative(self, v: GssNode, x: int, d: int, p: int, permanent: bool = False) -> None:
        self._mark(v, x, d, p, permanent)

    def _mark(self, v: GssNode, x: int, d: int, p: int, permanent: bool) -> None:
        """Certify split point ``p`` for ``-children[d:]`` of ``x`` starting at ``v``."""
        key = (v, x, d)
        mk = self.marks.get(key)
        if mk is None:
            mk = self.marks[key] = _Marks()
            if self.null.value[self.t.children[x][d]] is FALSE:
                mk.permanent.add(v.gen)
        j = self.j
        if mk.gen != j:
            mk.gen = j
            mk.transient = set()
            mk.count = len(mk.permanent)
            mk.fired = False
        if permanent:
            if p in mk.permanent:
                return
            mk.permanent.add(p)
            if p in mk.transient:
                return
        else:
            if p in mk.permanent or p in mk.transient:
                return
            mk.transient.add(p)
        mk.count += 1
        if not mk.fired and mk.count == j - v.gen + 1:
            mk.fired = True
            self._negative_proven(v, x, d)


class Recognizer:
    """Grammar, nullability and automaton bundled for repeated parsing."""

    def __init__(self, grammar: Grammar):
        self.grammar = grammar
        self.nullability: NullabilityMap = compute_nullability(grammar)
        self.automaton: Automaton = build_automaton(grammar, self.nullability)

    def parse(self, word: str, keep_gss: bool = False) -> ParseResult:
        return parse(self.automaton, word, keep_gss=keep_gss)

    def classify(self, word: str) -> TruthValue:
        return self.parse(word).final


def parse(a: Automaton, w: str, keep_gss: bool = False) -> ParseResult:
    result = GssParser(a, w).run()
    if not keep_gss:
        result.generations = None
    return result


def gss_to_dot(a: Automaton, result: ParseResult) -> str:
    """Graphviz rendering of a kept GSS, one rank per generation."""
    if result.generations is None:
        raise ValueError("parse with keep_gss=True to render the stack")
    lines = ["digraph gss {", "  rankdir=RL;", '  node [shape=ellipse, fontname="monospace"];']
    for j, gen in enumerate(result.generations):
        lines.append(f"  subgraph gen{j} {{")
        lines.append("    rank=same;")
        for v in gen.values():
            lines.append(f'    n{v.id} [label="(s{v.state}, {v.gen})"];')
        lines.append("  }")
    for gen in result.generations:
        for v in gen.values():
            for label, u in v.edges():
                text = a.label_text(label).replace("\\", "\\\\").replace('"', '\\"')
                style = ", style=dashed" if label == WILDCARD else ""
                lines.append(f'  n{v.id} -> n{u.id} [label="{text}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
