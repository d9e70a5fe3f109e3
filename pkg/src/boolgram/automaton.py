"""The signed LR(0)-style automaton for a Boolean grammar.

An item is ``(sign, node, dot)`` where ``node`` is an expression id from the
grammar's :class:`~boolgram.grammar.NodeTable`.  ``dot`` runs over
``0..n`` for an ``n``-ary concatenation and over ``0..1`` otherwise.

Transition labels are ``(sign, node)`` pairs.  A state holding negative
concatenation items additionally has one *wildcard* transition, which
consumes an arbitrary nonempty segment for the dotted component of every
such item at once; its target's kernel is the set of their successors.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field

from .grammar import Grammar
from .nullability import NullabilityMap, matches_empty
from .trivalue import TRUE


class Sign(enum.IntEnum):
    POS = 1
    NEG = -1

    def flip(self) -> "Sign":
        return Sign(-self)

    @property
    def glyph(self) -> str:
        return "+" if self > 0 else "-"


POS = Sign.POS
NEG = Sign.NEG

WILDCARD = "*"


def flip(s: int) -> Sign:
    return Sign(-s)


@dataclass
class AutomatonState:
    id: int
    kernel: frozenset
    items: list = field(default_factory=list)
    item_set: frozenset = frozenset()
    # child item -> non-concatenation items of this state that generated it
    parents: dict = field(default_factory=dict)
    transitions: dict = field(default_factory=dict)
    optional_labels: list = field(default_factory=list)
    # (sign, node, char or None for eps, target) for every terminal transition
    shifts: list = field(default_factory=list)

    @property
    def wildcard_target(self):
        return self.transitions.get(WILDCARD)


@dataclass
class Automaton:
    grammar: Grammar
    nullability: NullabilityMap
    states: list
    initial: int = 0

    def goto(self, state: int, label):
        return self.states[state].transitions.get(label)

    @property
    def accept_items(self):
        """``(state, item)`` for every completed ``±S`` seed item."""
        s = self.grammar.table.start
        return [(st.id, it) for st in self.states for it in st.items if it[1] == s and it[2] == 1]

    def label_text(self, label) -> str:
        if label == WILDCARD:
            return "*"
        sign, node = label
        return Sign(sign).glyph + self.grammar.table.render(node)

    def item_text(self, item) -> str:
        sign, node, dot = item
        t = self.grammar.table
        g = Sign(sign).glyph
        if t.kind[node] == "cat":
            parts = [t.render(c) for c in t.children[node]]
            parts.insert(dot, "•")
            return g + " ".join(parts)
        body = t.render(node)
        return g + ("•" + body if dot == 0 else body + "•")


def is_completion(t, item) -> bool:
    _, node, dot = item
    if t.kind[node] == "cat":
        return dot == len(t.children[node])
    return dot == 1


def close(kernel, g: Grammar, m: NullabilityMap, seeds=()):
    """Saturate ``kernel`` (plus ``seeds``) under the closure rules.

    Returns ``(items, parents, moves, optional)``: items in insertion order,
    the parent links, the kernel generated per outgoing label, and the
    labels of optional transitions.
    """
    t = g.table
    kernel = frozenset(kernel)
    items: list = []
    seen: set = set()
    parents: dict = {}
    moves: dict = {}
    optional: list = []

    def add(item, parent=None):
        if item not in seen:
            seen.add(item)
            items.append(item)
        if parent is not None:
            ps = parents.setdefault(item, [])
            if parent not in ps:
                ps.append(parent)

    def move(label, item):
        moves.setdefault(label, [])
        if item not in moves[label]:
            moves[label].append(item)

    for item in sorted(kernel):
        add(item)
    for item in seeds:
        add(item)

    i = 0
    while i < len(items):
        item = items[i]
        i += 1
        if is_completion(t, item):
            continue
        sign, node, dot = item
        kind = t.kind[node]
        if kind == "term" or (kind == "eps" and sign == NEG):
            move((sign, node), (sign, node, 1))
        elif kind == "eps":
            pass  # +eps is only ever matched through nullability
        elif kind == "var":
            add((sign, t.target[node], 0), item)
            move((sign, node), (sign, node, 1))
        elif kind == "not":
            add((-sign, t.children[node][0], 0), item)
            move((sign, node), (sign, node, 1))
        elif kind in ("or", "and"):
            for c in t.children[node]:
                add((sign, c, 0), item)
            move((sign, node), (sign, node, 1))
        else:
            kids = t.children[node]
            n = len(kids)
            child = kids[dot]
            succ = (sign, node, dot + 1)
            add((sign, child, 0))
            move((sign, child), succ)
            if sign == POS:
                if m.value[child] is TRUE and (
                    dot + 1 < n or _right_nullable_kernel(kernel, node, m, POS)
                ):
                    add(succ)
            else:
                if (sign, child) not in optional:
                    optional.append((sign, child))
                if dot + 1 < n or any(k[0] == NEG and k[1] == node for k in kernel):
                    add(succ)
    return items, parents, moves, optional


def _right_nullable_kernel(kernel, node, m, sign) -> bool:
    return any(
        k[0] == sign and k[1] == node and matches_empty(m, sign, (node, k[2]))
        for k in kernel
    )


def build_automaton(g: Grammar, m: NullabilityMap) -> Automaton:
    """Breadth-first construction from the initial state ``{+•S, -•S}``."""
    t = g.table
    seeds = ((POS, t.start, 0), (NEG, t.start, 0))
    states: list[AutomatonState] = []
    by_kernel: dict = {}
    queue: deque = deque()

    def intern(kernel: frozenset) -> int:
        sid = by_kernel.get(kernel)
        if sid is None:
            sid = len(states)
            by_kernel[kernel] = sid
            states.append(AutomatonState(sid, kernel))
            queue.append(sid)
        return sid

    intern(frozenset())
    while queue:
        st = states[queue.popleft()]
        items, parents, moves, optional = close(st.kernel, g, m, seeds if st.id == 0 else ())
        st.items = items
        st.item_set = frozenset(items)
        st.parents = {k: tuple(v) for k, v in parents.items()}
        st.optional_labels = optional
        for label, kern in moves.items():
            st.transitions[label] = intern(frozenset(kern))
        if optional:
            wild = []
            for label in optional:
                for it in moves[label]:
                    if t.kind[it[1]] == "cat" and it not in wild:
                        wild.append(it)
            st.transitions[WILDCARD] = intern(frozenset(wild))
        for label, target in st.transitions.items():
            if label == WILDCARD:
                continue
            sign, node = label
            if t.kind[node] in ("term", "eps"):
                st.shifts.append((sign, node, t.symbol[node], target))
    return Automaton(g, m, states)


def goto(a: Automaton, state: int, label):
    return a.goto(state, label)


def to_dot(a: Automaton) -> str:
    """Graphviz rendering: one box per state, dashed optional transitions."""
    lines = ["digraph automaton {", "  rankdir=LR;", '  node [shape=box, fontname="monospace"];']
    for st in a.states:
        rows = []
        for it in st.items:
            mark = "" if it in st.kernel else "  (derived)"
            rows.append(_dot_escape(a.item_text(it) + mark))
        label = f"s{st.id}\\l" + "".join(r + "\\l" for r in rows)
        lines.append(f'  s{st.id} [label="{label}"];')
    for st in a.states:
        for label, target in st.transitions.items():
            style = ""
            if label == WILDCARD or label in st.optional_labels:
                style = ", style=dashed"
            lines.append(f'  s{st.id} -> s{target} [label="{_dot_escape(a.label_text(label))}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')
