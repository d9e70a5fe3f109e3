"""Three-valued behaviour of every grammar expression on the empty word."""

from __future__ import annotations

from dataclasses import dataclass

from .grammar import Grammar, NodeTable
from .trivalue import FALSE, TRUE, UNKNOWN, InconsistencyError, TruthValue, conj, disj, leq_certainty, neg


@dataclass(frozen=True)
class NullabilityMap:
    """``value[i]`` for node ``i``; ``suffix[(c, d)]`` for the tail of
    concatenation ``c`` starting at child ``d`` (``d == n`` is the empty tail,
    which is ``TRUE``)."""

    value: tuple[TruthValue, ...]
    suffix: dict
    variables: dict
    sweeps: int

    def of(self, node: int) -> TruthValue:
        return self.value[node]


def _node_values(t: NodeTable, var_value: dict[str, TruthValue]) -> list[TruthValue]:
    values: list[TruthValue | None] = [None] * len(t)

    def ev(i: int) -> TruthValue:
        if values[i] is not None:
            return values[i]
        kind = t.kind[i]
        if kind == "eps":
            v = TRUE
        elif kind == "term":
            v = FALSE
        elif kind == "var":
            v = var_value[t.nodes[i].name]
        elif kind == "not":
            v = neg(ev(t.children[i][0]))
        elif kind == "or":
            v = disj([ev(c) for c in t.children[i]])
        else:
            # the only partition of the empty word is all-empty, so a
            # concatenation behaves like a conjunction here
            v = conj([ev(c) for c in t.children[i]])
        values[i] = v
        return v

    for i in range(len(t)):
        ev(i)
    return values


def compute_nullability(g: Grammar) -> NullabilityMap:
    t = g.table
    current = {x: UNKNOWN for x in g.variables}
    limit = 2 * len(current) + 2
    for sweep in range(1, limit + 1):
        values = _node_values(t, current)
        nxt = {x: values[t.body[x]] for x in g.variables}
        for x in current:
            if not leq_certainty(current[x], nxt[x]):
                raise InconsistencyError(f"nullability of {x} retracted")
        if nxt == current:
            break
        current = nxt
    else:
        raise RuntimeError(f"nullability did not converge in {limit} sweeps")

    suffix = {}
    for i, kind in enumerate(t.kind):
        if kind == "cat":
            kids = t.children[i]
            acc = TRUE
            suffix[(i, len(kids))] = acc
            for d in range(len(kids) - 1, -1, -1):
                acc = conj([values[kids[d]], acc])
                suffix[(i, d)] = acc
    return NullabilityMap(tuple(values), suffix, dict(current), sweep)


def matches_empty(m: NullabilityMap, sign: int, where) -> bool:
    """Does ``+ε``/``-ε`` match ``where``, which is a node id or a ``(concat, dot)``
    tail.  Unknown nullability matches neither sign."""
    value = m.suffix[where] if isinstance(where, tuple) else m.value[where]
    return value is (TRUE if sign > 0 else FALSE)
