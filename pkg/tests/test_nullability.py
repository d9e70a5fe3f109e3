import pytest

from boolgram.grammar import parse_grammar
from boolgram.nullability import compute_nullability, matches_empty
from boolgram.oracle import classify
from boolgram.randgen import random_grammar
from boolgram.trivalue import FALSE, TRUE, UNKNOWN, conj

from reference import corpus_grammar, corpus_names


def test_three_way():
    m = compute_nullability(corpus_grammar("three_way"))
    assert m.variables == {"A": TRUE, "S": FALSE}


def test_ww():
    m = compute_nullability(corpus_grammar("ww"))
    assert m.variables == {"S": TRUE, "A": FALSE, "B": FALSE, "C": FALSE}


def test_self_reference_is_unknown():
    m = compute_nullability(corpus_grammar("loop"))
    assert m.variables == {"S": UNKNOWN}


def test_matches_empty():
    g = parse_grammar('S -> eps "a" | A ; A -> S ;')
    m = compute_nullability(g)
    t = g.table
    eps = t.kind.index("eps")
    a = t.kind.index("term")
    a_ref = next(i for i, n in enumerate(t.nodes) if t.kind[i] == "var" and n.name == "A")
    assert matches_empty(m, +1, eps)
    assert not matches_empty(m, -1, eps)
    assert matches_empty(m, -1, a)
    assert not matches_empty(m, +1, a_ref)
    assert not matches_empty(m, -1, a_ref)
    cat = t.concat_slot[eps][0]
    assert matches_empty(m, +1, (cat, 2))
    assert matches_empty(m, -1, (cat, 0))
    with pytest.raises(KeyError):
        matches_empty(m, +1, (cat, 3))


def _grammars():
    for name in corpus_names():
        yield name, corpus_grammar(name)
    for seed in range(25):
        yield f"random{seed}", random_grammar(seed)


@pytest.mark.parametrize("name,g", list(_grammars()), ids=lambda x: x if isinstance(x, str) else "")
def test_agrees_with_oracle(name, g):
    m = compute_nullability(g)
    for x in g.variables:
        assert m.variables[x] is classify(g, "", start=x)


@pytest.mark.parametrize("name,g", list(_grammars()), ids=lambda x: x if isinstance(x, str) else "")
def test_suffix_consistency(name, g):
    m = compute_nullability(g)
    t = g.table
    for (c, d), value in m.suffix.items():
        kids = t.children[c]
        if d == len(kids):
            assert value is TRUE
        else:
            assert value is conj([m.value[kids[d]], m.suffix[(c, d + 1)]])
        if d == 0:
            assert value is m.value[c]


def test_sweeps_are_bounded():
    for seed in range(25):
        g = random_grammar(seed, n_vars=5)
        m = compute_nullability(g)
        assert m.sweeps <= len(g.variables) + 1


def test_disjunct_rescues_a_liar():
    g = parse_grammar('S -> !S | eps ; T -> S & "a" ;')
    m = compute_nullability(g)
    assert m.variables == {"S": TRUE, "T": FALSE}
