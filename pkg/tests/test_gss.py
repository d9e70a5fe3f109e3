import random

import pydot
import pytest

from boolgram.automaton import NEG, POS, WILDCARD
from boolgram.bench import loglog_slope
from boolgram.grammar import parse_grammar
from boolgram.gss import GssParser, ParserStateError, Recognizer, gss_to_dot, parse
from boolgram.oracle import classify_prefixes
from boolgram.randgen import random_grammar
from boolgram.trivalue import FALSE, TRUE, UNKNOWN, all_words

from reference import corpus_grammar, corpus_names, earley_prefixes


def node_of(g, kind, text=None):
    t = g.table
    for i in range(len(t)):
        if t.kind[i] == kind and (text is None or t.render(i) == text):
            return i
    raise LookupError((kind, text))


def stepper(g, w):
    p = GssParser(Recognizer(g).automaton, w)
    p.begin()
    return p


def edges_of(p, j):
    return [(label, u) for v in p.generations[j].values() for label, u in v.edges()]


def open_generation(p):
    """Move to the next position without shifting anything."""
    p.j += 1
    p.generations.append({})
    p.verdicts.append(set())
    p.seen = set()


# -- whole parses ----------------------------------------------------------


def test_three_way_prefix_verdicts():
    rec = Recognizer(corpus_grammar("three_way"))
    result = rec.parse("ab")
    assert result.verdicts == [frozenset({NEG}), frozenset({NEG}), frozenset()]
    assert result.final is UNKNOWN
    result = rec.parse("b")
    assert result.verdicts[1] == frozenset({POS})
    assert result.final is TRUE


def test_liar_never_yields():
    rec = Recognizer(corpus_grammar("liar"))
    for w in ["", "a", "ab", "bba"]:
        result = rec.parse(w)
        assert all(not v for v in result.verdicts)
        assert result.final is UNKNOWN


def test_symbol_outside_alphabet():
    with pytest.raises(ValueError):
        Recognizer(corpus_grammar("ww")).parse("abc")


def test_module_level_parse():
    rec = Recognizer(corpus_grammar("ww"))
    result = parse(rec.automaton, "abab")
    assert result.prefix_values() == [TRUE, FALSE, FALSE, FALSE, TRUE]
    assert result.generations is None
    assert rec.classify("abba") is FALSE


def test_positive_concatenation_reduces():
    g = parse_grammar('S -> "a" "b" ;')
    p = stepper(g, "ab")
    p.advance()
    p.advance()
    # a finished concatenation hands over to its parent item, here the start reference
    labels = {label for label, u in edges_of(p, 2) if u is p.root}
    assert (POS, g.table.start) in labels
    assert (POS, g.table.body["S"]) not in labels
    assert p.verdicts[2] == {POS}


def test_negated_concatenation_reduces():
    g = parse_grammar('S -> !("a" "b") ;')
    rec = Recognizer(g)
    assert rec.parse("aa").prefix_values() == [TRUE, TRUE, TRUE]
    assert rec.parse("ab").final is FALSE


# -- shifter ---------------------------------------------------------------


def test_shift_matching_terminal():
    g = parse_grammar('%alphabet "ab" ; S -> "a" ;')
    p = stepper(g, "a")
    p.advance()
    term = node_of(g, "term")
    assert ((POS, term), p.root) in edges_of(p, 1)
    assert p.verdicts[1] == {POS}


def test_shift_mismatching_terminal_negatively():
    g = parse_grammar('%alphabet "ab" ; S -> "a" ;')
    p = stepper(g, "b")
    p.advance()
    term = node_of(g, "term")
    assert ((NEG, term), p.root) in edges_of(p, 1)
    assert ((POS, term), p.root) not in edges_of(p, 1)
    assert p.verdicts[1] == {NEG}


def test_wildcard_edges_span_every_earlier_generation():
    p = stepper(corpus_grammar("ww"), "ab")
    p.advance()
    p.advance()
    wild = [u for label, u in edges_of(p, 2) if label == WILDCARD]
    assert p.root in wild
    assert any(u.gen == 1 for u in wild)


def test_multi_symbol_segment_is_negative_for_terminals():
    g = parse_grammar('S -> !("a" "a") ;')
    p = stepper(g, "aa")
    p.advance()
    p.advance()
    # "aa" is no single terminal: every terminal item at the root shifts negatively
    shifted = {label for label, u in edges_of(p, 2) if u is p.root and label != WILDCARD}
    assert shifted and all(sign == NEG for sign, _ in shifted if g.table.kind[_] == "term")


# -- create_edge -----------------------------------------------------------


def test_create_edge_is_idempotent():
    g = parse_grammar('%alphabet "ab" ; S -> "a" ;')
    p = stepper(g, "a")
    open_generation(p)
    term = node_of(g, "term")
    p.create_edge(p.root, (POS, term))
    p.create_edge(p.root, (POS, term))
    assert p.edge_count == 1
    assert len(p.queue) == 1
    assert len(p.generations[1]) == 1


def test_create_edge_without_transition():
    g = parse_grammar('%alphabet "ab" ; S -> "a" ;')
    p = stepper(g, "a")
    open_generation(p)
    with pytest.raises(ParserStateError):
        p.create_edge(p.root, (POS, 999))


@pytest.mark.parametrize("name", corpus_names())
def test_one_node_per_state_and_generation(name):
    g = corpus_grammar(name)
    result = Recognizer(g).parse("".join(g.alphabet) * 2, keep_gss=True)
    for j, gen in enumerate(result.generations):
        assert all(v.gen == j and v.state == s for s, v in gen.items())
    assert result.nodes == sum(len(gen) for gen in result.generations)


# -- finish_reduction ------------------------------------------------------


def test_variable_parent_is_created_immediately():
    g = parse_grammar('S -> A ; A -> "a" ;')
    p = stepper(g, "a")
    p.advance()
    a_ref = node_of(g, "var", "A")
    assert ((POS, a_ref), p.root) in edges_of(p, 1)


def test_negation_parent_flips():
    g = parse_grammar('%alphabet "ab" ; S -> !"a" ;')
    p = stepper(g, "b")
    p.advance()
    neg_node = g.table.body["S"]
    assert ((POS, neg_node), p.root) in edges_of(p, 1)
    assert p.verdicts[1] == {POS}


def test_conjunction_waits_for_every_conjunct():
    g = parse_grammar('S -> "a" & A ; A -> "a" ;')
    p = stepper(g, "a")
    open_generation(p)
    conj = g.table.body["S"]
    term, a_ref = g.table.children[conj]
    p.finish_reduction(p.root, POS, term)
    assert all(label != (POS, conj) for label, _ in edges_of(p, 1))
    p.finish_reduction(p.root, POS, term)
    assert all(label != (POS, conj) for label, _ in edges_of(p, 1))
    p.finish_reduction(p.root, POS, a_ref)
    assert ((POS, conj), p.root) in edges_of(p, 1)


def test_conjunction_records_expire_with_the_generation():
    g = parse_grammar('S -> "a" & A ; A -> "a" ;')
    p = stepper(g, "aa")
    open_generation(p)
    conj = g.table.body["S"]
    term, a_ref = g.table.children[conj]
    p.finish_reduction(p.root, POS, term)
    open_generation(p)
    p.finish_reduction(p.root, POS, a_ref)
    assert all(label != (POS, conj) for label, _ in edges_of(p, 2))


def test_negative_disjunction_is_universal():
    g = parse_grammar('S -> "a" | "b" ;')
    rec = Recognizer(g)
    assert rec.parse("ab").prefix_values() == [FALSE, TRUE, FALSE]


# -- negative concatenation marks ------------------------------------------


@pytest.fixture
def marked():
    # X is nullable, so no split point is certified up front
    g = parse_grammar('S -> !(X "b") ; X -> eps | "a" ;')
    p = stepper(g, "aaa")
    cat = node_of(g, "cat")
    proven = []
    p._negative_proven = lambda v, x, d: proven.append((v, x, d))
    return p, cat, proven


def test_marks_cover_every_split_point(marked):
    p, cat, proven = marked
    open_generation(p)
    open_generation(p)
    p._mark(p.root, cat, 0, 0, False)
    p._mark(p.root, cat, 0, 1, False)
    assert proven == []
    p._mark(p.root, cat, 0, 1, False)
    assert proven == []
    p._mark(p.root, cat, 0, 2, False)
    assert proven == [(p.root, cat, 0)]
    p._mark(p.root, cat, 0, 2, True)
    assert len(proven) == 1


def test_permanent_marks_survive_a_new_position(marked):
    p, cat, proven = marked
    open_generation(p)
    p._mark(p.root, cat, 0, 1, True)
    p._mark(p.root, cat, 0, 0, False)
    assert len(proven) == 1
    open_generation(p)
    p._mark(p.root, cat, 0, 2, False)
    # 1 is still marked, 0 was transient and must be certified again
    assert len(proven) == 1
    p._mark(p.root, cat, 0, 0, False)
    assert len(proven) == 2


def test_non_nullable_first_child_certifies_its_origin():
    g = parse_grammar('S -> !("a" "b") ;')
    p = stepper(g, "aa")
    cat = node_of(g, "cat")
    proven = []
    p._negative_proven = lambda v, x, d: proven.append(d)
    open_generation(p)
    p._mark(p.root, cat, 0, 1, False)
    assert proven == [0]


# -- properties ------------------------------------------------------------


def _boolean_grammars():
    for name in corpus_names():
        yield name, corpus_grammar(name)
    for seed in range(40):
        yield f"random{seed}", random_grammar(seed)


@pytest.mark.parametrize("name,g", list(_boolean_grammars()), ids=lambda x: x if isinstance(x, str) else "")
def test_agrees_with_oracle(name, g):
    rec = Recognizer(g)
    alphabet = "".join(g.alphabet)
    bound = 5 if len(alphabet) <= 2 else 3
    for w in all_words(alphabet, bound):
        result = rec.parse(w)
        assert all(len(v) <= 1 for v in result.verdicts)
        assert result.prefix_values() == classify_prefixes(g, w), w


@pytest.mark.parametrize("seed", range(3))
def test_gss_only_grows(seed):
    g = random_grammar(seed + 100)
    rng = random.Random(seed)
    w = "".join(rng.choice("ab") for _ in range(8))
    p = GssParser(Recognizer(g).automaton, w)
    p.begin()
    before: set = set()
    while p.j < len(w):
        p.advance()
        now = {
            (v.id, label, u.id, u.gen, v.gen)
            for gen in p.generations for v in gen.values() for label, u in v.edges()
        }
        assert before <= now
        for _, _, _, ugen, vgen in now - before:
            assert vgen == p.j and ugen < vgen
        before = now


def test_earley_agreement_on_brackets():
    g = corpus_grammar("brackets")
    rec = Recognizer(g)
    for w in all_words("()", 10):
        yields = [POS in v for v in rec.parse(w).verdicts]
        assert yields == earley_prefixes(g, w), w


@pytest.mark.parametrize("seed", range(25))
def test_earley_agreement_on_random_cfgs(seed):
    g = random_grammar(seed, boolean=False)
    rec = Recognizer(g)
    rng = random.Random(seed)
    for _ in range(30):
        w = "".join(rng.choice("ab") for _ in range(rng.randint(0, 12)))
        yields = [POS in v for v in rec.parse(w).verdicts]
        assert yields == earley_prefixes(g, w), w


def test_gss_size_grows_quadratically():
    rec = Recognizer(corpus_grammar("ww"))
    rng = random.Random(7)
    lengths = [8, 16, 32]
    edges = [rec.parse("".join(rng.choice("ab") for _ in range(n))).edges for n in lengths]
    assert loglog_slope(lengths, edges) <= 2.3
    assert max(e / n**2 for e, n in zip(edges, lengths)) < 100


def test_gss_dot_has_a_rank_per_generation():
    rec = Recognizer(corpus_grammar("three_way"))
    result = rec.parse("ab", keep_gss=True)
    text = gss_to_dot(rec.automaton, result)
    (graph,) = pydot.graph_from_dot_data(text)
    assert [s.get_name() for s in graph.get_subgraphs()] == ["gen0", "gen1", "gen2"]
    assert len(graph.get_edges()) == result.edges
    with pytest.raises(ValueError):
        gss_to_dot(rec.automaton, rec.parse("ab"))
