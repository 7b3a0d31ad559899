import itertools
import random

import pytest

from oracles import naive_join
from rastergraph.namespaces import EX, RDF_TYPE, XSD_INTEGER
from rastergraph.rdf import (
    Graph,
    Iri,
    Literal,
    MalformedTermError,
    Triple,
    TriplePattern,
    Variable,
    compatible,
    join,
    match_pattern,
)

TYPE = Iri(RDF_TYPE)
ROAD = Iri(EX + "Road")
X, Y = Variable("x"), Variable("y")


def ex(name):
    return Iri(EX + name)


def test_insert_into_empty_graph():
    g = Graph()
    assert g.add(Triple(ex("a"), ex("p"), ex("b")))
    assert len(g) == 1


def test_duplicate_insert_is_ignored():
    g = Graph()
    t = Triple(ex("a"), ex("p"), ex("b"))
    g.add(t)
    assert not g.add(t)
    assert len(g) == 1


def test_literal_subject_rejected():
    g = Graph([Triple(ex("a"), ex("p"), Literal("1", XSD_INTEGER))])
    with pytest.raises(MalformedTermError):
        g.add(Triple(Literal("1", XSD_INTEGER), ex("p"), ex("a")))
    assert len(g) == 1


def test_literal_predicate_rejected():
    with pytest.raises(MalformedTermError):
        Triple(ex("a"), Literal("p"), ex("b"))


def test_language_tag_needs_langstring():
    with pytest.raises(MalformedTermError):
        Literal("chat", language="fr")


def test_n3_forms():
    assert ex("a").n3() == f"<{EX}a>"
    assert Literal("x").n3() == '"x"'
    assert Literal("1", XSD_INTEGER).n3() == f'"1"^^<{XSD_INTEGER}>'
    assert Literal('a"b\n').n3() == '"a\\"b\\n"'


def test_single_match():
    g = Graph([Triple(ex("r1"), TYPE, ROAD)])
    assert match_pattern(g, TriplePattern(X, TYPE, ROAD)) == [{X: ex("r1")}]


def test_no_match():
    g = Graph([Triple(ex("r1"), TYPE, ROAD)])
    assert match_pattern(g, TriplePattern(X, TYPE, ex("Building"))) == []


def test_three_roads_equal_linear_scan():
    triples = [Triple(ex(f"r{k}"), TYPE, ROAD) for k in range(3)] + [Triple(ex("b"), TYPE, ex("Building"))]
    g = Graph(triples)
    pattern = TriplePattern(X, TYPE, ROAD)
    got = match_pattern(g, pattern)
    scan = [{X: t.subject} for t in triples if t.predicate == TYPE and t.object == ROAD]
    assert len(got) == 3
    assert sorted(b[X].value for b in got) == sorted(b[X].value for b in scan)


def test_repeated_variable_in_pattern():
    g = Graph([Triple(ex("a"), ex("p"), ex("a")), Triple(ex("a"), ex("p"), ex("b"))])
    assert match_pattern(g, TriplePattern(X, ex("p"), X)) == [{X: ex("a")}]


def test_indexes_stay_consistent_under_random_inserts():
    rng = random.Random(3)
    g = Graph()
    terms = [ex(f"t{k}") for k in range(6)]
    for _ in range(300):
        g.add(Triple(rng.choice(terms), rng.choice(terms), rng.choice(terms)))
    assert g.index_consistent()
    for s, p in itertools.product(terms[:3], terms[:3]):
        assert set(g.triples(s, p)) == {t for t in g if t.subject == s and t.predicate == p}


def test_compatible_cases():
    a, b = ex("a"), ex("b")
    assert compatible({X: a}, {Y: b})
    assert compatible({X: a}, {X: a, Y: b})
    assert not compatible({X: a}, {X: b})


def test_join_examples():
    a, b = ex("a"), ex("b")
    assert join([{X: a}], [{Y: b}]) == [{X: a, Y: b}]
    assert join([{X: a}], [{X: b}]) == []


def _canon(bindings):
    return sorted(sorted((v.name, t.value) for v, t in mu.items()) for mu in bindings)


def test_join_matches_nested_loop():
    z = Variable("z")
    left = [{X: ex("a"), Y: ex("1")}, {X: ex("b"), Y: ex("2")}, {X: ex("a"), Y: ex("3")}]
    right = [{X: ex("a"), z: ex("p")}, {X: ex("c"), z: ex("q")}]
    assert _canon(join(left, right)) == _canon(naive_join(left, right))


def test_join_random_against_nested_loop():
    rng = random.Random(11)
    names = [Variable(n) for n in "xyzw"]
    values = [ex(str(k)) for k in range(3)]
    for _ in range(200):
        def side():
            vs = rng.sample(names, rng.randint(1, 3))
            return [{v: rng.choice(values) for v in vs if rng.random() < 0.85} for _ in range(rng.randint(0, 5))]
        left, right = side(), side()
        assert _canon(join(left, right)) == _canon(naive_join(left, right))
