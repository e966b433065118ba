import pytest

from kgraphkit import corpus
from kgraphkit import degree as deg
from kgraphkit.cycline import (
    connectivity_hypothesis,
    cycline_bruteforce,
    cycline_decide,
    cycline_report,
    cylinder_equal,
    enumerate_cycline,
    ext,
    gfp_table,
    onegraph_cycline_oracle,
    per_group,
    source_matched_pairs,
)
from kgraphkit.errors import DegreeOutOfRange, NotAOneGraph, NotSourceMatched


def P(name, *edges):
    g = corpus.get(name)
    return g.path(list(edges)) if edges else g.vertex(g.vertices[0])


# -- cylinders --------------------------------------------------------------------------------


def test_ext_examples():
    g = corpus.get("G2")
    a = g.edge("a")
    assert ext(g, a, (1,)) == {a}
    assert len(ext(g, a, (3,))) == 4
    T2 = corpus.get("T2")
    assert len(ext(T2, T2.edge("b"), (1, 1))) == 1
    with pytest.raises(DegreeOutOfRange):
        ext(g, g.path(["a", "a"]), (1,))


def test_cylinder_equality():
    G1 = corpus.get("G1")
    assert cylinder_equal(G1, G1.vertex("v"), G1.edge("e"))
    G2 = corpus.get("G2")
    assert cylinder_equal(G2, G2.edge("a"), G2.edge("a"))
    assert not cylinder_equal(G2, G2.edge("a"), G2.edge("b"))


# -- decision procedure -----------------------------------------------------------------------


def test_trivial_pair_is_cycline():
    for name in corpus.ACCEPTANCE:
        g = corpus.get(name)
        for p in g.paths_upto(deg.ones(g.k)):
            assert cycline_decide(g, p, p)


def test_decide_examples():
    G1 = corpus.get("G1")
    assert cycline_decide(G1, G1.vertex("v"), G1.edge("e"))
    G2 = corpus.get("G2")
    assert not cycline_decide(G2, G2.edge("a"), G2.edge("b"))
    T2 = corpus.get("T2")
    assert cycline_decide(T2, T2.edge("b"), T2.edge("r"))


def test_twist_pair_needs_the_extra_step():
    # (e, v) survives a naive unfolding that never inspects color 2
    g = corpus.get("TWIST")
    e, v = g.edge("e"), g.vertex("v")
    assert not cycline_decide(g, e, v)
    assert not cycline_bruteforce(g, e, v, (3, 3))
    rep = cycline_report(g, e, v)
    assert rep.witness is not None


def test_twist_agrees_with_bruteforce():
    g = corpus.get("TWIST")
    for a, b in source_matched_pairs(g, (1, 1)):
        d = cycline_decide(g, a, b)
        if not cycline_bruteforce(g, a, b, (4, 4)):
            assert not d


def test_bruteforce_examples():
    G1 = corpus.get("G1")
    assert cycline_bruteforce(G1, G1.vertex("v"), G1.edge("e"), (3,))
    G2 = corpus.get("G2")
    assert not cycline_bruteforce(G2, G2.path(["a", "a"]), G2.path(["a", "b"]), (0,))


def test_source_mismatch_raises():
    g = corpus.get("C2")
    with pytest.raises(NotSourceMatched):
        cycline_decide(g, g.edge("p"), g.edge("q"))
    with pytest.raises(NotSourceMatched):
        cycline_bruteforce(g, g.edge("p"), g.edge("q"))


def test_one_graph_oracle_examples():
    G1 = corpus.get("G1")
    e = G1.edge("e")
    assert onegraph_cycline_oracle(G1, e, e)
    assert onegraph_cycline_oracle(G1, e, G1.path(["e", "e"]))
    # a second loop at v is an entry to e
    G2 = corpus.get("G2")
    assert not onegraph_cycline_oracle(G2, G2.vertex("v"), G2.edge("a"))
    with pytest.raises(NotAOneGraph):
        onegraph_cycline_oracle(corpus.get("T2"), P("T2"), P("T2"))


def test_entry_graph_pairs():
    g = corpus.get("G1e")
    assert not cycline_decide(g, g.vertex("v"), g.edge("c"))
    assert cycline_decide(g, g.vertex("w"), g.edge("g"))
    assert cycline_decide(g, g.edge("f"), g.path(["f", "g"]))
    assert cycline_decide(g, g.path(["c", "f"]), g.path(["c", "f", "g", "g"]))


# -- enumeration and Per ----------------------------------------------------------------------


def test_enumerate_examples():
    G2 = corpus.get("G2")
    pairs = enumerate_cycline(G2, (2,))
    assert all(a == b for a, b in pairs) and len(pairs) == 7
    G1 = corpus.get("G1")
    got = {(len(a.edges), len(b.edges)) for a, b in enumerate_cycline(G1, (2,))}
    assert got == {(m, n) for m in range(3) for n in range(3)}
    T2 = corpus.get("T2")
    assert len(enumerate_cycline(T2, (1, 1))) == len(source_matched_pairs(T2, (1, 1))) == 16


def test_enumeration_order_and_threads(monkeypatch):
    g = corpus.get("P1_C2_11")
    serial = enumerate_cycline(g, (2, 2))
    monkeypatch.setenv("KGK_THREADS", "4")
    assert enumerate_cycline(g, (2, 2)) == serial
    keys = [(a.degree, b.degree, a.edges, b.edges, a.rng, b.rng) for a, b in serial]
    assert keys == sorted(keys)


def test_per_groups():
    assert per_group(corpus.get("G2"), (3,)).elements == {(0,)}
    assert per_group(corpus.get("G1"), (3,)).elements == {(c,) for c in range(-3, 4)}
    t2 = per_group(corpus.get("T2"), (2, 2))
    assert t2.elements == {(i, j) for i in range(-2, 3) for j in range(-2, 3)}
    assert per_group(corpus.get("C2"), (3,)).elements == {(-2,), (0,), (2,)}


@pytest.mark.parametrize("name", corpus.ACCEPTANCE)
def test_per_contains_zero_closed_under_negation_and_addition(name):
    g = corpus.get(name)
    per = per_group(g, deg.const(g.k, 2))
    assert deg.zero(g.k) in per.elements
    assert all(deg.neg(c) in per.elements for c in per.elements)
    assert per.connected == connectivity_hypothesis(g)
    assert per.closure_violations == []


def test_connectivity_hypothesis():
    assert connectivity_hypothesis(corpus.get("C2"))
    # in G1e nothing reaches w except from w itself, but w reaches v, so sources meet
    assert connectivity_hypothesis(corpus.get("G1e"))


# -- properties -------------------------------------------------------------------------------


@pytest.mark.parametrize("name", corpus.ACCEPTANCE)
def test_symmetry_and_extension_closure(name):
    g = corpus.get(name)
    bound = deg.const(g.k, 2)
    for a, b in source_matched_pairs(g, bound):
        d = cycline_decide(g, a, b)
        assert d == cycline_decide(g, b, a)
        if d:
            for gam in g.paths_upto(deg.ones(g.k)):
                if gam.rng == a.src:
                    assert cycline_decide(g, g.compose(a, gam), g.compose(b, gam))


@pytest.mark.parametrize("name", corpus.ACCEPTANCE + ("TWIST",))
def test_gfp_refinement_is_monotone(name):
    g = corpus.get(name)
    for c in deg.box(deg.const(g.k, -2), deg.const(g.k, 2)):
        t = gfp_table(g, c)
        assert all(r > 0 for r in t.removed_per_round[1:])
        assert t.rounds <= t.states + 1
        assert len(t.surviving) == t.states - sum(t.removed_per_round)
        for mu, nu in t.surviving:
            assert mu.degree == deg.pos(c) and nu.degree == deg.negpart(c) and mu.src == nu.src
