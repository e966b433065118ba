from fractions import Fraction

import numpy as np
import pytest

from kgraphkit import corpus
from kgraphkit import degree as deg
from kgraphkit.combos import GeneratorCombo, character, from_turns, random_combo
from kgraphkit.errors import NonCyclineTerm, UnsafeDomain
from kgraphkit.infinite import ep_path, is_regular, tm_path
from kgraphkit.model import build_basis, default_seeds
from kgraphkit.states import (
    collision_classes,
    compute_Hx,
    e_eval,
    phi_eval,
    positivity_check,
    psi_eval,
    psi_exact,
    states_equiv,
    states_equiv_report,
)

I = 1j


def loop_point(name, cycle, head=None):
    g = corpus.get(name)
    h = g.path(head) if head else None
    return g, ep_path(g, h, g.path(cycle))


def g2_point():
    g = corpus.get("G2")
    return g, tm_path(g, g.edge("a"), g.edge("b"))


# -- evaluation --------------------------------------------------------------------------------


def test_phi_examples_g1():
    g, x = loop_point("G1", ["e"])
    v, e = g.vertex("v"), g.edge("e")
    assert phi_eval(g, x, GeneratorCombo.gen(g, v, e)) == 1
    assert phi_eval(g, x, GeneratorCombo.P(g, e, 3)) == 3


def test_phi_examples_entry_graph():
    g, x = loop_point("G1e", ["g"], head=["f"])
    assert phi_eval(g, x, GeneratorCombo.P(g, g.vertex("v"))) == 1
    assert phi_eval(g, x, GeneratorCombo.P(g, g.vertex("w"))) == 0
    assert phi_eval(g, x, GeneratorCombo.gen(g, g.edge("f"), g.path(["f", "g"]))) == 1
    assert phi_eval(g, x, GeneratorCombo.P(g, g.edge("c"))) == 0


def test_psi_picks_up_character():
    g, x = loop_point("G1", ["e"])
    c = GeneratorCombo.gen(g, g.vertex("v"), g.edge("e"))
    assert psi_eval(g, (I,), x, c) == pytest.approx(-I)
    assert psi_eval(g, (-1,), x, c) == pytest.approx(-1)
    assert psi_exact(g, (Fraction(1, 4),), x, c) == {Fraction(3, 4): 1}


def test_psi_exact_collects_turns():
    g, x = loop_point("G1", ["e"])
    v, e, ee = g.vertex("v"), g.edge("e"), g.path(["e", "e"])
    c = GeneratorCombo.gen(g, v, e) + GeneratorCombo.gen(g, e, v) + GeneratorCombo.gen(g, ee, e, 2)
    got = psi_exact(g, (Fraction(1, 4),), x, c)
    assert got == {Fraction(1, 4): 3, Fraction(3, 4): 1}
    num = sum(coef * np.exp(2j * np.pi * float(t)) for t, coef in got.items())
    assert psi_eval(g, (I,), x, c) == pytest.approx(num)


@pytest.mark.parametrize("name", ["G1", "G1e", "T2", "C2", "P1_C2_12"])
def test_psi_at_identity_is_phi(name):
    g = corpus.get(name)
    rng = np.random.default_rng(4)
    for x in default_seeds(g, 2):
        for _ in range(20):
            c = random_combo(g, rng, deg.const(g.k, 2))
            assert psi_eval(g, deg.const(g.k, 1), x, c) == pytest.approx(phi_eval(g, x, c))


def test_psi_is_linear():
    g = corpus.get("T2")
    x = default_seeds(g, 1)[0]
    rng = np.random.default_rng(9)
    z = (np.exp(0.3j), np.exp(1.1j))
    for _ in range(20):
        a = random_combo(g, rng, (1, 1))
        b = random_combo(g, rng, (1, 1))
        assert psi_eval(g, z, x, a + b.scale(2 - I)) == pytest.approx(psi_eval(g, z, x, a) + (2 - I) * psi_eval(g, z, x, b))


def test_e_rejects_non_cycline_terms():
    g, x = g2_point()
    with pytest.raises(NonCyclineTerm):
        e_eval(g, (1,), x, GeneratorCombo.gen(g, g.edge("a"), g.edge("b")))
    # diagonal terms are always allowed
    assert e_eval(g, (I,), x, GeneratorCombo.P(g, g.edge("a"))) == 1


def test_e_agrees_with_psi_on_cycline_combos():
    g, x = loop_point("C2", ["p", "q"])
    u = x.rng
    c = GeneratorCombo.gen(g, g.vertex(u), g.path(["p", "q"])) + GeneratorCombo.P(g, g.vertex(u))
    for z in [(1,), (I,), (np.exp(0.7j),)]:
        assert e_eval(g, z, x, c) == psi_eval(g, z, x, c)


# -- H_x ---------------------------------------------------------------------------------------


def test_hx_examples():
    g, x = g2_point()
    assert compute_Hx(g, x, (4,)).diffs == {(0,)}
    g, x = loop_point("G1", ["e"])
    assert compute_Hx(g, x, (3,)).diffs == {(c,) for c in range(-3, 4)}
    T2 = corpus.get("T2")
    hx = compute_Hx(T2, default_seeds(T2, 1)[0], (2, 2))
    assert len(hx.diffs) == 25
    g, x = loop_point("C2", ["p", "q"])
    assert compute_Hx(g, x, (3,)).diffs == {(-2,), (0,), (2,)}


def test_hx_rejects_unknown_variant():
    g, x = loop_point("G1", ["e"])
    with pytest.raises(ValueError):
        compute_Hx(g, x, (2,), "Hz")


@pytest.mark.parametrize("name", corpus.ACCEPTANCE)
def test_hx_variants_agree_on_regular_points(name):
    g = corpus.get(name)
    seeds = [tm_path(g, g.edge("a"), g.edge("b"))] if name == "G2" else default_seeds(g, 2)
    for x in seeds:
        assert is_regular(g, x).status == "Regular"
        hs = [compute_Hx(g, x, deg.const(g.k, 2), v) for v in ("H", "Hc", "Hs")]
        assert hs[0].diffs == hs[1].diffs == hs[2].diffs
        assert deg.zero(g.k) in hs[0].diffs
        assert all(deg.neg(c) in hs[0].diffs for c in hs[0].diffs)


def test_hx_variants_split_off_the_regular_set():
    # c^inf has an entry, so it is not regular and only the trivial difference is cycline
    g, x = loop_point("G1e", ["c"])
    assert is_regular(g, x).status == "NotRegular"
    assert compute_Hx(g, x, (3,)).diffs == {(c,) for c in range(-3, 4)}
    assert compute_Hx(g, x, (3,), "Hc").diffs == {(0,)}
    assert compute_Hx(g, x, (3,), "Hs").diffs == {(0,)}


def test_hx_grows_with_bound():
    g, x = loop_point("G1", ["e"])
    small = compute_Hx(g, x, (1,)).diffs
    assert small == {(-1,), (0,), (1,)}
    assert small <= compute_Hx(g, x, (4,)).diffs


# -- equivalence --------------------------------------------------------------------------------


def test_equivalence_examples():
    g, x = loop_point("G1", ["e"])
    assert states_equiv(g, (I,), (I,), x, (2,))
    assert not states_equiv(g, (1,), (-1,), x, (2,))
    g, x = g2_point()
    assert states_equiv(g, (1,), (-1,), x, (3,))
    g, x = loop_point("C2", ["p", "q"])
    # only even differences occur, so z and -z give the same state
    assert states_equiv(g, (I,), (-I,), x, (3,))
    assert not states_equiv(g, (1,), (I,), x, (3,))


@pytest.mark.parametrize("name", ["G1", "G1e", "G2", "T2", "C2", "P1_G1_12", "P1_C2_11"])
def test_equivalence_report_is_consistent(name):
    g = corpus.get(name)
    xs = [tm_path(g, g.edge("a"), g.edge("b"))] if name == "G2" else default_seeds(g, 1)
    rng = np.random.default_rng(3)
    bound = deg.const(g.k, 2)
    zs = [deg.const(g.k, 1), deg.const(g.k, -1)] + [tuple(np.exp(2j * np.pi * rng.random(g.k))) for _ in range(3)]
    for x in xs:
        for z1 in zs:
            for z2 in zs:
                rep = states_equiv_report(g, z1, z2, x, bound)
                assert rep.consistent, (z1, z2, rep)


def test_equivalence_decided_by_characters():
    g = corpus.get("T2")
    x = default_seeds(g, 1)[0]
    z1 = (I, 1)
    z2 = (I, -1)
    rep = states_equiv_report(g, z1, z2, x, (2, 2))
    assert not rep.equivalent
    assert any(abs(character(c, z1) - character(c, z2)) > 1e-9 for c in rep.hx)


# -- positivity ----------------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["G1", "G1e", "T2", "C2", "P1_C2_12"])
def test_positivity_three_ways(name):
    g = corpus.get(name)
    B = build_basis(g, default_seeds(g, 2))
    rng = np.random.default_rng(8)
    checked = 0
    for _ in range(30):
        c = random_combo(g, rng, deg.ones(g.k), terms=2)
        for j in sorted(B.safe):
            try:
                r = positivity_check(g, B.members[j], c, B)
            except UnsafeDomain:
                continue
            assert r["ok"], r
            checked += 1
    assert checked > 0


def test_positivity_needs_a_basis_member():
    g, x = loop_point("G1", ["e"])
    T2 = corpus.get("T2")
    B = build_basis(T2, default_seeds(T2, 1))
    with pytest.raises(UnsafeDomain):
        positivity_check(g, x, GeneratorCombo.P(g, g.vertex("v")), B)


def test_positivity_of_a_kernel_element_is_zero():
    g, x = loop_point("G1", ["e"])
    B = build_basis(g, [x])
    c = GeneratorCombo.gen(g, g.vertex("v"), g.edge("e")) - GeneratorCombo.P(g, g.vertex("v"))
    r = positivity_check(g, x, c, B)
    assert r["ok"] and r["norm2"] == 0


def test_collision_classes():
    grid = [from_turns([t / 4]) for t in range(4)]
    g, x = loop_point("C2", ["p", "q"])
    # only even differences: z and -z collide
    assert collision_classes(g, x, grid, (3,)) == [[0, 2], [1, 3]]
    g, x = loop_point("G1", ["e"])
    assert collision_classes(g, x, grid, (3,)) == [[0], [1], [2], [3]]
    g, y = g2_point()
    assert collision_classes(g, y, grid, (3,)) == [[0, 1, 2, 3]]
