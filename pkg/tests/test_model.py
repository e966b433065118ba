import numpy as np
import pytest

import oracles
from kgraphkit import corpus
from kgraphkit import degree as deg
from kgraphkit.combos import GeneratorCombo, gauge_rotate, random_combo
from kgraphkit.cycline import cylinder_equal, enumerate_cycline
from kgraphkit.errors import NotCycline, SeedNotRegular, UnsafeDomain
from kgraphkit.infinite import ep_path, tm_path
from kgraphkit.model import (
    act_combo,
    build_basis,
    commutant_check,
    default_seeds,
    eval_Upsilon,
    eval_upsilon,
    find_kernel_pair,
    is_special,
    kernel_probe,
    op_Q,
    op_T,
    op_Tstar,
    partial_isometry_defect,
    shift_orbit,
    verify_CK,
)


def g1_basis():
    g = corpus.get("G1")
    return g, build_basis(g, [ep_path(g, None, g.edge("e"))])


def g2_tm_basis():
    g = corpus.get("G2")
    a, b = g.edge("a"), g.edge("b")
    return g, build_basis(g, [tm_path(g, a, b), tm_path(g, b, a)])


def g2_loop_basis():
    # a^inf and b^inf are not regular; an unchecked basis still models the action
    g = corpus.get("G2")
    return g, build_basis(g, [ep_path(g, None, g.edge("a")), ep_path(g, None, g.edge("b"))], check=False)


def corpus_basis(name):
    g = corpus.get(name)
    return g, build_basis(g, default_seeds(g, 2))


# -- bases ---------------------------------------------------------------------------------------


def test_single_path_bases():
    g, B = g1_basis()
    assert len(B) == 1 and B.safe == {0}
    T2 = corpus.get("T2")
    BT = build_basis(T2, [ep_path(T2, None, T2.path(["b", "r"]))])
    assert len(BT) == 1


def test_loop_seeds_in_g2_are_rejected():
    g = corpus.get("G2")
    with pytest.raises(SeedNotRegular):
        build_basis(g, [ep_path(g, None, g.edge("a"))])


def test_g2_basis_size_matches_word_count():
    g, B = g2_tm_basis()
    seen = set()
    for code in (["a", "b"], ["b", "a"]):
        full = oracles.expand_tm([], 0, code, 60)
        for p in range(3):
            for n in range(3):
                for nu in oracles.words(oracles.G2, n):
                    seen.add(tuple((nu + full[p:])[:40]))
    assert len(B) == len(seen)
    assert not B.rejected


def test_basis_is_shift_closed_for_eventually_periodic_seeds():
    for name in ("G1e", "C2", "P1_C2_12", "T2"):
        g, B = corpus_basis(name)
        for x in B.members:
            for y in shift_orbit(g, x):
                assert y in B


def test_basis_members_are_unique():
    g, B = g2_tm_basis()
    assert len(set(B.members)) == len(B)


# -- generator matrices ------------------------------------------------------------------------------


def test_g1_matrices():
    g, B = g1_basis()
    assert op_T(g.edge("e"), B).toarray().tolist() == [[1]]
    assert op_Q(g.edge("e"), B).toarray().tolist() == [[1]]


def test_vertex_operator_is_range_indicator():
    g, B = corpus_basis("G1e")
    for v in g.vertices:
        T = op_T(g.vertex(v), B).toarray()
        assert np.array_equal(T, np.diag([1.0 if x.rng == v else 0.0 for x in B.members]))


def test_g2_loop_moves():
    g, B = g2_loop_basis()
    a_inf = ep_path(g, None, g.edge("a"))
    b_inf = ep_path(g, None, g.edge("b"))
    ab_inf = ep_path(g, g.edge("a"), g.edge("b"))
    T = op_T(g.edge("a"), B)
    assert T.matrix[B.index[ab_inf], B.index[b_inf]] == 1
    Q = op_Q(g.edge("a"), B).toarray()
    assert Q[B.index[b_inf], B.index[b_inf]] == 0 and Q[B.index[a_inf], B.index[a_inf]] == 1


def test_overflow_columns_are_flagged():
    g, B = g2_tm_basis()
    T = op_T(g.path(["a", "a", "a"]), B)
    assert T.overflow
    assert not (set(T.overflow) & set(np.nonzero(T.toarray().any(axis=0))[0].tolist()))
    with pytest.raises(UnsafeDomain):
        eval_upsilon(GeneratorCombo.S(g, g.path(["a", "a", "a"])), B, strict=True)


def test_coo_export():
    g, B = g1_basis()
    text = op_T(g.edge("e"), B).coo_text()
    assert text == "0 0 1 0\n"


# -- Cuntz-Krieger relations ----------------------------------------------------------------------------


def test_ck_examples():
    g, B = g1_basis()
    r = verify_CK(B, (1,))
    assert not r["ck1_violations"] and not r["ck2_violations"]
    T2 = corpus.get("T2")
    r = verify_CK(build_basis(T2, default_seeds(T2)), (1, 1))
    assert not r["ck1_violations"] and not r["ck2_violations"]
    g2, B2 = g2_tm_basis()
    total = sum((op_Q(lam, B2) for lam in g2.paths_from("v", (2,))), start=op_Q(g2.vertex("v"), B2).scale(0))
    assert np.array_equal(total.toarray(), op_Q(g2.vertex("v"), B2).toarray())


def test_ck1_only_checked_on_exact_columns():
    # columns whose image leaves the basis are skipped, not reported
    g, B = g2_tm_basis()
    r = verify_CK(B, (1,))
    assert r["ck1_checked_columns"] > 0 and not r["ck1_violations"]


@pytest.mark.parametrize("name", corpus.ACCEPTANCE)
def test_partial_isometries(name):
    g, B = corpus_basis(name)
    for a in g.paths_upto(deg.ones(g.k)):
        assert partial_isometry_defect(a, B) == 0


# -- representations -------------------------------------------------------------------------------------


def test_projection_image():
    g, B = corpus_basis("C2")
    for a in g.paths_upto((2,)):
        up = eval_upsilon(GeneratorCombo.P(g, a), B)
        assert np.array_equal(up.toarray(), op_Q(a, B).toarray())
        assert list(eval_Upsilon(GeneratorCombo.P(g, a), B).components) == [(0,)]


@pytest.mark.parametrize("name", corpus.ACCEPTANCE)
def test_cycline_generators_collapse_to_projections(name):
    g, B = corpus_basis(name)
    for a, b in enumerate_cycline(g, deg.ones(g.k)):
        up = eval_upsilon(GeneratorCombo.gen(g, a, b), B)
        cols = up.exact_columns
        assert up.equal_on(op_Q(a, B), cols) and up.equal_on(op_Q(b, B), cols)


def test_g1_kernel_element():
    g, B = g1_basis()
    c = GeneratorCombo.gen(g, g.vertex("v"), g.edge("e")) - GeneratorCombo.P(g, g.vertex("v"))
    assert eval_upsilon(c, B).is_zero()
    big = eval_Upsilon(c, B)
    assert big.components[(-1,)].toarray().tolist() == [[1]]
    assert big.components[(0,)].toarray().tolist() == [[-1]]


@pytest.mark.parametrize("name", ["G1", "T2", "C2", "P1_C2_12"])
def test_gauge_equivariance(name):
    g, B = corpus_basis(name)
    rng = np.random.default_rng(5)
    for _ in range(10):
        c = random_combo(g, rng, deg.ones(g.k))
        z = tuple(np.exp(2j * np.pi * rng.random(g.k)))
        assert eval_Upsilon(gauge_rotate(c, z), B).equal_on(eval_Upsilon(c, B).scaled(z))


def test_gauge_rotate_examples():
    g = corpus.get("G1")
    e = g.edge("e")
    c = GeneratorCombo.S(g, e) + GeneratorCombo.P(g, e)
    assert gauge_rotate(c, (1,)) == c
    assert gauge_rotate(GeneratorCombo.P(g, e), (1j,)) == GeneratorCombo.P(g, e)
    assert gauge_rotate(GeneratorCombo.S(g, e), (-1,)) == GeneratorCombo.S(g, e, -1)


@pytest.mark.parametrize("name", ["G1e", "G2", "T2", "P1_C2_11"])
def test_upsilon_is_multiplicative_where_exact(name):
    g, B = corpus_basis(name)
    rng = np.random.default_rng(11)
    for _ in range(15):
        c1 = random_combo(g, rng, deg.ones(g.k), terms=2)
        c2 = random_combo(g, rng, deg.ones(g.k), terms=2)
        prod = eval_upsilon(c1 * c2, B)
        left = eval_upsilon(c1, B) @ eval_upsilon(c2, B)
        cols = [j for j in prod.exact_columns if j not in left.overflow]
        assert prod.equal_on(left, cols, 1e-12)


def test_symbolic_action_matches_matrix_columns():
    g, B = corpus_basis("G1e")
    rng = np.random.default_rng(2)
    for _ in range(10):
        c = random_combo(g, rng, (1,))
        up = eval_upsilon(c, B)
        for j in up.exact_columns:
            vec = act_combo(g, c, B.members[j])
            col = up.toarray()[:, j]
            assert {B.members[i]: col[i] for i in np.nonzero(col)[0]} == vec


# -- probes --------------------------------------------------------------------------------------------


def test_kernel_probe_g1():
    g, B = g1_basis()
    r = kernel_probe(g, g.vertex("v"), g.edge("e"), B)
    assert r["upsilon_zero"] and r["separated"]
    assert set(r["Upsilon_components"]) == {"-1", "0"}


def test_kernel_probe_requires_cycline_pair():
    g, B = g2_tm_basis()
    assert find_kernel_pair(g, (3,)) is None
    with pytest.raises(NotCycline):
        kernel_probe(g, g.edge("a"), g.edge("b"), B)
    G1, B1 = g1_basis()
    with pytest.raises(NotCycline):
        kernel_probe(G1, G1.edge("e"), G1.edge("e"), B1)


@pytest.mark.parametrize("name", corpus.ACCEPTANCE)
def test_cycline_pairs_are_special(name):
    g, B = corpus_basis(name)
    for a, b in enumerate_cycline(g, deg.const(g.k, 2)):
        assert is_special(g, a, b, B)


@pytest.mark.parametrize("name", ["G1", "G1e", "G2", "T2", "C2", "P1_C2_11"])
def test_commutant_of_projections(name):
    g, B = corpus_basis(name) if name != "G2" else g2_tm_basis()
    r = commutant_check(B, deg.const(g.k, 3), numeric_limit=40)
    assert r["routes_agree"]
    if r["diagonal"]:
        # cycline generator images are then diagonal and commute
        mats = [eval_upsilon(GeneratorCombo.gen(g, a, b), B).toarray() for a, b in enumerate_cycline(g, deg.ones(g.k))]
        for m in mats:
            assert np.count_nonzero(m - np.diag(np.diag(m))) == 0


def test_commutant_routes_agree_on_coarse_bound():
    g, B = g2_tm_basis()
    r = commutant_check(B, (1,), numeric_limit=40)
    assert not r["diagonal"] and r["routes_agree"]


@pytest.mark.parametrize("name", ["G1e", "G2", "C2", "P1_C2_12"])
def test_distinct_cylinders_give_distinct_projections(name):
    g, B = corpus_basis(name)
    paths = g.paths_upto(deg.const(g.k, 2))
    for i, a in enumerate(paths):
        for b in paths[i + 1:]:
            if not cylinder_equal(g, a, b):
                assert not np.array_equal(op_Q(a, B).toarray(), op_Q(b, B).toarray())


def test_tstar_is_adjoint_where_exact():
    g, B = corpus_basis("C2")
    for a in g.paths_upto((2,)):
        T, Ts = op_T(a, B), op_Tstar(a, B)
        t = T.toarray()
        ts = Ts.toarray()
        rows = [i for i in range(len(B)) if i not in Ts.overflow]
        cols = T.exact_columns
        assert np.array_equal(ts[np.ix_(cols, rows)], t.conj().T[np.ix_(cols, rows)])
