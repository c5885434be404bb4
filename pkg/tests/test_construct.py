from fractions import Fraction

import pytest

from topohybrid.bisim import graph, largest_hybrid_bisimulation, verify_topobisimulation
from topohybrid.construct import (LabeledTree, Progression, Singleton, SymbolicModel,
                                  check_tree_pmorphism, fatten_clusters, kolmogorov_quotient,
                                  peel_off, rational_embed, subtree_interval, symbolic_witness_t0,
                                  symbolic_witness_t1, unravel_to_full_tree, verify_symbolic)
from topohybrid.finrep import model_from_quasi
from topohybrid.formula import parse
from topohybrid.game import solve
from topohybrid.model import TopoModel
from topohybrid.topo import (all_preorders, check_separation, discrete, from_preorder, indiscrete,
                             preorder_from_pairs, sierpinski, to_preorder)


def model(n, pairs, valuation=None, nominals=None):
    return TopoModel(from_preorder(preorder_from_pairs(range(n), pairs)), valuation or {}, nominals or {})


# Kolmogorov quotient --------------------------------------------------------

def test_indiscrete_pair_collapses():
    q, proj = kolmogorov_quotient(TopoModel(indiscrete((1, 2)), {"p": frozenset({1, 2})}))
    assert len(q.points) == 1 and proj[1] == proj[2]


def test_t0_space_is_fixed():
    q, proj = kolmogorov_quotient(TopoModel(sierpinski(), {}))
    assert sorted(proj.values()) == [0, 1]


def test_two_indiscrete_pairs():
    m = model(4, [(0, 1), (1, 0), (2, 3), (3, 2)], {"p": frozenset({0, 1})})
    q, _ = kolmogorov_quotient(m)
    assert len(q.points) == 2 and check_separation(q.space, "T1")


def test_quotient_rejections():
    with pytest.raises(ValueError):
        kolmogorov_quotient(TopoModel(sierpinski(), {}, {"i": 1}))
    with pytest.raises(ValueError):
        kolmogorov_quotient(TopoModel(indiscrete((1, 2)), {"p": frozenset({1})}))


def test_quotient_on_all_small_spaces():
    for n in range(1, 5):
        for p in all_preorders(n):
            m = TopoModel(from_preorder(p), {})
            q, proj = kolmogorov_quotient(m)
            assert check_separation(q.space, "T0")
            assert verify_topobisimulation(graph(proj, m, q), require_total=True)


# symbolic witnesses -----------------------------------------------------------

def dia_not_i_rep():
    return model(2, [(0, 1)], nominals={"i": 0})


def test_t1_witness_for_named_point_with_neighbour():
    s = symbolic_witness_t1(dia_not_i_rep())
    assert s.classes == {0: Singleton(1), 1: Progression(2, 1)}
    assert verify_symbolic(s)


def test_all_named_is_finite():
    s = symbolic_witness_t1(TopoModel(discrete((0, 1)), {}, {"i": 0, "j": 1}))
    assert s.carrier == "finite" and verify_symbolic(s)


def test_sierpinski_without_nominals():
    s = symbolic_witness_t1(TopoModel(sierpinski(), {}))
    assert s.classes == {1: Progression(1, 2), 2: Progression(2, 2)}
    assert verify_symbolic(s)


def test_t0_witness_for_star_example():
    r = solve(parse("<>(~'i & <>'i)"), "T0")
    s = symbolic_witness_t0(model_from_quasi(r.quasi_model))
    assert s.carrier == "prefix+N" and verify_symbolic(s)


def test_t0_one_named_one_plain():
    s = symbolic_witness_t0(model(2, [(1, 0)], nominals={"i": 0}))
    assert s.classes[1] == Progression(2, 1) and verify_symbolic(s)


def test_t0_all_named_lift():
    rep = TopoModel(sierpinski(), {}, {"i": 1, "j": 2})
    s = symbolic_witness_t0(rep)
    assert s.carrier == "finite" and verify_symbolic(s)


def test_tampered_singleton_fails_openness():
    rep = TopoModel(sierpinski(), {})
    s = SymbolicModel(rep, {1: Singleton(1), 2: Progression(2, 1)}, "N", "T1")
    v = verify_symbolic(s)
    assert not v and v.failure.startswith("openness")


def test_overlapping_classes_fail_partition():
    s = SymbolicModel(TopoModel(sierpinski(), {}), {1: Progression(1, 1), 2: Progression(2, 2)}, "N", "T1")
    assert verify_symbolic(s).failure.startswith("partition")


def test_witness_preconditions():
    with pytest.raises(ValueError):
        symbolic_witness_t1(TopoModel(sierpinski(), {}, {"i": 1}))


# peel-off and fattening ------------------------------------------------------

def test_peel_off_duplicates_shared_successor():
    rep = model(3, [(0, 2), (1, 2)], {"p": frozenset({2})}, {"i": 0, "j": 1})
    out = peel_off(rep)
    assert len(out.points) == 4
    res = largest_hybrid_bisimulation(rep, out)
    assert res.total and res.hybrid


def test_peel_off_single_root_is_generated_submodel():
    rep = dia_not_i_rep()
    out = peel_off(rep)
    assert set(out.points) == {(0, 0), (0, 1)}
    assert out.nominals == {"i": (0, 0)}


def test_fatten_simple_point():
    m = TopoModel(discrete((0,)), {"p": frozenset({0})})
    out = fatten_clusters(m)
    assert len(out.points) == 2 and out.holds("p") == set(out.points)
    assert [len(c) for c in to_preorder(out.space).clusters()] == [2]


def test_fatten_leaves_named_and_proper_clusters():
    m = model(3, [(0, 1), (1, 0)], nominals={"i": 2})
    assert set(fatten_clusters(m).points) == {0, 1, 2}


# trees ------------------------------------------------------------------

def test_unravel_binary():
    m = dia_not_i_rep()
    t = unravel_to_full_tree(m, 0, 2, 2)
    assert len(t.labels) == 7 and t.labels[()] == 0
    assert all(t.labels[n] == 1 for n in t.labels if n)
    assert check_tree_pmorphism(t, m, 0)


def test_unravel_depth_zero():
    assert unravel_to_full_tree(dia_not_i_rep(), 0, 2, 0).labels == {(): 0}


def test_unravel_two_successors():
    m = model(3, [(0, 1), (0, 2)], nominals={"i": 0})
    t = unravel_to_full_tree(m, 0, 2, 1)
    assert {t.labels[(0,)], t.labels[(1,)]} == {1, 2}
    with pytest.raises(ValueError):
        unravel_to_full_tree(model(4, [(0, 1), (0, 2), (0, 3)]), 0, 2, 1)


def full_tree(n, d):
    labels = {(): 0}
    frontier = [()]
    for _ in range(d):
        frontier = [node + (k,) for node in frontier for k in range(n)]
        labels.update({node: 0 for node in frontier})
    return LabeledTree(n, d, labels)


def test_rational_embedding_values():
    f = rational_embed(full_tree(2, 2))
    assert f[()] == 0
    assert (f[(0,)], f[(1,)]) == (-1, 1)
    assert (f[(0, 0)], f[(0, 1)]) == (Fraction(-4, 3), Fraction(-2, 3))


def test_rational_embedding_rejects_partial_tree():
    with pytest.raises(ValueError):
        rational_embed(LabeledTree(2, 1, {(): 0, (0,): 0}))


@pytest.mark.parametrize("n", [2, 3])
def test_rational_embedding_injective_and_separated(n):
    t = full_tree(n, 5)
    f = rational_embed(t)
    assert len(set(f.values())) == len(f)
    for node in t.labels:
        kids = t.children(node)
        spans = sorted(subtree_interval(f, t, c) for c in kids)
        assert all(a[1] < b[0] for a, b in zip(spans, spans[1:]))
