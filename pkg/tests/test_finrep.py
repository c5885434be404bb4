import pytest
from hypothesis import given, settings

from gen import formulas, models
from topohybrid import formula as fm
from topohybrid.finrep import (HintikkaSet, QuasiModel, Universe, check_finite_rep,
                               check_quasi_model, filtrate, hintikka_problems, model_from_quasi,
                               normalize_class, quasi_from_model)
from topohybrid.formula import Dia, Neg, Nom, parse
from topohybrid.model import TopoModel, extension
from topohybrid.topo import discrete, from_preorder, preorder_from_pairs, sierpinski


def test_class_names():
    assert normalize_class("t2") == "T1"
    assert normalize_class("All") == "all"
    with pytest.raises(ValueError):
        normalize_class("T3")


def test_hintikka_enumeration_for_dia_nominal():
    u = Universe.of(parse("<>'i"))
    sets = [u.unmask(m) for m in u.hintikka_masks()]
    # 'i forces <>'i, so three of the four sign patterns survive
    assert len(sets) == 3
    for s in sets:
        assert not hintikka_problems(HintikkaSet(u, s))


def test_hintikka_problems_detects_t_closure():
    u = Universe.of(parse("<>p"))
    h = HintikkaSet(u, frozenset({parse("p"), Neg(Dia(parse("p")))}))
    assert any("but not" in x for x in hintikka_problems(h))


def two_point_t0():
    phi = parse("<>'i & ~'i")
    m = TopoModel(from_preorder(preorder_from_pairs((0, 1), [(0, 1)])), {}, {"i": 1})
    return phi, quasi_from_model(m, phi)


def test_quasi_model_classes():
    phi, q = two_point_t0()
    assert check_quasi_model(q, "T0")
    v = check_quasi_model(q, "T1")
    assert not v and "T1" in v.failure


def test_quasi_model_requires_unique_nominal():
    phi, q = two_point_t0()
    u = q.universe
    labels = dict(q.labels)
    labels[0] = HintikkaSet(u, q.labels[1].members)
    v = check_quasi_model(QuasiModel(q.space, labels, phi), "all")
    assert not v


def test_model_from_quasi_round_trip():
    phi, q = two_point_t0()
    m = model_from_quasi(q)
    assert extension(m, phi) == {0}


@settings(max_examples=80, deadline=None)
@given(models(max_points=3), formulas(max_leaves=6))
def test_truth_labels_form_quasi_models(m, f):
    if not extension(m, f):
        return
    q = quasi_from_model(m, f)
    assert check_quasi_model(q, "all")
    assert model_from_quasi(q).valuation.keys() <= m.valuation.keys()


def test_finite_rep_conditions():
    t1 = TopoModel(sierpinski(), {}, {"i": 2})
    assert check_finite_rep(t1, "T1")
    assert not check_finite_rep(TopoModel(sierpinski(), {}, {"i": 1}), "T1")
    cluster = from_preorder(preorder_from_pairs((0, 1), [(0, 1), (1, 0)]))
    assert not check_finite_rep(TopoModel(cluster, {}, {"i": 0, "j": 1}), "T0")
    assert check_finite_rep(TopoModel(cluster, {}, {"i": 0, "j": 0}), "T0")


def test_filtration_merges_agreeing_points():
    m = TopoModel(discrete(range(4)), {"p": frozenset({0, 1})})
    q, proj = filtrate(m, fm.subformula_closure(parse("p")))
    assert len(q.points) == 2 and proj[0] == proj[1] != proj[2] == proj[3]


def test_filtration_needs_closed_sigma():
    m = TopoModel(discrete(range(2)), {})
    with pytest.raises(ValueError):
        filtrate(m, [parse("<>p")])


@settings(max_examples=80, deadline=None)
@given(models(5), formulas(6))
def test_filtration_preserves_sigma_truth(m, f):
    sigma = fm.subformula_closure(f)
    q, proj = filtrate(m, sigma)
    assert len(q.points) <= 2 ** len(sigma)
    for g in sigma:
        before, after = extension(m, g), extension(q, g)
        assert all((w in before) == (proj[w] in after) for w in m.points)
    for o in q.space.opens:
        assert frozenset(w for w in m.points if proj[w] in o) in m.space.opens


def test_filtration_projection_need_not_be_open():
    # 0 sees 1, 2 is isolated; sigma = {p} merges 0 and 2
    m = TopoModel(from_preorder(preorder_from_pairs(range(3), [(0, 1)])), {"p": frozenset({1})})
    q, proj = filtrate(m, fm.subformula_closure(parse("p")))
    assert proj[0] == proj[2] != proj[1]
    assert frozenset({proj[2]}) not in q.space.opens
