import pytest
from hypothesis import given, settings

from gen import formulas, models, relational_truth, topological_truth
from topohybrid.formula import parse
from topohybrid.model import ModelError, TopoModel, check_truth, extension, model_problems, to_dot
from topohybrid.topo import discrete, sierpinski


def sierpinski_p():
    return TopoModel(sierpinski(), {"p": frozenset({1})})


def test_box_and_diamond_on_sierpinski():
    m = sierpinski_p()
    assert check_truth(m, 1, parse("[]p"))
    assert not check_truth(m, 2, parse("[]p"))
    assert check_truth(m, 2, parse("<>p"))
    assert extension(m, parse("<>~p")) == {2}


def test_nominals_and_at():
    m = TopoModel(discrete((0, 1)), {"p": frozenset({1})}, {"i": 1})
    assert extension(m, parse("'i")) == {1}
    assert extension(m, parse("@'i p")) == {0, 1}
    assert extension(m, parse("E ('i & ~p)")) == frozenset()
    assert extension(m, parse("A (p -> 'i)")) == {0, 1}


def test_unknown_nominal_and_point():
    m = sierpinski_p()
    with pytest.raises(ModelError):
        extension(m, parse("'k"))
    with pytest.raises(ModelError):
        check_truth(m, 9, parse("p"))
    assert extension(m, parse("r")) == frozenset()


def test_model_problems():
    m = TopoModel(sierpinski(), {"p": frozenset({7})}, {"i": 3})
    problems = model_problems(m)
    assert any("unknown points" in x for x in problems)
    assert any("unknown point 3" in x for x in problems)


@settings(max_examples=200, deadline=None)
@given(models(), formulas(max_leaves=7))
def test_three_evaluators_agree(m, f):
    ext = extension(m, f)
    assert ext == relational_truth(m, f)
    assert ext == topological_truth(m, f)


@given(models(), formulas(max_leaves=5))
def test_s4_validities(m, f):
    pts = frozenset(m.points)
    from topohybrid.formula import Box, Impl
    assert extension(m, Impl(Box(f), f)) == pts
    assert extension(m, Impl(Box(f), Box(Box(f)))) == pts


def test_dot():
    text = to_dot(sierpinski_p())
    assert "n1 -> n0" in text and "p" in text
