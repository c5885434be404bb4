import random

import pytest

from gen import game_corpus
from topohybrid.finrep import check_quasi_model
from topohybrid.formula import parse
from topohybrid.oracle import (NONE_AT_BOUND, SAT, brute_force_sat, discrete_preorders,
                               enumerate_quasi_models, preorder_shapes, satisfying_models)


def test_single_point_for_p():
    qs = list(enumerate_quasi_models(parse("p"), "T0", 1))
    assert len(qs) == 1 and parse("p") in qs[0].labels[0]


def test_dia_nominal_examples():
    assert list(enumerate_quasi_models(parse("<>'i & ~'i"), "T1", 3)) == []
    assert next(enumerate_quasi_models(parse("<>'i & ~'i"), "T0", 2))


@pytest.mark.parametrize("text,klass,result", [
    ("p & ~p", "T0", NONE_AT_BOUND),
    ("<>(~'i & <>'i)", "T0", SAT),
    ("<>(~'i & <>'i)", "T1", NONE_AT_BOUND),
])
def test_brute_force_examples(text, klass, result):
    v = brute_force_sat(parse(text), klass, 3)
    assert v.result == result and v.bound == 3
    if v:
        assert check_quasi_model(v.quasi_model, klass)


def test_shape_counts():
    # preorders up to isomorphism on 1..4 points
    assert [len(preorder_shapes(n)) for n in (1, 2, 3, 4)] == [1, 3, 9, 33]


def test_witnesses_are_quasi_models():
    for q in enumerate_quasi_models(parse("<>p & <>~p & 'i"), "T0", 3):
        assert check_quasi_model(q, "T0")


def test_pruning_keeps_verdicts():
    r = random.Random(3)
    for f in game_corpus(40, seed=11):
        for klass in ("T0", "T1"):
            pruned = bool(brute_force_sat(f, klass, 2))
            assert pruned == bool(brute_force_sat(f, klass, 2, prune=False)), f


def test_no_finite_t1_model_for_named_point_with_other_neighbour():
    assert not list(satisfying_models(parse("'i & <>~'i"), discrete_preorders(4)))
    assert list(satisfying_models(parse("'i & ~<>~'i"), discrete_preorders(1)))
