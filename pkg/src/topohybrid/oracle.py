"""Brute-force satisfiability over small preorder models.

The oracle shares no code with the game.  It enumerates preorders up to
isomorphism, every placement of the nominals and every valuation of the
propositions, evaluates all subformulas for all valuations at once with
numpy, and reads quasi-models off the truth sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterable, Iterator, Optional

import numpy as np

from . import formula as fm
from .finrep import HintikkaSet, QuasiModel, Universe, normalize_class
from .formula import A, And, At, Box, Dia, E, Formula, Impl, Neg, Nom, Or, Prop
from .model import TopoModel
from .topo import Preorder, all_preorders, from_preorder

SAT = "SAT"
NONE_AT_BOUND = "NONE_AT_BOUND"


@dataclass(frozen=True)
class OracleVerdict:
    result: str
    bound: int
    quasi_model: Optional[QuasiModel] = None

    def __bool__(self) -> bool:
        return self.result == SAT


def _canonical(points: tuple, rel: frozenset, labels: tuple = ()) -> tuple:
    n = len(points)
    best = None
    for perm in permutations(range(n)):
        r = tuple(sorted((perm[u], perm[v]) for u, v in rel))
        lab = tuple(sorted((perm[k], m) for k, m in enumerate(labels)))
        key = (r, lab)
        if best is None or key < best:
            best = key
    return best


_SHAPES: dict = {}


def preorder_shapes(n: int, prune: bool = True) -> list[Preorder]:
    """Preorders on ``0..n-1``, one per isomorphism class when ``prune``."""
    if not prune:
        return all_preorders(n)
    if n not in _SHAPES:
        seen, out = set(), []
        for p in all_preorders(n):
            key = _canonical(p.points, p.rel)
            if key not in seen:
                seen.add(key)
                out.append(p)
        _SHAPES[n] = out
    return _SHAPES[n]


def _evaluate(formulas: Iterable[Formula], rel: np.ndarray, noms: dict, props: list) -> dict:
    """Truth arrays of shape (valuations, points) for every formula.

    Valuation number ``v`` makes proposition ``k`` true at point ``w`` iff
    bit ``k * n + w`` of ``v`` is set.
    """
    n = rel.shape[0]
    count = 1 << (n * len(props))
    codes = np.arange(count, dtype=np.int64)[:, None]
    cols = np.arange(n, dtype=np.int64)[None, :]
    relf = rel.astype(np.int64).T
    out: dict = {}

    def ev(f: Formula) -> np.ndarray:
        got = out.get(f)
        if got is not None:
            return got
        if isinstance(f, Prop):
            if f.name in props:
                k = props.index(f.name)
                val = ((codes >> (k * n + cols)) & 1).astype(bool)
            else:
                val = np.zeros((count, n), dtype=bool)
        elif isinstance(f, Nom):
            val = np.zeros((count, n), dtype=bool)
            val[:, noms[f.name]] = True
        elif isinstance(f, Neg):
            val = ~ev(f.sub)
        elif isinstance(f, And):
            val = ev(f.left) & ev(f.right)
        elif isinstance(f, Or):
            val = ev(f.left) | ev(f.right)
        elif isinstance(f, Impl):
            val = ~ev(f.left) | ev(f.right)
        elif isinstance(f, Dia):
            val = (ev(f.sub).astype(np.int64) @ relf) > 0
        elif isinstance(f, Box):
            val = ((~ev(f.sub)).astype(np.int64) @ relf) == 0
        elif isinstance(f, E):
            val = np.repeat(ev(f.sub).any(axis=1, keepdims=True), n, axis=1)
        elif isinstance(f, A):
            val = np.repeat(ev(f.sub).all(axis=1, keepdims=True), n, axis=1)
        elif isinstance(f, At):
            val = np.repeat(ev(f.sub)[:, noms[f.nom]][:, None], n, axis=1)
        else:
            raise TypeError(f"not a formula: {f!r}")
        out[f] = val
        return val

    for f in formulas:
        ev(f)
    return out


def _class_ok(p: Preorder, named: Iterable[int], klass: str) -> bool:
    named = set(named)
    if klass == "T1":
        return not any(u != v and v in named for u, v in p.rel)
    if klass == "T0":
        return not any(u != v and u in named and v in named and (v, u) in p.rel for u, v in p.rel)
    return True


def _models(phi: Formula, klass: str, preorders: Iterable[Preorder]) -> Iterator[tuple]:
    """(preorder, nominal placement, truth arrays, valuation codes satisfying phi)."""
    props = sorted(fm.props(phi))
    names = sorted(fm.nominals(phi))
    formulas = Universe.of(phi).formulas
    for p in preorders:
        n = len(p.points)
        rel = np.zeros((n, n), dtype=bool)
        for u, v in p.rel:
            rel[u, v] = True
        for place in product(range(n), repeat=len(names)):
            if not _class_ok(p, place, klass):
                continue
            noms = dict(zip(names, place))
            truth = _evaluate(formulas, rel, noms, props)
            hits = np.nonzero(truth[phi].any(axis=1))[0]
            if len(hits):
                yield p, noms, truth, hits, props


def _quasi(phi: Formula, p: Preorder, truth: dict, code: int) -> QuasiModel:
    u = Universe.of(phi)
    labels = {}
    for w in p.points:
        labels[w] = HintikkaSet(u, frozenset(f for f in u.formulas if truth[f][code, w]))
    return QuasiModel(from_preorder(p), labels, phi)


def enumerate_quasi_models(phi: Formula, klass: str, max_points: int,
                           prune: bool = True) -> Iterator[QuasiModel]:
    """Every quasi-model for ``phi`` on at most ``max_points`` points.

    ``phi`` is brought into the same normal form the game uses.  With
    ``prune`` both the preorder shapes and the yielded quasi-models are
    reduced up to isomorphism.
    """
    if max_points < 1:
        raise ValueError("max_points must be at least 1")
    k = _oracle_class(klass, phi)
    target = fm.core(phi)
    seen: set = set()
    for n in range(1, max_points + 1):
        for p, _, truth, hits, _ in _models(target, k, preorder_shapes(n, prune)):
            for code in hits:
                q = _quasi(target, p, truth, int(code))
                if prune:
                    key = _canonical(p.points, p.rel, tuple(q.labels[w].mask for w in p.points))
                    if key in seen:
                        continue
                    seen.add(key)
                yield q


def _oracle_class(klass: str, phi: Formula) -> str:
    k = normalize_class(klass)
    if k == "all" and fm.nominals(phi):
        raise ValueError("class 'all' is only available for nominal-free formulas")
    return k


def brute_force_sat(phi: Formula, klass: str, max_points: int, prune: bool = True) -> OracleVerdict:
    for q in enumerate_quasi_models(phi, klass, max_points, prune):
        return OracleVerdict(SAT, max_points, q)
    return OracleVerdict(NONE_AT_BOUND, max_points)


def satisfying_models(phi: Formula, preorders: Iterable[Preorder]) -> Iterator[TopoModel]:
    """Models over the given preorders in which ``phi`` holds somewhere."""
    for p, noms, _, hits, props in _models(phi, "all", preorders):
        n = len(p.points)
        space = from_preorder(p)
        for code in hits:
            code = int(code)
            valuation = {name: frozenset(w for w in p.points if code >> (k * n + w) & 1)
                         for k, name in enumerate(props)}
            yield TopoModel(space, valuation, noms)


def discrete_preorders(max_points: int) -> list[Preorder]:
    """Specialization preorders of the discrete spaces, the only finite T1 spaces."""
    return [Preorder(tuple(range(n)), frozenset((w, w) for w in range(n)))
            for n in range(1, max_points + 1)]
