"""Topobisimulations and interior maps between finite models."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .checks import PASS, Check, fail
from .model import TopoModel
from .topo import FiniteSpace, Point


@dataclass(frozen=True)
class PointRelation:
    left: TopoModel
    right: TopoModel
    pairs: frozenset

    def image(self, xs: Iterable[Point]) -> frozenset:
        xs = set(xs)
        return frozenset(y for x, y in self.pairs if x in xs)

    def preimage(self, ys: Iterable[Point]) -> frozenset:
        ys = set(ys)
        return frozenset(x for x, y in self.pairs if y in ys)

    def is_total(self) -> bool:
        return (frozenset(x for x, _ in self.pairs) == self.left.space.point_set
                and frozenset(y for _, y in self.pairs) == self.right.space.point_set)


@dataclass(frozen=True)
class BisimulationResult:
    relation: PointRelation
    total: bool
    hybrid: bool


def graph(f: Mapping[Point, Point], left: TopoModel, right: TopoModel) -> PointRelation:
    return PointRelation(left, right, frozenset(f.items()))


def _prop_clash(r: PointRelation, props, noms) -> str | None:
    a, b = r.left, r.right
    if props is None:
        props = set(a.valuation) | set(b.valuation)
    if noms is None:
        noms = set(a.nominals) | set(b.nominals)
    for x, y in sorted(r.pairs, key=repr):
        for p in props:
            if (x in a.holds(p)) != (y in b.holds(p)):
                return f"Prop: {x!r} and {y!r} disagree on {p}"
        for n in noms:
            if (a.nominals.get(n) == x) != (b.nominals.get(n) == y):
                return f"Prop: {x!r} and {y!r} disagree on nominal '{n}"
    return None


def verify_topobisimulation(r: PointRelation, require_total: bool = False,
                            require_hybrid: bool = False, props: Iterable[str] | None = None,
                            nominals: Iterable[str] | None = None) -> Check:
    """Check Prop, Zig and Zag, and optionally totality and the hybrid clause.

    ``props`` and ``nominals`` restrict the atoms compared by Prop; by default
    every atom mentioned by either model is compared.
    """
    a, b = r.left, r.right
    for x, y in r.pairs:
        if x not in a.space.point_set or y not in b.space.point_set:
            return fail(f"pair {(x, y)!r} is not in left.points x right.points")
    clash = _prop_clash(r, props, nominals)
    if clash:
        return fail(clash)
    for o in a.space.opens:
        if r.image(o) not in b.space.opens:
            return fail(f"Zig: image of open {sorted(o, key=repr)} is not open")
    for u in b.space.opens:
        if r.preimage(u) not in a.space.opens:
            return fail(f"Zag: preimage of open {sorted(u, key=repr)} is not open")
    if require_total and not r.is_total():
        return fail("total: some point is unrelated")
    if require_hybrid:
        for n in set(a.nominals) & set(b.nominals):
            if (a.nominals[n], b.nominals[n]) not in r.pairs:
                return fail(f"hybrid: points named '{n} are not related")
    return PASS


def _space(x: Union[TopoModel, FiniteSpace]) -> FiniteSpace:
    return x.space if isinstance(x, TopoModel) else x


def verify_interior_map(f: Mapping[Point, Point], source: Union[TopoModel, FiniteSpace],
                        target: Union[TopoModel, FiniteSpace]) -> Check:
    """``f`` is open (images of opens are open) and continuous."""
    s, t = _space(source), _space(target)
    missing = [w for w in s.points if w not in f]
    if missing:
        raise ValueError(f"map undefined on {missing!r}")
    for o in s.opens:
        img = frozenset(f[w] for w in o)
        if img not in t.opens:
            return fail(f"open: image of {sorted(o, key=repr)} is not open")
    for u in t.opens:
        pre = frozenset(w for w in s.points if f[w] in u)
        if pre not in s.opens:
            return fail(f"continuous: preimage of {sorted(u, key=repr)} is not open")
    return PASS


def largest_hybrid_bisimulation(a: TopoModel, b: TopoModel) -> BisimulationResult:
    """Greatest topobisimulation between two finite models.

    Starts from all atom-agreeing pairs and deletes ``(x, y)`` while the
    least neighbourhood of ``y`` is not covered by the image of the least
    neighbourhood of ``x`` (or symmetrically).  On finite spaces this local
    test is equivalent to Zig and Zag for the whole relation.
    """
    start = PointRelation(a, b, frozenset())
    rel = set()
    for x in a.points:
        for y in b.points:
            if _prop_clash(PointRelation(a, b, frozenset({(x, y)})), None, None) is None:
                rel.add((x, y))
    na, nb = a.space.minimal_neighborhood, b.space.minimal_neighborhood
    changed = True
    while changed:
        changed = False
        fwd: dict = {}
        bwd: dict = {}
        for x, y in rel:
            fwd.setdefault(x, set()).add(y)
            bwd.setdefault(y, set()).add(x)
        for x, y in list(rel):
            img = set()
            for x2 in na(x):
                img |= fwd.get(x2, set())
            pre = set()
            for y2 in nb(y):
                pre |= bwd.get(y2, set())
            if not nb(y) <= img or not na(x) <= pre:
                rel.discard((x, y))
                changed = True
    r = PointRelation(start.left, start.right, frozenset(rel))
    hybrid = all((a.nominals[n], b.nominals[n]) in rel for n in set(a.nominals) & set(b.nominals))
    return BisimulationResult(r, r.is_total(), hybrid)
