"""Finite topological spaces and their specialization preorders.

Every finite space is Alexandroff: each point ``w`` has a least open
neighbourhood.  The preorder attached to a space relates ``w`` to every
point of that neighbourhood, so ``[]`` reads as "at all successors".
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Hashable, Iterable, Mapping

Point = Hashable


class TopologyError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteSpace:
    points: tuple
    opens: frozenset

    @cached_property
    def point_set(self) -> frozenset:
        return frozenset(self.points)

    @cached_property
    def _neighborhoods(self) -> dict:
        nbhd = {}
        for w in self.points:
            m = self.point_set
            for o in self.opens:
                if w in o:
                    m = m & o
            nbhd[w] = m
        return nbhd

    def minimal_neighborhood(self, w: Point) -> frozenset:
        try:
            return self._neighborhoods[w]
        except KeyError:
            raise TopologyError(f"unknown point {w!r}") from None

    def is_open(self, subset: Iterable[Point]) -> bool:
        return frozenset(subset) in self.opens

    def closure_of(self, subset: Iterable[Point]) -> frozenset:
        subset = frozenset(subset)
        return frozenset(w for w in self.points if self.minimal_neighborhood(w) & subset)

    def interior_of(self, subset: Iterable[Point]) -> frozenset:
        subset = frozenset(subset)
        return frozenset(w for w in self.points if self.minimal_neighborhood(w) <= subset)


@dataclass(frozen=True)
class Preorder:
    points: tuple
    rel: frozenset  # pairs (u, v)

    @cached_property
    def _succ(self) -> dict:
        succ = {w: set() for w in self.points}
        for u, v in self.rel:
            succ[u].add(v)
        return {w: frozenset(s) for w, s in succ.items()}

    @cached_property
    def _pred(self) -> dict:
        pred = {w: set() for w in self.points}
        for u, v in self.rel:
            pred[v].add(u)
        return {w: frozenset(s) for w, s in pred.items()}

    def successors(self, w: Point) -> frozenset:
        return self._succ[w]

    def predecessors(self, w: Point) -> frozenset:
        return self._pred[w]

    def related(self, u: Point, v: Point) -> bool:
        return (u, v) in self.rel

    def is_reflexive(self) -> bool:
        return all((w, w) in self.rel for w in self.points)

    def is_transitive(self) -> bool:
        return all((u, x) in self.rel for u, v in self.rel for x in self._succ[v])

    def clusters(self) -> list[frozenset]:
        seen, out = set(), []
        for w in self.points:
            if w in seen:
                continue
            c = frozenset(v for v in self._succ[w] if (v, w) in self.rel)
            seen |= c
            out.append(c)
        return out

    def up_closure(self, subset: Iterable[Point]) -> frozenset:
        out = set()
        for w in subset:
            out |= self._succ[w]
        return frozenset(out)


def space_problems(s: FiniteSpace) -> list[str]:
    """Violations of the topology axioms, empty for a valid space."""
    problems = []
    full = s.point_set
    if len(full) != len(s.points):
        problems.append("duplicate points")
    if frozenset() not in s.opens:
        problems.append("empty set is not open")
    if full not in s.opens:
        problems.append("full point set is not open")
    for o in s.opens:
        if not o <= full:
            problems.append(f"open {sorted(o, key=repr)} is not a subset of the points")
            return problems
    for a, b in combinations(s.opens, 2):
        if a | b not in s.opens:
            problems.append("opens not closed under union")
            break
    for a, b in combinations(s.opens, 2):
        if a & b not in s.opens:
            problems.append("opens not closed under intersection")
            break
    return problems


def generate_topology(points: Iterable[Point], subbase: Iterable[Iterable[Point]]) -> FiniteSpace:
    """Smallest topology on ``points`` containing every member of ``subbase``."""
    points = tuple(points)
    full = frozenset(points)
    family = {frozenset(), full}
    for member in subbase:
        member = frozenset(member)
        if not member <= full:
            raise TopologyError(f"subbase member {sorted(member, key=repr)} is not a subset of the points")
        family.add(member)
    frontier = set(family)
    while frontier:
        new = set()
        for a in frontier:
            for b in list(family):
                for c in (a | b, a & b):
                    if c not in family:
                        new.add(c)
        family |= new
        frontier = new
    return FiniteSpace(points, frozenset(family))


def to_preorder(s: FiniteSpace) -> Preorder:
    rel = frozenset((w, v) for w in s.points for v in s.minimal_neighborhood(w))
    return Preorder(s.points, rel)


def from_preorder(p: Preorder) -> FiniteSpace:
    """Alexandroff topology whose opens are the upward closed sets of ``p``."""
    if not p.is_reflexive() or not p.is_transitive():
        raise TopologyError("relation is not reflexive and transitive")
    # every up-set is a union of principal up-sets
    principal = {p.successors(w) for w in p.points}
    opens = {frozenset()}
    for o in principal:
        opens |= {o | u for u in opens}
    return FiniteSpace(p.points, frozenset(opens))


def preorder_from_pairs(points: Iterable[Point], pairs: Iterable[tuple]) -> Preorder:
    """Reflexive-transitive closure of ``pairs`` over ``points``."""
    points = tuple(points)
    succ = {w: {w} for w in points}
    for u, v in pairs:
        if u not in succ or v not in succ:
            raise TopologyError(f"pair {(u, v)!r} mentions an unknown point")
        succ[u].add(v)
    changed = True
    while changed:
        changed = False
        for w in points:
            reach = set(succ[w])
            for v in succ[w]:
                reach |= succ[v]
            if reach != succ[w]:
                succ[w] = reach
                changed = True
    return Preorder(points, frozenset((u, v) for u in points for v in succ[u]))


def check_separation(s: FiniteSpace, axiom: str) -> bool:
    axiom = axiom.upper()
    nbhd = s.minimal_neighborhood
    pairs = list(combinations(s.points, 2))
    if axiom == "T0":
        return all(y not in nbhd(x) or x not in nbhd(y) for x, y in pairs)
    if axiom == "T1":
        return all(s.point_set - {w} in s.opens for w in s.points)
    if axiom == "T2":
        return all(not (nbhd(x) & nbhd(y)) for x, y in pairs)
    raise ValueError(f"unknown separation axiom {axiom!r}")


def quotient_topology(s: FiniteSpace, proj: Mapping[Point, Point],
                      classes: Iterable[Point] | None = None) -> FiniteSpace:
    """Finest topology on the classes making ``proj`` continuous.

    ``classes`` fixes the order of the quotient points; every class must
    have a preimage.
    """
    missing = [w for w in s.points if w not in proj]
    if missing:
        raise TopologyError(f"projection undefined on {missing!r}")
    hit = []
    for w in s.points:
        if proj[w] not in hit:
            hit.append(proj[w])
    if classes is None:
        classes = hit
    else:
        classes = list(classes)
        empty = [c for c in classes if c not in hit]
        if empty or len(hit) != len(classes):
            raise TopologyError(f"projection is not surjective onto the classes (missing {empty!r})")
    # an image of a saturated open is open, and every quotient open is one
    opens = set()
    for o in s.opens:
        image = frozenset(proj[w] for w in o)
        if frozenset(w for w in s.points if proj[w] in image) == o:
            opens.add(image)
    return FiniteSpace(tuple(classes), frozenset(opens))


def discrete(points: Iterable[Point]) -> FiniteSpace:
    points = tuple(points)
    return from_preorder(Preorder(points, frozenset((w, w) for w in points)))


def indiscrete(points: Iterable[Point]) -> FiniteSpace:
    points = tuple(points)
    return FiniteSpace(points, frozenset({frozenset(), frozenset(points)}))


def sierpinski() -> FiniteSpace:
    """Points 1 and 2 with opens {}, {1}, {1, 2}."""
    return generate_topology((1, 2), [{1}])


def all_preorders(n: int) -> list[Preorder]:
    """Every preorder on the labelled points 0..n-1."""
    points = tuple(range(n))
    off = [(u, v) for u in points for v in points if u != v]
    out = []
    for bits in range(1 << len(off)):
        rel = {(w, w) for w in points}
        rel |= {pair for k, pair in enumerate(off) if bits >> k & 1}
        if all((u, x) in rel for u, v in rel for (v2, x) in rel if v2 == v):
            out.append(Preorder(points, frozenset(rel)))
    return out
