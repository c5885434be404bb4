"""Model constructions: Kolmogorov quotient, symbolic infinite witnesses,
peel-off, cluster fattening, tree unraveling and rational embedding."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Iterator, Union

from .checks import PASS, Check, fail
from .finrep import check_finite_rep
from .model import TopoModel, model_problems
from .topo import Preorder, Point, from_preorder, quotient_topology, to_preorder


def _require_valid(m: TopoModel) -> None:
    problems = model_problems(m)
    if problems:
        raise ValueError(f"invalid model: {problems[0]}")


# --------------------------------------------------------------------------
# Kolmogorov quotient


def kolmogorov_quotient(m: TopoModel) -> tuple[TopoModel, dict]:
    """Identify points that lie in exactly the same opens.

    Only nominal-free models are accepted, and the valuation must not
    separate indistinguishable points (otherwise no quotient model exists
    whose projection preserves the propositions).
    """
    _require_valid(m)
    if m.nominals:
        raise ValueError("the Kolmogorov quotient is defined here for nominal-free models only")
    nbhd = m.space.minimal_neighborhood
    cls: dict = {}
    proj = {}
    for w in m.points:
        proj[w] = cls.setdefault(nbhd(w), len(cls))
    for p, ext in m.valuation.items():
        for x, y in combinations(m.points, 2):
            if proj[x] == proj[y] and (x in ext) != (y in ext):
                raise ValueError(f"valuation of {p} splits indistinguishable points {x!r} and {y!r}")
    space = quotient_topology(m.space, proj, range(len(cls)))
    valuation = {p: frozenset(proj[w] for w in ext) for p, ext in m.valuation.items()}
    return TopoModel(space, valuation, {}), proj


# --------------------------------------------------------------------------
# symbolic witnesses


@dataclass(frozen=True)
class Singleton:
    id: int

    def __contains__(self, x: int) -> bool:
        return x == self.id


@dataclass(frozen=True)
class Progression:
    offset: int
    stride: int

    def __contains__(self, x: int) -> bool:
        return x >= self.offset and (x - self.offset) % self.stride == 0


Descriptor = Union[Singleton, Progression]


@dataclass(frozen=True)
class SymbolicModel:
    """An infinite model presented by a finite one.

    The carrier is the positive integers (``carrier == "N"`` or
    ``"prefix+N"``) or the finite prefix ``1..m`` (``"finite"``).  The
    class of base point ``k`` is ``classes[k]``; ``f`` maps every carrier
    point to the base point whose class contains it.  Basic opens are pairs
    ``(O, F)`` standing for ``f^-1(O)`` minus the finite set ``F``; in the
    ``"T0"`` kind ``F`` may only contain points of progression classes.
    """

    base: TopoModel
    classes: dict
    carrier: str
    kind: str

    def f(self, x: int) -> Point:
        for k, d in self.classes.items():
            if x in d:
                return k
        raise ValueError(f"{x} is not in the carrier")

    def singletons(self) -> dict:
        return {d.id: k for k, d in self.classes.items() if isinstance(d, Singleton)}

    def window(self) -> range:
        """Carrier points that exhibit every class and a full period."""
        prog = [d for d in self.classes.values() if isinstance(d, Progression)]
        top = max([d.id for d in self.classes.values() if isinstance(d, Singleton)], default=0)
        if prog:
            top = max(top, max(d.offset for d in prog) + lcm(*(d.stride for d in prog)))
        return range(1, top + 1)

    def holds(self, prop: str, x: int) -> bool:
        return self.f(x) in self.base.holds(prop)

    def named(self, nominal: str) -> int:
        d = self.classes[self.base.nominals[nominal]]
        if not isinstance(d, Singleton):
            raise ValueError(f"nominal '{nominal} has no single carrier point")
        return d.id


def _named_points(rep: TopoModel) -> list:
    named = rep.named()
    return [w for w in rep.points if w in named]


def _progressions(rep: TopoModel) -> dict:
    named = _named_points(rep)
    rest = [w for w in rep.points if w not in named]
    m = len(named)
    classes = {w: Singleton(k + 1) for k, w in enumerate(named)}
    for j, w in enumerate(rest):
        classes[w] = Progression(m + 1 + j, len(rest))
    return classes


def symbolic_witness_t1(rep: TopoModel) -> SymbolicModel:
    """T1 model over the integers collapsing onto ``rep``.

    Named points become the singletons ``1..m``; the remaining ``n - m``
    points receive the residue classes of ``m+1, m+2, ...`` modulo
    ``n - m``.  Opens are generated by preimages of opens of ``rep`` and
    cofinite sets.
    """
    _require_valid(rep)
    verdict = check_finite_rep(rep, "T1")
    if not verdict:
        raise ValueError(verdict.failure)
    classes = _progressions(rep)
    carrier = "finite" if all(isinstance(d, Singleton) for d in classes.values()) else "N"
    return SymbolicModel(rep, classes, carrier, "T1")


def symbolic_witness_t0(rep: TopoModel) -> SymbolicModel:
    """T0 model on ``1..m`` plus copies of the unnamed points.

    If every point is named the representation is already T0 and is
    returned as is, with one singleton per point.
    """
    _require_valid(rep)
    verdict = check_finite_rep(rep, "T0")
    if not verdict:
        raise ValueError(verdict.failure)
    classes = _progressions(rep)
    carrier = "finite" if all(isinstance(d, Singleton) for d in classes.values()) else "prefix+N"
    return SymbolicModel(rep, classes, carrier, "T0")


def symbolic_witness(rep: TopoModel, klass: str) -> SymbolicModel:
    return symbolic_witness_t1(rep) if klass.upper() in ("T1", "T2") else symbolic_witness_t0(rep)


def _subsets(xs: list) -> Iterator[frozenset]:
    for r in range(len(xs) + 1):
        for c in combinations(xs, r):
            yield frozenset(c)


def verify_symbolic(s: SymbolicModel) -> Check:
    """Check the proof obligations of a symbolic model on basic opens.

    Images and preimages commute with unions, so it is enough to look at
    basic opens.  ``F`` only matters through the singleton classes it
    swallows, which leaves finitely many cases.
    """
    base = s.base
    tau = base.space
    if set(s.classes) != set(base.points):
        return fail("partition: classes do not match the base points")
    window = s.window()
    for x in window:
        owners = [k for k, d in s.classes.items() if x in d]
        if len(owners) != 1:
            return fail(f"partition: carrier point {x} lies in {len(owners)} classes")
    single = s.singletons()
    if any(i > len(single) for i in single):
        return fail("partition: singleton ids are not 1..m")
    if s.carrier == "finite" and any(isinstance(d, Progression) for d in s.classes.values()):
        return fail("partition: a finite carrier has an infinite class")
    for o in tau.opens:
        pre = frozenset(x for x in window if s.f(x) in o)
        want = frozenset(x for x in window if any(x in s.classes[k] for k in o))
        if pre != want:
            return fail(f"continuity: preimage of {sorted(o, key=repr)} is not the basic open (O, {{}})")
    removable = list(single) if s.kind == "T1" else []
    for o in tau.opens:
        for gone in _subsets([i for i in removable if single[i] in o]):
            image = o - {single[i] for i in gone}
            if image not in tau.opens:
                return fail(f"openness: image {sorted(image, key=repr)} of a basic open is not open")
    if s.kind == "T1":
        if tau.point_set not in tau.opens:
            return fail("separation: the whole space is not open")
    else:
        nbhd = tau.minimal_neighborhood
        for x, y in combinations(sorted(single), 2):
            a, b = single[x], single[y]
            if b in nbhd(a) and a in nbhd(b):
                return fail(f"separation: carrier points {x} and {y} are indistinguishable")
    if s.carrier == "finite" and s.kind == "T1":
        for x in window:
            if tau.point_set - {s.f(x)} not in tau.opens:
                return fail(f"separation: complement of {x} is not open")
    for k, d in s.classes.items():
        if not any(x in d for x in window):
            return fail(f"total: class of {k!r} is empty")
    named = base.named()
    for k, d in s.classes.items():
        if isinstance(d, Singleton) != (k in named):
            return fail(f"hybrid: class of {k!r} is {'a singleton' if isinstance(d, Singleton) else 'infinite'}"
                        f" but the point is {'' if k in named else 'not '}named")
    return PASS


# --------------------------------------------------------------------------
# peel-off and fattening


def _relational(m: TopoModel) -> Preorder:
    return to_preorder(m.space)


def peel_off(rep: TopoModel) -> TopoModel:
    """Disjoint union of copies of the submodels generated by named points.

    Points are pairs ``(component, original)``.  Points outside every named
    cone are kept in one extra component tagged ``None`` so that every
    original point stays related to a copy.
    """
    _require_valid(rep)
    verdict = check_finite_rep(rep, "T1")
    if not verdict:
        raise ValueError(verdict.failure)
    pre = _relational(rep)
    roots = _named_points(rep)
    parts = [(r, sorted(pre.successors(r), key=rep.points.index)) for r in roots]
    covered = set().union(*(set(c) for _, c in parts)) if parts else set()
    rest = [w for w in rep.points if w not in covered]
    if rest:
        parts.append((None, [w for w in rep.points if w in pre.up_closure(rest)]))
    points, rel = [], set()
    for tag, cone in parts:
        for v in cone:
            points.append((tag, v))
            rel |= {((tag, v), (tag, x)) for x in pre.successors(v)}
    space = from_preorder(Preorder(tuple(points), frozenset(rel)))
    valuation = {p: frozenset(w for w in points if w[1] in ext) for p, ext in rep.valuation.items()}
    nominals = {n: (w, w) for n, w in rep.nominals.items()}
    return TopoModel(space, valuation, nominals)


def fatten_clusters(m: TopoModel) -> TopoModel:
    """Turn each unnamed one-point cluster into a two-point cluster.

    The new point is ``("copy", w)`` and inherits the valuation and every
    arc of ``w``.
    """
    _require_valid(m)
    pre = _relational(m)
    named = m.named()
    simple = [c for c in pre.clusters() if len(c) == 1]
    twins = {w: ("copy", w) for (w,) in map(tuple, simple) if w not in named}
    clash = [t for t in twins.values() if t in m.space.point_set]
    if clash:
        raise ValueError(f"point names {clash!r} are already taken")

    def group(w):
        return [w, twins[w]] if w in twins else [w]

    points = list(m.points) + [twins[w] for w in m.points if w in twins]
    rel = {(a, b) for u, v in pre.rel for a in group(u) for b in group(v)}
    space = from_preorder(Preorder(tuple(points), frozenset(rel)))
    valuation = {p: frozenset(ext) | {twins[w] for w in ext if w in twins} for p, ext in m.valuation.items()}
    return TopoModel(space, valuation, dict(m.nominals))


def generated_submodel(m: TopoModel, root: Point) -> TopoModel:
    """Restriction of ``m`` to the points ``root`` sees."""
    pre = _relational(m)
    keep = pre.successors(root)
    points = tuple(w for w in m.points if w in keep)
    space = from_preorder(Preorder(points, frozenset((u, v) for u, v in pre.rel if u in keep)))
    valuation = {p: frozenset(ext) & keep for p, ext in m.valuation.items()}
    nominals = {n: w for n, w in m.nominals.items() if w in keep}
    return TopoModel(space, valuation, nominals)


# --------------------------------------------------------------------------
# trees


@dataclass(frozen=True)
class LabeledTree:
    """Depth-``depth`` truncation of the full ``branching``-ary tree.

    Nodes are tuples of child indices (the root is ``()``), each labelled
    with a point of the source model.
    """

    branching: int
    depth: int
    labels: dict

    def nodes(self) -> list:
        return list(self.labels)

    def children(self, node: tuple) -> list:
        if len(node) >= self.depth:
            return []
        return [node + (k,) for k in range(self.branching)]


def _tree_children(pre: Preorder, root: Point, x: Point, order: list) -> list:
    succ = pre.successors(x)
    if x == root:
        succ = succ - {root}
    return sorted(succ, key=order.index)


def unravel_to_full_tree(m: TopoModel, root: Point, n: int, d: int) -> LabeledTree:
    """Unravel ``m`` from ``root`` into the full ``n``-ary tree up to depth ``d``.

    The root's own loop is dropped; a node labelled ``x`` gets one child
    per successor of ``x``, padded with further copies of the first one.
    """
    _require_valid(m)
    if root not in m.space.point_set:
        raise ValueError(f"unknown root {root!r}")
    if n < 2 or d < 0:
        raise ValueError("need branching n >= 2 and depth d >= 0")
    pre = _relational(m)
    if pre.successors(root) != m.space.point_set:
        raise ValueError("the model is not generated by the root")
    if len(m.points) < 2:
        raise ValueError("the model is trivial")
    if any(root in pre.successors(w) for w in m.points if w != root):
        raise ValueError("the root has incoming arcs")
    order = list(m.points)
    width = max(len(_tree_children(pre, root, x, order)) for x in m.points)
    if n < width:
        raise ValueError(f"branching {n} is below the out-degree {width}")
    labels = {(): root}
    frontier = [()]
    for _ in range(d):
        nxt = []
        for node in frontier:
            kids = _tree_children(pre, root, labels[node], order)
            kids = kids + [kids[0]] * (n - len(kids))
            for k, x in enumerate(kids):
                labels[node + (k,)] = x
                nxt.append(node + (k,))
        frontier = nxt
    return LabeledTree(n, d, labels)


def check_tree_pmorphism(t: LabeledTree, m: TopoModel, root: Point) -> Check:
    """Local zig and zag at every internal node of the truncation."""
    pre = _relational(m)
    if t.labels.get(()) != root:
        return fail("root: the tree root is not labelled by the model root")
    for node, x in t.labels.items():
        if node and x == root:
            return fail(f"root: node {node} is labelled by the model root")
        kids = t.children(node)
        if not kids:
            continue
        got = {t.labels[c] for c in kids}
        want = set(_tree_children(pre, root, x, list(m.points)))
        if not got <= want:
            return fail(f"zig: node {node} has a child labelled outside the successors of {x!r}")
        if not want <= got:
            return fail(f"zag: a successor of {x!r} has no child at node {node}")
    return PASS


def rational_embed(t: LabeledTree) -> dict:
    """Exact rational positions: the root at 0 and, for a node ``w`` at level
    ``k``, the first child at ``f(w) - 1/(n+1)^k`` and child ``m`` at
    ``f(w) + (m-1)/(n+1)^k``."""
    n = t.branching
    for node in t.labels:
        if len(node) < t.depth and any(node + (k,) not in t.labels for k in range(n)):
            raise ValueError(f"node {node} does not have {n} children")
        if len(node) > t.depth or any(not 0 <= k < n for k in node):
            raise ValueError(f"node {node} lies outside the full tree")
    f = {(): Fraction(0)}
    for node in sorted(t.labels, key=len):
        if len(node) >= t.depth:
            continue
        step = Fraction(1, (n + 1) ** len(node))
        f[node + (0,)] = f[node] - step
        for k in range(1, n):
            f[node + (k,)] = f[node] + k * step
    return f


def subtree_interval(f: dict, t: LabeledTree, node: tuple) -> tuple:
    values = [v for w, v in f.items() if w[:len(node)] == node]
    return min(values), max(values)


def tree_to_dot(t: LabeledTree, positions: dict | None = None, name: str = "tree") -> str:
    lines = [f"digraph {name} {{"]
    ids = {node: f"t{k}" for k, node in enumerate(sorted(t.labels, key=lambda x: (len(x), x)))}
    for node, nid in ids.items():
        text = f"{''.join(map(str, node)) or 'r'}: {t.labels[node]}"
        if positions is not None:
            text += f" @ {positions[node]}"
        lines.append(f'  {nid} [label="{text}"];')
    for node, nid in ids.items():
        for c in t.children(node):
            lines.append(f"  {nid} -> {ids[c]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
