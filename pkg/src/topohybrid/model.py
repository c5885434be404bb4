"""Topological models and the H(E) model checker over finite spaces."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .formula import A, And, At, Box, Dia, E, Formula, Impl, Neg, Nom, Or, Prop
from .topo import FiniteSpace, Point, space_problems, to_preorder


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class TopoModel:
    space: FiniteSpace
    valuation: Mapping[str, frozenset] = field(default_factory=dict)
    nominals: Mapping[str, Point] = field(default_factory=dict)

    @property
    def points(self) -> tuple:
        return self.space.points

    def holds(self, prop: str) -> frozenset:
        return frozenset(self.valuation.get(prop, ()))

    def named(self) -> frozenset:
        """Points carrying at least one nominal."""
        return frozenset(self.nominals.values())

    def names_at(self, w: Point) -> frozenset:
        return frozenset(n for n, v in self.nominals.items() if v == w)


def model_problems(m: TopoModel) -> list[str]:
    problems = space_problems(m.space)
    pts = m.space.point_set
    for p, ext in m.valuation.items():
        stray = set(ext) - pts
        if stray:
            problems.append(f"valuation of {p} mentions unknown points {sorted(stray, key=repr)}")
    for n, w in m.nominals.items():
        if isinstance(w, (set, frozenset, list)):
            problems.append(f"nominal {n} is not assigned a single point")
        elif w not in pts:
            problems.append(f"nominal {n} names unknown point {w!r}")
    return problems


def validate_model(m: TopoModel) -> bool:
    return not model_problems(m)


def extension(m: TopoModel, f: Formula) -> frozenset:
    """Set of points of ``m`` where ``f`` is true."""
    return _Checker(m).ext(f)


def check_truth(m: TopoModel, w: Point, f: Formula) -> bool:
    if w not in m.space.point_set:
        raise ModelError(f"unknown point {w!r}")
    return w in extension(m, f)


class _Checker:
    # memo table lives for a single evaluation call
    def __init__(self, m: TopoModel):
        self.m = m
        self.all = m.space.point_set
        self.memo: dict = {}

    def ext(self, f: Formula) -> frozenset:
        got = self.memo.get(f)
        if got is None:
            got = self._ext(f)
            self.memo[f] = got
        return got

    def _named(self, name: str) -> Point:
        if name not in self.m.nominals:
            raise ModelError(f"nominal '{name} has no value in the model")
        return self.m.nominals[name]

    def _ext(self, f: Formula) -> frozenset:
        m, nbhd = self.m, self.m.space.minimal_neighborhood
        if isinstance(f, Prop):
            return m.holds(f.name) & self.all
        if isinstance(f, Nom):
            return frozenset({self._named(f.name)})
        if isinstance(f, Neg):
            return self.all - self.ext(f.sub)
        if isinstance(f, And):
            return self.ext(f.left) & self.ext(f.right)
        if isinstance(f, Or):
            return self.ext(f.left) | self.ext(f.right)
        if isinstance(f, Impl):
            return (self.all - self.ext(f.left)) | self.ext(f.right)
        if isinstance(f, Box):
            # some open around w inside the extension iff the least one is
            inner = self.ext(f.sub)
            return frozenset(w for w in m.points if nbhd(w) <= inner)
        if isinstance(f, Dia):
            inner = self.ext(f.sub)
            return frozenset(w for w in m.points if nbhd(w) & inner)
        if isinstance(f, At):
            return self.all if self._named(f.nom) in self.ext(f.sub) else frozenset()
        if isinstance(f, E):
            return self.all if self.ext(f.sub) else frozenset()
        if isinstance(f, A):
            return self.all if self.ext(f.sub) == self.all else frozenset()
        raise TypeError(f"not a formula: {f!r}")


def to_dot(m: TopoModel, name: str = "model") -> str:
    """Graphviz rendering of the specialization preorder with valuation labels.

    Reflexive loops are omitted; an arc ``u -> v`` means ``v`` lies in the
    least open neighbourhood of ``u``.
    """
    pre = to_preorder(m.space)
    ids = {w: f"n{k}" for k, w in enumerate(m.points)}
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for w in m.points:
        facts = sorted(p for p, ext in m.valuation.items() if w in ext)
        facts += sorted("'" + n for n in m.names_at(w))
        label = f"{w}" + (": " + ", ".join(facts) if facts else "")
        lines.append(f'  {ids[w]} [label="{label}"];')
    for u, v in sorted(pre.rel, key=repr):
        if u != v:
            lines.append(f"  {ids[u]} -> {ids[v]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
