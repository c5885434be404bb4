"""Filtration, finite representations, Hintikka sets and quasi-models."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping

from . import formula as fm
from .checks import PASS, Check, fail
from .formula import A, And, At, Box, Dia, E, Formula, Impl, Neg, Nom, Or, Prop
from .model import TopoModel, _Checker, model_problems
from .topo import FiniteSpace, Point, quotient_topology

CLASSES = ("T0", "T1", "all")


def normalize_class(klass: str) -> str:
    """Map user spellings onto T0, T1 or all; T2 is an alias of T1."""
    k = str(klass).strip().upper()
    if k == "T2":
        return "T1"
    if k in ("T0", "T1"):
        return k
    if k in ("ALL", "TOP"):
        return "all"
    raise ValueError(f"unknown space class {klass!r}")


_BOOLEAN = (Neg, And, Or, Impl)


class Universe:
    """A finite formula set, indexed so that subformulas come first."""

    def __init__(self, formulas: Iterable[Formula]):
        fs = sorted(set(formulas), key=lambda f: (fm.size(f), str(f)))
        self.formulas: tuple = tuple(fs)
        self.index = {f: k for k, f in enumerate(fs)}
        self.members = frozenset(fs)

    @classmethod
    def of(cls, target: Formula) -> "Universe":
        return _universe_of(target)

    def __eq__(self, other) -> bool:
        return isinstance(other, Universe) and self.members == other.members

    def __hash__(self) -> int:
        return hash(self.members)

    def __len__(self) -> int:
        return len(self.formulas)

    def __contains__(self, f) -> bool:
        return f in self.index

    def bit(self, f: Formula) -> int:
        return 1 << self.index[f]

    def mask(self, fs: Iterable[Formula]) -> int:
        out = 0
        for f in fs:
            out |= 1 << self.index[f]
        return out

    def unmask(self, mask: int) -> frozenset:
        return frozenset(f for k, f in enumerate(self.formulas) if mask >> k & 1)

    @cached_property
    def diamonds(self) -> tuple:
        return tuple(f for f in self.formulas if isinstance(f, Dia))

    @cached_property
    def existentials(self) -> tuple:
        return tuple(f for f in self.formulas if isinstance(f, E))

    @cached_property
    def nominal_names(self) -> tuple:
        return tuple(sorted(f.name for f in self.formulas if isinstance(f, Nom)))

    @cached_property
    def diamond_mask(self) -> int:
        return self.mask(self.diamonds)

    @cached_property
    def existential_mask(self) -> int:
        return self.mask(self.existentials)

    @cached_property
    def nominal_mask(self) -> int:
        return self.mask(Nom(n) for n in self.nominal_names)

    def is_subformula_closed(self) -> bool:
        return all(g in self.index for f in self.formulas for g in fm.subformulas(f))

    def hintikka_masks(self) -> list[int]:
        """All Hintikka sets over this universe, as bit masks.

        A Hintikka set is fixed by the truth values of its non-Boolean
        members; Boolean members follow by their truth tables.  Sets that
        contain some ``g`` but not ``<>g`` (both in the universe) are dropped.
        """
        if "_hintikka" in self.__dict__:
            return self._hintikka
        atoms = [k for k, f in enumerate(self.formulas) if not isinstance(f, _BOOLEAN)]
        idx = self.index
        plan = []
        for k, f in enumerate(self.formulas):
            if isinstance(f, _BOOLEAN):
                plan.append((k, type(f), [idx.get(c) for c in fm.children(f)]))
        t_pairs = [(idx[f.sub], k) for k, f in enumerate(self.formulas)
                   if isinstance(f, Dia) and f.sub in idx]
        out = []
        for bits in range(1 << len(atoms)):
            mask = 0
            for j, k in enumerate(atoms):
                if bits >> j & 1:
                    mask |= 1 << k
            ok = True
            for k, kind, kids in plan:
                if any(c is None for c in kids):
                    ok = False
                    break
                vals = [mask >> c & 1 for c in kids]
                if kind is Neg:
                    v = not vals[0]
                elif kind is And:
                    v = vals[0] and vals[1]
                elif kind is Or:
                    v = vals[0] or vals[1]
                else:
                    v = (not vals[0]) or vals[1]
                if v:
                    mask |= 1 << k
            if not ok:
                raise ValueError("universe is not subformula closed")
            if all(not (mask >> s & 1) or mask >> d & 1 for s, d in t_pairs):
                out.append(mask)
        self._hintikka = out
        return out


_UNIVERSES: dict = {}


def _universe_of(target: Formula) -> Universe:
    u = _UNIVERSES.get(target)
    if u is None:
        u = Universe(fm.closure(target))
        if len(_UNIVERSES) > 512:
            _UNIVERSES.clear()
        _UNIVERSES[target] = u
    return u


@dataclass(frozen=True)
class HintikkaSet:
    universe: Universe
    members: frozenset

    @classmethod
    def from_mask(cls, universe: Universe, mask: int) -> "HintikkaSet":
        return cls(universe, universe.unmask(mask))

    @cached_property
    def mask(self) -> int:
        return self.universe.mask(self.members)

    def __contains__(self, f) -> bool:
        return f in self.members

    def diamonds(self) -> frozenset:
        return frozenset(f for f in self.members if isinstance(f, Dia))

    def nominals(self) -> frozenset:
        return frozenset(f.name for f in self.members if isinstance(f, Nom))

    def __str__(self) -> str:
        return "{" + ", ".join(sorted(map(str, self.members))) + "}"


def hintikka_problems(h: HintikkaSet) -> list[str]:
    u, members = h.universe, h.members
    problems = []
    stray = members - u.members
    if stray:
        problems.append(f"members outside the universe: {sorted(map(str, stray))}")
    for f in u.formulas:
        kids = fm.children(f)
        if isinstance(f, _BOOLEAN) and all(c in u for c in kids):
            vals = [c in members for c in kids]
            if isinstance(f, Neg):
                expect = not vals[0]
            elif isinstance(f, And):
                expect = vals[0] and vals[1]
            elif isinstance(f, Or):
                expect = vals[0] or vals[1]
            else:
                expect = (not vals[0]) or vals[1]
            if (f in members) != expect:
                problems.append(f"not Boolean-consistent at {f}")
        if isinstance(f, Dia) and f.sub in members and f not in members:
            problems.append(f"contains {f.sub} but not {f}")
    return problems


def is_hintikka(h: HintikkaSet) -> bool:
    return not hintikka_problems(h)


@dataclass(frozen=True)
class QuasiModel:
    space: FiniteSpace
    labels: Mapping[Point, HintikkaSet]
    target: Formula

    @property
    def universe(self) -> Universe:
        return Universe.of(self.target)

    @property
    def points(self) -> tuple:
        return self.space.points

    def named_points(self) -> dict:
        """Nominal name -> points whose label contains it."""
        out = {}
        for w in self.points:
            for n in self.labels[w].nominals():
                out.setdefault(n, []).append(w)
        return out


def check_quasi_model(q: QuasiModel, klass: str = "all", with_e: bool = True) -> Check:
    """Verify every quasi-model condition for the given space class.

    Besides the Hintikka, target and neighbourhood conditions this demands
    that each nominal of the universe sits in exactly one label, which is
    what makes the induced valuation a model.
    """
    klass = normalize_class(klass)
    u = q.universe
    for w in q.points:
        if w not in q.labels:
            return fail(f"point {w!r} has no label")
        if q.labels[w].universe != u:
            raise ValueError(f"label of {w!r} is not over the closure of the target")
    for w in q.points:
        problems = hintikka_problems(q.labels[w])
        if problems:
            return fail(f"Hintikka: label of {w!r}: {problems[0]}")
    if not any(q.target in q.labels[w] for w in q.points):
        return fail("target: no label contains the target")
    named = q.named_points()
    for n in u.nominal_names:
        holders = named.get(n, [])
        if len(holders) != 1:
            return fail(f"nominal: '{n} occurs in {len(holders)} labels")
    nbhd = q.space.minimal_neighborhood
    everywhere = q.points
    for f in u.formulas:
        if isinstance(f, (Dia, Box)):
            for t in everywhere:
                inside = [f.sub in q.labels[s] for s in nbhd(t)]
                want = any(inside) if isinstance(f, Dia) else all(inside)
                if (f in q.labels[t]) != want:
                    return fail(f"neighbourhood: {f} at {t!r}")
        elif isinstance(f, At):
            (holder,) = named[f.nom]
            want = f.sub in q.labels[holder]
            for t in everywhere:
                if (f in q.labels[t]) != want:
                    return fail(f"at: {f} at {t!r}")
        elif isinstance(f, (E, A)) and with_e:
            inside = [f.sub in q.labels[s] for s in everywhere]
            want = any(inside) if isinstance(f, E) else all(inside)
            for t in everywhere:
                if (f in q.labels[t]) != want:
                    return fail(f"universal: {f} at {t!r}")
    holders = [named[n][0] for n in u.nominal_names]
    return _class_condition(q.space, holders, klass, "quasi-model")


def _class_condition(space: FiniteSpace, named: Iterable[Point], klass: str, what: str) -> Check:
    named = list(dict.fromkeys(named))
    if klass == "T1":
        for t in named:
            if space.point_set - {t} not in space.opens:
                return fail(f"T1 {what}: complement of named point {t!r} is not open")
    elif klass == "T0":
        nbhd = space.minimal_neighborhood
        for x, y in combinations(named, 2):
            if y in nbhd(x) and x in nbhd(y):
                return fail(f"T0 {what}: named points {x!r} and {y!r} are not separated")
    return PASS


def check_finite_rep(m: TopoModel, klass: str) -> Check:
    return _class_condition(m.space, m.nominals.values(), normalize_class(klass), "finite representation")


def quasi_from_model(m: TopoModel, phi: Formula) -> QuasiModel:
    """Label each point with the members of ClNeg(phi) true there."""
    u = Universe.of(phi)
    checker = _Checker(m)
    ext = {f: checker.ext(f) for f in u.formulas}
    if not ext[phi]:
        raise ValueError(f"{phi} is not satisfied in the model")
    labels = {w: HintikkaSet(u, frozenset(f for f in u.formulas if w in ext[f])) for w in m.points}
    return QuasiModel(m.space, labels, phi)


def model_from_quasi(q: QuasiModel) -> TopoModel:
    """Read a valuation off the labels: p holds where p is in the label."""
    verdict = check_quasi_model(q, "all", with_e=True)
    if not verdict:
        raise ValueError(f"not a quasi-model: {verdict.failure}")
    u = q.universe
    valuation = {}
    for f in u.formulas:
        if isinstance(f, Prop):
            valuation[f.name] = frozenset(w for w in q.points if f in q.labels[w])
    named = q.named_points()
    nominals = {n: named[n][0] for n in u.nominal_names}
    return TopoModel(q.space, valuation, nominals)


def filtrate(m: TopoModel, sigma: Iterable[Formula]) -> tuple[TopoModel, dict]:
    """Quotient of ``m`` by agreement on ``sigma``, with the quotient topology.

    Returns the filtrated model and the projection point -> class, where
    classes are numbered 0, 1, ... in order of first appearance.
    """
    sigma = Universe(sigma)
    if not sigma.is_subformula_closed():
        raise ValueError("sigma is not subformula closed")
    problems = model_problems(m)
    if problems:
        raise ValueError(f"invalid model: {problems[0]}")
    checker = _Checker(m)
    ext = [checker.ext(f) for f in sigma.formulas]
    signature_class: dict = {}
    proj = {}
    for w in m.points:
        sig = tuple(w in e for e in ext)
        proj[w] = signature_class.setdefault(sig, len(signature_class))
    classes = list(range(len(signature_class)))
    space = quotient_topology(m.space, proj, classes)
    valuation = {p: frozenset(proj[w] for w in ext_p) for p, ext_p in m.valuation.items()}
    nominals = {n: proj[w] for n, w in m.nominals.items()}
    return TopoModel(space, valuation, nominals), proj
