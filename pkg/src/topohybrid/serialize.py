"""JSON encodings of spaces, models, quasi-models, relations and symbolic models.

Points are JSON scalars or arrays (arrays come back as tuples).  A space
is given by ``points`` plus one of ``opens``, ``preorder`` (pairs, closed
reflexively and transitively) or ``subbase``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .construct import LabeledTree, Progression, Singleton, SymbolicModel
from .finrep import HintikkaSet, QuasiModel, Universe
from .formula import parse
from .model import TopoModel
from .topo import FiniteSpace, from_preorder, generate_topology, preorder_from_pairs, to_preorder


class FormatError(ValueError):
    pass


def _point(x: Any):
    if isinstance(x, list):
        return tuple(_point(y) for y in x)
    if isinstance(x, (int, str)) or x is None:
        return x
    raise FormatError(f"unsupported point {x!r}")


def _plain(x: Any):
    if isinstance(x, tuple):
        return [_plain(y) for y in x]
    return x


def _key(x) -> str:
    return json.dumps(_plain(x)) if not isinstance(x, str) else x


def _lookup(points, key: str):
    for w in points:
        if _key(w) == key or str(w) == key:
            return w
    raise FormatError(f"unknown point {key!r}")


def space_to_json(s: FiniteSpace) -> dict:
    pre = to_preorder(s)
    pairs = sorted(([_plain(u), _plain(v)] for u, v in pre.rel if u != v), key=json.dumps)
    return {"points": [_plain(w) for w in s.points], "preorder": pairs}


def space_from_json(d: dict) -> FiniteSpace:
    try:
        points = tuple(_point(w) for w in d["points"])
    except KeyError:
        raise FormatError("space needs a 'points' list") from None
    if "opens" in d:
        return FiniteSpace(points, frozenset(frozenset(_point(w) for w in o) for o in d["opens"]))
    if "preorder" in d:
        pairs = [(_point(u), _point(v)) for u, v in d["preorder"]]
        return from_preorder(preorder_from_pairs(points, pairs))
    if "subbase" in d:
        return generate_topology(points, [[_point(w) for w in o] for o in d["subbase"]])
    raise FormatError("space needs 'opens', 'preorder' or 'subbase'")


def model_to_json(m: TopoModel) -> dict:
    d = space_to_json(m.space)
    d["valuation"] = {p: sorted((_plain(w) for w in ext), key=json.dumps) for p, ext in sorted(m.valuation.items())}
    d["nominals"] = {n: _plain(w) for n, w in sorted(m.nominals.items())}
    return d


def model_from_json(d: dict) -> TopoModel:
    space = space_from_json(d)
    valuation = {p: frozenset(_point(w) for w in ext) for p, ext in d.get("valuation", {}).items()}
    nominals = {n: _point(w) for n, w in d.get("nominals", {}).items()}
    return TopoModel(space, valuation, nominals)


def quasi_to_json(q: QuasiModel) -> dict:
    d = space_to_json(q.space)
    d["target"] = str(q.target)
    d["labels"] = {_key(w): sorted(map(str, q.labels[w].members)) for w in q.points}
    return d


def quasi_from_json(d: dict) -> QuasiModel:
    space = space_from_json(d)
    try:
        target = parse(d["target"])
        raw = d["labels"]
    except KeyError as exc:
        raise FormatError(f"quasi-model needs {exc}") from None
    u = Universe.of(target)
    labels = {}
    for key, members in raw.items():
        fs = frozenset(parse(f) for f in members)
        stray = [str(f) for f in fs if f not in u]
        if stray:
            raise FormatError(f"label of {key} mentions {stray} outside the closure of the target")
        labels[_lookup(space.points, key)] = HintikkaSet(u, fs)
    return QuasiModel(space, labels, target)


def relation_to_json(pairs) -> dict:
    return {"pairs": sorted(([_plain(x), _plain(y)] for x, y in pairs), key=json.dumps)}


def relation_from_json(d: dict) -> frozenset:
    return frozenset((_point(x), _point(y)) for x, y in d["pairs"])


def fraction_text(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def symbolic_to_json(s: SymbolicModel) -> dict:
    classes = {}
    for k, c in s.classes.items():
        classes[_key(k)] = ({"singleton": c.id} if isinstance(c, Singleton)
                            else {"offset": c.offset, "stride": c.stride})
    return {"base": model_to_json(s.base), "classes": classes, "carrier": s.carrier, "kind": s.kind,
            "basic_opens": "(O, F): preimage of O minus a finite set F"
            + (" of progression points" if s.kind == "T0" else "")}


def symbolic_from_json(d: dict) -> SymbolicModel:
    base = model_from_json(d["base"])
    classes = {}
    for key, c in d["classes"].items():
        w = _lookup(base.points, key)
        classes[w] = Singleton(c["singleton"]) if "singleton" in c else Progression(c["offset"], c["stride"])
    return SymbolicModel(base, classes, d["carrier"], d["kind"])


def tree_to_json(t: LabeledTree, positions: dict | None = None) -> dict:
    nodes = []
    for node in sorted(t.labels, key=lambda x: (len(x), x)):
        entry = {"path": list(node), "label": _plain(t.labels[node])}
        if positions is not None:
            entry["value"] = fraction_text(positions[node])
        nodes.append(entry)
    return {"branching": t.branching, "depth": t.depth, "nodes": nodes}


def load_json(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None


def dump_json(data: dict, path: str | Path | None = None) -> str:
    text = json.dumps(data, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
