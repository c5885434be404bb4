"""Acceptance suite.  Each criterion prints one PASS/FAIL line with timing.

Run alone with ``pytest tests/test_acceptance.py -s`` or
``python3 tests/test_acceptance.py``.
"""

import random
import sys
import time
from itertools import combinations

import pytest

from gen import NOMS, game_corpus, random_formula, random_model, random_t1_rep, relational_truth, topological_truth
from topohybrid import formula as fm
from topohybrid.bisim import graph, largest_hybrid_bisimulation, verify_topobisimulation
from topohybrid.construct import (check_tree_pmorphism, fatten_clusters, generated_submodel, peel_off,
                                  rational_embed, subtree_interval, symbolic_witness, unravel_to_full_tree,
                                  verify_symbolic)
from topohybrid.finrep import check_quasi_model, filtrate, model_from_quasi
from topohybrid.formula import parse
from topohybrid.game import solve
from topohybrid.model import TopoModel, extension, model_problems
from topohybrid.oracle import NONE_AT_BOUND, brute_force_sat, discrete_preorders, satisfying_models
from topohybrid.topo import FiniteSpace, all_preorders, from_preorder, to_preorder

CORPUS_SEED = 2024
_shared: dict = {}


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, seconds: float, limit: float, detail: str) -> None:
        status = "PASS" if ok and seconds < limit else "FAIL"
        with capsys.disabled():
            print(f"\n[criterion {number}] {status}  {seconds:.2f}s (limit {limit:g}s)  {detail}")
    return emit


def _finish(report, number, problems, start, limit, detail):
    seconds = time.perf_counter() - start
    report(number, not problems, seconds, limit, detail if not problems else f"{detail}; first problem: {problems[0]}")
    assert not problems, problems[:5]
    assert seconds < limit, f"took {seconds:.1f}s, limit {limit}s"


# 1 -------------------------------------------------------------------------

T0_AXIOM = "@'i ~'j -> (@'i [] ~'j | @'j [] ~'i)"
SEPARATION_CASES = [
    ("~(<>'i -> 'i)", "T1", False, None),
    ("~(<>'i -> 'i)", "T0", True, 3),
    (f"~({T0_AXIOM})", "T0", False, None),
    ("<>(~'i & <>'i)", "T0", True, None),
    ("<>(~'i & <>'i)", "T1", False, None),
]


def test_criterion_1_separation_axioms(report):
    start = time.perf_counter()
    problems, slowest = [], 0.0
    for text, klass, want, max_size in SEPARATION_CASES:
        t0 = time.perf_counter()
        r = solve(parse(text), klass)
        took = time.perf_counter() - t0
        slowest = max(slowest, took)
        if took >= 1.0:
            problems.append(f"{text} {klass}: {took:.2f}s")
        if bool(r) != want:
            problems.append(f"{text} {klass}: got {'SAT' if r else 'UNSAT'}")
        if r and not check_quasi_model(r.quasi_model, klass):
            problems.append(f"{text} {klass}: witness invalid")
        if r and max_size and len(r.quasi_model.points) > max_size:
            problems.append(f"{text} {klass}: witness has {len(r.quasi_model.points)} points")
    _finish(report, 1, problems, start, 5 * 1.0, f"{len(SEPARATION_CASES)} cases, each under 1s, slowest {slowest:.3f}s")


# 2 -------------------------------------------------------------------------

def test_criterion_2_infinite_model_needed(report):
    start = time.perf_counter()
    phi = parse("'i & <>~'i")
    problems = []
    r = solve(phi, "T1")
    if not r:
        problems.append("solve returned UNSAT")
    elif not check_quasi_model(r.quasi_model, "T1"):
        problems.append("witness is not a T1 quasi-model")
    finite = next(iter(satisfying_models(phi, discrete_preorders(4))), None)
    if finite is not None:
        problems.append(f"finite T1 model found: {finite}")
    if r:
        check = verify_symbolic(symbolic_witness(model_from_quasi(r.quasi_model), "T1"))
        if not check:
            problems.append(f"symbolic witness: {check}")
    _finish(report, 2, problems, start, 5.0, "no discrete model up to 4 points; symbolic witness verified")


# 3 -------------------------------------------------------------------------

S4_AXIOMS = ["[]p -> p", "[]p -> [][]p", "[](p -> q) -> ([]p -> []q)"]


def test_criterion_3_s4_soundness(report):
    start = time.perf_counter()
    problems = []
    shapes = [p for n in range(1, 5) for p in all_preorders(n)]
    for text in S4_AXIOMS:
        neg = fm.Neg(parse(text))
        counter = next(iter(satisfying_models(neg, shapes)), None)
        if counter is not None:
            problems.append(f"{text}: countermodel {counter}")
        if solve(neg, "all"):
            problems.append(f"{text}: negation SAT")
    _finish(report, 3, problems, start, 30.0, f"{len(S4_AXIOMS)} axioms over {len(shapes)} preorders")


# 4 -------------------------------------------------------------------------

def _corpus_runs():
    if "runs" not in _shared:
        runs = []
        for phi in game_corpus(200, seed=CORPUS_SEED):
            for klass in ("T0", "T1"):
                runs.append((phi, klass, solve(phi, klass)))
        _shared["runs"] = runs
    return _shared["runs"]


def test_criterion_4_game_oracle_agreement(report):
    start = time.perf_counter()
    problems = []
    runs = _corpus_runs()
    sat = 0
    for phi, klass, r in runs:
        if r:
            sat += 1
            q = r.quasi_model
            check = check_quasi_model(q, klass, with_e=True)
            if not check:
                problems.append(f"{phi} {klass}: {check}")
                continue
            if not extension(model_from_quasi(q), phi):
                problems.append(f"{phi} {klass}: model from witness falsifies the formula")
        elif brute_force_sat(phi, klass, 3).result != NONE_AT_BOUND:
            problems.append(f"{phi} {klass}: UNSAT but the oracle finds a model")
    _finish(report, 4, problems, start, 600.0, f"{len(runs)} runs, {sat} SAT, {len(runs) - sat} UNSAT")


# 5 -------------------------------------------------------------------------

def test_criterion_5_filtration(report):
    start = time.perf_counter()
    r = random.Random(5)
    problems = []
    largest = 0
    for k in range(100):
        noms = NOMS[: r.randint(0, 2)]
        m = random_model(r, r.randint(1, 6), noms=noms)
        sigma = set()
        for _ in range(r.randint(1, 2)):
            sigma |= fm.subformula_closure(random_formula(r, r.randint(1, 6), noms=noms))
        q, proj = filtrate(m, sigma)
        largest = max(largest, len(q.points))
        for f in sigma:
            before, after = extension(m, f), extension(q, f)
            if any((w in before) != (proj[w] in after) for w in m.points):
                problems.append(f"model {k}: truth of {f} not preserved")
        atoms = [f.name for f in sigma if isinstance(f, fm.Prop)]
        names = [f.name for f in sigma if isinstance(f, fm.Nom)]
        check = verify_topobisimulation(graph(proj, m, q), require_total=True, props=atoms, nominals=names)
        if not check:
            problems.append(f"model {k}: projection {check}")
        if len(q.points) > 2 ** len(sigma):
            problems.append(f"model {k}: {len(q.points)} classes for |sigma| = {len(sigma)}")
    zig = sum("projection" in p for p in problems)
    _finish(report, 5, problems, start, 60.0,
            f"100 models, largest quotient {largest}, truth failures {len(problems) - zig - sum('classes' in p for p in problems)}, "
            f"projection not a topobisimulation on {zig}")


# 6 -------------------------------------------------------------------------

def all_topologies(n: int) -> list[FiniteSpace]:
    """Every topology on ``0..n-1``, enumerated as families of subsets."""
    pts = tuple(range(n))
    full = (1 << n) - 1
    inner = [s for s in range(1, full)]
    out = []
    for choice in range(1 << len(inner)):
        fam = {0, full} | {s for b, s in enumerate(inner) if choice >> b & 1}
        if all(a | b in fam and a & b in fam for a, b in combinations(fam, 2)):
            out.append(FiniteSpace(pts, frozenset(frozenset(w for w in pts if s >> w & 1) for s in fam)))
    return out


def test_criterion_6_alexandroff_round_trip(report):
    start = time.perf_counter()
    r = random.Random(6)
    problems = []
    counts = []
    formulas = []
    while len(formulas) < 12:
        f = random_formula(r, r.randint(0, 7), noms=())
        if fm.depth(f) <= 4:
            formulas.append(f)
    for n in range(1, 5):
        spaces = all_topologies(n)
        counts.append(len(spaces))
        for s in spaces:
            if from_preorder(to_preorder(s)).opens != s.opens:
                problems.append(f"round trip fails on {sorted(map(sorted, s.opens))}")
            valuation = {p: frozenset(w for w in s.points if r.random() < 0.5) for p in ("p", "q")}
            m = TopoModel(s, valuation)
            for f in formulas:
                got = {extension(m, f), relational_truth(m, f), topological_truth(m, f)}
                if len(got) != 1:
                    problems.append(f"{f} disagrees on {sorted(map(sorted, s.opens))}")
    if counts != [1, 4, 29, 355]:
        problems.append(f"topology counts {counts}")
    _finish(report, 6, problems, start, 60.0, f"topologies per size {counts}, {len(formulas)} formulas each")


# 7 -------------------------------------------------------------------------

def _depth3_formulas(r, noms, count=30):
    return [random_formula(r, r.randint(0, 3), noms=noms) for _ in range(count)]


def _structural(rep, peeled, fat) -> list[str]:
    out = []
    for m, what in ((peeled, "peeled"), (fat, "fattened")):
        bad = model_problems(m)
        if bad:
            out.append(f"{what}: {bad[0]}")
    pre = to_preorder(peeled.space)
    for name, w in peeled.nominals.items():
        if w[0] != rep.nominals[name]:
            out.append(f"'{name} is not the root of its component")
        if any(u != w and pre.related(u, w) for u in peeled.points):
            out.append(f"'{name} has incoming arcs after peel-off")
    for u, v in pre.rel:
        if u[0] != v[0]:
            out.append("arc between components")
            break
    fpre = to_preorder(fat.space)
    for c in fpre.clusters():
        if len(c) == 1 and not (c <= fat.named()):
            out.append(f"unnamed simple cluster {set(c)} survives fattening")
    return out


def test_criterion_7_construction_pipeline(report):
    start = time.perf_counter()
    r = random.Random(7)
    problems = []
    trees = 0
    cones = []
    for k in range(50):
        rep = random_t1_rep(r)
        peeled = peel_off(rep)
        fat = fatten_clusters(peeled)
        problems += [f"rep {k}: {p}" for p in _structural(rep, peeled, fat)]
        res = largest_hybrid_bisimulation(rep, fat)
        if not (res.total and res.hybrid):
            problems.append(f"rep {k}: not totally hybrid bisimilar")
        for f in _depth3_formulas(r, tuple(rep.nominals)):
            a, b = extension(rep, f), extension(fat, f)
            if any((x in a) != (y in b) for x, y in res.relation.pairs):
                problems.append(f"rep {k}: {f} disagrees across the bisimulation")
        for root in rep.named():
            sub = generated_submodel(rep, root)
            if len(sub.points) < 2:
                continue
            width = max(len(to_preorder(sub.space).successors(x) - {root}) for x in sub.points)
            cones.append((width, sub, root))
            for n in range(max(2, width), 4):
                for d in range(5):
                    t = unravel_to_full_tree(sub, root, n, d)
                    trees += 1
                    check = check_tree_pmorphism(t, sub, root)
                    if not check:
                        problems.append(f"rep {k}: unravel n={n} d={d}: {check}")
    embeds = 0
    for n in (2, 3):
        width, sub, root = next(c for c in cones if c[0] <= n)
        t = unravel_to_full_tree(sub, root, n, 6)
        f = rational_embed(t)
        embeds += 1
        if len(set(f.values())) != len(f):
            problems.append(f"embedding n={n} is not injective")
        for node in t.labels:
            spans = sorted(subtree_interval(f, t, c) for c in t.children(node))
            if any(a[1] >= b[0] for a, b in zip(spans, spans[1:])):
                problems.append(f"embedding n={n}: sibling intervals overlap below {node}")
    _finish(report, 7, problems, start, 120.0, f"50 reps, {trees} unravelings, {embeds} embeddings")


# 8 -------------------------------------------------------------------------

def test_criterion_8_symbolic_witnesses(report):
    runs = _corpus_runs()
    start = time.perf_counter()
    problems = []
    count = 0
    for phi, klass, r in runs:
        if not r:
            continue
        count += 1
        rep = model_from_quasi(r.quasi_model)
        check = verify_symbolic(symbolic_witness(rep, klass))
        if not check:
            problems.append(f"{phi} {klass}: {check}")
    _finish(report, 8, problems, start, 60.0, f"{count} symbolic witnesses verified")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
