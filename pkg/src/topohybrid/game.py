"""The Abelard/Eloise satisfiability game for H(E) over T0 and T1 spaces.

Eloise opens by placing a few Hintikka sets on the board together with a
relation ``R0`` between them.  Abelard then challenges a diamond formula
``<>psi`` of a set; Eloise answers either with a fresh set containing
``psi`` or, when the rules allow it, by pointing at one of the nominal
sets she placed at the start.  A challenge already answered earlier in the
play is answered again by the same set and ends the game.

Rules, by the names used in error messages and transcripts:

``root``          the first initial set contains the target
``init-nom``      each nominal of the target lies in exactly one initial set
``init-diamond``  ``R0`` only relates ``I`` to ``J`` if ``D(J)`` is inside ``D(I)``
``init-univ``     all sets agree on ``E``-formulas and ``E chi`` holds iff
                  some initial set contains ``chi``
``init-cycles``   (T0) no ``R0``-cycle through two distinct sets
``no-incoming``   (T1) no ``R0``-arc into a nominal set from another set;
                  a reference is only possible to the challenged set itself
``diamond``       the answer contains ``psi`` and its diamonds are among those
                  of the challenged set
``univ``          a fresh answer agrees with the initial sets on ``E``
``nom``           fresh answers contain no nominal; references point to
                  nominal initial sets
``cycles``        (T0) a reference from a play started at ``I`` may only
                  point to ``J`` with ``I R0 J``

Here ``D(X)`` is the set of diamond formulas in ``X``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional, Union

from . import formula as fm
from .checks import PASS, Check, fail
from .finrep import (HintikkaSet, QuasiModel, Universe, check_quasi_model, hintikka_problems,
                     normalize_class)
from .formula import Dia, Formula
from .topo import Preorder, from_preorder, preorder_from_pairs

ABELARD = "abelard"
ELOISE = "eloise"


class IllegalMove(ValueError):
    def __init__(self, rule: str, message: str):
        super().__init__(f"{rule}: {message}")
        self.rule = rule


def game_class(klass: str, phi: Formula) -> str:
    """Resolve a user class name to the game actually played (T0 or T1)."""
    k = normalize_class(klass)
    if k == "all":
        if fm.nominals(phi):
            raise ValueError("class 'all' is only available for nominal-free formulas")
        return "T0"
    return k


@dataclass(frozen=True)
class InitialMove:
    sets: tuple
    relation: frozenset = frozenset()


@dataclass(frozen=True)
class Challenge:
    source: int
    formula: Dia


@dataclass(frozen=True)
class Response:
    set: Optional[HintikkaSet] = None
    ref: Optional[int] = None


Move = Union[InitialMove, Challenge, Response]


@dataclass(frozen=True)
class GameState:
    target: Formula
    klass: str
    board: tuple = ()
    initial_count: int = 0
    relation: frozenset = frozenset()
    history: tuple = ()  # (psi, board index of the answer, source index)
    start: Optional[int] = None
    last: Optional[int] = None
    pending: Optional[Challenge] = None
    outcome: Optional[str] = None
    reason: str = ""
    transcript: tuple = ()

    @property
    def universe(self) -> Universe:
        return Universe.of(self.target)

    @property
    def to_move(self) -> Optional[str]:
        if self.outcome is not None:
            return None
        if self.initial_count == 0 or self.pending is not None:
            return ELOISE
        return ABELARD

    def answered(self) -> dict:
        return {psi: idx for psi, idx, _ in self.history}

    def e_part(self) -> frozenset:
        return frozenset(f for f in self.board[0].members if isinstance(f, fm.E))


def new_game(phi: Formula, klass: str) -> GameState:
    """Fresh game for ``phi``; the board target is the normalized, @-free form."""
    return GameState(fm.core(phi), game_class(klass, phi))


def diamonds_of(h: HintikkaSet) -> frozenset:
    return h.diamonds()


def canonical_relation(board: Iterable[HintikkaSet]) -> Preorder:
    """``x R y`` iff every ``<>psi`` missing from ``x`` is missing from ``y``,
    together with ``psi``."""
    board = tuple(board)
    if board:
        u = board[0].universe
        if any(h.universe != u for h in board):
            raise ValueError("board sets are over different universes")
        dias = u.diamonds
    else:
        dias = ()
    idx = range(len(board))
    rel = set()
    for x in idx:
        missing = [d for d in dias if d not in board[x]]
        for y in idx:
            if all(d not in board[y] and d.sub not in board[y] for d in missing):
                rel.add((x, y))
    return Preorder(tuple(idx), frozenset(rel))


# --------------------------------------------------------------------------
# rules


def _univ_problem(u: Universe, e: frozenset, h: HintikkaSet) -> Optional[str]:
    for f in u.existentials:
        if (f in h) != (f in e):
            return f"disagrees on {f}"
        if f not in e and f.sub in h:
            return f"contains {f.sub} although {f} is false"
    return None


def _has_cycle(n: int, pairs: frozenset) -> bool:
    return any((j, i) in pairs for i, j in pairs if i != j)


def legal_init_move(g: GameState, sets: Iterable[HintikkaSet], relation: Iterable[tuple] = ()) -> Check:
    """Check an opening move against root, init-nom, init-diamond,
    init-univ and the class rule."""
    sets = tuple(sets)
    u = g.universe
    if not sets:
        return fail("root: no sets played")
    if len(sets) > len(fm.subformula_closure(g.target)):
        return fail("root: more initial sets than subformulas of the target")
    for k, h in enumerate(sets):
        if not isinstance(h, HintikkaSet) or h.universe != u:
            return fail(f"root: set {k} is not over the closure of the target")
        problems = hintikka_problems(h)
        if problems:
            return fail(f"root: set {k} is not a Hintikka set ({problems[0]})")
    if g.target not in sets[0]:
        return fail("root: the first set does not contain the target")
    for n in u.nominal_names:
        holders = [k for k, h in enumerate(sets) if fm.Nom(n) in h]
        if len(holders) != 1:
            return fail(f"init-nom: '{n} lies in {len(holders)} initial sets")
    e = frozenset(f for f in sets[0].members if isinstance(f, fm.E))
    for k, h in enumerate(sets):
        if frozenset(f for f in h.members if isinstance(f, fm.E)) != e:
            return fail(f"init-univ: set {k} disagrees on E-formulas")
    for f in u.existentials:
        present = any(f.sub in h for h in sets)
        if present != (f in e):
            return fail(f"init-univ: {f} is {'false' if present else 'true'} but "
                        f"{f.sub} is {'' if present else 'not '}in an initial set")
    try:
        closed = preorder_from_pairs(range(len(sets)), relation).rel
    except ValueError as exc:
        return fail(f"init-diamond: {exc}")
    for i, j in closed:
        if not diamonds_of(sets[j]) <= diamonds_of(sets[i]):
            return fail(f"init-diamond: {i} R {j} but set {j} has a diamond set {i} lacks")
    named = {k for k, h in enumerate(sets) if h.nominals()}
    if g.klass == "T1":
        for i, j in closed:
            if i != j and j in named:
                return fail(f"no-incoming: arc from {i} into nominal set {j}")
    elif _has_cycle(len(sets), closed):
        return fail("init-cycles: R0 has a cycle through distinct sets")
    return PASS


def _log(g: GameState, player: str, move: dict, rules: Iterable[str]) -> tuple:
    return g.transcript + ({"player": player, **move, "rules": list(rules)},)


def _end(g: GameState, winner: str, reason: str) -> GameState:
    return replace(g, outcome=winner, reason=reason, pending=None)


def _start_rules(klass: str) -> list:
    return ["root", "init-nom", "init-diamond", "init-univ",
            "no-incoming" if klass == "T1" else "init-cycles"]


def apply_move(g: GameState, move: Move) -> GameState:
    """Play ``move``; raises ``IllegalMove`` naming the violated rule."""
    if g.outcome is not None:
        raise IllegalMove("turn", "the game is over")
    if isinstance(move, InitialMove):
        if g.initial_count:
            raise IllegalMove("turn", "the opening move has already been played")
        verdict = legal_init_move(g, move.sets, move.relation)
        if not verdict:
            rule = verdict.failure.split(":", 1)[0]
            raise IllegalMove(rule, verdict.failure.split(": ", 1)[-1])
        rel = preorder_from_pairs(range(len(move.sets)), move.relation).rel
        out = replace(g, board=tuple(move.sets), initial_count=len(move.sets), relation=rel,
                      transcript=_log(g, ELOISE, {
                          "move": "initial", "sets": [sorted(map(str, h.members)) for h in move.sets],
                          "relation": sorted([i, j] for i, j in rel if i != j)}, _start_rules(g.klass)))
        if not any(diamonds_of(h) for h in move.sets):
            return _end(out, ELOISE, "Abelard has no challenge")
        return out
    if g.initial_count == 0:
        raise IllegalMove("turn", "Eloise must open the game")
    if isinstance(move, Challenge):
        return _challenge(g, move)
    if isinstance(move, Response):
        return _respond(g, move)
    raise IllegalMove("move", f"not a move: {move!r}")


def _challenge(g: GameState, c: Challenge) -> GameState:
    if g.pending is not None:
        raise IllegalMove("turn", "Eloise has to answer the pending challenge")
    if g.last is None:
        if not 0 <= c.source < g.initial_count:
            raise IllegalMove("challenge", "the first challenge must come from an initial set")
    elif c.source != g.last:
        raise IllegalMove("challenge", "challenges must come from the last played set")
    if not isinstance(c.formula, Dia) or c.formula not in g.board[c.source]:
        raise IllegalMove("challenge", f"{c.formula} is not a diamond of set {c.source}")
    start = c.source if g.start is None else g.start
    g = replace(g, start=start, last=c.source,
                transcript=_log(g, ABELARD, {"move": "challenge", "source": c.source,
                                             "formula": str(c.formula)}, ["challenge"]))
    earlier = g.answered().get(c.formula.sub)
    if earlier is None:
        return replace(g, pending=c)
    ok = diamonds_of(g.board[earlier]) <= diamonds_of(g.board[c.source])
    g = replace(g, transcript=_log(g, ELOISE, {"move": "repeat", "ref": earlier},
                                   ["repeat", "diamond"] if ok else ["repeat"]))
    if ok:
        return _end(g, ELOISE, f"repeated challenge answered again by set {earlier}")
    return _end(g, ABELARD, f"repeated challenge: set {earlier} violates diamond")


def _respond(g: GameState, r: Response) -> GameState:
    c = g.pending
    if c is None:
        raise IllegalMove("turn", "no challenge is pending")
    problem = response_problem(g, r)
    if problem:
        raise IllegalMove(*problem)
    psi = c.formula.sub
    if r.ref is not None:
        rules = ["diamond", "nom", "no-incoming" if g.klass == "T1" else "cycles"]
        g = replace(g, transcript=_log(g, ELOISE, {"move": "reference", "ref": r.ref}, rules))
        return _end(g, ELOISE, f"answered by nominal set {r.ref}")
    idx = len(g.board)
    g = replace(g, board=g.board + (r.set,), history=g.history + ((psi, idx, c.source),),
                last=idx, pending=None,
                transcript=_log(g, ELOISE, {"move": "fresh", "set": sorted(map(str, r.set.members)),
                                            "index": idx}, ["diamond", "univ", "nom"]))
    if not diamonds_of(r.set):
        return _end(g, ELOISE, "Abelard has no challenge")
    return g


def response_problem(g: GameState, r: Response) -> Optional[tuple]:
    """``(rule, message)`` if ``r`` is illegal in ``g``, else ``None``."""
    c = g.pending
    psi = c.formula.sub
    x = g.board[c.source]
    if (r.set is None) == (r.ref is None):
        return ("move", "answer with exactly one of a set or a reference")
    if r.ref is not None:
        j = r.ref
        if not 0 <= j < g.initial_count or not g.board[j].nominals():
            return ("nom", f"set {j} is not a nominal initial set")
        y = g.board[j]
        if psi not in y or not diamonds_of(y) <= diamonds_of(x):
            return ("diamond", f"set {j} does not answer {c.formula}")
        if g.klass == "T1":
            if j != c.source or g.history:
                return ("no-incoming", f"set {j} may not receive an arc")
        elif (g.start, j) not in g.relation:
            return ("cycles", f"the play started at {g.start} is not R0-related to {j}")
        return None
    y = r.set
    if not isinstance(y, HintikkaSet) or y.universe != g.universe:
        return ("move", "the answer is not over the closure of the target")
    if hintikka_problems(y):
        return ("move", "the answer is not a Hintikka set")
    if psi not in y or not diamonds_of(y) <= diamonds_of(x):
        return ("diamond", f"the answer does not fit {c.formula}")
    bad = _univ_problem(g.universe, g.e_part(), y)
    if bad:
        return ("univ", bad)
    if y.nominals():
        return ("nom", "fresh answers may not contain nominals")
    return None


def available_challenges(g: GameState) -> list:
    if g.to_move != ABELARD:
        return []
    sources = range(g.initial_count) if g.last is None else [g.last]
    return [Challenge(s, d) for s in sources for d in sorted(diamonds_of(g.board[s]), key=str)]


def legal_responses(g: GameState) -> list:
    if g.to_move != ELOISE or g.pending is None:
        return []
    out = [Response(ref=j) for j in range(g.initial_count) if response_problem(g, Response(ref=j)) is None]
    u = g.universe
    for mask in u.hintikka_masks():
        r = Response(set=HintikkaSet.from_mask(u, mask))
        if response_problem(g, r) is None:
            out.append(r)
    return out


# --------------------------------------------------------------------------
# search


class _Search:
    """Memoized AND-OR search over bit-mask Hintikka sets.

    ``win(refs, x, hist)`` decides whether Eloise survives every challenge
    from set ``x`` when she may point at the nominal sets ``refs`` and the
    play has already answered the challenges recorded in ``hist``.  Only the
    diamonds of an earlier answer matter for a repeated challenge, and only
    entries whose diamond is still in ``x`` can be repeated, so ``hist`` is
    kept as sorted ``(psi index, diamond mask)`` pairs restricted to ``x``.
    """

    def __init__(self, target: Formula, klass: str):
        self.target = target
        self.klass = klass
        u = self.u = Universe.of(target)
        self.dias = [(u.index[d.sub], u.index[d]) for d in u.diamonds]
        self.dmask = u.diamond_mask
        self.nmask = u.nominal_mask
        self.emask = u.existential_mask
        self.epairs = [(u.index[f.sub], u.index[f]) for f in u.existentials]
        self.memo: dict = {}
        self.choice: dict = {}
        self.fresh: list = []

    def compatible(self, m: int, e: int) -> bool:
        if m & self.emask != e:
            return False
        return all(e >> ef & 1 or not m >> sub & 1 for sub, ef in self.epairs)

    def below(self, y: int, x: int) -> bool:
        return not (y & self.dmask & ~x)

    def inner(self, refs: frozenset) -> frozenset:
        return refs if self.klass == "T0" else frozenset()

    def compress(self, x: int, hist: Iterable[tuple]) -> tuple:
        return tuple(sorted((p, d) for p, d in hist if x >> self._dia_of[p] & 1))

    @property
    def _dia_of(self) -> dict:
        d = self.__dict__.get("_dia_of_cache")
        if d is None:
            d = self.__dict__["_dia_of_cache"] = {p: k for p, k in self.dias}
        return d

    def win(self, refs: frozenset, x: int, hist: tuple) -> bool:
        key = (refs, x, hist)
        got = self.memo.get(key)
        if got is not None:
            return got
        ok = True
        seen = dict(hist)
        for psi, dia in self.dias:
            if not x >> dia & 1:
                continue
            if psi in seen:
                if not self.below_mask(seen[psi], x):
                    ok = False
                    break
                continue
            c = self.answer(refs, x, hist, psi)
            if c is None:
                ok = False
                break
            self.choice[(refs, x, hist, psi)] = c
        self.memo[key] = ok
        return ok

    def below_mask(self, d: int, x: int) -> bool:
        return not (d & ~x)

    def answer(self, refs: frozenset, x: int, hist: tuple, psi: int) -> Optional[tuple]:
        for j in sorted(refs):
            if j >> psi & 1 and self.below(j, x):
                return ("ref", j)
        inner = self.inner(refs)
        for y in self.fresh:
            if y >> psi & 1 and self.below(y, x):
                nh = self.compress(y, hist + ((psi, y & self.dmask),))
                if self.win(inner, y, nh):
                    return ("fresh", y)
        return None

    # opening ------------------------------------------------------------

    def solve(self) -> Optional["Strategy"]:
        u = self.u
        target_bit = u.bit(self.target)
        masks = u.hintikka_masks()
        parts = sorted({m & self.emask for m in masks})
        for e in parts:
            he = [m for m in masks if self.compatible(m, e)]
            if not any(m & target_bit for m in he):
                continue
            self.memo.clear()
            self.choice.clear()
            self.fresh = sorted((m for m in he if not m & self.nmask),
                                key=lambda m: (-bin(m & self.dmask).count("1"), m))
            anchors = [m for m in he if m & self.nmask]
            for family, refs in self.families(anchors):
                found = self.cover(e, family, refs)
                if found is not None:
                    return found
        return None

    def families(self, candidates: list):
        """Winning anchor families: one set per block of nominals, with refs."""
        if self.klass == "T1":
            good = [a for a in candidates if self.win(frozenset({a}), a, ())]
            yield from self._t1_families(good, self.nmask, [])
        else:
            yield from self._t0_families(candidates, self.nmask, [], {})

    def _t1_families(self, good, remaining, chosen):
        if not remaining:
            yield tuple(chosen), {a: frozenset({a}) for a in chosen}
            return
        low = remaining & -remaining
        for a in good:
            n = a & self.nmask
            if n & low and not n & ~remaining:
                yield from self._t1_families(good, remaining & ~n, chosen + [a])

    def _t0_families(self, candidates, remaining, chosen, refs):
        if not remaining:
            yield tuple(chosen), dict(refs)
            return
        for a in candidates:
            n = a & self.nmask
            if n & ~remaining:
                continue
            r = frozenset([a] + [c for c in chosen if self.below(c, a)])
            if self.win(r, a, ()):
                yield from self._t0_families(candidates, remaining & ~n, chosen + [a], {**refs, a: r})

    def cover(self, e: int, family: tuple, refs: dict) -> Optional["Strategy"]:
        u = self.u
        needs = [u.bit(self.target)] + [1 << sub for sub, ef in self.epairs if e >> ef & 1]
        starts = list(family)
        start_refs = dict(refs)
        for need in needs:
            if any(s & need for s in starts):
                if need == needs[0] and not starts[0] & need:
                    # the root has to be the first set
                    k = next(i for i, s in enumerate(starts) if s & need)
                    starts.insert(0, starts.pop(k))
                continue
            hit = None
            for s in self.fresh:
                if s & need:
                    r = frozenset(a for a in family if self.below(a, s)) if self.klass == "T0" else frozenset()
                    if self.win(r, s, ()):
                        hit = (s, r)
                        break
            if hit is None:
                return None
            starts.insert(0 if need == needs[0] else len(starts), hit[0])
            start_refs[hit[0]] = hit[1]
        return Strategy(self.target, self.klass, tuple(starts), start_refs, dict(self.choice), self)


@dataclass
class Strategy:
    """Eloise's winning strategy found by the search.

    ``starts`` are the masks of the initial sets (the first contains the
    target) and ``refs[s]`` the nominal sets a play started at ``s`` may
    point to.
    """

    target: Formula
    klass: str
    starts: tuple
    refs: dict
    choice: dict
    search: _Search = field(repr=False)

    @property
    def universe(self) -> Universe:
        return Universe.of(self.target)

    def relation(self) -> frozenset:
        pos = {s: k for k, s in enumerate(self.starts)}
        pairs = {(pos[s], pos[j]) for s in self.starts for j in self.refs[s] if j != s}
        return preorder_from_pairs(range(len(self.starts)), pairs).rel

    def initial_move(self) -> InitialMove:
        u = self.universe
        return InitialMove(tuple(HintikkaSet.from_mask(u, s) for s in self.starts), self.relation())

    def _refs_at(self, start_mask: int, first: bool) -> frozenset:
        r = self.refs[start_mask]
        return r if first else self.search.inner(r)

    def respond(self, g: GameState) -> Response:
        c = g.pending
        s = self.search
        u = self.universe
        x = g.board[c.source].mask
        hist = s.compress(x, ((u.index[p], g.board[i].mask & s.dmask) for p, i, _ in g.history))
        refs = self._refs_at(g.board[g.start].mask, not g.history)
        kind, y = self.choice[(refs, x, hist, u.index[c.formula.sub])]
        if kind == "ref":
            return Response(ref=self.starts.index(y))
        return Response(set=HintikkaSet.from_mask(u, y))


@dataclass(frozen=True)
class SolveResult:
    satisfiable: bool
    klass: str
    target: Formula
    quasi_model: Optional[QuasiModel] = None
    strategy: Optional[Strategy] = None

    def __bool__(self) -> bool:
        return self.satisfiable


def solve(phi: Formula, klass: str) -> SolveResult:
    """Decide satisfiability of ``phi`` over the given class of spaces."""
    k = game_class(klass, phi)
    target = fm.core(phi)
    strategy = _Search(target, k).solve()
    if strategy is None:
        return SolveResult(False, k, target)
    return SolveResult(True, k, target, extract_quasi_model(strategy), strategy)


def extract_quasi_model(strategy: Strategy) -> QuasiModel:
    """Build the quasi-model read off a winning strategy.

    Points are the initial sets plus one point per (play start, answer
    set); each answer, reference or repeated challenge contributes an arc,
    and the relation is the reflexive transitive closure of these arcs and
    ``R0``.
    """
    s = strategy.search
    u = strategy.universe
    starts = strategy.starts
    labels: dict = {k: m for k, m in enumerate(starts)}
    arcs = set(strategy.relation())

    def expand(start: int, node, x: int, hist: list, refs: frozenset):
        ckey = s.compress(x, ((p, d) for p, _, d in hist))
        where = {p: n for p, n, _ in hist}
        for psi, dia in s.dias:
            if not x >> dia & 1:
                continue
            if psi in where:
                arcs.add((node, where[psi]))
                continue
            kind, y = strategy.choice[(refs, x, ckey, psi)]
            if kind == "ref":
                arcs.add((node, starts.index(y)))
                continue
            child = ("fresh", start, y)
            arcs.add((node, child))
            if child not in labels:
                labels[child] = y
                expand(start, child, y, hist + [(psi, child, y & s.dmask)], s.inner(refs))

    for k, m in enumerate(starts):
        expand(k, k, m, [], strategy.refs[m])
    ids = {node: k for k, node in enumerate(labels)}
    pre = preorder_from_pairs(range(len(ids)), {(ids[a], ids[b]) for a, b in arcs})
    q = QuasiModel(from_preorder(pre), {ids[n]: HintikkaSet.from_mask(u, m) for n, m in labels.items()},
                   strategy.target)
    verdict = check_quasi_model(q, strategy.klass, with_e=True)
    if not verdict:
        raise RuntimeError(f"extracted structure is not a quasi-model: {verdict.failure}")
    return q


# --------------------------------------------------------------------------
# playing against Abelard


Responder = Callable[[GameState], Response]


def play_all_lines(g: GameState, respond: Responder, limit: int = 200000) -> Check:
    """Explore every Abelard line from ``g`` with Eloise answering by ``respond``."""
    budget = [limit]

    def go(state: GameState) -> Check:
        budget[0] -= 1
        if budget[0] < 0:
            raise RuntimeError("too many lines to explore")
        if state.outcome is not None:
            return PASS if state.outcome == ELOISE else fail(state.reason)
        if state.to_move == ELOISE:
            try:
                nxt = apply_move(state, respond(state))
            except IllegalMove as exc:
                return fail(f"Eloise played illegally: {exc}")
            return go(nxt)
        for c in available_challenges(state):
            verdict = go(apply_move(state, c))
            if not verdict:
                return verdict
        return PASS

    return go(g)


def verify_strategy(strategy: Strategy) -> Check:
    """Replay the strategy against every line of Abelard."""
    g = GameState(strategy.target, strategy.klass)
    try:
        g = apply_move(g, strategy.initial_move())
    except IllegalMove as exc:
        return fail(f"opening: {exc}")
    return play_all_lines(g, strategy.respond)


class PolicyPlayer:
    """Eloise driven by a quasi-model: she answers a challenge with a
    maximal successor containing the challenged formula."""

    def __init__(self, q: QuasiModel, klass: str):
        self.q = q
        self.klass = "T0" if normalize_class(klass) == "all" else normalize_class(klass)
        verdict = check_quasi_model(q, self.klass)
        if not verdict:
            raise ValueError(f"not a quasi-model for {self.klass}: {verdict.failure}")
        u = q.universe
        root = next(w for w in q.points if q.target in q.labels[w])
        named = q.named_points()
        pts = [root] + [named[n][0] for n in u.nominal_names]
        for f in u.existentials:
            if f in q.labels[root]:
                pts.append(next(w for w in q.points if f.sub in q.labels[w]))
        self.points = list(dict.fromkeys(pts))
        self.named = {w for w in self.points if q.labels[w].nominals()}

    def initial_move(self) -> InitialMove:
        nb = self.q.space.minimal_neighborhood
        rel = {(i, j) for i, v in enumerate(self.points) for j, w in enumerate(self.points)
               if i != j and w in self.named and w in nb(v)}
        return InitialMove(tuple(self.q.labels[w] for w in self.points), frozenset(rel))

    def point_of(self, g: GameState, idx: int):
        if idx < g.initial_count:
            return self.points[idx]
        for psi, i, src in g.history:
            if i == idx:
                return self._maximal(self.point_of(g, src), psi)
        raise ValueError(f"board index {idx} is not in the play")

    def _maximal(self, x, psi: Formula):
        q = self.q
        nb = q.space.minimal_neighborhood
        cands = [y for y in nb(x) if psi in q.labels[y]]
        if not cands:
            raise ValueError(f"no successor of {x!r} contains {psi}")
        top = [y for y in cands if all(y in nb(z) for z in cands if z in nb(y))]
        for y in top:
            if y == x:
                return y
        for y in top:
            if y in self.named:
                return y
        return top[0]

    def choose(self, g: GameState):
        """The q-point Eloise answers with, or the historical board index."""
        c = g.pending
        if c is None:
            raise ValueError("no challenge is pending")
        return self._maximal(self.point_of(g, c.source), c.formula.sub)

    def respond(self, g: GameState) -> Response:
        y = self.choose(g)
        if y in self.named:
            return Response(ref=self.points.index(y))
        return Response(set=self.q.labels[y])


def eloise_policy(q: QuasiModel, g: GameState, player: Optional[PolicyPlayer] = None) -> HintikkaSet:
    """Set Eloise answers with in ``g`` when playing from ``q``."""
    player = player or PolicyPlayer(q, g.klass)
    c = g.pending
    if c is None:
        raise ValueError("no challenge is pending")
    earlier = g.answered().get(c.formula.sub)
    if earlier is not None:
        return g.board[earlier]
    return q.labels[player.choose(g)]


def policy_adequate(q: QuasiModel, klass: str) -> Check:
    """Eloise wins every line when she plays the policy of ``q``."""
    player = PolicyPlayer(q, klass)
    g = GameState(q.target, player.klass)
    try:
        g = apply_move(g, player.initial_move())
    except IllegalMove as exc:
        return fail(f"opening: {exc}")
    return play_all_lines(g, player.respond)
