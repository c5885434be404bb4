"""Command line interface: ``topohybrid <verb> ...``.

Exit status is 0 for success (SAT, valid, verified), 1 for a negative
verdict and 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import Callable, Optional, Sequence

from . import formula as fm
from . import serialize as io
from .bisim import PointRelation, largest_hybrid_bisimulation, verify_topobisimulation
from .construct import symbolic_witness, verify_symbolic
from .finrep import check_finite_rep, check_quasi_model, filtrate, model_from_quasi, normalize_class
from .formula import FormulaSyntaxError, parse
from .game import (ABELARD, ELOISE, Challenge, IllegalMove, PolicyPlayer, apply_move,
                   available_challenges, game_class, new_game, solve)
from .model import ModelError, check_truth, model_problems, to_dot
from .oracle import brute_force_sat
from .topo import TopologyError

OK, NO, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _formula(text: str) -> fm.Formula:
    try:
        return parse(text)
    except FormulaSyntaxError as exc:
        raise UsageError(f"syntax error: {exc}") from None


def _model(path: str):
    m = io.model_from_json(io.load_json(path))
    problems = model_problems(m)
    if problems:
        raise UsageError(f"{path}: {problems[0]}")
    return m


def _class(args, phi=None) -> str:
    try:
        return game_class(args.klass, phi) if phi is not None else normalize_class(args.klass)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_parse(args, out) -> int:
    phi = _formula(args.formula)
    print(fm.core(phi) if args.core else phi, file=out)
    return OK


def cmd_check(args, out) -> int:
    m = _model(args.model)
    phi = _formula(args.formula)
    w = io._lookup(m.points, args.point)
    verdict = check_truth(m, w, phi)
    print("true" if verdict else "false", file=out)
    return OK if verdict else NO


def _oracle_note(phi, klass, sat: bool, bound: Optional[int], out) -> None:
    if not bound:
        return
    v = brute_force_sat(phi, klass, bound)
    agrees = sat or not v
    print(f"oracle (<= {bound} points): {v.result}{'' if agrees else '  DISAGREES'}", file=out)


def cmd_sat(args, out) -> int:
    phi = _formula(args.formula)
    klass = _class(args, phi)
    r = solve(phi, klass)
    print("SAT" if r else "UNSAT", file=out)
    if r:
        print(f"quasi-model with {len(r.quasi_model.points)} points", file=out)
        if args.witness:
            io.dump_json(io.quasi_to_json(r.quasi_model), args.witness)
    _oracle_note(phi, klass, bool(r), args.oracle_max, out)
    return OK if r else NO


def cmd_valid(args, out) -> int:
    phi = _formula(args.formula)
    klass = _class(args, phi)
    r = solve(fm.Neg(phi), klass)
    print("not valid" if r else "valid", file=out)
    if r and args.witness:
        io.dump_json(io.quasi_to_json(r.quasi_model), args.witness)
    _oracle_note(fm.Neg(phi), klass, bool(r), args.oracle_max, out)
    return NO if r else OK


def cmd_filtrate(args, out) -> int:
    m = _model(args.model)
    sigma = set()
    for text in args.sigma:
        sigma |= fm.subformula_closure(_formula(text))
    q, proj = filtrate(m, sigma)
    print(f"{len(m.points)} points -> {len(q.points)} classes (|sigma| = {len(sigma)})", file=out)
    data = io.model_to_json(q)
    data["projection"] = {io._key(w): c for w, c in proj.items()}
    text = io.dump_json(data, args.out)
    if not args.out:
        out.write(text)
    return OK


def cmd_bisim(args, out) -> int:
    a, b = _model(args.left), _model(args.right)
    if args.relation:
        pairs = io.relation_from_json(io.load_json(args.relation))
        verdict = verify_topobisimulation(PointRelation(a, b, pairs), require_total=args.total,
                                          require_hybrid=args.hybrid)
        print(verdict, file=out)
        return OK if verdict else NO
    res = largest_hybrid_bisimulation(a, b)
    out.write(io.dump_json({**io.relation_to_json(res.relation.pairs), "total": res.total,
                            "hybrid": res.hybrid}))
    return OK if res.total and res.hybrid else NO


def cmd_witness(args, out) -> int:
    if args.rep:
        rep = _model(args.rep)
        klass = _class(args)
    elif args.formula:
        phi = _formula(args.formula)
        klass = _class(args, phi)
        r = solve(phi, klass)
        if not r:
            print("UNSAT", file=out)
            return NO
        rep = model_from_quasi(r.quasi_model)
    else:
        raise UsageError("give a formula or --rep")
    if klass == "all":
        klass = "T0"
    verdict = check_finite_rep(rep, klass)
    if not verdict:
        print(verdict, file=out)
        return NO
    s = symbolic_witness(rep, klass)
    check = verify_symbolic(s)
    data = io.symbolic_to_json(s)
    data["verified"] = str(check)
    text = io.dump_json(data, args.out)
    if not args.out:
        out.write(text)
    else:
        print(check, file=out)
    return OK if check else NO


def cmd_export_dot(args, out) -> int:
    if args.quasi:
        q = io.quasi_from_json(io.load_json(args.quasi))
        m = model_from_quasi(q)
    else:
        m = _model(args.model)
    text = to_dot(m)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return OK


def cmd_validate_quasi(args, out) -> int:
    q = io.quasi_from_json(io.load_json(args.file))
    verdict = check_quasi_model(q, _class(args), with_e=True)
    print(verdict, file=out)
    return OK if verdict else NO


# --------------------------------------------------------------------------
# interactive game


def _describe(g, out) -> None:
    for k, h in enumerate(g.board):
        mark = "*" if k == g.last else " "
        print(f" {mark}{k}: {h}", file=out)


def step_game(phi: fm.Formula, klass: str, ask: Callable[[str], str], out,
              transcript: Optional[str] = None) -> int:
    """Human plays Abelard, the machine plays Eloise from a solved quasi-model."""
    r = solve(phi, klass)
    if not r:
        print("UNSAT: Eloise has no winning strategy, nothing to play", file=out)
        return NO
    player = PolicyPlayer(r.quasi_model, r.klass)
    g = apply_move(new_game(phi, klass), player.initial_move())
    print("Eloise opens with:", file=out)
    _describe(g, out)
    while g.outcome is None:
        options = available_challenges(g)
        print("your challenge ([<set>] <diamond formula>, or 'quit'):", file=out)
        for c in options:
            print(f"   {c.source} {c.formula}", file=out)
        line = ask("> ").strip()
        if line in ("quit", "q", ""):
            print("game abandoned", file=out)
            break
        head, _, rest = line.partition(" ")
        if head.isdigit() and rest:
            source, text = int(head), rest
        else:
            source, text = (g.last if g.last is not None else 0), line
        try:
            g = apply_move(g, Challenge(source, _formula(text)))
            if g.outcome is None:
                g = apply_move(g, player.respond(g))
        except (IllegalMove, UsageError) as exc:
            print(f"illegal: {exc}", file=out)
            continue
        entry = g.transcript[-1]
        print(f"Eloise: {entry['move']} ({', '.join(entry['rules'])})", file=out)
        _describe(g, out)
    if g.outcome is not None:
        print(f"{'Eloise' if g.outcome == ELOISE else 'Abelard'} wins: {g.reason}", file=out)
    if transcript:
        io.dump_json({"target": str(g.target), "class": g.klass, "outcome": g.outcome,
                      "moves": list(g.transcript)}, transcript)
    return OK if g.outcome != ABELARD else NO


def cmd_game(args, out) -> int:
    phi = _formula(args.formula)
    klass = _class(args, phi)
    scripted = list(args.move or [])

    def ask(prompt: str) -> str:
        if args.move is not None:
            line = scripted.pop(0) if scripted else "quit"
            print(f"{prompt}{line}", file=out)
            return line
        return input(prompt)

    return step_game(phi, klass, ask, out, args.transcript)


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="topohybrid", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    def with_class(sp, default="t0"):
        sp.add_argument("--class", dest="klass", default=default, choices=["t0", "t1", "t2", "all"],
                        type=str.lower)

    sp = sub.add_parser("parse", help="parse and print a formula")
    sp.add_argument("formula")
    sp.add_argument("--core", action="store_true", help="print the @-free diamond form")
    sp.set_defaults(run=cmd_parse)

    sp = sub.add_parser("check", help="model check a formula at a point")
    sp.add_argument("formula")
    sp.add_argument("--model", required=True)
    sp.add_argument("--point", required=True)
    sp.set_defaults(run=cmd_check)

    for verb, run in (("sat", cmd_sat), ("valid", cmd_valid)):
        sp = sub.add_parser(verb, help=f"decide {'satisfiability' if verb == 'sat' else 'validity'}")
        sp.add_argument("formula")
        with_class(sp)
        sp.add_argument("--witness", help="write the quasi-model (countermodel for valid) here")
        sp.add_argument("--oracle-max", type=int, default=0, help="cross-check with brute force up to N points")
        sp.set_defaults(run=run)

    sp = sub.add_parser("filtrate", help="filtrate a model through subformula closures")
    sp.add_argument("--model", required=True)
    sp.add_argument("--sigma", action="append", required=True, help="formula whose subformulas join sigma")
    sp.add_argument("--out")
    sp.set_defaults(run=cmd_filtrate)

    sp = sub.add_parser("bisim", help="verify or compute a topobisimulation")
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp.add_argument("--relation")
    sp.add_argument("--total", action="store_true")
    sp.add_argument("--hybrid", action="store_true")
    sp.set_defaults(run=cmd_bisim)

    sp = sub.add_parser("witness", help="build and verify a symbolic infinite witness")
    sp.add_argument("formula", nargs="?")
    sp.add_argument("--rep", help="finite representation to lift instead of solving")
    with_class(sp, "t1")
    sp.add_argument("--out")
    sp.set_defaults(run=cmd_witness)

    sp = sub.add_parser("game", help="play Abelard against the machine")
    sp.add_argument("formula")
    with_class(sp)
    sp.add_argument("--move", action="append", help="scripted challenge instead of reading stdin")
    sp.add_argument("--transcript", help="write the play as JSON")
    sp.set_defaults(run=cmd_game)

    sp = sub.add_parser("export-dot", help="render a model or quasi-model as Graphviz")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--model")
    src.add_argument("--quasi")
    sp.add_argument("--out")
    sp.set_defaults(run=cmd_export_dot)

    sp = sub.add_parser("validate-quasi", help="check a quasi-model file")
    sp.add_argument("file")
    with_class(sp)
    sp.set_defaults(run=cmd_validate_quasi)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.run(args, out)
    except (UsageError, io.FormatError, ModelError, TopologyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
