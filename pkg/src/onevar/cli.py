"""Command-line front end.

Exit codes: 0 success/holds/proved, 1 refuted/countermodel/check failure,
2 unknown/budget exhausted, 3 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import algebra as alg
from . import semantics as sem
from .interpolation import interpolate
from .modalization import check_modal_derivation, eliminate
from .proof import (
    CONFIGS, CheckError, check_derivation, dump, load, parse_sequent,
)
from .search import Budget, prove
from .syntax import ParseError, Var, X, circle, parse_fo, parse_modal, render, star


def _jdump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


_CALCULI = {k.lower(): v for k, v in CONFIGS.items()}


def _config(name: str):
    return _CALCULI[name.lower()]


def _var(text: str) -> Var:
    if text == "x":
        return X
    if text.startswith("y") and text[1:].isdigit():
        return Var(int(text[1:]))
    print(f"E-SYNTAX: bad variable name {text!r}", file=sys.stderr)
    raise SystemExit(3)


def _load_proof(path: str, modal: bool = False):
    with open(path) as fh:
        return load(fh.read(), modal=modal)


def _load_algebra(ref: str):
    if ref in alg.CATALOG_NAMES:
        return alg.load_catalog(ref)
    return alg.load_file(ref)


def _cmd_prove(args) -> int:
    goal = parse_sequent(args.sequent)
    budget = Budget(nodes=args.budget, depth=args.depth)
    res = prove(goal, _config(args.calculus), budget)
    print(res.status.capitalize())
    if res.status == "proved" and args.emit:
        with open(args.emit, "w") as fh:
            fh.write(dump(res.derivation))
    if res.diagnostics:
        print(res.diagnostics, file=sys.stderr)
    return {"proved": 0, "refuted": 1, "unknown": 2}[res.status]


def _cmd_check(args) -> int:
    d = _load_proof(args.proof, modal=args.modal)
    cfg = _config(args.calculus)
    try:
        if args.modal:
            check_modal_derivation(d, cfg)
        else:
            check_derivation(d, cfg)
    except CheckError as exc:
        print(str(exc))
        return 1
    print(f"ok: {d.conclusion.render()}")
    return 0


def _cmd_interp(args) -> int:
    d = _load_proof(args.proof)
    gamma = [int(i) for i in args.gamma.split(",")] if args.gamma else []
    res = interpolate(d, gamma, _var(args.y), _var(args.z),
                      _config(args.calculus))
    print(render(res.chi))
    if args.emit:
        payload = {"chi": render(res.chi),
                   "d1": json.loads(dump(res.d1)),
                   "d2": json.loads(dump(res.d2))}
        with open(args.emit, "w") as fh:
            fh.write(_jdump(payload))
    return 0


def _cmd_modalize(args) -> int:
    d = _load_proof(args.proof)
    out = eliminate(d, _config(args.calculus))
    print(out.conclusion.render())
    if args.emit:
        with open(args.emit, "w") as fh:
            fh.write(dump(out))
    else:
        print(dump(out))
    return 0


def _cmd_translate(args) -> int:
    if args.star:
        print(render(star(parse_fo(args.formula))))
    else:
        print(render(circle(parse_modal(args.formula))))
    return 0


def _cmd_alg_validate(args) -> int:
    A = _load_algebra(args.file)
    try:
        alg.validate(A, args.profile)
    except alg.AlgebraError as exc:
        print(str(exc))
        return 1
    print(f"ok: {args.profile}")
    return 0


def _cmd_alg_subalgebras(args) -> int:
    A = _load_algebra(args.file)
    rel = {tuple(s) for s in alg.relatively_complete_subalgebras(A)}
    for sub in alg.subuniverses(A):
        tag = " relatively-complete" if tuple(sub) in rel else ""
        print(",".join(str(i) for i in sub) + tag)
    return 0


def _cmd_alg_expand(args) -> int:
    A = _load_algebra(args.file)
    sub = [int(i) for i in args.sub.split(",")]
    M = alg.expand_from_subalgebra(A, sub)
    print(_jdump(alg.to_json(M)))
    return 0


def _cmd_alg_power(args) -> int:
    A = _load_algebra(args.file)
    print(_jdump(alg.to_json(alg.functional_power(A, args.w))))
    return 0


def _render_assignment(hit: dict) -> str:
    return " ".join(f"v{v}={hit[v]}" for v in sorted(hit))


def _cmd_alg_eval(args) -> int:
    A = _load_algebra(args.file)
    eq = alg.parse_equation(args.equation)
    if args.at:
        assignment = {}
        for part in args.at.split(","):
            k, _, v = part.partition("=")
            assignment[int(k.lstrip("v"))] = int(v)
        lv, rv = alg.eval_equation(A, eq, assignment)
        print(f"{lv} {'=' if lv == rv else '!='} {rv}")
        return 0 if lv == rv else 1
    hit = alg.eval_equation(A, eq)
    if hit is None:
        print("holds")
        return 0
    lv, rv = alg.eval_equation(A, eq, hit)
    print(f"countermodel {_render_assignment(hit)} ({lv} vs {rv})")
    return 1


def _cmd_alg_hunt(args) -> int:
    eq = alg.parse_equation(args.equation)
    scope = args.scope.split(",") if args.scope else None
    found = alg.countermodel_search(eq, scope)
    if found is None:
        print("no countermodel in the catalog")
        return 0
    M, hit = found
    lv, rv = alg.eval_equation(M, eq, hit)
    print(f"countermodel in {M.name or 'expansion'}: "
          f"{_render_assignment(hit)} ({lv} vs {rv})")
    return 1


def _cmd_sem_eval(args) -> int:
    st = sem.load_file(args.structure)
    vals = sem.eval_fo(st, parse_fo(args.formula))
    print(" ".join(str(v) for v in vals))
    return 0


def _cmd_sem_hunt(args) -> int:
    goal = sem.parse_fo_equation(args.goal)
    assumptions = [sem.parse_fo_equation(a) for a in args.assume]
    st = sem.bounded_fo_countermodel(assumptions, goal, max_S=args.maxS)
    if st is None:
        print("no countermodel within bounds")
        return 0
    print(_jdump(sem.to_json(st)))
    return 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="onevar")
    sub = p.add_subparsers(dest="cmd", required=True)

    def calc(sp):
        sp.add_argument("--calculus", default="fle",
                        choices=sorted(_CALCULI))

    sp = sub.add_parser("prove")
    sp.add_argument("sequent")
    calc(sp)
    sp.add_argument("--budget", type=int, default=200_000)
    sp.add_argument("--depth", type=int, default=60)
    sp.add_argument("--emit")
    sp.set_defaults(fn=_cmd_prove)

    sp = sub.add_parser("check")
    sp.add_argument("proof")
    calc(sp)
    sp.add_argument("--modal", action="store_true")
    sp.set_defaults(fn=_cmd_check)

    sp = sub.add_parser("interp")
    sp.add_argument("proof")
    sp.add_argument("--gamma", default="")
    sp.add_argument("--y", required=True)
    sp.add_argument("--z", required=True)
    calc(sp)
    sp.add_argument("--emit")
    sp.set_defaults(fn=_cmd_interp)

    sp = sub.add_parser("modalize")
    sp.add_argument("proof")
    calc(sp)
    sp.add_argument("--emit")
    sp.set_defaults(fn=_cmd_modalize)

    sp = sub.add_parser("translate")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--star", action="store_true")
    g.add_argument("--circle", action="store_true")
    sp.add_argument("formula")
    sp.set_defaults(fn=_cmd_translate)

    ap = sub.add_parser("alg")
    asub = ap.add_subparsers(dest="algcmd", required=True)

    sp = asub.add_parser("validate")
    sp.add_argument("file")
    sp.add_argument("--profile", required=True,
                    choices=["LAT", "FLE", "M-LAT", "M-FLE"])
    sp.set_defaults(fn=_cmd_alg_validate)

    sp = asub.add_parser("subalgebras")
    sp.add_argument("file")
    sp.set_defaults(fn=_cmd_alg_subalgebras)

    sp = asub.add_parser("expand")
    sp.add_argument("file")
    sp.add_argument("--sub", required=True)
    sp.set_defaults(fn=_cmd_alg_expand)

    sp = asub.add_parser("power")
    sp.add_argument("file")
    sp.add_argument("--w", type=int, required=True)
    sp.set_defaults(fn=_cmd_alg_power)

    sp = asub.add_parser("eval")
    sp.add_argument("file")
    sp.add_argument("equation")
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--at")
    sp.set_defaults(fn=_cmd_alg_eval)

    sp = asub.add_parser("hunt")
    sp.add_argument("equation")
    sp.add_argument("--scope")
    sp.set_defaults(fn=_cmd_alg_hunt)

    mp = sub.add_parser("sem")
    msub = mp.add_subparsers(dest="semcmd", required=True)

    sp = msub.add_parser("eval")
    sp.add_argument("structure")
    sp.add_argument("formula")
    sp.set_defaults(fn=_cmd_sem_eval)

    sp = msub.add_parser("hunt")
    sp.add_argument("goal")
    sp.add_argument("--assume", action="append", default=[])
    sp.add_argument("--maxS", type=int, default=3)
    sp.set_defaults(fn=_cmd_sem_hunt)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 3 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ParseError, FileNotFoundError, json.JSONDecodeError,
            ValueError) as exc:
        if isinstance(exc, CheckError):
            print(str(exc), file=sys.stderr)
            return 1
        print(str(exc), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
