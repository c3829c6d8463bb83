"""Command-line interface.

Exit codes: 0 yes/success, 1 no, 2 error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import fpt, oracle, poly, portfolio, reductions, twdp
from .core import (
    compute_params,
    format_instance,
    FormatError,
    parse_instance,
    score,
)
from .oracle import BudgetExceededError
from .portfolio import AllSolversExceededError

EXIT_YES = 0
EXIT_NO = 1
EXIT_ERROR = 2
EXIT_BUDGET = 3

ALGOS = {
    "auto": portfolio.dispatch,
    "brute": oracle.brute_force,
    "av": lambda inst: portfolio._av_result(inst),
    "mav-deg2": poly.mav_deg2,
    "ccav-deg2": poly.ccav_deg2,
    "pav-deg1": poly.pav_deg1,
    "pav-deg22": poly.pav_deg22,
    "mav-classes": fpt.mav_by_classes,
    "mav-kdc": fpt.mav_k_deltac,
    "mav-grsp": fpt.mav_dual_grsp,
    "ccav-bb": fpt.ccav_bb_dual,
    "pav-bb": fpt.pav_bb_dv,
    "pav-matching": fpt.pav_by_matching,
    "mav-matching": fpt.mav_by_matching,
    "ccav-tw": twdp.ccav_tw_dp,
    "pav-tw": twdp.pav_tw_dp,
    "mav-tw": twdp.mav_tw_dp,
}


def _read_instance(path):
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def cmd_solve(args):
    instance = _read_instance(args.file)
    res = ALGOS[args.algo](instance)
    print(f"decision: {'yes' if res.decision else 'no'}")
    if res.opt_score is not None:
        print(f"optScore: {res.opt_score}")
    print(f"algorithm: {res.algorithm}")
    if args.witness and res.witness is not None:
        print("witness: " + ",".join(str(c) for c in res.witness))
    return EXIT_YES if res.decision else EXIT_NO


def cmd_score(args):
    instance = _read_instance(args.file)
    committee = [int(x) for x in args.committee.split(",")] if args.committee else []
    s = score(instance.election, instance.rule, committee)
    print(f"{s.numerator}/{s.denominator}" if s.denominator != 1 else str(s.numerator))
    return EXIT_YES


def cmd_params(args):
    instance = _read_instance(args.file)
    p = compute_params(instance)
    for name in ("m", "n", "k", "kbar", "delta_v", "delta_c", "tw_upper", "alpha"):
        print(f"{name}: {getattr(p, name)}")
    return EXIT_YES


def cmd_gen(args):
    config = portfolio.GeneratorConfig(
        m=args.m, n=args.n, max_dv=args.max_dv, max_dc=args.max_dc
    )
    election = portfolio.generate(config, args.seed)
    from .core import format_election

    text = format_election(election)
    if args.rule is not None:
        from .core import Instance

        d = Fraction(args.d) if args.d is not None else Fraction(0)
        text = format_instance(
            Instance(election=election, rule=args.rule, k=args.k, d=d)
        )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_YES


def cmd_reduce(args):
    with open(args.graphfile, encoding="utf-8") as fh:
        n, edges = reductions.parse_graph(fh.read())
    if args.source == "vc":
        instance = reductions.vc_to_mav(n, edges, args.kappa)
    elif args.source == "ids":
        instance = reductions.ids_to_ccav(n, edges, args.kappa)
    elif args.source == "mvs":
        instance = reductions.mvs_to_pav(n, edges, args.kappa, args.ell)
    elif args.source == "pvc":
        instance = reductions.pvc_to_ccav(n, edges, args.kappa, args.ell)
    else:
        raise ValueError(f"unknown reduction {args.source!r}")
    text = format_instance(instance)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_YES


def cmd_verify(args):
    ok, report = portfolio.verify(args.dir, budget=args.budget)
    for row in report:
        print("\t".join(f"{key}={value}" for key, value in row.items()))
    print(f"entries: {len(report)}, ok: {ok}")
    return EXIT_YES if ok else EXIT_NO


def cmd_bench(args):
    text = portfolio.bench(args.dir)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_YES


def build_parser():
    parser = argparse.ArgumentParser(
        prog="approvalwd",
        description="Exact winner determination for MAV, CCAV, and PAV.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide an instance file")
    p.add_argument("file")
    p.add_argument("--algo", choices=sorted(ALGOS), default="auto")
    p.add_argument("--witness", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("score", help="score a committee on an instance file")
    p.add_argument("file")
    p.add_argument("--committee", default="")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("params", help="print derived parameters")
    p.add_argument("file")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("gen", help="generate a random election or instance")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-dv", type=int, default=None)
    p.add_argument("--max-dc", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rule", choices=("mav", "ccav", "pav"), default=None)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--d", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("reduce", help="convert a graph problem to an instance")
    p.add_argument("graphfile")
    p.add_argument("--from", dest="source", choices=("vc", "ids", "mvs", "pvc"), required=True)
    p.add_argument("--kappa", type=int, required=True)
    p.add_argument("--ell", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="cross-check a corpus against the oracle")
    p.add_argument("dir")
    p.add_argument("--budget", type=int, default=22)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="benchmark dispatch over a corpus")
    p.add_argument("dir")
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (BudgetExceededError, AllSolversExceededError) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (FormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
