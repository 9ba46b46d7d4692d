"""Command-line driver.

Commands: gen | solve | check | sweep | bound.  Exit codes are stable for
scripting: 0 success, 1 check/sweep failures, 2 usage or parameter
errors, 3 degenerate solutions (only the empty set is worth incentivizing).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

from .contracts import ModeSpec, is_equilibrium
from .errors import FairpayError
from .experiments import build_instance, run_sweep, solve_with
from .rewards import check_structure, mask_to_indices, reward_from_descriptor
from .serialize import (
    load_instance,
    load_result,
    load_sweep_config,
    result_contract,
    save_instance,
    save_report,
)
from .solvers import two_agent_bound

FAMILIES = (
    "geometric",
    "lemma8",
    "lemma9",
    "tight2",
    "random-additive",
    "random-coverage",
    "random-capped",
)

METHOD_FLAGS = {
    "brute": "brute",
    "symmetric": "symmetric",
    "two-agent": "two_agent",
    "log-partition": "log_partition",
    "delta-partition": "delta_partition",
    "geometric": "geometric",
}


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get("FAIRPAY_WORKERS", "1")))
    except ValueError:
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairpay",
        description="Optimal linear contracts under pay-equity constraints.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an instance file")
    gen.add_argument("family", choices=FAMILIES)
    gen.add_argument("--out", required=True)
    gen.add_argument("--m", type=int)
    gen.add_argument("--T", type=float)
    gen.add_argument("--n", type=int)
    gen.add_argument("--M", type=float)
    gen.add_argument("--beta", type=float)
    gen.add_argument("--delta", type=float)
    gen.add_argument("--epsilon", type=float)
    gen.add_argument("--seed", type=int)
    gen.add_argument("--cost-margin", type=float, dest="cost_margin")

    solve = sub.add_parser("solve", help="solve an instance file")
    solve.add_argument("--in", dest="infile", required=True)
    solve.add_argument("--out", required=True)
    solve.add_argument(
        "--mode", choices=("unconstrained", "nd", "beta-nd"), default="unconstrained"
    )
    group = solve.add_mutually_exclusive_group()
    group.add_argument("--beta", type=float)
    group.add_argument("--delta", type=float, help="shorthand for --beta n^delta")
    solve.add_argument("--method", choices=sorted(METHOD_FLAGS), default="brute")
    solve.add_argument("--workers", type=int, default=_default_workers())

    check = sub.add_parser("check", help="verify structure or an equilibrium")
    check.add_argument("what", choices=("structure", "equilibrium"))
    check.add_argument("--in", dest="infile", required=True)
    check.add_argument("--result", help="result file (equilibrium check)")
    check.add_argument("--sample", type=int, help="sampled checks for large n")
    check.add_argument("--seed", type=int)

    sweep = sub.add_parser("sweep", help="run a parameter sweep to CSV")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--out", required=True)
    sweep.add_argument("--workers", type=int, default=_default_workers())

    bound = sub.add_parser("bound", help="print guarantee numbers")
    bound.add_argument("--beta", type=float)
    bound.add_argument("--n", type=int)
    bound.add_argument("--delta", type=float)

    return parser


def cmd_gen(args) -> int:
    params = {}
    for key in ("m", "T", "n", "M", "beta", "delta", "epsilon", "seed", "cost_margin"):
        value = getattr(args, key)
        if value is not None:
            params[key] = value
    if args.family.startswith("random-") and "seed" not in params:
        print("random families require an explicit --seed", file=sys.stderr)
        return 2
    inst = build_instance(args.family, params)
    save_instance(inst, args.out)
    shown = ", ".join(f"{k}={v}" for k, v in sorted(params.items()))
    print(f"wrote {args.out}: family={args.family} n={inst.n} ({shown})")
    return 0


def cmd_solve(args) -> int:
    inst = load_instance(args.infile)
    if args.mode == "beta-nd":
        if args.beta is None and args.delta is None:
            print("beta-nd mode needs --beta or --delta", file=sys.stderr)
            return 2
        beta = args.beta if args.beta is not None else inst.n**args.delta
        spec = ModeSpec.beta_nd(beta)
    else:
        if args.beta is not None or args.delta is not None:
            print(f"mode {args.mode} takes neither --beta nor --delta", file=sys.stderr)
            return 2
        spec = ModeSpec.unconstrained() if args.mode == "unconstrained" else ModeSpec.nd()

    start = time.perf_counter()
    report = solve_with(inst, spec, METHOD_FLAGS[args.method], workers=args.workers)
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    save_report(report, args.out, timing_ms=elapsed_ms)
    members = report.best.member_list()
    print(
        f"method={report.method} mode={spec.mode}"
        + (f" beta={spec.beta:g}" if spec.beta is not None else "")
        + f" utility={report.best.utility:.12g} set={members}"
        + f" candidates={report.candidates_examined} time={elapsed_ms:.1f}ms"
    )
    if not members:
        print("degenerate: no nonempty set beats the empty contract", file=sys.stderr)
        return 3
    return 0


def cmd_check(args) -> int:
    if args.what == "structure":
        with open(args.infile) as handle:
            data = json.load(handle)
        reward = reward_from_descriptor(data["reward"])
        if args.sample is not None and args.seed is None:
            print("--sample requires an explicit --seed", file=sys.stderr)
            return 2
        report = check_structure(reward, samples=args.sample, seed=args.seed)
        if report.monotone and report.submodular:
            print(f"pass: monotone and submodular ({report.checks} checks)")
            return 0
        s, t, i = report.witness
        print(
            f"fail: not {report.violated}; witness S={mask_to_indices(s)} "
            f"T={mask_to_indices(t)} i={i} "
            f"(f(S)={reward.value(s):.12g}, f(T)={reward.value(t):.12g}, "
            f"f(T+i)={reward.value(t | (1 << i)):.12g}, f(S+i)={reward.value(s | (1 << i)):.12g})"
        )
        return 1

    if not args.result:
        print("equilibrium check needs --result", file=sys.stderr)
        return 2
    inst = load_instance(args.infile)
    data = load_result(args.result)
    contract, mask = result_contract(data, inst.n)
    ok = is_equilibrium(inst, contract, mask)
    if ok:
        print(f"pass: set {mask_to_indices(mask)} is an equilibrium")
        return 0
    f = inst.reward
    f_s = f.value(mask)
    for i in range(inst.n):
        a_i = float(contract.payments[i])
        if (mask >> i) & 1:
            gap = (a_i * f_s - float(inst.costs[i])) - a_i * f.value(mask & ~(1 << i))
            if gap < -1e-9:
                print(f"fail: member {i} prefers shirking by {-gap:.6g}")
        else:
            gap = (a_i * f.value(mask | (1 << i)) - float(inst.costs[i])) - a_i * f_s
            if gap > 1e-9:
                print(f"fail: outsider {i} prefers joining by {gap:.6g}")
    return 1


def cmd_sweep(args) -> int:
    spec = load_sweep_config(args.config)
    records = run_sweep(spec, out_path=args.out, workers=args.workers)
    ratios = [r.ratio for r in records if r.ratio is not None]
    failures = sum(1 for r in records if r.error is not None)
    lo = f"{min(ratios):.6g}" if ratios else "-"
    hi = f"{max(ratios):.6g}" if ratios else "-"
    print(
        f"wrote {args.out}: {len(records)} points, {failures} failures, "
        f"ratio range [{lo}, {hi}]"
    )
    return 1 if failures else 0


def cmd_bound(args) -> int:
    if args.beta is None and args.n is None:
        print("bound needs --beta and/or --n [--delta]", file=sys.stderr)
        return 2
    if args.beta is not None:
        print(f"two-agent ratio bound at beta={args.beta:g}: {two_agent_bound(args.beta):.12g}")
    if args.n is not None:
        print(f"uniform-pay partition denominator at n={args.n}: {args.n.bit_length()}")
        if args.delta is not None:
            t = math.ceil(1.0 / args.delta)
            print(
                f"threshold partition denominator at delta={args.delta:g}: {t + 1} "
                f"(beta = n^delta = {args.n**args.delta:.6g})"
            )
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "gen": cmd_gen,
        "solve": cmd_solve,
        "check": cmd_check,
        "sweep": cmd_sweep,
        "bound": cmd_bound,
    }
    try:
        return handlers[args.command](args)
    except FairpayError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: cannot parse file: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
