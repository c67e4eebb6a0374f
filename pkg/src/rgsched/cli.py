"""``rgsched`` command-line entry point."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import closeness
from .distributions import FiniteDist, Instance, as_fraction
from .errors import RGSchedError
from .evaluation import brute_force_opt, evaluate
from .experiments import (
    GAP_COLUMNS,
    ROBUST_COLUMNS,
    gap_experiment,
    robustness_experiment,
    write_csv_report,
    write_json_report,
)
from .gittins import compute_quanta, gipp_order
from .instances import alpha_close_pair, load_instance, lower_bound_pair, random_instance, save_instance
from .policies import Schedule, build_gipp_schedule, build_rg_schedule, execute


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _load_dists(path: str) -> list[FiniteDist]:
    """A file holds either one distribution or a whole instance."""
    obj = _load_json(path)
    if "jobs" in obj:
        return list(Instance.from_json(obj).jobs)
    return [FiniteDist.from_json(obj)]


def _emit(obj, out: str | None = None) -> None:
    text = json.dumps(obj, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _csv_list(raw: str, cast=str) -> list:
    return [cast(x) for x in raw.split(",") if x.strip()]


def cmd_check_close(args) -> int:
    a, b = _load_dists(args.a), _load_dists(args.b)
    if len(a) != len(b):
        print("job counts differ", file=sys.stderr)
        return 2
    ok = all(closeness.is_alpha_close(x, y, args.alpha) for x, y in zip(a, b))
    print("close" if ok else "not close")
    return 0 if ok else 1


def cmd_min_alpha(args) -> int:
    a, b = _load_dists(args.a), _load_dists(args.b)
    if len(a) != len(b):
        print("job counts differ", file=sys.stderr)
        return 2
    alpha = max(closeness.minimal_alpha(x, y, args.tol) for x, y in zip(a, b))
    print(f"{float(alpha):.12g}")
    return 0


def _quantum_json(qu) -> dict:
    return {
        "job": qu.job,
        "offset": str(qu.offset),
        "length": str(qu.length),
        "rank": str(qu.rank),
    }


def cmd_quanta(args) -> int:
    inst = load_instance(args.instance)
    _emit(
        [
            [[str(q.offset), str(q.length), str(q.rank)] for q in compute_quanta(d, j)]
            for j, d in enumerate(inst.jobs)
        ]
    )
    return 0


def cmd_order(args) -> int:
    _emit([_quantum_json(qu) for qu in gipp_order(load_instance(args.instance))])
    return 0


def cmd_schedule(args) -> int:
    inst = load_instance(args.predicted)
    if args.policy == "gipp":
        sched = build_gipp_schedule(inst)
    else:
        sched = build_rg_schedule(inst, args.alpha)
    _emit(sched.to_json(), args.out)
    return 0


def cmd_run(args) -> int:
    sched = Schedule.from_json(_load_json(args.schedule))
    raw = _load_json(args.realization)
    sizes = raw["sizes"] if isinstance(raw, dict) else raw
    result = execute(sched, sizes, args.mode)
    _emit(
        {
            "completion": [str(c) for c in result.completion],
            "total": str(result.total),
            "total_decimal": float(result.total),
        }
    )
    return 0


def cmd_evaluate(args) -> int:
    sched = Schedule.from_json(_load_json(args.schedule))
    truth = load_instance(args.truth)
    report = evaluate(sched, truth, args.method, args.samples, args.seed)
    _emit(report.to_json())
    return 0


def cmd_opt(args) -> int:
    value = brute_force_opt(load_instance(args.instance))
    _emit({"method": "dp-opt", "value": str(value), "decimal": float(value)})
    return 0


def cmd_gen(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.kind == "lower-bound":
        truth, pred = lower_bound_pair(args.n, args.eps)
    elif args.kind == "close-pair":
        truth, pred = alpha_close_pair(args.n, args.alpha, rng, args.max_atoms, (args.lo, args.hi))
    else:
        inst = random_instance(args.n, args.max_atoms, (args.lo, args.hi), rng)
        if args.out:
            save_instance(inst, args.out)
        else:
            _emit(inst.to_json())
        return 0
    if not (args.out_truth and args.out_pred):
        _emit({"truth": truth.to_json(), "predicted": pred.to_json()})
        return 0
    save_instance(truth, args.out_truth)
    save_instance(pred, args.out_pred)
    return 0


def _write_report(rows, columns, out: str | None, precision: int) -> None:
    if out is None:
        out = "/dev/stdout"
    if out.endswith(".json"):
        write_json_report(rows, out)
    else:
        write_csv_report(rows, columns, out, precision)


def cmd_gap(args) -> int:
    rows = gap_experiment(_csv_list(args.ns, int), args.eps)
    _write_report(rows, GAP_COLUMNS, args.out, args.precision)
    return 0


def cmd_robust(args) -> int:
    rows = robustness_experiment(
        args.trials,
        _csv_list(args.alphas),
        seed=args.seed,
        n_jobs=args.jobs,
        max_atoms=args.max_atoms,
        size_range=(args.lo, args.hi),
        check_completion=not args.no_completion_check,
        workers=args.workers,
    )
    _write_report(rows, ROBUST_COLUMNS, args.out, args.precision)
    violations = sum(r["violation"] for r in rows)
    print(f"{len(rows)} trials, {violations} violations", file=sys.stderr)
    return 1 if violations else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rgsched", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-close", help="exit 0 iff two distributions are alpha-close")
    p.add_argument("--alpha", type=as_fraction, required=True)
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_check_close)

    p = sub.add_parser("min-alpha", help="smallest alpha making two distributions close")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_min_alpha)

    p = sub.add_parser("quanta", help="per-job quanta as (offset, length, rank)")
    p.add_argument("instance")
    p.set_defaults(func=cmd_quanta)

    p = sub.add_parser("order", help="global Gittins quanta order")
    p.add_argument("instance")
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("schedule", help="build a GIPP or Robust Gittins schedule")
    p.add_argument("--policy", choices=["gipp", "rg"], default="gipp")
    p.add_argument("--alpha", type=as_fraction, default=Fraction(1))
    p.add_argument("--out")
    p.add_argument("predicted")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("run", help="execute a schedule on realized sizes")
    p.add_argument("schedule")
    p.add_argument("realization")
    p.add_argument("--mode", choices=["strict", "fallback"], default="strict")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("evaluate", help="expected total completion time of a schedule")
    p.add_argument("--method", choices=["closed", "enum", "mc"], default="closed")
    p.add_argument("--samples", type=int, default=10**5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--schedule", required=True)
    p.add_argument("--truth", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("opt", help="optimal expected cost by dynamic programming")
    p.add_argument("instance")
    p.set_defaults(func=cmd_opt)

    p = sub.add_parser("gen", help="generate instances")
    p.add_argument("kind", choices=["lower-bound", "random", "close-pair"])
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--eps", type=as_fraction, default=Fraction(1, 10))
    p.add_argument("--alpha", type=as_fraction, default=Fraction(3, 2))
    p.add_argument("--max-atoms", type=int, default=3)
    p.add_argument("--lo", type=int, default=1)
    p.add_argument("--hi", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--out-truth")
    p.add_argument("--out-pred")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("gap", help="Gittins brittleness gap on the lower-bound family")
    p.add_argument("--ns", default="8,16,32,64")
    p.add_argument("--eps", type=as_fraction, default=Fraction(1, 10))
    p.add_argument("--out")
    p.add_argument("--precision", type=int, default=12)
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("robust", help="Robust Gittins bound checks on random close pairs")
    p.add_argument("--alphas", default="1.01,1.1,1.5,2")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--jobs", type=int, default=3)
    p.add_argument("--max-atoms", type=int, default=3)
    p.add_argument("--lo", type=int, default=1)
    p.add_argument("--hi", type=int, default=10)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-completion-check", action="store_true")
    p.add_argument("--out")
    p.add_argument("--precision", type=int, default=12)
    p.set_defaults(func=cmd_robust)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RGSchedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
