"""The brittleness-gap and robustness experiments, plus report writers."""

from __future__ import annotations

import csv
import json
import math
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from .distributions import Number, as_fraction
from .errors import IncompleteSchedule
from .evaluation import expected_cost_closed_form, expected_cost_enumeration
from .instances import alpha_close_pair, lower_bound_pair
from .policies import build_gipp_schedule, build_rg_schedule

__all__ = [
    "GAP_COLUMNS",
    "ROBUST_COLUMNS",
    "gap_experiment",
    "loglog_slope",
    "read_json_report",
    "robustness_experiment",
    "write_csv_report",
    "write_json_report",
]

GAP_COLUMNS = ["n", "eps", "gipp_true_pred", "gipp_true_true", "ratio", "ref_n3", "ref_n2"]

ROBUST_COLUMNS = [
    "trial",
    "alpha",
    "rg_true_pred",
    "gipp_pred_pred",
    "rg_pred_true",
    "gipp_true_true",
    "ratio_rg_vs_gipp_pred",
    "ratio_gipp_pred_vs_rg_swapped",
    "ratio_rg_swapped_vs_gipp_true",
    "ratio_total",
    "rg_bound_ok",
    "middle_ok",
    "swapped_ok",
    "total_bound_ok",
    "completes",
    "enum_matches",
    "violation",
]


def gap_experiment(ns: Sequence[int], eps: Number = Fraction(1, 10)) -> list[dict]:
    """Exact cost of Gittins run on the mispredicted vs. the true lower-bound instance."""
    e = as_fraction(eps)
    rows = []
    for n in ns:
        truth, predicted = lower_bound_pair(n, e)
        a = expected_cost_closed_form(build_gipp_schedule(predicted), truth)
        b = expected_cost_closed_form(build_gipp_schedule(truth), truth)
        rows.append(
            {
                "n": n,
                "eps": e,
                "gipp_true_pred": a,
                "gipp_true_true": b,
                "ratio": a / b,
                "ref_n3": Fraction(n**3),
                "ref_n2": Fraction(n**2),
            }
        )
    return rows


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log(y) against log(x)."""
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.asarray([float(y) for y in ys]))
    return float(np.polyfit(lx, ly, 1)[0])


def _robust_trial(args) -> dict:
    seed, alpha_idx, trial, alpha, n_jobs, max_atoms, size_range, check_completion = args
    rng = np.random.default_rng([seed, alpha_idx, trial])
    truth, predicted = alpha_close_pair(n_jobs, alpha, rng, max_atoms, size_range)
    rg = build_rg_schedule(predicted, alpha)
    rg_swapped = build_rg_schedule(truth, alpha)
    rg_true_pred = expected_cost_closed_form(rg, truth)
    gipp_pred = expected_cost_closed_form(build_gipp_schedule(predicted), predicted)
    rg_pred_true = expected_cost_closed_form(rg_swapped, predicted)
    gipp_true = expected_cost_closed_form(build_gipp_schedule(truth), truth)
    a3 = alpha**3
    completes = enum_matches = True
    if check_completion:
        try:
            enum_value = expected_cost_enumeration(rg, truth)
        except IncompleteSchedule:
            completes = enum_matches = False
        else:
            enum_matches = enum_value == rg_true_pred
    row = {
        "trial": trial,
        "alpha": alpha,
        "rg_true_pred": rg_true_pred,
        "gipp_pred_pred": gipp_pred,
        "rg_pred_true": rg_pred_true,
        "gipp_true_true": gipp_true,
        "ratio_rg_vs_gipp_pred": rg_true_pred / gipp_pred,
        "ratio_gipp_pred_vs_rg_swapped": gipp_pred / rg_pred_true,
        "ratio_rg_swapped_vs_gipp_true": rg_pred_true / gipp_true,
        "ratio_total": rg_true_pred / gipp_true,
        "rg_bound_ok": rg_true_pred <= a3 * gipp_pred,
        "middle_ok": gipp_pred <= rg_pred_true,
        "swapped_ok": rg_pred_true <= a3 * gipp_true,
        "total_bound_ok": rg_true_pred <= alpha**6 * gipp_true,
        "completes": completes,
        "enum_matches": enum_matches,
    }
    row["violation"] = not all(
        row[k] for k in ("rg_bound_ok", "middle_ok", "swapped_ok", "total_bound_ok", "completes", "enum_matches")
    )
    return row


def robustness_experiment(
    trials: int,
    alphas: Iterable[Number],
    seed: int = 7,
    n_jobs: int = 3,
    max_atoms: int = 3,
    size_range: tuple[int, int] = (1, 10),
    check_completion: bool = True,
    workers: int = 1,
) -> list[dict]:
    """Check the Robust Gittins cost chain on random alpha-close pairs.

    Every trial gets its own generator seeded by (seed, alpha index, trial),
    so results do not depend on ``workers``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    jobs = [
        (seed, ai, t, as_fraction(a), n_jobs, max_atoms, size_range, check_completion)
        for ai, a in enumerate(alphas)
        for t in range(trials)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_robust_trial, jobs, chunksize=16))
    return [_robust_trial(j) for j in jobs]


def _decimal(value: Fraction, precision: int) -> str:
    return f"{float(value):.{precision}g}"


def write_csv_report(rows: Sequence[dict], columns: Sequence[str], path: str | Path, precision: int = 12) -> None:
    """CSV with one decimal column per rational value plus an ``_exact`` twin."""
    header = []
    for col in columns:
        header.append(col)
        if rows and isinstance(rows[0].get(col), Fraction):
            header.append(f"{col}_exact")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            out = []
            for col in columns:
                v = row[col]
                if isinstance(v, Fraction):
                    out += [_decimal(v, precision), f"{v.numerator}/{v.denominator}"]
                else:
                    out.append(v)
            writer.writerow(out)


def write_json_report(rows: Sequence[dict], path: str | Path) -> None:
    def enc(v):
        if isinstance(v, Fraction):
            return {"rational": f"{v.numerator}/{v.denominator}"}
        if isinstance(v, float) and not math.isfinite(v):
            return {"float": repr(v)}
        return v

    with open(path, "w") as fh:
        json.dump([{k: enc(v) for k, v in row.items()} for row in rows], fh, indent=1)
        fh.write("\n")


def read_json_report(path: str | Path) -> list[dict]:
    def dec(v):
        if isinstance(v, dict) and "rational" in v:
            return Fraction(v["rational"])
        if isinstance(v, dict) and "float" in v:
            return float(v["float"])
        return v

    with open(path) as fh:
        return [{k: dec(v) for k, v in row.items()} for row in json.load(fh)]
