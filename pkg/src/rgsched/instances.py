"""Instance constructors: the lower-bound family, random instances, close pairs."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .closeness import is_alpha_close, random_perturbation
from .distributions import FiniteDist, Instance, Number, as_fraction
from .errors import InvalidParams, RGSchedError

__all__ = [
    "alpha_close_pair",
    "load_instance",
    "lower_bound_pair",
    "random_instance",
    "save_instance",
]


def lower_bound_pair(n: int, eps: Number) -> tuple[Instance, Instance]:
    """Truth and prediction on which plain Gittins is a factor ~n off.

    Each true job is ``1+eps`` w.p. ``1-1/n`` and ``n**2`` w.p. ``1/n``;
    the predicted job has ``1`` in place of ``1+eps``.
    """
    e = as_fraction(eps)
    if n < 2 or not 0 < e < 1:
        raise InvalidParams("need n >= 2 and 0 < eps < 1")
    p = Fraction(1, n)
    big = Fraction(n * n)
    truth_job = FiniteDist([(1 + e, 1 - p), (big, p)])
    pred_job = FiniteDist([(1, 1 - p), (big, p)])
    if not is_alpha_close(truth_job, pred_job, 1 + e):
        raise RGSchedError("lower-bound pair failed its closeness check")
    return Instance([truth_job] * n), Instance([pred_job] * n)


def random_instance(
    n: int,
    max_atoms: int,
    size_range: tuple[int, int] = (1, 10),
    rng: np.random.Generator | None = None,
    size_den: int = 2,
) -> Instance:
    """Jobs with 1..max_atoms atoms; sizes are multiples of ``1/size_den``."""
    if n < 1 or max_atoms < 1:
        raise InvalidParams("n and max_atoms must be positive")
    lo, hi = size_range
    if not 0 < lo <= hi:
        raise InvalidParams("size range must satisfy 0 < lo <= hi")
    rng = rng if rng is not None else np.random.default_rng()
    grid = np.arange(lo * size_den, hi * size_den + 1)
    jobs = []
    for _ in range(n):
        k = int(rng.integers(1, max_atoms + 1))
        k = min(k, len(grid))
        ticks = rng.choice(grid, size=k, replace=False)
        weights = rng.integers(1, 10, size=k)
        total = int(weights.sum())
        jobs.append(
            FiniteDist(
                (Fraction(int(t), size_den), Fraction(int(w), total))
                for t, w in zip(ticks, weights)
            )
        )
    return Instance(jobs)


def alpha_close_pair(
    n: int,
    alpha: Number,
    rng: np.random.Generator,
    max_atoms: int = 3,
    size_range: tuple[int, int] = (1, 10),
) -> tuple[Instance, Instance]:
    """Random truth plus a per-job perturbed prediction, alpha-close job by job."""
    truth = random_instance(n, max_atoms, size_range, rng)
    predicted = Instance(random_perturbation(d, alpha, rng) for d in truth.jobs)
    for t, p in zip(truth.jobs, predicted.jobs):
        if not is_alpha_close(t, p, alpha):
            raise RGSchedError("generated pair is not alpha-close")
    return truth, predicted


def load_instance(path: str | Path) -> Instance:
    with open(path) as fh:
        return Instance.from_json(json.load(fh))


def save_instance(inst: Instance, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(inst.to_json(), fh, indent=2)
        fh.write("\n")
