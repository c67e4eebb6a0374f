"""Expected total completion time of fixed-quanta schedules.

Three independent routes are provided:

* ``expected_cost_closed_form`` sums, over each entry's disjoint prefix
  block, survival-weighted partial investments.
* ``expected_cost_enumeration`` executes the schedule on every joint
  realization and averages exactly.
* ``monte_carlo_cost`` samples realizations in float mode.

``brute_force_opt`` is a separate dynamic program for the best
nonanticipatory policy, used as the reference optimum on small inputs.
"""

from __future__ import annotations

import functools
import itertools
import math
import os
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .distributions import Instance, sample
from .errors import InvalidParams, ScheduleDoesNotCover, StateSpaceTooLarge
from .gittins import disjoint_prefix_starts, partial_investment
from .policies import Schedule, execute, execute_batch

__all__ = [
    "CostReport",
    "DEFAULT_MAX_REALIZATIONS",
    "DEFAULT_MAX_STATES",
    "brute_force_opt",
    "covers",
    "evaluate",
    "expected_cost_closed_form",
    "expected_cost_enumeration",
    "monte_carlo_cost",
]

DEFAULT_MAX_REALIZATIONS = 10**6
DEFAULT_MAX_STATES = 10**5


def _env_cap(default: int) -> int:
    raw = os.environ.get("RGSCHED_MAX_STATES")
    return int(raw) if raw else default


def covers(s: Schedule, truth: Instance) -> bool:
    """Every job's entries add up to at least its largest possible size."""
    if s.n_jobs != len(truth):
        return False
    return all(tot >= d.sizes[-1] for tot, d in zip(s.job_totals(), truth.jobs))


def expected_cost_closed_form(s: Schedule, truth: Instance) -> Fraction:
    if not covers(s, truth):
        raise ScheduleDoesNotCover("schedule entries do not reach every job's max support")
    entries = s.entries
    surv = [truth[e.job].survival(e.offset) for e in entries]
    work = [partial_investment(truth[e.job], e.length, e.offset) for e in entries]
    prefix = [Fraction(0)]
    for w in work:
        prefix.append(prefix[-1] + w)
    total = Fraction(0)
    for pos, start in enumerate(disjoint_prefix_starts(s.jobs)):
        if surv[pos] == 0:
            continue
        # other jobs' entries in the block are independent of this job
        total += work[pos] + surv[pos] * (prefix[pos] - prefix[start])
    return total


def expected_cost_enumeration(
    s: Schedule, truth: Instance, max_realizations: int | None = None
) -> Fraction:
    cap = max_realizations or _env_cap(DEFAULT_MAX_REALIZATIONS)
    count = truth.support_product()
    if count > cap:
        raise StateSpaceTooLarge(f"{count} joint realizations exceed cap {cap}")
    total = Fraction(0)
    for combo in itertools.product(*(d.atoms for d in truth.jobs)):
        prob = math.prod((p for _, p in combo), start=Fraction(1))
        total += prob * execute(s, [size for size, _ in combo], "strict").total
    return total


def monte_carlo_cost(s: Schedule, truth: Instance, samples: int, seed: int) -> tuple[float, float]:
    """Sample mean and standard error of the total completion time."""
    if samples < 2:
        raise InvalidParams("need at least two samples")
    rng = np.random.default_rng(seed)
    sizes = np.column_stack([sample(d, rng, samples) for d in truth.jobs])
    totals = execute_batch(s, sizes)
    return float(totals.mean()), float(totals.std(ddof=1) / math.sqrt(samples))


def brute_force_opt(inst: Instance, max_states: int | None = None) -> Fraction:
    """Optimal expected total completion time by exact dynamic programming.

    Decisions happen only when the running job reaches one of its support
    points, since no information arrives in between. A state records, per
    job, the index of its attained support level or ``None`` once finished;
    each unit of elapsed time is charged once per unfinished job.
    """
    cap = max_states or _env_cap(DEFAULT_MAX_STATES)
    levels = [[Fraction(0)] + [x for x in d.sizes if x > 0] for d in inst.jobs]
    n_states = math.prod(len(lv) + 1 for lv in levels)
    if n_states > cap:
        raise StateSpaceTooLarge(f"{n_states} states exceed cap {cap}")
    dists = inst.jobs

    @functools.cache
    def value(state: tuple[int | None, ...]) -> Fraction:
        alive = [j for j, k in enumerate(state) if k is not None]
        if not alive:
            return Fraction(0)
        best = None
        for j in alive:
            k = state[j]
            here, nxt = levels[j][k], levels[j][k + 1]
            tail = dists[j].survival(here)
            p_done = (tail - dists[j].survival(nxt)) / tail
            cost = len(alive) * (nxt - here)
            if p_done:
                cost += p_done * value(state[:j] + (None,) + state[j + 1 :])
            if p_done != 1:
                cost += (1 - p_done) * value(state[:j] + (k + 1,) + state[j + 1 :])
            if best is None or cost < best:
                best = cost
        return best

    # jobs with an atom at zero may already be finished at time zero
    total = Fraction(0)
    choices = []
    for d in dists:
        p_zero = 1 - d.survival(0)
        opts = [(0, 1 - p_zero)] if p_zero == 0 else [(None, p_zero)]
        if 0 < p_zero < 1:
            opts.append((0, 1 - p_zero))
        choices.append(opts)
    for combo in itertools.product(*choices):
        prob = math.prod((p for _, p in combo), start=Fraction(1))
        total += prob * value(tuple(k for k, _ in combo))
    value.cache_clear()
    return total


@dataclass
class CostReport:
    method: str
    value: Fraction | float
    stderr: float | None = None
    runtime_ms: float = 0.0

    def to_json(self) -> dict:
        out = {
            "method": self.method,
            "value": str(self.value) if isinstance(self.value, Fraction) else self.value,
            "runtime_ms": round(self.runtime_ms, 3),
        }
        if isinstance(self.value, Fraction):
            out["decimal"] = float(self.value)
        if self.stderr is not None:
            out["stderr"] = self.stderr
        return out


def evaluate(
    s: Schedule, truth: Instance, method: str = "closed", samples: int = 10**5, seed: int = 0
) -> CostReport:
    start = time.perf_counter()
    stderr = None
    if method == "closed":
        value = expected_cost_closed_form(s, truth)
    elif method == "enum":
        value = expected_cost_enumeration(s, truth)
    elif method == "mc":
        value, stderr = monte_carlo_cost(s, truth, samples, seed)
    else:
        raise InvalidParams(f"unknown method {method!r}")
    elapsed = (time.perf_counter() - start) * 1000
    return CostReport(method, value, stderr, elapsed)
