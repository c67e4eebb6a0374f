"""Fixed-quanta schedules (GIPP and Robust Gittins) and their execution."""

from __future__ import annotations

import hashlib
import json
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .distributions import Instance, Number, as_fraction
from .errors import IncompleteSchedule, InvalidAlpha, InvalidParams
from .gittins import gipp_order

__all__ = [
    "CompletionResult",
    "Entry",
    "Schedule",
    "build_gipp_schedule",
    "build_rg_schedule",
    "execute",
    "execute_batch",
    "instance_hash",
]


def instance_hash(inst: Instance) -> str:
    blob = json.dumps(inst.to_json(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class Entry:
    job: int
    offset: Fraction
    length: Fraction


@dataclass(frozen=True)
class Schedule:
    """Ordered quanta; entry ``(j, y, q)`` runs job j for up to q more units."""

    entries: tuple[Entry, ...]
    n_jobs: int
    policy: str = "custom"
    source: str = ""

    def __post_init__(self):
        attained = [Fraction(0)] * self.n_jobs
        for e in self.entries:
            if not 0 <= e.job < self.n_jobs:
                raise InvalidParams(f"entry for unknown job {e.job}")
            if e.length <= 0:
                raise InvalidParams("entry lengths must be positive")
            if e.offset != attained[e.job]:
                raise InvalidParams(
                    f"job {e.job}: offset {e.offset} != running total {attained[e.job]}"
                )
            attained[e.job] += e.length

    @classmethod
    def from_lengths(cls, pairs: Sequence[tuple[int, Number]], n_jobs: int, policy: str = "custom", source: str = "") -> Schedule:
        """Build a schedule from (job, length) pairs, filling in offsets."""
        attained = [Fraction(0)] * n_jobs
        entries = []
        for job, length in pairs:
            q = as_fraction(length)
            entries.append(Entry(job, attained[job], q))
            attained[job] += q
        return cls(tuple(entries), n_jobs, policy, source)

    @property
    def jobs(self) -> list[int]:
        return [e.job for e in self.entries]

    def job_totals(self) -> list[Fraction]:
        totals = [Fraction(0)] * self.n_jobs
        for e in self.entries:
            totals[e.job] += e.length
        return totals

    def to_json(self) -> dict:
        return {
            "policy": self.policy,
            "source": self.source,
            "n_jobs": self.n_jobs,
            "entries": [[e.job, str(e.offset), str(e.length)] for e in self.entries],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> Schedule:
        entries = tuple(Entry(int(j), as_fraction(y), as_fraction(q)) for j, y, q in obj["entries"])
        return cls(entries, int(obj["n_jobs"]), obj.get("policy", "custom"), obj.get("source", ""))


def build_gipp_schedule(inst: Instance) -> Schedule:
    order = gipp_order(inst)
    entries = tuple(Entry(qu.job, qu.offset, qu.length) for qu in order)
    return Schedule(entries, len(inst), "GIPP", instance_hash(inst))


def build_rg_schedule(predicted: Instance, alpha: Number) -> Schedule:
    """GIPP order of the prediction with every quantum stretched by ``alpha``."""
    a = as_fraction(alpha)
    if a < 1:
        raise InvalidAlpha(f"alpha must be >= 1, got {a}")
    base = build_gipp_schedule(predicted)
    return Schedule.from_lengths(
        [(e.job, e.length * a) for e in base.entries],
        base.n_jobs,
        f"RG({a})",
        base.source,
    )


@dataclass(frozen=True)
class CompletionResult:
    completion: tuple[Fraction, ...]
    total: Fraction = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "total", sum(self.completion, Fraction(0)))


def execute(s: Schedule, realized: Sequence[Number], mode: str = "strict") -> CompletionResult:
    """Run ``s`` against realized job sizes.

    In ``fallback`` mode jobs left unfinished after the last entry are run
    to completion in index order; ``strict`` raises instead.
    """
    if mode not in ("strict", "fallback"):
        raise ValueError(f"unknown mode {mode!r}")
    sizes = [as_fraction(p) for p in realized]
    if len(sizes) != s.n_jobs:
        raise InvalidParams(f"expected {s.n_jobs} realized sizes, got {len(sizes)}")
    if any(p < 0 for p in sizes):
        raise InvalidParams("realized sizes must be non-negative")
    attained = [Fraction(0)] * s.n_jobs
    # a zero-size job is finished before anything runs
    completion: list[Fraction | None] = [Fraction(0) if p == 0 else None for p in sizes]
    t = Fraction(0)
    for e in s.entries:
        j = e.job
        if completion[j] is not None:
            continue
        run = min(sizes[j] - attained[j], e.length)
        t += run
        attained[j] += run
        if attained[j] == sizes[j]:
            completion[j] = t
    unfinished = [j for j, c in enumerate(completion) if c is None]
    if unfinished:
        if mode == "strict":
            raise IncompleteSchedule(f"jobs {unfinished} unfinished after the last entry")
        for j in unfinished:
            t += sizes[j] - attained[j]
            completion[j] = t
    return CompletionResult(tuple(completion))


def execute_batch(s: Schedule, sizes: np.ndarray) -> np.ndarray:
    """Float-mode execution over many realizations at once.

    ``sizes`` has shape (samples, n_jobs); returns the total completion time
    per sample. Raises IncompleteSchedule if any sample leaves a job unfinished.
    """
    sizes = np.asarray(sizes, dtype=float)
    m, n = sizes.shape
    if n != s.n_jobs:
        raise InvalidParams(f"expected {s.n_jobs} columns, got {n}")
    attained = np.zeros((m, n))
    done = sizes <= 0
    completion = np.zeros((m, n))
    t = np.zeros(m)
    for e in s.entries:
        j, q = e.job, float(e.length)
        active = ~done[:, j]
        remaining = sizes[:, j] - attained[:, j]
        finishing = active & (remaining <= q)
        run = np.where(active, np.minimum(remaining, q), 0.0)
        t += run
        attained[:, j] += run
        completion[finishing, j] = t[finishing]
        done[:, j] |= finishing
    if not done.all():
        raise IncompleteSchedule(f"{int((~done).any(axis=1).sum())} samples left jobs unfinished")
    return completion.sum(axis=1)
