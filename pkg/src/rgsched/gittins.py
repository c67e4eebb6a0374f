"""Gittins quanta for finite job-size distributions.

A quantum ``(j, q)`` run at attained time ``y`` processes job ``j`` for
``min(P_j - y, q)`` more time units. Its rank is the completion
probability per unit of expected processing. Each job's quanta are found
greedily: from the current offset pick the length of maximal rank, advance,
repeat until the largest support point is reached.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from .distributions import FiniteDist, Instance, Number, as_fraction
from .errors import ConditionOnZeroEvent, InvalidParams, OrderInversion

__all__ = [
    "Quantum",
    "QuantaOrder",
    "compute_quanta",
    "disjoint_prefix_starts",
    "gipp_order",
    "history_sets",
    "investment",
    "partial_investment",
    "rank",
]


def partial_investment(d: FiniteDist, q: Number, y: Number) -> Fraction:
    """E[min(P - y, q) ; P > y], i.e. the investment without conditioning."""
    q, y = as_fraction(q), as_fraction(y)
    return sum((p * min(s - y, q) for s, p in d.atoms if s > y), Fraction(0))


def investment(d: FiniteDist, q: Number, y: Number) -> Fraction:
    """Expected processing of a length-``q`` quantum started at attained time ``y``."""
    q, y = as_fraction(q), as_fraction(y)
    if q <= 0:
        raise InvalidParams("quantum length must be positive")
    tail = d.survival(y)
    if tail == 0:
        raise ConditionOnZeroEvent(f"P(P > {y}) = 0")
    return partial_investment(d, q, y) / tail


def rank(d: FiniteDist, q: Number, y: Number) -> Fraction:
    q, y = as_fraction(q), as_fraction(y)
    if q <= 0:
        raise InvalidParams("quantum length must be positive")
    tail = d.survival(y)
    if tail == 0:
        raise ConditionOnZeroEvent(f"P(P > {y}) = 0")
    # conditioning on P > y cancels between numerator and denominator
    return (tail - d.survival(y + q)) / partial_investment(d, q, y)


@dataclass(frozen=True)
class Quantum:
    job: int
    index: int
    offset: Fraction
    length: Fraction
    rank: Fraction

    @property
    def end(self) -> Fraction:
        return self.offset + self.length


def compute_quanta(d: FiniteDist, job: int = 0) -> list[Quantum]:
    """Greedy rank-maximizing quanta for one job.

    Candidate lengths are distances to the support points above the current
    offset; among equal ranks the shortest length wins.
    """
    quanta: list[Quantum] = []
    y = Fraction(0)
    top = d.sizes[-1]
    while y < top:
        best_q, best_r = None, None
        for s in d.sizes:
            if s <= y:
                continue
            r = rank(d, s - y, y)
            if best_r is None or r > best_r:
                best_q, best_r = s - y, r
        quanta.append(Quantum(job, len(quanta), y, best_q, best_r))
        y += best_q
    for prev, cur in zip(quanta, quanta[1:]):
        if cur.rank > prev.rank:
            raise OrderInversion(
                f"job {job}: rank rises from {prev.rank} to {cur.rank} at offset {cur.offset}"
            )
    return quanta


@dataclass(frozen=True)
class QuantaOrder:
    """All quanta of an instance in the global priority order."""

    quanta: tuple[Quantum, ...]

    def __len__(self) -> int:
        return len(self.quanta)

    def __iter__(self):
        return iter(self.quanta)

    def __getitem__(self, pos: int) -> Quantum:
        return self.quanta[pos]

    def position(self, job: int, index: int) -> int:
        for pos, qu in enumerate(self.quanta):
            if qu.job == job and qu.index == index:
                return pos
        raise KeyError((job, index))

    def for_job(self, job: int) -> list[Quantum]:
        return [qu for qu in self.quanta if qu.job == job]


def gipp_order(inst: Instance) -> QuantaOrder:
    """Sort every job's quanta by decreasing rank, ties to lower job then earlier quantum."""
    per_job = [compute_quanta(d, j) for j, d in enumerate(inst.jobs)]
    merged = sorted(
        (qu for quanta in per_job for qu in quanta),
        key=lambda qu: (-qu.rank, qu.job, qu.index),
    )
    next_index = [0] * len(inst)
    for qu in merged:
        if qu.index != next_index[qu.job]:
            raise OrderInversion(f"quantum {qu.index} of job {qu.job} sorted out of offset order")
        next_index[qu.job] += 1
    return QuantaOrder(tuple(merged))


def disjoint_prefix_starts(jobs: Sequence[int]) -> list[int]:
    """For each position p, the first position of the block H'(p).

    The block for the entry at ``p`` (belonging to job ``j``) is every entry
    strictly after the previous job-``j`` entry, up to and including ``p``.
    """
    last: dict[int, int] = {}
    starts = []
    for pos, j in enumerate(jobs):
        starts.append(last.get(j, -1) + 1)
        last[j] = pos
    return starts


def history_sets(order: QuantaOrder) -> dict[tuple[int, int], list[Quantum]]:
    """Map (job, quantum index) to the quanta in its disjoint prefix block H'."""
    starts = disjoint_prefix_starts([qu.job for qu in order])
    return {
        (qu.job, qu.index): list(order.quanta[starts[pos] : pos + 1])
        for pos, qu in enumerate(order)
    }
