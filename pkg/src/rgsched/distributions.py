"""Finite-support job-size distributions and the two parametric tails.

Sizes and probabilities are stored as :class:`fractions.Fraction` so that
every downstream quantity (ranks, costs, closeness checks) is exact.
Floats are accepted on input and converted through their shortest decimal
representation, so ``0.1`` becomes ``1/10`` rather than its binary value.
"""

from __future__ import annotations

import bisect
import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

import numpy as np

from .errors import ConditionOnZeroEvent, InvalidDistribution, InvalidParams

Number = Union[int, float, str, Fraction]

__all__ = [
    "Exponential",
    "FiniteDist",
    "Instance",
    "Pareto",
    "ParametricDist",
    "as_fraction",
    "conditional_survival",
    "max_support",
    "parametric_survival",
    "sample",
    "survival",
]


def as_fraction(value: Number) -> Fraction:
    """Convert ``value`` to an exact fraction.

    Strings may be decimals (``"0.25"``) or ratios (``"3/2"``).
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InvalidDistribution(f"non-finite value {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidDistribution(f"cannot parse {value!r} as a rational") from exc
    raise TypeError(f"unsupported numeric type {type(value).__name__}")


class FiniteDist:
    """A probability distribution over finitely many non-negative sizes.

    Construction canonicalizes: duplicate sizes are merged, atoms are
    sorted by size. Zero-probability atoms are rejected because they would
    introduce spurious quantum boundaries.

    >>> d = FiniteDist([("3/2", "1/2"), (4, "1/2")])
    >>> d.sizes
    (Fraction(3, 2), Fraction(4, 1))
    """

    __slots__ = ("_sizes", "_probs", "_tails", "_hash")

    def __init__(self, atoms: Iterable[tuple[Number, Number]] | Mapping[Number, Number]):
        pairs = atoms.items() if isinstance(atoms, Mapping) else atoms
        merged: dict[Fraction, Fraction] = {}
        for size, prob in pairs:
            s, p = as_fraction(size), as_fraction(prob)
            if s < 0:
                raise InvalidDistribution(f"negative size {s}")
            if p <= 0 or p > 1:
                raise InvalidDistribution(f"probability {p} outside (0, 1]")
            merged[s] = merged.get(s, Fraction(0)) + p
        if not merged:
            raise InvalidDistribution("a distribution needs at least one atom")
        total = sum(merged.values(), Fraction(0))
        if total != 1:
            raise InvalidDistribution(f"probabilities sum to {total}, not 1")
        sizes = tuple(sorted(merged))
        probs = tuple(merged[s] for s in sizes)
        tails = [Fraction(0)] * (len(sizes) + 1)
        for i in range(len(sizes) - 1, -1, -1):
            tails[i] = tails[i + 1] + probs[i]
        self._sizes = sizes
        self._probs = probs
        # _tails[i] = P(P >= sizes[i]); _tails[len] = 0
        self._tails = tuple(tails)
        self._hash = hash((sizes, probs))

    @classmethod
    def point_mass(cls, size: Number) -> FiniteDist:
        return cls([(size, 1)])

    @property
    def sizes(self) -> tuple[Fraction, ...]:
        return self._sizes

    @property
    def probs(self) -> tuple[Fraction, ...]:
        return self._probs

    @property
    def atoms(self) -> tuple[tuple[Fraction, Fraction], ...]:
        return tuple(zip(self._sizes, self._probs))

    def __len__(self) -> int:
        return len(self._sizes)

    def __iter__(self) -> Iterator[tuple[Fraction, Fraction]]:
        return iter(self.atoms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteDist):
            return NotImplemented
        return self._sizes == other._sizes and self._probs == other._probs

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{s}: {p}" for s, p in self.atoms)
        return f"FiniteDist({{{body}}})"

    def survival(self, x: Number) -> Fraction:
        """P(P > x)."""
        return self._tails[bisect.bisect_right(self._sizes, as_fraction(x))]

    def mean(self) -> Fraction:
        return sum((s * p for s, p in self.atoms), Fraction(0))

    def scaled(self, factor: Number) -> FiniteDist:
        c = as_fraction(factor)
        if c <= 0:
            raise InvalidParams("scale factor must be positive")
        return FiniteDist([(s * c, p) for s, p in self.atoms])

    def to_json(self) -> dict:
        return {"atoms": [[str(s), str(p)] for s, p in self.atoms]}

    @classmethod
    def from_json(cls, obj: Mapping) -> FiniteDist:
        return cls([(s, p) for s, p in obj["atoms"]])


def survival(d: FiniteDist, x: Number) -> Fraction:
    """Tail probability P(P > x); a right-continuous step function of x."""
    if as_fraction(x) < 0:
        raise InvalidParams("x must be non-negative")
    return d.survival(x)


def conditional_survival(d: FiniteDist, x: Number, y: Number) -> Fraction:
    """P(P > x | P > y)."""
    x, y = as_fraction(x), as_fraction(y)
    denom = d.survival(y)
    if denom == 0:
        raise ConditionOnZeroEvent(f"P(P > {y}) = 0")
    return d.survival(max(x, y)) / denom


def max_support(d: FiniteDist) -> Fraction:
    return d.sizes[-1]


def sample(d: FiniteDist, rng: np.random.Generator, size: int | None = None):
    """Draw from ``d`` using the caller's seeded generator.

    Returns a single Fraction when ``size`` is None, else a float array.
    """
    probs = np.array([float(p) for p in d.probs])
    probs /= probs.sum()
    idx = rng.choice(len(d.sizes), size=size, p=probs)
    if size is None:
        return d.sizes[int(idx)]
    return np.array([float(s) for s in d.sizes])[idx]


@dataclass(frozen=True)
class Exponential:
    rate: float

    def __post_init__(self):
        if not self.rate > 0:
            raise InvalidParams("exponential rate must be positive")


@dataclass(frozen=True)
class Pareto:
    scale: float
    shape: float

    def __post_init__(self):
        if not (self.scale > 0 and self.shape > 0):
            raise InvalidParams("Pareto scale and shape must be positive")


ParametricDist = Union[Exponential, Pareto]


def parametric_survival(d: ParametricDist, x: float) -> float:
    if x < 0:
        raise InvalidParams("x must be non-negative")
    if isinstance(d, Exponential):
        return math.exp(-d.rate * x)
    if isinstance(d, Pareto):
        return 1.0 if x < d.scale else (d.scale / x) ** d.shape
    raise TypeError(f"unknown parametric distribution {d!r}")


@dataclass(frozen=True)
class Instance:
    """An ordered collection of independent job-size distributions."""

    jobs: tuple[FiniteDist, ...]

    def __init__(self, jobs: Iterable[FiniteDist]):
        jobs = tuple(jobs)
        if not jobs:
            raise InvalidParams("an instance needs at least one job")
        if not all(isinstance(j, FiniteDist) for j in jobs):
            raise TypeError("instance jobs must be FiniteDist")
        object.__setattr__(self, "jobs", jobs)

    def __len__(self) -> int:
        return len(self.jobs)

    def __iter__(self) -> Iterator[FiniteDist]:
        return iter(self.jobs)

    def __getitem__(self, j: int) -> FiniteDist:
        return self.jobs[j]

    def scaled(self, factor: Number) -> Instance:
        return Instance(d.scaled(factor) for d in self.jobs)

    def support_product(self) -> int:
        return math.prod(len(d) for d in self.jobs)

    def to_json(self) -> dict:
        return {"jobs": [d.to_json() for d in self.jobs]}

    @classmethod
    def from_json(cls, obj: Mapping) -> Instance:
        return cls(FiniteDist.from_json(j) for j in obj["jobs"])
