"""Multiplicative tail closeness between job-size distributions.

Two distributions D, D' are alpha-close when, for every x >= 0,

    P(P > alpha*x) / alpha  <=  P(P' > x)  <=  alpha * P(P > x/alpha).

For finite distributions all three sides are right-continuous step
functions, so checking the left endpoint of every constant segment is
exhaustive.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from fractions import Fraction

import numpy as np

from .distributions import (
    Exponential,
    FiniteDist,
    Number,
    ParametricDist,
    Pareto,
    as_fraction,
)
from .errors import (
    GenerationFailed,
    InvalidAlpha,
    MassNotNormalized,
    NotCloseForAnyAlpha,
    RGSchedError,
    ShiftOutOfRange,
    UnsupportedPair,
)

__all__ = [
    "NOT_CLOSE",
    "breakpoints",
    "combined_shift",
    "is_alpha_close",
    "minimal_alpha",
    "parametric_alpha",
    "random_perturbation",
]

# Returned by parametric_alpha when no finite alpha works.
NOT_CLOSE = math.inf

DEFAULT_ALPHA_CAP = Fraction(2) ** 64


def _check_alpha(alpha: Number) -> Fraction:
    a = as_fraction(alpha)
    if a < 1:
        raise InvalidAlpha(f"alpha must be >= 1, got {a}")
    return a


def breakpoints(d: FiniteDist, d2: FiniteDist, alpha: Fraction) -> list[Fraction]:
    points = {Fraction(0)}
    points.update(d2.sizes)
    for s in d.sizes:
        points.add(s / alpha)
        points.add(s * alpha)
    return sorted(points)


def is_alpha_close(d: FiniteDist, d2: FiniteDist, alpha: Number) -> bool:
    """Exact alpha-closeness test for two finite distributions."""
    a = _check_alpha(alpha)
    for x in breakpoints(d, d2, a):
        mid = d2.survival(x)
        if d.survival(a * x) > a * mid:
            return False
        if mid > a * d.survival(x / a):
            return False
    return True


def _initial_upper(d: FiniteDist, d2: FiniteDist) -> Fraction:
    bound = Fraction(2)
    pos = [s for s in d.sizes if s > 0], [s for s in d2.sizes if s > 0]
    if pos[0] and pos[1]:
        bound = max(bound, pos[0][-1] / pos[1][0], pos[1][-1] / pos[0][0])
    for dist in (d, d2):
        tails = [dist.survival(s) for s in (Fraction(0), *dist.sizes)]
        positive = [t for t in tails if t > 0]
        if positive:
            bound = max(bound, 1 / min(positive))
    return bound


def minimal_alpha(
    d: FiniteDist,
    d2: FiniteDist,
    tol: float = 1e-6,
    cap: Number = DEFAULT_ALPHA_CAP,
) -> Fraction:
    """Smallest alpha (to within ``tol``) for which ``d`` and ``d2`` are close.

    Bisection is valid because closeness is monotone in alpha. The value
    returned is always feasible and at most ``tol`` above the true minimum.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if d == d2:
        return Fraction(1)
    cap = as_fraction(cap)
    hi = _initial_upper(d, d2)
    while not is_alpha_close(d, d2, hi):
        hi *= 2
        if hi > cap:
            raise NotCloseForAnyAlpha(f"no alpha up to {float(cap):g} works")
    lo = Fraction(1)
    tol_q = as_fraction(tol)
    while hi - lo > tol_q:
        mid = (lo + hi) / 2
        if is_alpha_close(d, d2, mid):
            hi = mid
        else:
            lo = mid
    return hi


def parametric_alpha(a: ParametricDist, b: ParametricDist) -> float:
    """Closeness parameter implied by the parameters of two parametric laws.

    Returns ``NOT_CLOSE`` (infinity) for Pareto laws with different shapes.
    For exponentials the value is the known upper bound max/min of the rates.
    """
    if isinstance(a, Exponential) and isinstance(b, Exponential):
        return max(a.rate, b.rate) / min(a.rate, b.rate)
    if isinstance(a, Pareto) and isinstance(b, Pareto):
        if a.shape != b.shape:
            return NOT_CLOSE
        return max(a.scale, b.scale) / min(a.scale, b.scale)
    raise UnsupportedPair(f"cannot compare {type(a).__name__} with {type(b).__name__}")


def combined_shift(
    d: FiniteDist,
    replacements: Sequence[Sequence[tuple[Number, Number]]],
    alpha: Number,
) -> FiniteDist:
    """Replace each atom of ``d`` by a cluster of nearby atoms.

    ``replacements[i]`` lists the (size, prob) pairs standing in for the
    i-th atom of ``d``. Every new size must lie within a factor ``alpha``
    of the original and each cluster's mass within a factor ``alpha`` of
    the original atom's mass.
    """
    a = _check_alpha(alpha)
    if len(replacements) != len(d):
        raise ShiftOutOfRange(f"expected {len(d)} replacement groups, got {len(replacements)}")
    new_atoms: list[tuple[Fraction, Fraction]] = []
    for (s, p), group in zip(d.atoms, replacements):
        if not group:
            raise ShiftOutOfRange(f"atom {s} has no replacement")
        mass = Fraction(0)
        for size, prob in group:
            s2, p2 = as_fraction(size), as_fraction(prob)
            if not s / a <= s2 <= s * a:
                raise ShiftOutOfRange(f"size {s2} not within [{s / a}, {s * a}]")
            mass += p2
            new_atoms.append((s2, p2))
        if not p / a <= mass <= p * a:
            raise ShiftOutOfRange(f"mass {mass} for atom {s} not within [{p / a}, {p * a}]")
    total = sum((p for _, p in new_atoms), Fraction(0))
    if total != 1:
        raise MassNotNormalized(f"shifted mass sums to {total}")
    out = FiniteDist(new_atoms)
    if not is_alpha_close(d, out, a):
        raise RGSchedError("combined shift produced a pair that is not alpha-close")
    return out


def _log_uniform_factor(rng: np.random.Generator, half_log: float, max_den: int) -> Fraction:
    f = math.exp(rng.uniform(-half_log, half_log))
    return Fraction(f).limit_denominator(max_den)


def random_perturbation(
    d: FiniteDist,
    alpha: Number,
    rng: np.random.Generator,
    max_tries: int = 100,
    max_den: int = 1000,
) -> FiniteDist:
    """Random alpha-close neighbour of ``d`` via a sqrt(alpha) size and weight jitter.

    Candidates are accepted only after an exact closeness check.
    """
    a = _check_alpha(alpha)
    if a == 1:
        return d
    half_log = 0.5 * math.log(float(a))
    for _ in range(max_tries):
        sizes = [s * _log_uniform_factor(rng, half_log, max_den) for s in d.sizes]
        weights = [p * _log_uniform_factor(rng, half_log, max_den) for p in d.probs]
        total = sum(weights, Fraction(0))
        candidate = FiniteDist([(s, w / total) for s, w in zip(sizes, weights)])
        if is_alpha_close(d, candidate, a):
            return candidate
    raise GenerationFailed(f"no alpha-close perturbation found in {max_tries} tries")
