from fractions import Fraction

import numpy as np
import pytest
from hypothesis import strategies as st

from rgsched.distributions import FiniteDist


def rand_dist(rng, max_atoms=3, max_size=12, den=2, allow_zero=False):
    """Random finite distribution with sizes on a 1/den grid."""
    k = int(rng.integers(1, max_atoms + 1))
    lo = 0 if allow_zero else 1
    ticks = rng.choice(np.arange(lo, max_size * den + 1), size=k, replace=False)
    weights = rng.integers(1, 8, size=k)
    total = int(weights.sum())
    return FiniteDist((Fraction(int(t), den), Fraction(int(w), total)) for t, w in zip(ticks, weights))


@st.composite
def finite_dists(draw, max_atoms=4, max_size=20, allow_zero=False):
    lo = 0 if allow_zero else 1
    sizes = draw(
        st.lists(
            st.fractions(min_value=lo, max_value=max_size, max_denominator=4),
            min_size=1,
            max_size=max_atoms,
            unique=True,
        )
    )
    weights = draw(st.lists(st.integers(1, 9), min_size=len(sizes), max_size=len(sizes)))
    total = sum(weights)
    return FiniteDist((s, Fraction(w, total)) for s, w in zip(sizes, weights))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def two_point():
    return FiniteDist({1: Fraction(1, 2), 2: Fraction(1, 2)})


def random_covering_schedule(inst, rng, max_pieces=3):
    """Random interleaving of per-job pieces whose lengths reach each job's max size."""
    from rgsched.policies import Schedule

    pieces = []
    for j, d in enumerate(inst.jobs):
        top = d.sizes[-1]
        if top == 0:
            continue
        k = int(rng.integers(1, max_pieces + 1))
        cuts = sorted(Fraction(int(c), 8) for c in rng.integers(1, 8 * top * 3 // 2 + 1, size=k))
        total = max(cuts[-1], top)
        bounds = [Fraction(0), *cuts[:-1], total]
        lengths = [b - a for a, b in zip(bounds, bounds[1:]) if b > a]
        pieces.append([(j, q) for q in lengths])
    order = []
    while any(pieces):
        live = [p for p in pieces if p]
        pick = live[int(rng.integers(len(live)))]
        order.append(pick.pop(0))
    return Schedule.from_lengths(order, len(inst))
