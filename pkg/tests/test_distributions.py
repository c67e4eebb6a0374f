from fractions import Fraction as F

import math

import numpy as np
import pytest
from hypothesis import given

from rgsched.distributions import (
    Exponential,
    FiniteDist,
    Instance,
    Pareto,
    as_fraction,
    conditional_survival,
    max_support,
    parametric_survival,
    sample,
    survival,
)
from rgsched.errors import ConditionOnZeroEvent, InvalidDistribution, InvalidParams

from conftest import finite_dists


class TestConstruction:
    def test_canonical_order_and_merge(self):
        d = FiniteDist([(3, "1/4"), (1, "1/4"), (3, "1/2")])
        assert d.atoms == ((F(1), F(1, 4)), (F(3), F(3, 4)))

    def test_zero_probability_rejected(self):
        with pytest.raises(InvalidDistribution):
            FiniteDist([(1, 1), (2, 0)])

    def test_mass_must_be_one(self):
        with pytest.raises(InvalidDistribution):
            FiniteDist([(1, "1/3"), (2, "1/3")])

    def test_negative_size_rejected(self):
        with pytest.raises(InvalidDistribution):
            FiniteDist([(-1, 1)])

    def test_empty_rejected(self):
        with pytest.raises(InvalidDistribution):
            FiniteDist([])

    @pytest.mark.parametrize(
        "raw, expected",
        [("3/2", F(3, 2)), ("0.1", F(1, 10)), (0.1, F(1, 10)), (4, F(4)), (F(2, 3), F(2, 3))],
    )
    def test_as_fraction(self, raw, expected):
        assert as_fraction(raw) == expected

    def test_decimal_input_is_exact(self):
        d = FiniteDist([(1, 0.1), (2, 0.2), (3, 0.7)])
        assert sum(d.probs) == 1

    def test_equality_is_canonical(self):
        assert FiniteDist([(2, "1/2"), (1, "1/2")]) == FiniteDist({1: F(1, 2), 2: F(1, 2)})

    def test_json_round_trip(self, two_point):
        assert FiniteDist.from_json(two_point.to_json()) == two_point
        inst = Instance([two_point, FiniteDist.point_mass(3)])
        assert Instance.from_json(inst.to_json()) == inst


class TestSurvival:
    def test_point_mass(self):
        d = FiniteDist.point_mass(1)
        assert survival(d, F(1, 2)) == 1
        assert survival(d, 1) == 0

    def test_lower_bound_truth_job(self):
        eps, p, big = F(1, 10), F(1, 4), 16
        d = FiniteDist([(1 + eps, 1 - p), (big, p)])
        assert survival(d, 1 + eps) == p

    def test_half_mass(self, two_point):
        assert survival(two_point, 1) == F(1, 2)

    def test_negative_x(self, two_point):
        with pytest.raises(InvalidParams):
            survival(two_point, -1)

    @given(finite_dists(allow_zero=True))
    def test_step_function_shape(self, d):
        xs = sorted({F(0), *d.sizes, *(s + F(1, 7) for s in d.sizes), *(s / 2 for s in d.sizes)})
        values = [survival(d, x) for x in xs]
        assert all(a >= b for a, b in zip(values, values[1:]))
        assert survival(d, max_support(d)) == 0
        assert survival(d, max_support(d) + 5) == 0
        # constant between consecutive atoms
        pts = [F(0), *d.sizes]
        for lo, hi in zip(pts, pts[1:]):
            assert survival(d, lo) == survival(d, (lo + hi) / 2)


class TestConditional:
    def test_only_upper_atom_survives(self, two_point):
        assert conditional_survival(two_point, F(3, 2), 1) == 1

    def test_ratio_of_tails(self):
        d = FiniteDist({1: F(1, 2), 2: F(1, 4), 3: F(1, 4)})
        # (1/4) / (1/2)
        assert conditional_survival(d, 2, 1) == F(1, 2)

    def test_same_point(self, two_point):
        assert conditional_survival(two_point, F(1, 2), F(1, 2)) == 1

    def test_zero_event(self, two_point):
        with pytest.raises(ConditionOnZeroEvent):
            conditional_survival(two_point, 3, 2)

    @given(finite_dists(), finite_dists())
    def test_product_identity(self, d, probe):
        for x in probe.sizes:
            for y in [F(0), *d.sizes[:-1]]:
                lhs = conditional_survival(d, x, y) * survival(d, y)
                assert lhs == survival(d, max(x, y))


def test_max_support():
    assert max_support(FiniteDist({1: F(1, 2), 2: F(1, 2)})) == 2
    assert max_support(FiniteDist.point_mass(F(7, 3))) == F(7, 3)
    n = 3
    assert max_support(FiniteDist([(1, 1 - F(1, n)), (n * n, F(1, n))])) == n * n


class TestSample:
    def test_point_mass(self):
        rng = np.random.default_rng(0)
        assert all(sample(FiniteDist.point_mass(3), rng) == 3 for _ in range(10))

    def test_zero_atom(self):
        assert sample(FiniteDist.point_mass(0), np.random.default_rng(1)) == 0

    def test_seed_determinism(self, two_point):
        a = sample(two_point, np.random.default_rng(5), 1000)
        b = sample(two_point, np.random.default_rng(5), 1000)
        assert np.array_equal(a, b)

    def test_frequency_binomial(self, two_point):
        n = 10**5
        draws = sample(two_point, np.random.default_rng(2024), n)
        freq = float(np.mean(draws == 1.0))
        sigma = math.sqrt(0.25 / n)
        assert abs(freq - 0.5) <= 4 * sigma


class TestParametric:
    def test_exponential_at_zero(self):
        assert parametric_survival(Exponential(1), 0) == 1

    def test_pareto_below_scale(self):
        assert parametric_survival(Pareto(2, 3), 1.5) == 1

    def test_exponential_value(self):
        assert parametric_survival(Exponential(2), 1) == pytest.approx(math.exp(-2), rel=1e-15)

    def test_pareto_tail(self):
        assert parametric_survival(Pareto(1, 2), 4) == pytest.approx(1 / 16)

    @pytest.mark.parametrize("bad", [lambda: Exponential(0), lambda: Pareto(-1, 1), lambda: Pareto(1, 0)])
    def test_parameters_positive(self, bad):
        with pytest.raises(InvalidParams):
            bad()


def test_instance_requires_jobs():
    with pytest.raises(InvalidParams):
        Instance([])
