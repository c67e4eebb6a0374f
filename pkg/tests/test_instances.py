from fractions import Fraction as F

import numpy as np
import pytest

from rgsched.closeness import is_alpha_close, minimal_alpha
from rgsched.distributions import FiniteDist
from rgsched.errors import InvalidParams
from rgsched.instances import (
    alpha_close_pair,
    load_instance,
    lower_bound_pair,
    random_instance,
    save_instance,
)


def test_lower_bound_n2():
    truth, pred = lower_bound_pair(2, F(1, 2))
    assert truth[0] == FiniteDist({F(3, 2): F(1, 2), 4: F(1, 2)})
    assert pred[0] == FiniteDist({1: F(1, 2), 4: F(1, 2)})
    assert len(truth) == len(pred) == 2


@pytest.mark.parametrize("n", [2, 5, 8])
def test_lower_bound_shape(n):
    eps = F(1, 10)
    truth, pred = lower_bound_pair(n, eps)
    for t, p in zip(truth.jobs, pred.jobs):
        assert t.atoms == ((1 + eps, 1 - F(1, n)), (F(n * n), F(1, n)))
        assert p.sizes == (1, n * n)
        assert is_alpha_close(t, p, 1 + eps)
        assert not is_alpha_close(t, p, 1 + eps / 2)


@pytest.mark.parametrize("n,eps", [(1, F(1, 10)), (3, 0), (3, 1), (3, F(-1, 2))])
def test_lower_bound_invalid(n, eps):
    with pytest.raises(InvalidParams):
        lower_bound_pair(n, eps)


def test_random_instance_invariants():
    rng = np.random.default_rng(0)
    for _ in range(200):
        inst = random_instance(4, 3, (2, 6), rng)
        assert len(inst) == 4
        for d in inst.jobs:
            assert 1 <= len(d.sizes) <= 3
            assert all(2 <= x <= 6 and (2 * x).denominator == 1 for x in d.sizes)
            assert sum(d.probs) == 1


def test_random_instance_reproducible():
    a = random_instance(3, 3, (1, 10), np.random.default_rng(42))
    b = random_instance(3, 3, (1, 10), np.random.default_rng(42))
    assert a == b


@pytest.mark.parametrize("kwargs", [dict(n=0, max_atoms=2), dict(n=2, max_atoms=0), dict(n=2, max_atoms=2, size_range=(3, 1))])
def test_random_instance_invalid(kwargs):
    with pytest.raises(InvalidParams):
        random_instance(**kwargs)


@pytest.mark.parametrize("alpha", [F(1), F(101, 100), F(3, 2), F(2)])
def test_alpha_close_pair(alpha):
    rng = np.random.default_rng(5)
    for _ in range(30):
        truth, pred = alpha_close_pair(3, alpha, rng)
        for t, p in zip(truth.jobs, pred.jobs):
            assert is_alpha_close(t, p, alpha)
            if alpha == 1:
                assert t == p
            else:
                assert minimal_alpha(t, p) <= alpha


def test_save_load(tmp_path):
    inst = random_instance(3, 3, (1, 10), np.random.default_rng(1))
    path = tmp_path / "inst.json"
    save_instance(inst, path)
    assert load_instance(path) == inst
