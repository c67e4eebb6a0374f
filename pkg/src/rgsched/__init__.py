"""Gittins and Robust Gittins scheduling under distributional predictions."""

from .closeness import combined_shift, is_alpha_close, minimal_alpha, parametric_alpha, random_perturbation
from .distributions import Exponential, FiniteDist, Instance, Pareto
from .evaluation import (
    brute_force_opt,
    expected_cost_closed_form,
    expected_cost_enumeration,
    monte_carlo_cost,
)
from .gittins import compute_quanta, gipp_order, investment, rank
from .instances import alpha_close_pair, lower_bound_pair, random_instance
from .policies import Schedule, build_gipp_schedule, build_rg_schedule, execute

__version__ = "0.1.0"
