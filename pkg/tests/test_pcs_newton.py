"""
Tests for the PCS threshold objective, finite differences and the truncated
Newton search
"""
import math

import numpy as np
import pytest

from config.constants import NewtonConfig
from models.enums import SearchSpace
from services.association_service import solve_association
from services.contention_service import fd_pcs_bound
from services.pcs_threshold_service import (
    PcsObjective,
    finite_difference_derivatives,
    forcing_term,
    grid_search_pcs,
    linear_steps,
    newton_direction,
    newton_pcs,
    sdt_derivatives,
)
from utils.exceptions import NonFiniteObjectiveError


@pytest.fixture
def xi_star(fixed_problem):
    return solve_association(fixed_problem).xi


@pytest.mark.unit
class TestFiniteDifferences:
    """Generic derivative seam"""

    def test_polynomial(self):
        grad, hess = finite_difference_derivatives(lambda x: x ** 3 - 2 * x, 1.5, 1e-4, 1e-3)
        assert grad == pytest.approx(3 * 1.5 ** 2 - 2, rel=1e-8)
        assert hess == pytest.approx(6 * 1.5, rel=1e-5)

    def test_non_finite_raises(self):
        with pytest.raises(NonFiniteObjectiveError):
            finite_difference_derivatives(lambda x: math.inf if x > 1.0 else x, 1.0, 1e-3, 1e-3)

    def test_linear_steps_keep_stencil_positive(self):
        for gamma_pcs in (1e-15, 1e-9, 1.0, 200.0):
            step, hess_step = linear_steps(gamma_pcs)
            assert 0 < 2 * step < gamma_pcs
            assert 0 < hess_step < gamma_pcs


@pytest.mark.unit
class TestNewtonDirection:
    """Inexact Newton direction and forcing term"""

    def test_forcing_term_capped(self):
        assert forcing_term(4.0) == 0.5
        assert forcing_term(0.01) == pytest.approx(0.1)

    def test_concave_curvature_accepted(self):
        direction, accepted = newton_direction(2.0, -4.0, fallback=1.0)
        assert accepted
        assert direction == pytest.approx(0.5)

    def test_convex_curvature_falls_back(self):
        direction, accepted = newton_direction(-2.0, 4.0, fallback=1.0)
        assert not accepted
        assert direction == -1.0

    def test_zero_curvature_falls_back(self):
        direction, accepted = newton_direction(3.0, 0.0, fallback=0.25)
        assert not accepted
        assert direction == 0.25


@pytest.mark.unit
class TestPcsObjective:
    """Association-weighted rate as a function of Gamma"""

    def test_bound_uses_full_weight(self, fixed_problem, xi_star):
        objective = PcsObjective(fixed_problem, xi_star)
        assert objective.bound() == pytest.approx(fd_pcs_bound(fixed_problem.cfg, 1.0))

    def test_value_at_configured_threshold(self, fixed_problem, xi_star):
        objective = PcsObjective(fixed_problem, xi_star)
        expected = float(np.sum(xi_star * fixed_problem.rates)) / fixed_problem.n_sta
        assert objective.value(fixed_problem.cfg.pcs) == pytest.approx(expected)
        assert objective.evaluations == 1

    def test_sdt_derivatives_match_log_derivatives(self, fixed_problem, xi_star):
        gamma_pcs = fixed_problem.cfg.pcs
        objective = PcsObjective(fixed_problem, xi_star)
        grad, _ = sdt_derivatives(gamma_pcs, xi_star, fixed_problem)
        log_grad, _ = finite_difference_derivatives(
            lambda u: objective.log_value(math.exp(u)), math.log(gamma_pcs), 1e-4, 1e-3
        )
        # d ln f / d ln G = G f' / f
        assert gamma_pcs * grad / objective.value(gamma_pcs) == pytest.approx(log_grad, rel=1e-3, abs=1e-6)

    def test_sdt_derivatives_need_positive_gamma(self, fixed_problem, xi_star):
        with pytest.raises(ValueError):
            sdt_derivatives(0.0, xi_star, fixed_problem)


@pytest.mark.unit
class TestNewtonPcs:
    """Truncated Newton ascent on the threshold"""

    def test_stays_feasible(self, fixed_problem, xi_star):
        state = newton_pcs(xi_star, fixed_problem)
        assert NewtonConfig.GAMMA_MIN <= state.gamma_pcs <= state.bound
        assert state.bound == pytest.approx(fd_pcs_bound(fixed_problem.cfg, 1.0))

    def test_never_worse_than_start(self, fixed_problem, xi_star):
        objective = PcsObjective(fixed_problem, xi_star)
        state = newton_pcs(xi_star, fixed_problem)
        assert state.log_objective >= objective.log_value(fixed_problem.cfg.pcs) - 1e-12
        assert state.objective == pytest.approx(math.exp(state.log_objective))

    def test_converges(self, fixed_problem, xi_star):
        state = newton_pcs(xi_star, fixed_problem)
        assert state.converged
        assert not state.hit_cap
        assert len(state.trace) >= 1

    def test_agrees_with_grid(self, fixed_problem, xi_star):
        state = newton_pcs(xi_star, fixed_problem)
        _, grid_value = grid_search_pcs(xi_star, fixed_problem)
        assert state.log_objective >= grid_value - 1e-3

    def test_trace_non_decreasing(self, fixed_problem, xi_star):
        trace = newton_pcs(xi_star, fixed_problem).trace
        assert all(b >= a - 1e-12 for a, b in zip(trace, trace[1:]))

    def test_iteration_cap(self, fixed_problem, xi_star):
        state = newton_pcs(xi_star, fixed_problem, gamma0=1e-6, max_iter=1)
        assert state.iter <= 1
        assert state.hit_cap != state.converged

    def test_start_clamped_to_bound(self, fixed_problem, xi_star):
        bound = fd_pcs_bound(fixed_problem.cfg, 1.0)
        state = newton_pcs(xi_star, fixed_problem, gamma0=10 * bound, max_iter=0)
        assert state.gamma_pcs == pytest.approx(bound)
        assert state.hit_cap

    def test_linear_search_space_never_worse(self, fixed_problem, xi_star):
        objective = PcsObjective(fixed_problem, xi_star)
        state = newton_pcs(xi_star, fixed_problem, search_space=SearchSpace.LINEAR)
        assert state.log_objective >= objective.log_value(fixed_problem.cfg.pcs) - 1e-12

    def test_no_feasible_threshold(self, fixed_problem):
        with pytest.raises(ValueError):
            newton_pcs(np.zeros((2, 5)), fixed_problem)


@pytest.mark.unit
class TestGridSearch:
    """Log-spaced grid oracle"""

    def test_grid_within_bounds(self, fixed_problem, xi_star):
        gamma_pcs, value = grid_search_pcs(xi_star, fixed_problem, n_points=20)
        assert NewtonConfig.GAMMA_MIN <= gamma_pcs <= fd_pcs_bound(fixed_problem.cfg, 1.0) * (1 + 1e-12)
        assert math.isfinite(value)
