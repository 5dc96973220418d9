"""
Tests for instance construction, the Lagrangian and the dual association
iteration
"""
import math

import numpy as np
import pytest

from schemas.optimizer_schema import AssociationProblem
from schemas.point_set_schema import PointSet
from services.association_service import (
    association_argmax,
    association_objective,
    brute_force_association,
    build_problem,
    complete_association,
    constraint_coefficient,
    constraint_subgradients,
    initial_state,
    lagrangian,
    log_association_objective,
    pair_log_rates,
    pair_path_losses,
    round_association,
    sample_instance,
    solve_association,
    ssf_association,
    step_size,
    update_multipliers,
)
from services.contention_service import ContentionService
from utils.exceptions import EmptyRealizationError


@pytest.mark.unit
class TestInstances:
    """Sampled and fixed AP/STA instances"""

    def test_sample_instance_deterministic(self, dense_cfg):
        aps_1, stas_1 = sample_instance(dense_cfg, 21)
        aps_2, stas_2 = sample_instance(dense_cfg, 21)
        assert np.array_equal(aps_1.points, aps_2.points)
        assert np.array_equal(stas_1.points, stas_2.points)

    def test_empty_realization(self, dense_cfg):
        tiny = dense_cfg.with_overrides(lambda_a=1e-9, window=(0.1, 0.1))
        with pytest.raises(EmptyRealizationError):
            sample_instance(tiny, 0)

    def test_path_losses(self, fixed_aps, fixed_stas):
        losses = pair_path_losses(fixed_aps, fixed_stas, 3.4)
        assert losses.shape == (2, 5)
        distance = math.hypot(0.5, 0.2)
        assert losses[0, 0] == pytest.approx(distance ** -3.4)

    def test_fd_log_rates(self, dense_cfg, fixed_problem):
        contention = ContentionService()
        log_rates = pair_log_rates(dense_cfg, fixed_problem.path_loss, contention)
        assert np.all(np.isfinite(log_rates))
        # rate <= lambda~_FD * ln(1 + gamma)
        assert np.all(log_rates <= math.log(contention.fd_active_density(dense_cfg) * math.log(2.0)) + 1e-12)

    def test_hd_log_rates_bounded(self, dense_cfg, fixed_aps, fixed_stas):
        problem = build_problem(dense_cfg, fixed_aps, fixed_stas, half_duplex=True)
        lt_s, lt_a = ContentionService().hd_active_densities(dense_cfg)
        assert problem.half_duplex
        assert np.all(problem.rates <= 0.5 * (lt_s + lt_a) * math.log(2.0) * (1 + 1e-12))

    def test_problem_shape_checked(self, dense_cfg):
        with pytest.raises(ValueError):
            AssociationProblem(
                cfg=dense_cfg,
                ap_points=np.zeros((2, 2)),
                sta_points=np.zeros((3, 2)),
                path_loss=np.ones((3, 2)),
                log_rates=np.zeros((3, 2)),
            )

    def test_problem_needs_nodes(self, dense_cfg):
        with pytest.raises(ValueError):
            AssociationProblem(
                cfg=dense_cfg,
                ap_points=np.zeros((0, 2)),
                sta_points=np.zeros((3, 2)),
                path_loss=np.ones((0, 3)),
                log_rates=np.zeros((0, 3)),
            )


@pytest.mark.unit
class TestLagrangian:
    """Objective, constraints and their multipliers"""

    def test_objective_of_uniform_weights(self, fixed_problem):
        xi = np.full((2, 5), 0.5)
        expected = float(np.sum(fixed_problem.rates)) * 0.5 / 5
        assert association_objective(xi, fixed_problem) == pytest.approx(expected)

    def test_log_objective_matches(self, fixed_problem):
        xi = round_association(np.eye(2, 5) + 0.1)
        assert log_association_objective(xi, fixed_problem.log_rates) == pytest.approx(
            math.log(association_objective(xi, fixed_problem))
        )

    def test_log_objective_of_zero_weights(self, fixed_problem):
        assert log_association_objective(np.zeros((2, 5)), fixed_problem.log_rates) == -math.inf

    def test_zero_multipliers_give_objective(self, fixed_problem):
        xi = np.full((2, 5), 0.5)
        assert lagrangian(xi, 0.0, 0.0, fixed_problem) == pytest.approx(association_objective(xi, fixed_problem))

    def test_subgradients(self, fixed_problem):
        xi = round_association(fixed_problem.path_loss)
        association_gap, threshold_gap = constraint_subgradients(xi, fixed_problem)
        cfg = fixed_problem.cfg
        assert association_gap == pytest.approx(0.0)
        assert threshold_gap == pytest.approx(10 * cfg.pcs * constraint_coefficient(cfg) - 5.0)

    def test_lagrangian_terms(self, fixed_problem):
        xi = np.full((2, 5), 0.25)
        association_gap, threshold_gap = constraint_subgradients(xi, fixed_problem)
        value = lagrangian(xi, 2.0, 3.0, fixed_problem)
        expected = association_objective(xi, fixed_problem) + 2.0 * association_gap + 3.0 * threshold_gap
        assert value == pytest.approx(expected)

    def test_step_size(self):
        assert step_size(1.0, 0) == 1.0
        assert step_size(2.0, 3) == pytest.approx(1.0)

    def test_multipliers_stay_nonnegative(self, fixed_problem):
        state = initial_state(fixed_problem).model_copy(update={"xi": np.full((2, 5), 1.0)})
        delta, eta = update_multipliers(state, fixed_problem)
        assert delta == 0.0
        assert eta >= 0.0


@pytest.mark.unit
class TestSolveAssociation:
    """Dual iteration and rounding"""

    def test_initial_state_uniform(self, fixed_problem):
        state = initial_state(fixed_problem)
        assert np.allclose(state.xi, 0.5)
        assert state.delta == state.eta == 0.0

    def test_argmax_one_ap_per_sta(self, fixed_problem):
        xi = association_argmax(initial_state(fixed_problem), fixed_problem)
        assert np.array_equal(xi.sum(axis=0), np.ones(5))
        assert np.array_equal(np.argmax(xi, axis=0), np.argmax(fixed_problem.log_rates, axis=0))

    def test_large_eta_empties_every_column(self, fixed_problem):
        state = initial_state(fixed_problem).model_copy(update={"eta": 1e6})
        xi = association_argmax(state, fixed_problem)
        assert np.array_equal(xi, np.zeros((2, 5)))
        assert not np.array_equal(xi, association_argmax(initial_state(fixed_problem), fixed_problem))

    def test_delta_offsets_eta(self, fixed_problem):
        state = initial_state(fixed_problem).model_copy(update={"delta": 1e6, "eta": 1e6})
        xi = association_argmax(state, fixed_problem)
        assert np.array_equal(xi, association_argmax(initial_state(fixed_problem), fixed_problem))

    def test_eta_keeps_only_high_rate_columns(self, fixed_problem):
        coefficients = np.exp(fixed_problem.log_rates.max(axis=0)) / 5
        values = np.unique(coefficients)
        threshold = float(0.5 * (values[0] + values[1]) if values.size > 1 else 0.5 * values[0])
        state = initial_state(fixed_problem).model_copy(update={"eta": threshold})
        kept = association_argmax(state, fixed_problem).sum(axis=0)
        assert kept.tolist() == (coefficients > threshold).astype(float).tolist()

    def test_argmax_matches_enumeration_with_multipliers(self, fixed_problem):
        state = initial_state(fixed_problem).model_copy(update={"delta": 0.5, "eta": 0.2})
        best_xi, _ = brute_force_association(fixed_problem, delta=0.5, eta=0.2)
        assert np.array_equal(association_argmax(state, fixed_problem), best_xi)

    def test_completion_fills_empty_columns(self, fixed_problem):
        xi = np.zeros((2, 5))
        xi[:, 0] = [0.2, 0.6]
        completed = complete_association(xi, fixed_problem.log_rates)
        assert completed[:, 0].tolist() == pytest.approx([0.25, 0.75])
        best = np.argmax(fixed_problem.log_rates, axis=0)
        assert np.array_equal(np.argmax(completed[:, 1:], axis=0), best[1:])
        assert np.allclose(completed.sum(axis=0), 1.0)

    def test_multipliers_move_during_solve(self, fixed_problem):
        state = solve_association(fixed_problem)
        assert state.multiplier_trace[-1] != (0.0, 0.0)

    def test_converges_in_two_iterations(self, fixed_problem):
        state = solve_association(fixed_problem)
        assert state.converged
        assert state.iter == 2
        assert len(state.trace) == 3
        assert len(state.multiplier_trace) == 3

    def test_single_ap_converges_immediately(self, dense_cfg, fixed_stas):
        aps = PointSet(points=[[2.0, 2.0]], density=dense_cfg.lambda_a, window=dense_cfg.window)
        state = solve_association(build_problem(dense_cfg, aps, fixed_stas))
        assert state.converged
        assert state.iter == 1
        assert np.array_equal(state.xi, np.ones((1, 5)))

    def test_result_is_binary(self, fixed_problem):
        xi = solve_association(fixed_problem).xi
        assert set(np.unique(xi)) <= {0.0, 1.0}
        assert np.array_equal(xi.sum(axis=0), np.ones(5))

    def test_matches_exhaustive_search(self, fixed_problem):
        state = solve_association(fixed_problem)
        best_xi, best_value = brute_force_association(fixed_problem)
        assert np.array_equal(state.xi, best_xi)
        assert state.objective == pytest.approx(best_value)

    def test_objective_never_below_nearest_ap(self, fixed_problem):
        state = solve_association(fixed_problem)
        nearest = association_objective(ssf_association(fixed_problem), fixed_problem)
        assert state.objective >= nearest - 1e-15

    def test_invalid_tolerance(self, fixed_problem):
        with pytest.raises(ValueError):
            solve_association(fixed_problem, tol=0.0)

    def test_iteration_cap_flagged(self, fixed_problem):
        state = solve_association(fixed_problem, max_iter=1)
        assert not state.converged

    def test_ssf_association_is_nearest(self, fixed_problem):
        assert ssf_association(fixed_problem).argmax(axis=0).tolist() == [0, 0, 1, 1, 0]


@pytest.mark.unit
class TestBruteForce:
    """Exhaustive oracle"""

    def test_enumeration_limit(self, fixed_problem):
        with pytest.raises(ValueError):
            brute_force_association(fixed_problem, max_assignments=10)

    def test_round_association_ties_go_low(self):
        xi = round_association(np.array([[0.5, 0.2], [0.5, 0.8]]))
        assert xi.tolist() == [[1.0, 0.0], [0.0, 1.0]]
