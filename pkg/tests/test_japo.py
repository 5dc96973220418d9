"""
Tests for the joint association and PCS threshold procedure
"""
import numpy as np
import pytest

from services import japo_service
from services.association_service import build_problem, solve_association
from services.japo_service import japo
from utils.exceptions import EmptyRealizationError, SolverStageError


@pytest.mark.unit
class TestJapo:
    """Association stage followed by the Newton threshold stage"""

    def test_result_fields(self, dense_cfg, fixed_problem):
        result = japo(dense_cfg, fixed_problem)
        assert result.xi_star.shape == (2, 5)
        assert 0 < result.gamma_star <= result.newton.bound
        assert result.sdt_star == pytest.approx(np.exp(result.log_sdt_star))
        assert result.association.converged

    def test_association_stage_is_the_dual_solution(self, dense_cfg, fixed_problem):
        result = japo(dense_cfg, fixed_problem)
        assert np.array_equal(result.xi_star, solve_association(fixed_problem).xi)

    def test_fixed_threshold_value_is_association_objective(self, dense_cfg, fixed_problem):
        result = japo(dense_cfg, fixed_problem)
        assert result.sdt_fixed == pytest.approx(result.association.objective)

    def test_threshold_search_never_loses(self, dense_cfg, fixed_problem):
        result = japo(dense_cfg, fixed_problem)
        assert result.log_sdt_star >= result.log_sdt_fixed - 1e-12
        assert result.sdt_star >= result.sdt_fixed * (1 - 1e-12)

    def test_stage_timings(self, dense_cfg, fixed_problem):
        stages = japo(dense_cfg, fixed_problem).stages
        assert [s.split(":")[0] for s in stages] == ["association", "pcs-newton"]
        assert all(s.endswith("s") for s in stages)

    def test_samples_instance_from_seed(self, dense_cfg):
        first = japo(dense_cfg)
        second = japo(dense_cfg)
        assert first.gamma_star == second.gamma_star
        assert np.array_equal(first.xi_star, second.xi_star)

    def test_half_duplex(self, dense_cfg, fixed_aps, fixed_stas):
        problem = build_problem(dense_cfg, fixed_aps, fixed_stas, half_duplex=True)
        result = japo(dense_cfg, problem, half_duplex=True)
        assert result.sdt_star > 0
        assert result.log_sdt_star >= result.log_sdt_fixed - 1e-12


@pytest.mark.unit
class TestJapoErrors:
    """Failures carry the stage they came from"""

    def test_empty_realization_wrapped(self, dense_cfg):
        tiny = dense_cfg.with_overrides(lambda_a=1e-9, window=(0.1, 0.1))
        with pytest.raises(SolverStageError) as excinfo:
            japo(tiny)
        assert excinfo.value.stage == "association"
        assert isinstance(excinfo.value.cause, EmptyRealizationError)

    def test_newton_failure_wrapped(self, dense_cfg, fixed_problem, monkeypatch):
        def broken(*args, **kwargs):
            raise RuntimeError("stencil blew up")

        monkeypatch.setattr(japo_service, "newton_pcs", broken)
        with pytest.raises(SolverStageError) as excinfo:
            japo(dense_cfg, fixed_problem)
        assert excinfo.value.stage == "pcs-newton"
        assert "stencil blew up" in str(excinfo.value)
