"""Unit tests for repository layer."""
import json
import math

import numpy as np
import pytest

from config.constants import CsvConfig
from models.enums import MetricKind, Scheme, SweepParameter, ThetaMode
from repositories.config_repository import ConfigRepository
from repositories.point_set_repository import PointSetRepository
from repositories.result_repository import (
    ResultRepository,
    build_manifest,
    emit_csv,
    format_row,
    render_csv,
)
from schemas.experiment_schema import ExperimentResult, ExperimentRow, Scenario
from schemas.point_set_schema import PointSet
from services.config_service import build_config, config_content_hash
from utils.exceptions import ConfigParseError

HEADER_LINE = "sweep_param,sweep_value,scheme,metric,mean,stderr,n\n"


# ============================================================================
# FIXTURES
# ============================================================================

@pytest.fixture
def result():
    rows = (
        ExperimentRow(sweep_param="gamma", sweep_value=-10.0, scheme="JAPO|M=N=2", metric=MetricKind.SDT,
                      mean=0.1 + 0.2, stderr=1 / 3, n=10),
        ExperimentRow(sweep_param="gamma", sweep_value=25.0, scheme="SSF|M=N=8", metric=MetricKind.SDT,
                      mean=2.5e-17, stderr=None, n=1),
    )
    return ExperimentResult(scenario="rate_vs_sinr_antennas", rows=rows, n_realizations=10, base_seed=3)


@pytest.fixture
def scenario(dense_cfg):
    return Scenario(
        name="rate_vs_sinr_antennas",
        base=dense_cfg,
        sweep_param=SweepParameter.GAMMA,
        sweep_values=(-10.0, 25.0),
        schemes=(Scheme.SSF, Scheme.JAPO),
        variants={"M=N=2": {"antennas": 2}, "M=N=8": {"antennas": 8}},
        n_realizations=10,
        base_seed=3,
    )


# ============================================================================
# RESULT CSV
# ============================================================================

@pytest.mark.unit
class TestResultCsv:
    """CSV column contract"""

    def test_header_only_for_empty_result(self):
        assert render_csv(ExperimentResult(scenario="empty")) == HEADER_LINE

    def test_header_matches_contract(self):
        assert HEADER_LINE.strip().split(",") == list(CsvConfig.HEADER)

    def test_floats_round_trip(self, result):
        cells = format_row(result.rows[0])
        assert float(cells[4]) == 0.1 + 0.2
        assert float(cells[5]) == 1 / 3

    def test_missing_stderr_is_empty_cell(self, result):
        assert format_row(result.rows[1])[5] == ""

    def test_scheme_label_with_variant(self, result):
        line = render_csv(result).splitlines()[1]
        assert line.startswith("gamma,-10,JAPO|M=N=2,SDT,")
        assert line.endswith(",10")

    def test_lf_line_endings(self, result, tmp_out):
        path = emit_csv(result, tmp_out / "result.csv")
        data = path.read_bytes()
        assert b"\r\n" not in data
        assert data.count(b"\n") == 3

    def test_rerun_is_byte_identical(self, result, tmp_out):
        first = emit_csv(result, tmp_out / "a.csv").read_bytes()
        second = emit_csv(result, tmp_out / "b.csv").read_bytes()
        assert first == second

    def test_load_back(self, result, tmp_out):
        repo = ResultRepository(tmp_out)
        repo.save(result, "nested/result.csv")
        rows = repo.load("nested/result.csv")
        assert len(rows) == 2
        assert rows[1]["stderr"] == ""
        assert float(rows[1]["mean"]) == 2.5e-17
        assert rows[0]["n"] == "10"


# ============================================================================
# MANIFEST
# ============================================================================

@pytest.mark.unit
class TestManifest:
    """Run manifest alongside the CSV"""

    def test_fields(self, scenario, result):
        manifest = build_manifest(scenario, result, [11, 12])
        assert manifest["scenario"] == "rate_vs_sinr_antennas"
        assert manifest["theta_mode"] == ThetaMode.NUMERIC.value
        assert manifest["seeds"] == [11, 12]
        assert manifest["schemes"] == ["SSF", "JAPO"]
        assert manifest["config_hash"] == config_content_hash(scenario.base)

    def test_no_timestamps(self, scenario, result):
        manifest = build_manifest(scenario, result, [1])
        assert not any("time" in key or "date" in key for key in manifest)

    def test_theta_mode_override(self, scenario, result):
        assert build_manifest(scenario, result, [1], ThetaMode.ERF)["theta_mode"] == ThetaMode.ERF.value

    def test_save_run(self, scenario, result, tmp_out):
        root = ResultRepository(tmp_out).save_run(scenario, result, [5, 6])
        assert (root / CsvConfig.RESULT_FILE).read_text(encoding="utf-8").startswith(HEADER_LINE)
        manifest = json.loads((root / CsvConfig.MANIFEST_FILE).read_text(encoding="utf-8"))
        assert manifest["seeds"] == [5, 6]
        assert manifest["variants"]["M=N=8"] == {"antennas": 8}

    def test_save_run_is_byte_identical(self, scenario, result, tmp_path):
        first = ResultRepository(tmp_path / "a").save_run(scenario, result, [5])
        second = ResultRepository(tmp_path / "b").save_run(scenario, result, [5])
        for name in (CsvConfig.RESULT_FILE, CsvConfig.MANIFEST_FILE):
            assert (first / name).read_bytes() == (second / name).read_bytes()


# ============================================================================
# CONFIG AND POINT SET FILES
# ============================================================================

@pytest.mark.unit
class TestConfigRepository:
    """dotenv-syntax config files"""

    def test_load(self, tmp_path):
        path = tmp_path / "net.env"
        path.write_text("# dense\nlambda_s=0.9\npcs=-20\nwindow=4,4\n", encoding="utf-8")
        values = ConfigRepository().load(path)
        assert values == {"lambda_s": "0.9", "pcs": "-20", "window": "4,4"}

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigParseError) as excinfo:
            ConfigRepository().load(tmp_path / "missing.env")
        assert excinfo.value.field == "config"

    def test_save_then_build_reproduces(self, dense_cfg, tmp_path):
        repo = ConfigRepository(tmp_path)
        repo.save(dense_cfg, "saved.env")
        rebuilt = build_config(file_values=repo.load("saved.env"))
        assert rebuilt.window == dense_cfg.window
        assert rebuilt.m_tx == dense_cfg.m_tx
        for field in ("lambda_s", "lambda_a", "p_tx", "noise", "gamma", "pcs", "si_atten"):
            assert getattr(rebuilt, field) == pytest.approx(getattr(dense_cfg, field), rel=1e-12)


@pytest.mark.unit
class TestPointSetRepository:
    """x,y CSV dumps"""

    def test_round_trip(self, tmp_out):
        points = PointSet(points=[[0.1, 2.0 / 3.0], [math.pi, 1e-9]], density=0.5, window=(4.0, 4.0))
        repo = PointSetRepository(tmp_out)
        repo.save(points, "aps.csv")
        loaded = repo.load("aps.csv", window=(4.0, 4.0), density=0.5)
        assert np.array_equal(loaded.points, points.points)
        assert (tmp_out / "aps.csv").read_text(encoding="utf-8").splitlines()[0] == "x,y"

    def test_empty_set(self, tmp_out):
        repo = PointSetRepository(tmp_out)
        repo.save(PointSet(points=np.empty((0, 2)), density=0.5, window=(4.0, 4.0)), "none.csv")
        assert repo.load("none.csv").points.shape == (0, 2)
