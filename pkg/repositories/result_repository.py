"""
ResultRepository writes experiment CSVs and their JSON manifests
"""
import csv
import io
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from config.constants import CsvConfig
from models.enums import ThetaMode
from repositories.base_repository import BaseRepository, PathLike
from schemas.experiment_schema import ExperimentResult, ExperimentRow, Scenario
from services.config_service import config_content_hash
from utils.exceptions import ResultWriteError

logger = logging.getLogger(__name__)


def _format_float(value: float) -> str:
    return format(value, CsvConfig.FLOAT_FORMAT)


def format_row(row: ExperimentRow) -> List[str]:
    """CSV cells of one row; an absent stderr is an empty cell."""
    return [
        row.sweep_param,
        _format_float(row.sweep_value),
        row.scheme,
        row.metric.value,
        _format_float(row.mean),
        "" if row.stderr is None else _format_float(row.stderr),
        str(row.n),
    ]


def render_csv(result: ExperimentResult) -> str:
    """The CSV document for result: header plus one line per row, LF endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator=CsvConfig.LINE_TERMINATOR)
    writer.writerow(CsvConfig.HEADER)
    for row in result.rows:
        writer.writerow(format_row(row))
    return buffer.getvalue()


def emit_csv(result: ExperimentResult, path: PathLike) -> Path:
    """
    Write result as UTF-8 CSV

    Args:
        result: Aggregated experiment
        path: Destination file

    Returns:
        Path written

    Raises:
        ResultWriteError: On any IO failure
    """
    return ResultRepository().save(result, path)


def build_manifest(
    scenario: Scenario,
    result: ExperimentResult,
    seeds: Sequence[int],
    theta_mode: Optional[ThetaMode] = None,
) -> Dict:
    """
    Manifest of one run: scenario, theta mode, n, seeds, failures and config hash

    Holds no timestamps or error ids, so identical runs give identical bytes.
    """
    return {
        "scenario": scenario.name,
        "theta_mode": (theta_mode or result.theta_mode).value,
        "n_realizations": scenario.n_realizations,
        "base_seed": scenario.base_seed,
        "seeds": [int(s) for s in seeds],
        "failures": result.failures,
        "sweep_param": scenario.sweep_param.value,
        "sweep_values": list(scenario.sweep_values),
        "schemes": [s.value for s in scenario.schemes],
        "variants": scenario.variants,
        "config": scenario.base.describe(),
        "config_hash": config_content_hash(scenario.base),
    }


class ResultRepository(BaseRepository):
    """Experiment outputs under one output directory."""

    def save(self, item: ExperimentResult, path: PathLike) -> Path:
        target = self.ensure_parent(self.resolve(path))
        try:
            with open(target, "w", encoding="utf-8", newline="") as handle:
                handle.write(render_csv(item))
        except OSError as e:
            raise ResultWriteError(f"cannot write {target}: {e}") from e
        logger.info(f"Wrote {len(item.rows)} rows to {target}")
        return target

    def load(self, path: PathLike) -> List[Dict[str, str]]:
        """Raw CSV rows keyed by header."""
        with open(self.resolve(path), encoding="utf-8", newline="") as handle:
            return list(csv.DictReader(handle))

    def save_manifest(self, manifest: Dict, path: PathLike) -> Path:
        target = self.ensure_parent(self.resolve(path))
        try:
            target.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        except OSError as e:
            raise ResultWriteError(f"cannot write {target}: {e}") from e
        return target

    def save_run(self, scenario: Scenario, result: ExperimentResult, seeds: Sequence[int]) -> Path:
        """Write result.csv and manifest.json into the repository root."""
        self.save(result, CsvConfig.RESULT_FILE)
        self.save_manifest(build_manifest(scenario, result, seeds), CsvConfig.MANIFEST_FILE)
        return self.root
