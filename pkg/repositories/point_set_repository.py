"""
PointSetRepository dumps and loads node locations as `x,y` CSV
"""
import csv
from pathlib import Path
from typing import Tuple

import numpy as np

from config.constants import CsvConfig
from repositories.base_repository import BaseRepository, PathLike
from schemas.point_set_schema import PointSet
from utils.exceptions import ResultWriteError


class PointSetRepository(BaseRepository):
    """One point per row under an `x,y` header."""

    def save(self, item: PointSet, path: PathLike) -> Path:
        target = self.ensure_parent(self.resolve(path))
        try:
            with open(target, "w", encoding="utf-8", newline="") as handle:
                writer = csv.writer(handle, lineterminator=CsvConfig.LINE_TERMINATOR)
                writer.writerow(("x", "y"))
                for x, y in item.points:
                    writer.writerow((format(x, CsvConfig.FLOAT_FORMAT), format(y, CsvConfig.FLOAT_FORMAT)))
        except OSError as e:
            raise ResultWriteError(f"cannot write point set {target}: {e}") from e
        return target

    def load(self, path: PathLike, window: Tuple[float, float] = (1.0, 1.0), density: float = 0.0) -> PointSet:
        """Coordinates come from the file; window and density are supplied by the caller."""
        target = self.resolve(path)
        with open(target, encoding="utf-8", newline="") as handle:
            rows = [(float(row["x"]), float(row["y"])) for row in csv.DictReader(handle)]
        return PointSet(points=np.array(rows, dtype=float).reshape(-1, 2), density=density, window=window)
