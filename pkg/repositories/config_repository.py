"""
ConfigRepository reads and writes `key=value` config files
"""
import logging
from pathlib import Path
from typing import Dict

from dotenv import dotenv_values

from repositories.base_repository import BaseRepository, PathLike
from schemas.network_config_schema import NetworkConfig
from utils.exceptions import ConfigParseError, ResultWriteError

logger = logging.getLogger(__name__)


class ConfigRepository(BaseRepository):
    """Config files in dotenv syntax, values in dB/dBm where the key says so."""

    def load(self, path: PathLike) -> Dict[str, str]:
        """
        Read a config file into raw string values

        Raises:
            ConfigParseError: If the file does not exist or is not readable
        """
        target = self.resolve(path)
        if not target.is_file():
            raise ConfigParseError("config", f"cannot read config file {target}")
        values = {key: value for key, value in dotenv_values(target).items() if value is not None}
        logger.debug(f"Loaded {len(values)} keys from {target}")
        return values

    def save(self, item: NetworkConfig, path: PathLike) -> Path:
        """Write cfg in config-file units so that load + build_config reproduces it."""
        target = self.ensure_parent(self.resolve(path))
        view = item.describe()
        width, height = view.pop("window")
        view["window_width"], view["window_height"] = width, height
        lines = [f"{key}={value!r}" if isinstance(value, float) else f"{key}={value}" for key, value in view.items()]
        try:
            target.write_text("\n".join(lines) + "\n", encoding="utf-8")
        except OSError as e:
            raise ResultWriteError(f"cannot write config file {target}: {e}") from e
        return target
