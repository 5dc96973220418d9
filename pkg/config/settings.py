"""
Environment Settings

Reads process-level settings from the environment (and an optional .env file).
Model parameters never come from here; they come from config files and flags.
"""
import os
from dataclasses import dataclass

from dotenv import load_dotenv

from config.constants import LogConfig

load_dotenv()


@dataclass(frozen=True)
class Settings:
    """Process settings snapshot"""
    threads: int
    out_dir: str
    log_level: str
    log_dir: str


def get_settings() -> Settings:
    """
    Read settings from the environment

    Returns:
        Settings with DENSEWLAN_THREADS clamped to at least 1
    """
    try:
        threads = int(os.getenv('DENSEWLAN_THREADS', '1'))
    except ValueError:
        threads = 1
    return Settings(
        threads=max(1, threads),
        out_dir=os.getenv('DENSEWLAN_OUT_DIR', 'results'),
        log_level=os.getenv('LOG_LEVEL', LogConfig.DEFAULT_LOG_LEVEL),
        log_dir=os.getenv('LOG_DIR', 'logs'),
    )
