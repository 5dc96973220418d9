"""
Entry point of the densewlan command line.

Usage:
    python main.py sweep --scenario rate_vs_sinr --fast
    python main.py validate --config base.cfg
"""
import logging
import sys

from config.logging_config import setup_logging

# Setup centralized logging FIRST
setup_logging()
logger = logging.getLogger(__name__)

from controllers.cli_controller import parse_and_dispatch  # noqa: E402


def main() -> int:
    """Dispatch sys.argv and return the exit code."""
    return parse_and_dispatch(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
