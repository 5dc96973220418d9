"""
Tests for error-id logging, stage-labelled loggers and the logging config
"""
import logging

import pytest

from config.logging_config import build_logging_config
from utils.logging_utils import (
    StageLogger,
    format_context,
    get_error_id,
    get_stage_logger,
    log_error_with_id,
    log_realization_error,
)


# ============================================================================
# FIXTURES
# ============================================================================

@pytest.fixture
def test_logger():
    """Logger with DEBUG enabled and no handlers of its own"""
    logger = logging.getLogger("densewlan.test")
    logger.setLevel(logging.DEBUG)
    logger.handlers = []
    return logger


# ============================================================================
# ERROR IDS
# ============================================================================

@pytest.mark.unit
class TestErrorIds:
    """Error id generation and context rendering"""

    def test_error_id_format(self):
        error_id = get_error_id()
        assert len(error_id) == 8
        int(error_id, 16)

    def test_error_ids_unique(self):
        assert len({get_error_id() for _ in range(100)}) == 100

    def test_context_sorted(self):
        assert format_context({"seed": 3, "index": 1, "scheme": "JAPO"}) == "index=1 scheme='JAPO' seed=3"

    def test_log_error_with_id(self, test_logger, caplog):
        with caplog.at_level(logging.DEBUG, logger="densewlan.test"):
            error_id = log_error_with_id(test_logger, "solver failed", ValueError("bad step"), {"k": 2})
        messages = [record.getMessage() for record in caplog.records]
        assert messages[0] == f"[{error_id}] solver failed: ValueError: bad step"
        assert f"[{error_id}] Context: k=2" in messages

    def test_log_without_exception(self, test_logger, caplog):
        with caplog.at_level(logging.ERROR, logger="densewlan.test"):
            error_id = log_error_with_id(test_logger, "plain")
        assert caplog.records[0].getMessage() == f"[{error_id}] plain"

    def test_realization_error(self, test_logger, caplog):
        with caplog.at_level(logging.ERROR, logger="densewlan.test"):
            error_id = log_realization_error(test_logger, "SSF", 4, 1234, RuntimeError("empty window"))
        record = caplog.records[0]
        assert record.levelno == logging.ERROR
        assert record.getMessage().startswith(f"[{error_id}] Realization 4 failed for scheme SSF (seed 1234)")


# ============================================================================
# STAGE LOGGER
# ============================================================================

@pytest.mark.unit
class TestStageLogger:
    """Stage label prefix"""

    def test_prefix(self, test_logger, caplog):
        stage_logger = StageLogger(test_logger, "association")
        with caplog.at_level(logging.INFO, logger="densewlan.test"):
            stage_logger.info("iter 3")
            stage_logger.warning("no convergence")
        assert [r.getMessage() for r in caplog.records] == ["[association] iter 3", "[association] no convergence"]

    def test_factory(self):
        stage_logger = get_stage_logger("densewlan.test", "pcs-newton")
        assert stage_logger.stage == "pcs-newton"
        assert isinstance(stage_logger, StageLogger)

    def test_level_passthrough(self, test_logger):
        test_logger.setLevel(logging.WARNING)
        stage_logger = StageLogger(test_logger, "harness")
        assert not stage_logger.isEnabledFor(logging.DEBUG)
        assert stage_logger.isEnabledFor(logging.ERROR)


# ============================================================================
# LOGGING CONFIG
# ============================================================================

@pytest.mark.unit
class TestLoggingConfig:
    """dictConfig mapping"""

    def test_file_handlers_under_log_dir(self, tmp_path):
        config = build_logging_config(str(tmp_path), "DEBUG")
        assert config["root"]["level"] == "DEBUG"
        assert config["handlers"]["file"]["filename"] == str(tmp_path / "app.log")
        assert config["handlers"]["error_file"]["level"] == "ERROR"
