"""
Exception Hierarchy

Every error raised by the simulator derives from DenseWlanError so callers
(CLI, harness) can map failures to exit codes without catching bare Exception.
"""
from typing import Optional


class DenseWlanError(Exception):
    """
    Base class for all simulator errors
    """
    pass


# ============================================================================
# CONFIGURATION
# ============================================================================

class ConfigValidationError(DenseWlanError):
    """
    ConfigValidationError is raised when a configuration violates an invariant
    """

    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


class NonPositiveDensityError(ConfigValidationError):
    """Raised when a node density is zero or negative"""
    pass


class PathLossExponentError(ConfigValidationError):
    """Raised when alpha does not exceed 2"""
    pass


class AntennaCountError(ConfigValidationError):
    """Raised when an antenna count is below 1"""
    pass


class NonPositivePowerError(ConfigValidationError):
    """Raised when a power or threshold is not positive in linear units"""
    pass


class WindowAreaError(ConfigValidationError):
    """Raised when the sampling window has no area"""
    pass


class UnknownConfigKeyError(ConfigValidationError):
    """Raised when a config file or override names a key that does not exist"""
    pass


class ConfigParseError(ConfigValidationError):
    """Raised when a config value cannot be parsed"""
    pass


class UnknownScenarioError(ConfigValidationError):
    """Raised when a scenario name is not in the catalog"""
    pass


# ============================================================================
# NUMERICS
# ============================================================================

class WindowMismatchError(DenseWlanError):
    """
    WindowMismatchError is raised when superposing point sets from different windows
    """
    pass


class QuadratureError(DenseWlanError):
    """
    QuadratureError is raised when adaptive quadrature does not converge
    """
    pass


class NonFiniteObjectiveError(DenseWlanError):
    """
    NonFiniteObjectiveError is raised when the objective is NaN or infinite at a stencil point
    """

    def __init__(self, point: float, value: float):
        self.point = point
        self.value = value
        super().__init__(f"objective is not finite at {point!r}: {value!r}")


class SolverStageError(DenseWlanError):
    """
    SolverStageError wraps a sub-solver failure with the stage it came from
    """

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")


# ============================================================================
# EXPERIMENTS AND OUTPUT
# ============================================================================

class EmptyRealizationError(DenseWlanError):
    """
    EmptyRealizationError is raised when a realization has no APs or no STAs
    """
    pass


class ExperimentFailedError(DenseWlanError):
    """
    ExperimentFailedError is raised when too many realizations of an experiment fail
    """

    def __init__(self, scenario: str, failed: int, total: int, error_ids: Optional[list] = None):
        self.scenario = scenario
        self.failed = failed
        self.total = total
        self.error_ids = error_ids or []
        super().__init__(
            f"Experiment '{scenario}' failed: {failed} of {total} realizations raised errors"
        )


class ResultWriteError(DenseWlanError):
    """
    ResultWriteError is raised when a result file cannot be written
    """
    pass
