"""
Application Constants

Centralized configuration constants for the simulator.
Avoids magic numbers and provides single source of truth.
"""


class ModelDefaults:
    """Simulation parameters of the reference deployment (dB values as configured)"""
    LAMBDA_S = 0.5  # STAs per unit area
    LAMBDA_A = 0.3  # APs per unit area
    ALPHA = 3.4
    P_TX_DBM = 20.0  # 100 mW
    NOISE_DBM = -100.0
    GAMMA_DB = 0.0
    PCS_DBM = -70.0
    M_TX = 4
    N_RX = 2
    K_FACTOR = 1.0
    SI_ATTEN_DB = -80.0
    WINDOW_WIDTH = 20.0
    WINDOW_HEIGHT = 20.0
    SEED = 0


class QuadratureConfig:
    """Adaptive quadrature tolerances"""
    THETA_REL_TOL = 1e-8
    THETA_ABS_TOL = 0.0
    SSF_REL_TOL = 1e-9
    SSF_ABS_TOL = 1e-14
    SSF_TAIL_MASS = 1e-10  # exp(-lambda*pi*r_max^2) below this
    QUAD_LIMIT = 200
    SERIES_THRESHOLD = 1e-8  # (1 - e^-x)/x by series below this


class ThinningConfig:
    """Thinning oracle constants"""
    DEFAULT_REALIZATIONS = 10_000
    DEFAULT_WINDOW = 10.0  # side length, distance units


class AssociationConfig:
    """Dual subgradient association solver"""
    STEP0 = 1.0
    TOL = 1e-9
    MAX_ITER = 500


class NewtonConfig:
    """Truncated Newton PCS threshold search"""
    GAMMA_MIN = 1e-12  # mW
    BOUND_TOL = 1e-12
    MAX_ITER = 100
    FORCING_CAP = 0.5
    ARMIJO = 1e-4
    BACKTRACK_SHRINK = 0.5
    MIN_STEP = 2.0 ** -40
    GRAD_TOL = 1e-9  # stationarity on the log objective
    FD_REL_STEP = 1e-6
    FD_ABS_STEP = 1e-12
    FD_HESS_REL_STEP = 1e-4
    FD_LOG_STEP = 1e-4  # step in ln(Gamma) for the log search space
    FD_LOG_HESS_STEP = 1e-3
    MAX_LOG_STEP = 4.0  # cap on a single trial move in ln(Gamma)
    GRID_POINTS = 200


class HarnessConfig:
    """Monte-Carlo harness constants"""
    DEFAULT_REALIZATIONS = 10_000
    FAST_REALIZATIONS = 1_000
    MAX_FAILED_FRACTION = 0.01


class CsvConfig:
    """Result CSV contract"""
    HEADER = ("sweep_param", "sweep_value", "scheme", "metric", "mean", "stderr", "n")
    FLOAT_FORMAT = ".17g"
    LINE_TERMINATOR = "\n"
    RESULT_FILE = "result.csv"
    MANIFEST_FILE = "manifest.json"


class LogConfig:
    """Logging configuration constants"""
    MAX_LOG_SIZE_BYTES = 10 * 1024 * 1024  # 10 MB
    LOG_BACKUP_COUNT = 5
    DEFAULT_LOG_LEVEL = 'INFO'


class ErrorMessages:
    """Centralized error message templates"""
    DENSITY_NOT_POSITIVE = "density must be positive, got {value}"
    ALPHA_TOO_SMALL = "alpha must exceed 2, got {value}"
    ANTENNAS_TOO_FEW = "antenna count must be at least 1, got {value}"
    POWER_NOT_POSITIVE = "must be positive after conversion to linear, got {value}"
    WINDOW_NO_AREA = "window area must be positive, got {width} x {height}"
    UNKNOWN_KEY = "unknown configuration key '{key}'"
    BAD_VALUE = "cannot parse value {value!r}: {reason}"
    BAD_OVERRIDE = "override must look like key=value, got {value!r}"
    WINDOW_MISMATCH = "cannot superpose point sets from windows {a} and {b}"
    QUADRATURE_FAILED = "quadrature did not converge for {what}: {detail}"
    EMPTY_REALIZATION = "realization has {n_ap} APs and {n_sta} STAs"
    UNKNOWN_SCENARIO = "unknown scenario '{name}'; available: {available}"
