"""
Centralized Enums Module

Contains all shared enumeration types used across services and schemas.
Values are strings because they are written to CSV and JSON as-is.
"""
from enum import Enum


class Direction(Enum):
    """Link direction of a transmission"""
    UL = "UL"
    DL = "DL"
    FD = "FD"


class SdtMode(Enum):
    """Throughput evaluation mode"""
    HD_UL = "HD_UL"
    HD_DL = "HD_DL"
    FD = "FD"
    SSF_FD = "SSF_FD"


class Scheme(Enum):
    """Association / PCS threshold schemes compared by the harness"""
    SSF = "SSF"
    FD_ASSOC_FIXED_PCS = "FD_ASSOC_FIXED_PCS"
    JAPO = "JAPO"
    HD_JAPO = "HD_JAPO"


class MetricKind(Enum):
    """Averaged metric"""
    CAP = "CAP"
    STP = "STP"
    SDT = "SDT"


class ThetaMode(Enum):
    """How the contention weight Theta is computed"""
    NUMERIC = "numeric"
    ERF = "erf"


class SweepParameter(Enum):
    """Parameters a scenario may sweep"""
    LAMBDA_S = "lambda_s"
    GAMMA = "gamma"
    PCS = "pcs"
    ANTENNAS = "antennas"


class SearchSpace(Enum):
    """Coordinates of the PCS threshold Newton search"""
    LINEAR = "linear"
    LOG = "log"
