from schemas.cli_schema import CliInvocation
from schemas.contention_schema import ContentionSummary, RetentionEstimate, ThinningInput, ThinningResult
from schemas.experiment_schema import ExperimentResult, ExperimentRow, RealizationRecord, Scenario, SchemeGain
from schemas.link_schema import LinkRealization, SiGammaParams, StpEstimate, StpEvaluation
from schemas.network_config_schema import Decibel, NetworkConfig, RawNetworkConfig
from schemas.optimizer_schema import AssociationProblem, AssociationState, JapoResult, NewtonState
from schemas.point_set_schema import PointSet
from schemas.throughput_schema import SdtReport

__all__ = [
    "AssociationProblem",
    "AssociationState",
    "CliInvocation",
    "ContentionSummary",
    "Decibel",
    "ExperimentResult",
    "ExperimentRow",
    "JapoResult",
    "LinkRealization",
    "NetworkConfig",
    "NewtonState",
    "PointSet",
    "RawNetworkConfig",
    "RealizationRecord",
    "RetentionEstimate",
    "Scenario",
    "SchemeGain",
    "SdtReport",
    "SiGammaParams",
    "StpEstimate",
    "StpEvaluation",
    "ThinningInput",
    "ThinningResult",
]
