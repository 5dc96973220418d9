"""
Scenario Catalog

Presets for every experiment family. Base overrides and variants are written
in config-file units (dB / dBm), the same keys accepted by --set.
"""
from typing import Dict, List, Optional

import numpy as np

from config.constants import ErrorMessages, HarnessConfig
from models.enums import MetricKind, Scheme, SweepParameter
from schemas.experiment_schema import Scenario
from schemas.network_config_schema import NetworkConfig
from services.config_service import apply_config_values, default_config, validate
from utils.exceptions import UnknownScenarioError

DENSITY_SWEEP = tuple(float(v) for v in np.round(np.arange(0.1, 0.95, 0.1), 2))
SINR_SWEEP_DB = (-20.0, -15.0, -10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0)
RATE_SINR_SWEEP_DB = (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0)

ALL_SCHEMES = (Scheme.SSF, Scheme.FD_ASSOC_FIXED_PCS, Scheme.JAPO, Scheme.HD_JAPO)

ANTENNA_VARIANTS = {
    "M=N=2": {"antennas": 2},
    "M=N=4": {"antennas": 4},
    "M=N=8": {"antennas": 8},
}

CATALOG: Dict[str, dict] = {
    "cap_vs_density": {
        "description": "Channel access probability vs STA density for two PCS thresholds",
        "base": {},
        "sweep_param": SweepParameter.LAMBDA_S,
        "sweep_values": DENSITY_SWEEP,
        "schemes": (Scheme.SSF,),
        "metrics": (MetricKind.CAP,),
        "variants": {"pcs=-30dBm": {"pcs_dbm": -30.0}, "pcs=-70dBm": {"pcs_dbm": -70.0}},
    },
    "stp_vs_sinr": {
        "description": "FD STP vs SINR threshold for several antenna counts",
        "base": {"lambda_s": 0.5},
        "sweep_param": SweepParameter.GAMMA,
        "sweep_values": SINR_SWEEP_DB,
        "schemes": (Scheme.FD_ASSOC_FIXED_PCS,),
        "metrics": (MetricKind.STP,),
        "variants": ANTENNA_VARIANTS,
    },
    "stp_vs_density": {
        "description": "FD STP vs STA density for several antenna counts",
        "base": {"gamma_db": 0.0},
        "sweep_param": SweepParameter.LAMBDA_S,
        "sweep_values": DENSITY_SWEEP,
        "schemes": (Scheme.FD_ASSOC_FIXED_PCS,),
        "metrics": (MetricKind.STP,),
        "variants": ANTENNA_VARIANTS,
    },
    "rate_vs_sinr": {
        "description": "Mean rate vs SINR threshold at lambda_s=0.9, all schemes",
        "base": {"lambda_s": 0.9},
        "sweep_param": SweepParameter.GAMMA,
        "sweep_values": RATE_SINR_SWEEP_DB,
        "schemes": ALL_SCHEMES,
        "metrics": (MetricKind.SDT,),
        "variants": {},
    },
    "rate_vs_sinr_antennas": {
        "description": "Mean rate vs SINR threshold at lambda_s=0.9 for M=N in {2, 8}",
        "base": {"lambda_s": 0.9},
        "sweep_param": SweepParameter.GAMMA,
        "sweep_values": RATE_SINR_SWEEP_DB,
        "schemes": (Scheme.SSF, Scheme.JAPO),
        "metrics": (MetricKind.SDT,),
        "variants": {"M=N=2": {"antennas": 2}, "M=N=8": {"antennas": 8}},
    },
    "rate_vs_density": {
        "description": "Mean rate vs STA density at gamma=10 dB, M=N=2, all schemes",
        "base": {"gamma_db": 10.0, "antennas": 2},
        "sweep_param": SweepParameter.LAMBDA_S,
        "sweep_values": DENSITY_SWEEP,
        "schemes": ALL_SCHEMES,
        "metrics": (MetricKind.SDT,),
        "variants": {},
    },
}


def scenario_names() -> List[str]:
    return sorted(CATALOG)


def describe_catalog() -> List[str]:
    """One `name: description` line per scenario."""
    return [f"{name}: {CATALOG[name]['description']}" for name in scenario_names()]


def get_scenario(
    name: str,
    n_realizations: int = HarnessConfig.DEFAULT_REALIZATIONS,
    base_seed: Optional[int] = None,
    base: Optional[NetworkConfig] = None,
) -> Scenario:
    """
    Build a catalog scenario

    Args:
        name: Catalog key
        n_realizations: Realizations per (sweep point, scheme)
        base_seed: Seed lineage root; defaults to the base config's seed
        base: Starting configuration (defaults + config file + --set); the
            preset's own overrides are applied on top

    Returns:
        Scenario with a validated base configuration

    Raises:
        UnknownScenarioError: If name is not in the catalog
    """
    if name not in CATALOG:
        raise UnknownScenarioError(
            "scenario", ErrorMessages.UNKNOWN_SCENARIO.format(name=name, available=", ".join(scenario_names()))
        )
    preset = CATALOG[name]
    cfg = validate(apply_config_values(base or default_config(), preset["base"]))
    return Scenario(
        name=name,
        description=preset["description"],
        base=cfg,
        sweep_param=preset["sweep_param"],
        sweep_values=preset["sweep_values"],
        schemes=preset["schemes"],
        metrics=preset["metrics"],
        variants=preset["variants"],
        n_realizations=n_realizations,
        base_seed=cfg.seed if base_seed is None else base_seed,
    )
