"""Network configuration schemas: linear NetworkConfig and the dB-unit raw form read from files."""
import math
from typing import Tuple

from pydantic import Field

from config.constants import ModelDefaults
from schemas.base_schema import BaseSchema
from utils.units import db_to_linear, linear_to_db


class Decibel(BaseSchema):
    """A power or ratio expressed in dB (or dBm)."""

    value: float = Field(..., description="Value in dB or dBm")
    unit: str = Field(default="dB", description="Label only: 'dB' or 'dBm'")

    def to_linear(self) -> float:
        return db_to_linear(self.value)

    @classmethod
    def from_linear(cls, x: float, unit: str = "dB") -> "Decibel":
        return cls(value=linear_to_db(x), unit=unit)


class NetworkConfig(BaseSchema):
    """
    All scalar model parameters in linear units.

    Powers are mW, gamma and si_atten are linear ratios. Invariants are checked
    by services.config_service.validate, which names the violated field.
    """

    lambda_s: float = Field(..., description="STAs per unit area")
    lambda_a: float = Field(..., description="APs per unit area")
    alpha: float = Field(..., description="Path-loss exponent")
    p_tx: float = Field(..., description="Transmit power in mW")
    noise: float = Field(..., description="Noise power in mW")
    gamma: float = Field(..., description="SINR threshold (linear)")
    pcs: float = Field(..., description="PCS threshold in mW")
    m_tx: int = Field(..., description="Transmit antennas M")
    n_rx: int = Field(..., description="Receive antennas N")
    k_factor: float = Field(..., description="Rician K-factor of the SI channel")
    si_atten: float = Field(..., description="SI attenuation Omega (linear)")
    window: Tuple[float, float] = Field(..., description="(width, height) in distance units")
    seed: int = Field(default=0, description="Base seed")

    @property
    def lambda_fd(self) -> float:
        """Density of the superposed FD process."""
        return self.lambda_s + self.lambda_a

    @property
    def window_area(self) -> float:
        return self.window[0] * self.window[1]

    @property
    def carrier_sense_radius(self) -> float:
        """CSR = Gamma^(-1/alpha)."""
        return self.pcs ** (-1.0 / self.alpha)

    def with_overrides(self, **fields) -> "NetworkConfig":
        """Return a copy with the given linear-unit fields replaced."""
        return self.model_copy(update=fields)

    def describe(self) -> dict:
        """Human-facing view with dB units restored."""
        return {
            "lambda_s": self.lambda_s,
            "lambda_a": self.lambda_a,
            "alpha": self.alpha,
            "p_tx_dbm": _safe_db(self.p_tx),
            "noise_dbm": _safe_db(self.noise),
            "gamma_db": _safe_db(self.gamma),
            "pcs_dbm": _safe_db(self.pcs),
            "m_tx": self.m_tx,
            "n_rx": self.n_rx,
            "k_factor": self.k_factor,
            "si_atten_db": _safe_db(self.si_atten),
            "window": list(self.window),
            "seed": self.seed,
        }


def _safe_db(x: float) -> float:
    return Decibel.from_linear(x).value if x > 0 else -math.inf


class RawNetworkConfig(BaseSchema):
    """Configuration as written in a config file: powers in dBm, ratios in dB."""

    lambda_s: float = ModelDefaults.LAMBDA_S
    lambda_a: float = ModelDefaults.LAMBDA_A
    alpha: float = ModelDefaults.ALPHA
    p_tx_dbm: float = ModelDefaults.P_TX_DBM
    noise_dbm: float = ModelDefaults.NOISE_DBM
    gamma_db: float = ModelDefaults.GAMMA_DB
    pcs_dbm: float = ModelDefaults.PCS_DBM
    m_tx: int = ModelDefaults.M_TX
    n_rx: int = ModelDefaults.N_RX
    k_factor: float = ModelDefaults.K_FACTOR
    si_atten_db: float = ModelDefaults.SI_ATTEN_DB
    window_width: float = ModelDefaults.WINDOW_WIDTH
    window_height: float = ModelDefaults.WINDOW_HEIGHT
    seed: int = ModelDefaults.SEED

    def to_network_config(self) -> NetworkConfig:
        return NetworkConfig(
            lambda_s=self.lambda_s,
            lambda_a=self.lambda_a,
            alpha=self.alpha,
            p_tx=Decibel(value=self.p_tx_dbm, unit="dBm").to_linear(),
            noise=Decibel(value=self.noise_dbm, unit="dBm").to_linear(),
            gamma=Decibel(value=self.gamma_db).to_linear(),
            pcs=Decibel(value=self.pcs_dbm, unit="dBm").to_linear(),
            m_tx=self.m_tx,
            n_rx=self.n_rx,
            k_factor=self.k_factor,
            si_atten=Decibel(value=self.si_atten_db).to_linear(),
            window=(self.window_width, self.window_height),
            seed=self.seed,
        )


# Short keys accepted in config files; values stay in dB/dBm.
CONFIG_KEY_ALIASES = {
    "p_tx": "p_tx_dbm",
    "noise": "noise_dbm",
    "gamma": "gamma_db",
    "pcs": "pcs_dbm",
    "si_atten": "si_atten_db",
}

# Keys that expand to more than one field: window = "W,H", antennas = M = N.
COMPOSITE_CONFIG_KEYS = ("window", "antennas")


def known_config_keys() -> set:
    """Every key a config file or --set override may use."""
    return set(RawNetworkConfig.model_fields) | set(CONFIG_KEY_ALIASES) | set(COMPOSITE_CONFIG_KEYS)
