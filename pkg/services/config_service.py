"""
Configuration Service

Builds NetworkConfig values from config-file mappings and overrides, validates
the model invariants and computes the content hash recorded in manifests.
"""
import hashlib
import json
import logging
import math
from typing import Any, Callable, Iterable, Mapping, Optional, Tuple, Union

from config.constants import ErrorMessages
from schemas.network_config_schema import (
    CONFIG_KEY_ALIASES,
    Decibel,
    NetworkConfig,
    RawNetworkConfig,
)
from utils.exceptions import (
    AntennaCountError,
    ConfigParseError,
    ConfigValidationError,
    NonPositiveDensityError,
    NonPositivePowerError,
    PathLossExponentError,
    UnknownConfigKeyError,
    WindowAreaError,
)

logger = logging.getLogger(__name__)


def _parse_float(key: str, value: Any) -> float:
    try:
        return float(value)
    except (TypeError, ValueError) as e:
        raise ConfigParseError(key, ErrorMessages.BAD_VALUE.format(value=value, reason=e))


def _parse_int(key: str, value: Any) -> int:
    number = _parse_float(key, value)
    if not math.isfinite(number) or number != int(number):
        raise ConfigParseError(key, ErrorMessages.BAD_VALUE.format(value=value, reason="not an integer"))
    return int(number)


def _parse_db(key: str, value: Any) -> float:
    return Decibel(value=_parse_float(key, value)).to_linear()


# config key -> (NetworkConfig field, parser to linear units)
FIELD_PARSERS: dict[str, Tuple[str, Callable[[str, Any], Any]]] = {
    "lambda_s": ("lambda_s", _parse_float),
    "lambda_a": ("lambda_a", _parse_float),
    "alpha": ("alpha", _parse_float),
    "p_tx_dbm": ("p_tx", _parse_db),
    "noise_dbm": ("noise", _parse_db),
    "gamma_db": ("gamma", _parse_db),
    "pcs_dbm": ("pcs", _parse_db),
    "m_tx": ("m_tx", _parse_int),
    "n_rx": ("n_rx", _parse_int),
    "k_factor": ("k_factor", _parse_float),
    "si_atten_db": ("si_atten", _parse_db),
    "seed": ("seed", _parse_int),
}


def default_config() -> NetworkConfig:
    """Reference deployment parameters as a linear NetworkConfig."""
    return RawNetworkConfig().to_network_config()


def apply_config_values(cfg: NetworkConfig, values: Mapping[str, Any]) -> NetworkConfig:
    """
    Apply config-file style values (dB units where the key says so) to a config

    Args:
        cfg: Starting configuration
        values: Mapping of config keys to raw values (strings or numbers)

    Returns:
        New NetworkConfig; not yet validated

    Raises:
        UnknownConfigKeyError: If a key is not a configuration key
        ConfigParseError: If a value cannot be parsed
    """
    updates: dict = {}
    width, height = cfg.window
    for raw_key, value in values.items():
        key = CONFIG_KEY_ALIASES.get(raw_key.strip(), raw_key.strip())
        if key in FIELD_PARSERS:
            field, parser = FIELD_PARSERS[key]
            updates[field] = parser(key, value)
        elif key == "window_width":
            width = _parse_float(key, value)
        elif key == "window_height":
            height = _parse_float(key, value)
        elif key == "window":
            width, height = _parse_window(value)
        elif key == "antennas":
            antennas = _parse_int(key, value)
            updates["m_tx"] = antennas
            updates["n_rx"] = antennas
        else:
            raise UnknownConfigKeyError(raw_key, ErrorMessages.UNKNOWN_KEY.format(key=raw_key))
    updates["window"] = (width, height)
    return cfg.with_overrides(**updates)


def _parse_window(value: Any) -> Tuple[float, float]:
    if isinstance(value, (tuple, list)) and len(value) == 2:
        return _parse_float("window", value[0]), _parse_float("window", value[1])
    parts = str(value).replace("x", ",").split(",")
    if len(parts) != 2:
        raise ConfigParseError("window", ErrorMessages.BAD_VALUE.format(value=value, reason="expected W,H"))
    return _parse_float("window", parts[0]), _parse_float("window", parts[1])


def parse_overrides(overrides: Iterable[str]) -> dict:
    """
    Turn `key=value` strings into a mapping, later entries winning

    Raises:
        ConfigParseError: If an entry has no '='
    """
    parsed = {}
    for item in overrides:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigParseError("--set", ErrorMessages.BAD_OVERRIDE.format(value=item))
        parsed[key.strip()] = value.strip()
    return parsed


def build_config(
    file_values: Optional[Mapping[str, Any]] = None,
    overrides: Iterable[str] = (),
    seed: Optional[int] = None,
) -> NetworkConfig:
    """
    Defaults <- config file <- --set overrides <- --seed, then validate

    Returns:
        Validated NetworkConfig
    """
    cfg = default_config()
    if file_values:
        cfg = apply_config_values(cfg, file_values)
    override_values = parse_overrides(overrides)
    if override_values:
        cfg = apply_config_values(cfg, override_values)
    if seed is not None:
        cfg = cfg.with_overrides(seed=int(seed))
    logger.debug(
        f"Config built from {len(file_values or {})} file keys and {len(override_values)} overrides"
    )
    return validate(cfg)


def validate(cfg: Union[NetworkConfig, RawNetworkConfig]) -> NetworkConfig:
    """
    Check every NetworkConfig invariant

    Args:
        cfg: Linear config or its raw dB form

    Returns:
        The same (linear) configuration; validate is idempotent

    Raises:
        ConfigValidationError: A subclass naming the first violated field
    """
    if isinstance(cfg, RawNetworkConfig):
        cfg = cfg.to_network_config()

    for field in ("lambda_s", "lambda_a"):
        value = getattr(cfg, field)
        if not value > 0:
            raise NonPositiveDensityError(field, ErrorMessages.DENSITY_NOT_POSITIVE.format(value=value))

    if not cfg.alpha > 2:
        raise PathLossExponentError("alpha", ErrorMessages.ALPHA_TOO_SMALL.format(value=cfg.alpha))

    for field in ("m_tx", "n_rx"):
        value = getattr(cfg, field)
        if value < 1:
            raise AntennaCountError(field, ErrorMessages.ANTENNAS_TOO_FEW.format(value=value))

    for field in ("p_tx", "noise", "gamma", "pcs", "si_atten"):
        value = getattr(cfg, field)
        if not (value > 0 and math.isfinite(value)):
            raise NonPositivePowerError(field, ErrorMessages.POWER_NOT_POSITIVE.format(value=value))

    if not cfg.k_factor >= 0:
        raise ConfigValidationError("k_factor", f"must be nonnegative, got {cfg.k_factor}")

    width, height = cfg.window
    if not (width > 0 and height > 0 and math.isfinite(width * height)):
        raise WindowAreaError("window", ErrorMessages.WINDOW_NO_AREA.format(width=width, height=height))

    if cfg.seed < 0:
        raise ConfigValidationError("seed", f"must be an unsigned integer, got {cfg.seed}")

    return cfg


def canonical_json(cfg: NetworkConfig) -> str:
    """Sorted-key JSON with round-trip float reprs."""
    return json.dumps(cfg.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))


def config_content_hash(cfg: NetworkConfig) -> str:
    """
    Git blob-style SHA-1 of the canonical config JSON

    Returns:
        40-character hex digest
    """
    payload = canonical_json(cfg).encode("utf-8")
    header = f"blob {len(payload)}\0".encode("ascii")
    return hashlib.sha1(header + payload).hexdigest()

