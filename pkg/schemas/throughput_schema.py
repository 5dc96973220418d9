"""Throughput report schema."""
import math

from pydantic import Field

from models.enums import SdtMode
from schemas.base_schema import BaseSchema
from schemas.network_config_schema import NetworkConfig


class SdtReport(BaseSchema):
    """Spatial density of throughput in nats/sec/Hz per unit area."""

    mode: SdtMode
    active_density: float = Field(..., ge=0)
    stp: float = Field(..., ge=0, le=1)
    sdt: float = Field(..., ge=0)
    log_stp: float = Field(default=-math.inf, description="ln(stp), finite where stp underflows")
    inputs: NetworkConfig
