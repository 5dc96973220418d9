"""CLI invocation schema."""
from typing import List, Literal, Optional

from pydantic import Field, field_validator

from schemas.base_schema import BaseSchema
from schemas.network_config_schema import known_config_keys


class CliInvocation(BaseSchema):
    """One parsed command line."""

    subcommand: Literal["run", "sweep", "validate", "oracle"]
    config_path: Optional[str] = None
    overrides: List[str] = Field(default_factory=list)
    out_dir: Optional[str] = None
    fast: bool = False
    paper_theta: bool = False
    seed: Optional[int] = Field(default=None, ge=0)
    realizations: Optional[int] = Field(default=None, ge=1)

    @field_validator("overrides")
    @classmethod
    def _check_overrides(cls, value: List[str]) -> List[str]:
        keys = known_config_keys()
        for item in value:
            key, sep, _ = item.partition("=")
            if not sep or not key.strip():
                raise ValueError(f"override must look like key=value, got {item!r}")
            if key.strip() not in keys:
                raise ValueError(f"unknown configuration key '{key.strip()}'")
        return value
