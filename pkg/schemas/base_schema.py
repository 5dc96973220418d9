from pydantic import BaseModel, ConfigDict


class BaseSchema(BaseModel):
    """Immutable value type; numpy arrays allowed as field types."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)
