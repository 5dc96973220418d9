"""
This is the __init__.py file for the models package.

It re-exports the shared enumerations.
"""
from models.enums import Direction, MetricKind, Scheme, SdtMode, SearchSpace, SweepParameter, ThetaMode

__all__ = ["Direction", "MetricKind", "Scheme", "SdtMode", "SearchSpace", "SweepParameter", "ThetaMode"]
