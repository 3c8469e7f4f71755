__all__ = []

from . import misc_util
from .misc_util import (
    GoalNetError,
    ParseError,
    DimensionError,
    DomainError,
    InvalidDistribution,
    Infeasible,
    InfeasibleAlways,
    TooLarge,
    EmptyTrace,
    SynthesisMissing,
    NoConvergence,
    NumericalError,
    NumericalOverflow
)
__all__.extend(misc_util.__all__)
