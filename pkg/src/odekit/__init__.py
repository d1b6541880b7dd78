"""Exact point invariants of second-order ODEs cubic in the first derivative."""

from .contexts import ConcreteContext, GenericContext, OdeCoefficients, PulledBackContext
from .engine import Invariants
from .errors import (
    CaseViolationError,
    MaximalDegenerationError,
    OdekitError,
    ParseError,
    SingularFrameError,
)
from .kernel import BACKEND
from .parse import format_expr, parse
from .rational import RatExpr
from .special import ReductionSystem, SpecialContext, normal_form

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CaseViolationError",
    "ConcreteContext",
    "GenericContext",
    "Invariants",
    "MaximalDegenerationError",
    "OdeCoefficients",
    "OdekitError",
    "ParseError",
    "PulledBackContext",
    "RatExpr",
    "ReductionSystem",
    "SingularFrameError",
    "SpecialContext",
    "format_expr",
    "normal_form",
    "parse",
]
