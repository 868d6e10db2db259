from ._base import (
    AppException,
    BusinessRuleException,
    CodingException,
    ConfigurationException,
    OutputException,
    SimulationException,
)
from .coding import (
    DimensionMismatchException,
    EmptyMatrixException,
    FieldDomainException,
    RankDeficientException,
)
from .domain import (
    ContractViolationException,
    DecodeMismatchException,
    NoRouteException,
    ResourceNotFoundException,
    UnknownPrefixException,
)

__all__ = [
    # Base exceptions
    "AppException",
    "BusinessRuleException",
    "CodingException",
    "ConfigurationException",
    "OutputException",
    "SimulationException",

    # Coding exceptions
    "DimensionMismatchException",
    "EmptyMatrixException",
    "FieldDomainException",
    "RankDeficientException",

    # Domain exceptions
    "ContractViolationException",
    "DecodeMismatchException",
    "NoRouteException",
    "ResourceNotFoundException",
    "UnknownPrefixException",
]
