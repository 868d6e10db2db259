"""Domain exceptions for the PopNetCod simulator.

This module defines the base exception families used across the layers.
"""


# --- Base Exception ----------------------------------------------
class AppException(Exception):
    """Base class for all app-specific Exceptions."""

    def __init__(self, message: str = "", *, details: dict[str, object] | None = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


# --- Domain / business rules ------------------------------------

class BusinessRuleException(AppException):
    """
    Business rule or invariant violation (e.g. serving with no innovative supply).
    """


# --- Coding layer ------------------------------------------------

class CodingException(AppException):
    """
    Errors raised by finite-field arithmetic and coding-matrix operations.

    Args:
        operation: The coding operation that failed (e.g. 'gf_inv', 'decode').
        message: The error message.
        details: Additional context details.
    """

    def __init__(self, operation: str, message: str = "", *, details: dict[str, object] | None = None):
        details = details or {}
        details["operation"] = operation
        super().__init__(message, details=details)
        self.operation = operation


# --- Configuration -----------------------------------------------

class ConfigurationException(AppException):
    """
    Invalid experiment configuration, library definition or topology.
    """


# --- Simulation ----------------------------------------------------

class SimulationException(AppException):
    """
    Errors detected while the event loop is running.
    """


# --- Results output ------------------------------------------------

class OutputException(AppException):
    """
    Results could not be written to the output directory.
    """
