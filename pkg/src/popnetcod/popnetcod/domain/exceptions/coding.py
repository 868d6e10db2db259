from ._base import CodingException


# --- Specific Coding Exceptions ---

class FieldDomainException(CodingException):
    """
    Raised for an operation outside the field's domain, such as inverting zero.
    """
    pass


class DimensionMismatchException(CodingException):
    """
    Raised when a packet's coefficient or payload width does not match a matrix.
    """
    pass


class EmptyMatrixException(CodingException):
    """
    Raised when recoding is requested from a matrix without rows.
    """
    pass


class RankDeficientException(CodingException):
    """
    Raised when decoding a matrix whose rank is below the generation size.
    """
    pass
