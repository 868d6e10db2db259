from ._base import BusinessRuleException, SimulationException


class ResourceNotFoundException(BusinessRuleException):
    """
    Exception raised when a requested resource is not found.
    """

    def __init__(self, resource_type: str, resource_id: str):
        message = f"{resource_type} '{resource_id}' not found."
        super().__init__(message, details={"resource_type": resource_type, "resource_id": resource_id})


class UnknownPrefixException(ResourceNotFoundException):
    """
    Exception raised when a name prefix is not part of the content library.
    """

    def __init__(self, prefix: object):
        super().__init__("Name prefix", str(prefix))


class NoRouteException(ResourceNotFoundException):
    """
    Exception raised when the FIB has no upstream face for a name prefix.
    """

    def __init__(self, node: str, prefix: object):
        super().__init__("Route", f"{node}:{prefix}")
        self.details["node"] = node


class ContractViolationException(BusinessRuleException):
    """
    Exception raised when an operation is called outside its precondition.
    """

    def __init__(self, operation: str, message: str):
        super().__init__(message, details={"operation": operation})


class DecodeMismatchException(SimulationException):
    """
    Exception raised when a decoded segment differs from the catalog's source bytes.
    """

    def __init__(self, client: str, prefix: object):
        super().__init__(
            f"Client '{client}' decoded bytes that differ from the source for {prefix}.",
            details={"client": client, "prefix": str(prefix)},
        )
