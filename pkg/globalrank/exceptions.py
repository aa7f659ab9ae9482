"""Exception classes for the globalrank package."""

from typing import Optional


class GlobalRankException(Exception):
    """Base exception for all globalrank errors."""

    def __init__(self, message):
        super().__init__(message)
        self.message = message


class ParseError(GlobalRankException):
    """Raised when an edge list cannot be parsed."""

    def __init__(self, message, line_number: Optional[int] = None):
        super().__init__(message)
        self.line_number = line_number


class ParameterError(GlobalRankException):
    """Raised when an operation receives invalid arguments."""
    pass


class ConfigurationError(GlobalRankException):
    """Raised when environment configuration is invalid."""
    pass


class NodeNotFoundError(GlobalRankException):
    """Raised when a node label or id is not part of the graph."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class DataError(GlobalRankException):
    """Raised when the data itself does not support the requested computation."""
    pass


class DisconnectedGraphError(DataError):
    """Raised when a computation needs a connected graph and did not get one."""

    def __init__(self, message, component_size=None, unreachable=None):
        super().__init__(message)
        self.component_size = component_size
        self.unreachable = unreachable


class DegenerateDistributionError(DataError):
    """Raised when degree statistics cannot parameterize a power law."""
    pass


class DomainError(DataError):
    """Raised when a value falls outside the domain of a formula."""
    pass


class DatasetError(GlobalRankException):
    """Raised when a dataset download fails."""

    def __init__(self, message, response=None, status_code=None):
        super().__init__(message)
        self.response = response
        self.status_code = status_code


class DatasetNotFoundError(DatasetError):
    """Raised when a dataset does not exist on the host."""
    pass
