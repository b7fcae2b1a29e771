from typing import List, Optional


class HarbourneError(Exception):
    """Base class for every error raised by the harbourne package."""


class FieldMismatchError(HarbourneError):
    """Two scalars from different fields were combined."""


class UnsupportedFieldError(HarbourneError):
    """A prime field outside the supported set was requested."""


class InvalidDegreeError(HarbourneError):
    """The number of lines d is below 2."""


class InvalidTVectorError(HarbourneError):
    """A T-vector has the wrong length, negative entries or unbalanced incidences."""

    def __init__(self, message: str, imbalance: Optional[int] = None) -> None:
        super().__init__(message)
        self.imbalance = imbalance


class SearchBudgetExceeded(HarbourneError):
    """A search ran out of nodes before finishing; the answer is unknown."""

    def __init__(self, message: str, nodes_explored: int) -> None:
        super().__init__(message)
        self.nodes_explored = nodes_explored


class InvalidConfigurationError(HarbourneError):
    """A set of lines is not a valid configuration (duplicates, zero triples)."""


class CertificateError(HarbourneError):
    """A certificate failed to parse or to verify."""

    def __init__(self, message: str, path: Optional[str] = None) -> None:
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class TableIntegrityError(HarbourneError):
    """Some candidate below a table value could not be decided."""

    def __init__(self, message: str, offending: Optional[List[str]] = None) -> None:
        super().__init__(message)
        self.offending = offending or []
