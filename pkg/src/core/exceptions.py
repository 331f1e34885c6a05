"""src/core/exceptions.py."""

from typing import List, Optional

from src.core.schemas.response import ErrorResponse


class DomainException(Exception):
    """
    Base class for toolkit errors.
    Contains default values that can be overridden in subclasses.
    """

    exit_code: int = 2
    code: str = "ANALYSIS_ERROR"
    message: str = "The analysis failed"

    def __init__(
        self,
        message: Optional[str] = None,
        code: Optional[str] = None,
        exit_code: Optional[int] = None,
    ):
        if message:
            self.message = message
        if code:
            self.code = code
        if exit_code:
            self.exit_code = exit_code
        super().__init__(self.message)


class BadRequestError(DomainException):
    """Exit 1: invalid option or argument (usage error)."""

    exit_code = 1
    code = "BAD_REQUEST"
    message = "Bad request."


class ValidationFailedError(DomainException):
    """Exit 2: input data violates a documented invariant."""

    exit_code = 2
    code = "VALIDATION_ERROR"
    message = "Validation failed."


class NegParFormatError(ValidationFailedError):
    """Malformed row in a NegPar-layout annotation file."""

    code = "NEGPAR_FORMAT_ERROR"
    message = "Malformed annotation file."

    def __init__(self, message: str, line_no: int):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class AlignmentError(ValidationFailedError):
    """Subwords do not reconstruct the word sequence."""

    code = "ALIGNMENT_ERROR"
    message = "Subword sequence does not reconstruct the words."


class TraceFormatError(ValidationFailedError):
    """Trace container is not readable (bad magic, truncated, bad header)."""

    code = "TRACE_FORMAT_ERROR"
    message = "Malformed trace container."


class TraceValidationError(ValidationFailedError):
    """One or more traces violate the ModelTrace invariants."""

    code = "TRACE_VALIDATION_ERROR"
    message = "Trace validation failed."

    def __init__(self, problems: List[str]):
        self.problems = problems
        super().__init__("; ".join(problems))


class ResourceNotFoundError(DomainException):
    """Exit 3: a referenced input does not exist."""

    exit_code = 3
    code = "RESOURCE_NOT_FOUND"
    message = "The requested resource was not found."


class StorageError(DomainException):
    """Exit 3: reading or writing a file failed."""

    exit_code = 3
    code = "IO_ERROR"
    message = "I/O failure."


def render_error(exc: DomainException) -> ErrorResponse:
    """
    Converts any DomainException into the common error payload.
    """
    return ErrorResponse(status="error", code=exc.code, message=exc.message)
