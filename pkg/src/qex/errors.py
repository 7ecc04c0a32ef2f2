"""Exception hierarchy shared by every qex subsystem.

All domain failures derive from :class:`QexError` so that tool surfaces
(MCP, CLI, HTTP emulator) can serialize them uniformly via ``to_payload``.
"""

from __future__ import annotations

from typing import Any


class QexError(Exception):
    """Base class for every structured qex error."""

    def __init__(self, message: str, *, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def to_payload(self) -> dict[str, Any]:
        """JSON-safe representation used in tool results and HTTP bodies."""
        payload: dict[str, Any] = {"type": type(self).__name__, "message": self.message}
        if self.line is not None:
            payload["line"] = self.line
        if self.column is not None:
            payload["column"] = self.column
        return payload


# --- OpenQASM frontend -------------------------------------------------------

class LexError(QexError):
    """Illegal character or malformed numeric literal in the source text."""


class ParseError(QexError):
    """Token stream does not match the OpenQASM 2.0 grammar."""


class UnsupportedError(ParseError):
    """Syntactically valid OpenQASM 2.0 feature that this engine rejects."""


class IncludeError(ParseError):
    """Include of anything other than the built-in "qelib1.inc"."""


class SemanticError(QexError):
    """Declaration/usage error found while lowering the AST."""


# --- Observables --------------------------------------------------------------

class ObservableParseError(QexError):
    """Malformed observable term list."""


class PauliIndexError(QexError, IndexError):
    """Pauli factor index outside the circuit's qubit range."""


# --- Simulation ---------------------------------------------------------------

class MidCircuitMeasureError(QexError):
    """A gate follows a measurement; only terminal measurements are supported."""


class NoMeasurementError(QexError):
    """Sampling requested for a circuit that never measures."""


class CapacityError(QexError):
    """Circuit exceeds the configured qubit capacity of the dense engine."""


# --- Jobs and remote execution ------------------------------------------------

class ValidationError(QexError):
    """Malformed tool/request payload (missing or mistyped fields)."""


class UnknownJobError(QexError):
    """Job id does not exist in the store."""


class BackendUnavailableError(QexError):
    """Remote execution service cannot be reached."""


class RemoteServiceError(QexError):
    """Remote service answered with a structured error; relays its body."""

    def __init__(self, message: str, *, remote_error: dict[str, Any] | None = None,
                 http_status: int | None = None):
        super().__init__(message)
        self.remote_error = remote_error
        self.http_status = http_status

    def to_payload(self) -> dict[str, Any]:
        if self.remote_error:
            return dict(self.remote_error)
        payload = super().to_payload()
        if self.http_status is not None:
            payload["http_status"] = self.http_status
        return payload
