"""Newline-delimited JSON-RPC 2.0 server exposing the tool registry on stdio.

Framing: one message per line, UTF-8. Every valid request line yields exactly
one response line, in order; notifications yield none. stdout carries data
only; logs go to stderr via the logging module.
"""

from __future__ import annotations

import json
import logging
from typing import Any, IO

from .. import __version__
from ..jobs import Orchestrator
from .tools import (
    SchemaViolation,
    TOOL_DESCRIPTORS,
    ToolHandlers,
    resolve_tool,
    tool_result,
    validate_arguments,
)

logger = logging.getLogger(__name__)

PROTOCOL_VERSION = "2024-11-05"

PARSE_ERROR = -32700
INVALID_REQUEST = -32600
METHOD_NOT_FOUND = -32601
INVALID_PARAMS = -32602
INTERNAL_ERROR = -32603


class McpServer:
    """One stdio connection; requests are handled strictly in arrival order."""

    def __init__(self, orchestrator: Orchestrator, *, server_name: str = "qex"):
        self.handlers = ToolHandlers(orchestrator)
        self.server_name = server_name
        self._initialized = False

    # --- envelope helpers ---------------------------------------------------

    @staticmethod
    def _result(request_id: Any, result: dict[str, Any]) -> dict[str, Any]:
        return {"jsonrpc": "2.0", "id": request_id, "result": result}

    @staticmethod
    def _error(request_id: Any, code: int, message: str) -> dict[str, Any]:
        return {"jsonrpc": "2.0", "id": request_id, "error": {"code": code, "message": message}}

    # --- request handling ------------------------------------------------------

    def handle_message(self, message: Any) -> dict[str, Any] | None:
        """Process one decoded JSON-RPC message; None means no response."""
        if not isinstance(message, dict):
            return self._error(None, INVALID_REQUEST, "request must be an object")
        request_id = message.get("id")
        is_notification = "id" not in message
        method = message.get("method")
        if message.get("jsonrpc") != "2.0" or not isinstance(method, str):
            if is_notification:
                return None
            return self._error(request_id, INVALID_REQUEST, "not a valid JSON-RPC 2.0 request")
        if is_notification:
            # notifications/initialized and friends are accepted silently
            logger.debug("notification: %s", method)
            return None
        params = message.get("params")
        if params is None:
            params = {}
        if not isinstance(params, dict):
            return self._error(request_id, INVALID_REQUEST, "params must be an object")

        if method == "initialize":
            if self._initialized:
                return self._error(request_id, INVALID_REQUEST, "server already initialized")
            self._initialized = True
            requested = params.get("protocolVersion")
            return self._result(request_id, {
                "protocolVersion": requested if isinstance(requested, str) else PROTOCOL_VERSION,
                "capabilities": {"tools": {}},
                "serverInfo": {"name": self.server_name, "version": __version__},
            })
        if not self._initialized:
            return self._error(request_id, INVALID_REQUEST, "server not initialized")
        if method == "tools/list":
            return self._result(request_id, {"tools": TOOL_DESCRIPTORS})
        if method == "tools/call":
            return self._tools_call(request_id, params)
        return self._error(request_id, METHOD_NOT_FOUND, f"unknown method {method!r}")

    def _tools_call(self, request_id: Any, params: dict[str, Any]) -> dict[str, Any]:
        name = params.get("name")
        if not isinstance(name, str):
            return self._error(request_id, INVALID_PARAMS, "tool name must be a string")
        tool = resolve_tool(name)
        if tool is None:
            return self._error(request_id, INVALID_PARAMS, f"unknown tool {name!r}")
        arguments = params.get("arguments", {})
        try:
            validate_arguments(tool, arguments)
        except SchemaViolation as exc:
            return self._error(request_id, INVALID_PARAMS, str(exc))
        try:
            body, is_error = self.handlers.call(tool, arguments)
        except Exception:  # pragma: no cover - handlers convert domain errors
            logger.exception("tool %s crashed", tool)
            return self._error(request_id, INTERNAL_ERROR, "internal error")
        return self._result(request_id, tool_result(body, is_error))

    # --- transport ----------------------------------------------------------------

    def handle_line(self, line: str) -> str | None:
        """One request line in, one response line out (None for notifications)."""
        try:
            message = json.loads(line)
        except json.JSONDecodeError:
            return json.dumps(self._error(None, PARSE_ERROR, "parse error"))
        response = self.handle_message(message)
        if response is None:
            return None
        return json.dumps(response)

    def serve(self, stdin: IO[str], stdout: IO[str]) -> None:
        """Run until EOF on stdin."""
        for line in stdin:
            if not line.strip():
                continue
            response = self.handle_line(line)
            if response is not None:
                stdout.write(response + "\n")
                stdout.flush()


def serve_stdio(orchestrator: Orchestrator) -> None:
    """Convenience entry point over the process's real stdio."""
    import sys

    McpServer(orchestrator).serve(sys.stdin, sys.stdout)
