"""MCP tool endpoint: JSON-RPC 2.0 over newline-delimited stdio."""

from .server import McpServer, serve_stdio
from .tools import TOOL_ALIASES, TOOL_DESCRIPTORS, TOOL_NAMES

__all__ = ["McpServer", "serve_stdio", "TOOL_ALIASES", "TOOL_DESCRIPTORS", "TOOL_NAMES"]
