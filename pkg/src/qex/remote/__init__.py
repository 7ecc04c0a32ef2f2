"""Remote execution: cloud-queue emulator service and its HTTP client."""

from .client import RemoteClient
from .service import EmulatorConfig, EmulatorServer, make_server

__all__ = ["RemoteClient", "EmulatorConfig", "EmulatorServer", "make_server"]
