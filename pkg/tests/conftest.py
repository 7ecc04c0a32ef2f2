from __future__ import annotations

import threading

import pytest

from qex.remote.service import EmulatorConfig, EmulatorServer, make_server


@pytest.fixture
def emulator_factory():
    """Start throwaway emulator instances on ephemeral ports."""
    running: list[tuple[EmulatorServer, threading.Thread]] = []

    def start(config: EmulatorConfig | None = None) -> EmulatorServer:
        server = make_server("127.0.0.1", 0, config)
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        running.append((server, thread))
        return server

    yield start
    for server, thread in running:
        server.shutdown()
        server.server_close()
        thread.join(timeout=5)


@pytest.fixture
def emulator(emulator_factory):
    """Noiseless emulator with zero latency, for fast deterministic tests."""
    return emulator_factory(EmulatorConfig(flip_prob=0.0, delay=0.0, jitter=0.0,
                                           sampler_seed=11, noise_seed=12, latency_seed=13))
