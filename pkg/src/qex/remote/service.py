"""Cloud-queue emulator: asynchronous submission, polling, and retrieval
over HTTP, with simulated scheduling latency and optional readout noise.

Endpoints (JSON bodies, UTF-8):
  POST /v1/jobs {qasm, shots, machine?, seed?} -> 201 {job_id, status:"queued"}
  GET  /v1/jobs/{id}                           -> 200 {status}
  GET  /v1/jobs/{id}/result                    -> 200 {counts, shots, machine}
                                                  409 {status} while pending
Error codes: 400 structured compile error, 404 unknown id, 422 malformed
request, 503 queue full.

A job becomes ready ``delay +/- jitter`` seconds after submission (wall
clock); execution is instantaneous at that point: the sampler runs with the
job's sampler seed, then each measured bit of each shot flips independently
with ``flip_prob`` using the job's noise seed. Per-job seeds are drawn from
the service-level seed streams at submission time, so responses are
bit-identical across restarts given the same submission order.
"""

from __future__ import annotations

import json
import logging
import re
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Any

import numpy as np

from ..circuit import CircuitIR
from ..errors import CapacityError, NoMeasurementError, QexError
from ..qasm import parse_qasm
from ..simulator import DEFAULT_QUBIT_CAP, sample

logger = logging.getLogger(__name__)

_JOB_PATH = re.compile(r"^/v1/jobs/([0-9a-zA-Z_-]+)$")
_RESULT_PATH = re.compile(r"^/v1/jobs/([0-9a-zA-Z_-]+)/result$")

_SEED_SPACE = 2 ** 62


@dataclass
class EmulatorConfig:
    """Service knobs; latency defaults are desk scale, not production scale."""

    flip_prob: float = 0.0
    delay: float = 2.0
    jitter: float = 1.0
    queue_cap: int = 1024
    sampler_seed: int | None = None
    noise_seed: int | None = None
    latency_seed: int | None = None
    default_machine: str = "H2-1E"
    qubit_cap: int = DEFAULT_QUBIT_CAP


@dataclass
class RemoteJob:
    remote_id: str
    qasm: str
    shots: int
    machine: str
    circuit: CircuitIR
    sampler_seed: int
    noise_seed: int
    enqueue_time: float
    ready_time: float
    status: str = "queued"
    counts: dict[str, int] | None = None


class _HttpError(Exception):
    def __init__(self, status: int, body: dict[str, Any]):
        super().__init__(str(body))
        self.status = status
        self.body = body


def _error_body(kind: str, message: str, **extra: Any) -> dict[str, Any]:
    error = {"type": kind, "message": message}
    error.update(extra)
    return {"error": error}


class EmulatorState:
    """Job table plus the three deterministic seed streams."""

    def __init__(self, config: EmulatorConfig | None = None):
        self.config = config or EmulatorConfig()
        if not 0.0 <= self.config.flip_prob <= 1.0:
            raise ValueError("flip_prob must be in [0, 1]")
        self._lock = threading.RLock()
        self._jobs: dict[str, RemoteJob] = {}
        self._counter = 0
        self._sampler_rng = np.random.default_rng(self.config.sampler_seed)
        self._noise_rng = np.random.default_rng(self.config.noise_seed)
        self._latency_rng = np.random.default_rng(self.config.latency_seed)

    # --- submission ------------------------------------------------------------

    def submit(self, body: Any) -> dict[str, Any]:
        if not isinstance(body, dict):
            raise _HttpError(422, _error_body("ValidationError", "request body must be a JSON object"))
        for field_name in ("qasm", "shots"):
            if field_name not in body:
                raise _HttpError(422, _error_body("ValidationError", f"missing field {field_name!r}"))
        qasm = body["qasm"]
        shots = body["shots"]
        machine = body.get("machine", self.config.default_machine)
        seed = body.get("seed")
        if not isinstance(qasm, str):
            raise _HttpError(422, _error_body("ValidationError", "qasm must be a string"))
        if isinstance(shots, bool) or not isinstance(shots, int) or shots < 1:
            raise _HttpError(422, _error_body("ValidationError", "shots must be an integer >= 1"))
        if not isinstance(machine, str):
            raise _HttpError(422, _error_body("ValidationError", "machine must be a string"))
        if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
            raise _HttpError(422, _error_body("ValidationError", "seed must be an integer"))
        try:
            circuit = parse_qasm(qasm)
            if circuit.n_qubits > self.config.qubit_cap:
                raise CapacityError(
                    f"circuit needs {circuit.n_qubits} qubits, "
                    f"service capacity is {self.config.qubit_cap}"
                )
            if not circuit.has_measurements:
                raise NoMeasurementError("circuit has no measurement")
        except QexError as exc:
            raise _HttpError(400, {"error": exc.to_payload()}) from exc
        with self._lock:
            active = sum(1 for job in self._jobs.values() if job.status == "queued")
            if active >= self.config.queue_cap:
                raise _HttpError(503, _error_body("QueueFullError", "submission queue is full"))
            self._counter += 1
            remote_id = f"Q{self._counter:06d}"
            latency = self.config.delay
            if self.config.jitter > 0.0:
                latency += float(self._latency_rng.uniform(-self.config.jitter, self.config.jitter))
            latency = max(0.0, latency)
            now = time.time()
            job = RemoteJob(
                remote_id=remote_id,
                qasm=qasm,
                shots=shots,
                machine=machine,
                circuit=circuit,
                sampler_seed=int(seed) if seed is not None
                else int(self._sampler_rng.integers(_SEED_SPACE)),
                noise_seed=int(self._noise_rng.integers(_SEED_SPACE)),
                enqueue_time=now,
                ready_time=now + latency,
            )
            self._jobs[remote_id] = job
        logger.info("queued %s: %d shots on %s, ready in %.2fs", remote_id, shots, machine, latency)
        return {"job_id": remote_id, "status": "queued"}

    # --- execution --------------------------------------------------------------

    def _advance(self, job: RemoteJob) -> None:
        """Run the job if its ready time has passed (idempotent)."""
        with self._lock:
            if job.status != "queued" or time.time() < job.ready_time:
                return
            result = sample(job.circuit, job.shots, job.sampler_seed,
                            qubit_cap=self.config.qubit_cap)
            counts = result.counts
            if self.config.flip_prob > 0.0:
                counts = _apply_readout_flips(
                    counts,
                    n_clbits=job.circuit.n_clbits,
                    measured=job.circuit.measured_clbits(),
                    flip_prob=self.config.flip_prob,
                    rng=np.random.default_rng(job.noise_seed),
                )
            job.counts = counts
            job.status = "completed"

    def _get(self, remote_id: str) -> RemoteJob:
        with self._lock:
            job = self._jobs.get(remote_id)
        if job is None:
            raise _HttpError(404, _error_body("UnknownJobError", f"unknown job id {remote_id!r}"))
        return job

    def status(self, remote_id: str) -> dict[str, Any]:
        job = self._get(remote_id)
        self._advance(job)
        return {"status": job.status}

    def result(self, remote_id: str) -> dict[str, Any]:
        job = self._get(remote_id)
        self._advance(job)
        if job.status != "completed":
            raise _HttpError(409, {"status": job.status})
        assert job.counts is not None
        return {"counts": job.counts, "shots": job.shots, "machine": job.machine}


def _apply_readout_flips(counts: dict[str, int], *, n_clbits: int, measured: list[int],
                         flip_prob: float, rng: np.random.Generator) -> dict[str, int]:
    """Flip each measured bit of each shot independently with ``flip_prob``."""
    weights = np.array([1 << c for c in measured], dtype=np.int64)
    noisy: dict[int, int] = {}
    for key in sorted(counts):
        occurrences = counts[key]
        ideal = sum(1 << c for c, ch in enumerate(key) if ch == "1")
        flips = rng.random((occurrences, len(measured))) < flip_prob
        masks = (flips.astype(np.int64) * weights).sum(axis=1)
        outcomes, tallies = np.unique(ideal ^ masks, return_counts=True)
        for outcome, tally in zip(outcomes, tallies):
            noisy[int(outcome)] = noisy.get(int(outcome), 0) + int(tally)
    return {
        "".join("1" if (outcome >> c) & 1 else "0" for c in range(n_clbits)): tally
        for outcome, tally in sorted(noisy.items())
    }


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server: "EmulatorServer"

    def _respond(self, status: int, body: dict[str, Any]) -> None:
        data = json.dumps(body).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def _read_body(self) -> Any:
        length = int(self.headers.get("Content-Length", 0))
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return None
        try:
            return json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            raise _HttpError(422, _error_body("ValidationError", "request body is not valid JSON"))

    def do_POST(self) -> None:  # noqa: N802 (http.server API)
        try:
            if self.path.rstrip("/") != "/v1/jobs":
                raise _HttpError(404, _error_body("NotFound", f"no such endpoint {self.path!r}"))
            body = self.server.state.submit(self._read_body())
            self._respond(201, body)
        except _HttpError as exc:
            self._respond(exc.status, exc.body)

    def do_GET(self) -> None:  # noqa: N802
        try:
            match = _RESULT_PATH.match(self.path)
            if match:
                self._respond(200, self.server.state.result(match.group(1)))
                return
            match = _JOB_PATH.match(self.path)
            if match:
                self._respond(200, self.server.state.status(match.group(1)))
                return
            raise _HttpError(404, _error_body("NotFound", f"no such endpoint {self.path!r}"))
        except _HttpError as exc:
            self._respond(exc.status, exc.body)

    def log_message(self, format: str, *args: Any) -> None:
        logger.debug("%s - %s", self.address_string(), format % args)


class EmulatorServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address: tuple[str, int], config: EmulatorConfig | None = None):
        super().__init__(address, _Handler)
        self.state = EmulatorState(config)

    @property
    def url(self) -> str:
        host, port = self.server_address[:2]
        return f"http://{host}:{port}"


def make_server(host: str = "127.0.0.1", port: int = 0,
                config: EmulatorConfig | None = None) -> EmulatorServer:
    """Construct (without starting) an emulator bound to ``host:port``."""
    return EmulatorServer((host, port), config)
