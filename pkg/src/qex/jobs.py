"""Asynchronous job lifecycle management across three execution backends.

Backends:
  - ``inline``: executes during submit; the record is terminal on return.
  - ``queued-local``: simulates a batch scheduler with a configurable delay
    (plus uniform jitter) before running on the local engine in a worker
    thread. A real scheduler adapter can replace ``_queued_local_worker``.
  - ``remote``: posts to the cloud-queue emulator and tracks the remote job
    id; status refreshes lazily on poll/fetch, at most once per poll interval.

Status moves strictly forward along queued -> running -> completed|failed.
Completed records always hold a result; failed records always hold an error.

Persistence is an append-only event log, one JSONL file per job under
``<state_dir>/jobs/<job_id>.jsonl``: a ``submitted`` event, one ``status``
event per transition, and a final ``result`` or ``error`` event. Reloading a
directory folds the events back into records. With no state dir the store is
memory-only.
"""

from __future__ import annotations

import json
import random
import secrets
import threading
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Callable

from .errors import (
    BackendUnavailableError,
    QexError,
    UnknownJobError,
)
from .execution import execute_tool, probabilities_from_counts
from .remote.client import RemoteClient

BACKENDS = ("inline", "queued-local", "remote")

_STATUS_ORDER = {"queued": 0, "running": 1, "completed": 2, "failed": 2}


def new_job_id() -> str:
    """Time-ordered random token: sortable, collision-free at desk scale."""
    return f"{time.time_ns():016x}{secrets.token_hex(5)}"


@dataclass
class JobRecord:
    """Lifecycle state of one tool execution."""

    id: str
    tool: str
    backend: str
    payload: dict[str, Any]
    status: str = "queued"
    submitted_at: float = 0.0
    started_at: float | None = None
    finished_at: float | None = None
    result: dict[str, Any] | None = None
    error: dict[str, Any] | None = None
    remote_ref: str | None = None

    def summary(self) -> dict[str, Any]:
        """Listing row: metadata only, no payloads or result bodies."""
        return {
            "id": self.id,
            "tool": self.tool,
            "backend": self.backend,
            "status": self.status,
            "submitted_at": self.submitted_at,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "remote_ref": self.remote_ref,
        }


class JobStore:
    """Thread-safe record table with an append-only event history."""

    def __init__(self, state_dir: str | Path | None = None):
        self._lock = threading.RLock()
        self._records: dict[str, JobRecord] = {}
        self._events: dict[str, list[dict[str, Any]]] = {}
        self._terminal: dict[str, threading.Event] = {}
        self.state_dir = Path(state_dir) if state_dir is not None else None
        if self.state_dir is not None:
            (self.state_dir / "jobs").mkdir(parents=True, exist_ok=True)
            self._load_existing()

    # --- persistence -------------------------------------------------------

    def _job_file(self, job_id: str) -> Path | None:
        if self.state_dir is None:
            return None
        return self.state_dir / "jobs" / f"{job_id}.jsonl"

    def _append_event(self, job_id: str, event: dict[str, Any]) -> None:
        self._events.setdefault(job_id, []).append(event)
        path = self._job_file(job_id)
        if path is not None:
            with path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(event) + "\n")

    def _load_existing(self) -> None:
        assert self.state_dir is not None
        for path in sorted((self.state_dir / "jobs").glob("*.jsonl")):
            record: JobRecord | None = None
            events: list[dict[str, Any]] = []
            with path.open(encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    event = json.loads(line)
                    events.append(event)
                    if event["event"] == "submitted":
                        record = JobRecord(**event["record"])
                    elif record is None:
                        continue
                    elif event["event"] == "status":
                        record.status = event["status"]
                        if event["status"] == "running":
                            record.started_at = event["at"]
                        elif event["status"] in ("completed", "failed"):
                            record.finished_at = event["at"]
                    elif event["event"] == "remote_ref":
                        record.remote_ref = event["remote_ref"]
                    elif event["event"] == "result":
                        record.result = event["result"]
                    elif event["event"] == "error":
                        record.error = event["error"]
            if record is not None:
                self._records[record.id] = record
                self._events[record.id] = events
                self._terminal[record.id] = threading.Event()
                if record.status in ("completed", "failed"):
                    self._terminal[record.id].set()

    # --- record operations ----------------------------------------------------

    def add(self, record: JobRecord) -> None:
        with self._lock:
            self._records[record.id] = record
            self._terminal[record.id] = threading.Event()
            self._append_event(record.id, {
                "event": "submitted",
                "at": record.submitted_at,
                "record": asdict(record),
            })

    def get(self, job_id: str) -> JobRecord:
        with self._lock:
            record = self._records.get(job_id)
        if record is None:
            raise UnknownJobError(f"unknown job id {job_id!r}")
        return record

    def set_remote_ref(self, job_id: str, remote_ref: str) -> None:
        with self._lock:
            record = self.get(job_id)
            record.remote_ref = remote_ref
            self._append_event(job_id, {"event": "remote_ref", "remote_ref": remote_ref,
                                        "at": time.time()})

    def transition(self, job_id: str, status: str, *,
                   result: dict[str, Any] | None = None,
                   error: dict[str, Any] | None = None) -> None:
        """Move a record strictly forward; terminal states carry their body."""
        with self._lock:
            record = self.get(job_id)
            if _STATUS_ORDER[status] <= _STATUS_ORDER[record.status]:
                raise RuntimeError(
                    f"illegal transition {record.status} -> {status} for job {job_id}"
                )
            now = time.time()
            record.status = status
            if status == "running":
                record.started_at = now
            if status in ("completed", "failed"):
                record.finished_at = now
            self._append_event(job_id, {"event": "status", "status": status, "at": now})
            if status == "completed":
                if result is None:
                    raise RuntimeError("completed transition requires a result")
                record.result = result
                self._append_event(job_id, {"event": "result", "result": result})
            if status == "failed":
                if error is None:
                    raise RuntimeError("failed transition requires an error")
                record.error = error
                self._append_event(job_id, {"event": "error", "error": error})
            if status in ("completed", "failed"):
                self._terminal[job_id].set()

    def events(self, job_id: str) -> list[dict[str, Any]]:
        with self._lock:
            self.get(job_id)
            return list(self._events.get(job_id, []))

    def list(self) -> list[JobRecord]:
        with self._lock:
            return sorted(self._records.values(), key=lambda r: (r.submitted_at, r.id))

    def wait_terminal(self, job_id: str, timeout: float | None = None) -> bool:
        with self._lock:
            self.get(job_id)
            event = self._terminal[job_id]
        return event.wait(timeout)


class Orchestrator:
    """Owns job submission, polling, and result retrieval."""

    def __init__(self, store: JobStore | None = None, *,
                 executor: Callable[..., dict[str, Any]] = execute_tool,
                 scheduler_delay: float = 0.0,
                 scheduler_jitter: float = 0.0,
                 remote: RemoteClient | None = None,
                 poll_interval: float = 0.5,
                 qubit_cap: int | None = None):
        self.store = store if store is not None else JobStore()
        self._executor = executor
        self.scheduler_delay = scheduler_delay
        self.scheduler_jitter = scheduler_jitter
        self.remote = remote
        self.poll_interval = poll_interval
        self.qubit_cap = qubit_cap
        self._last_refresh: dict[str, float] = {}
        self._refresh_locks: dict[str, threading.Lock] = {}
        self._lock = threading.Lock()

    # --- submission ---------------------------------------------------------

    def submit(self, tool: str, payload: dict[str, Any], backend: str = "inline") -> str:
        if backend not in BACKENDS:
            raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
        record = JobRecord(
            id=new_job_id(), tool=tool, backend=backend,
            payload=dict(payload), submitted_at=time.time(),
        )
        self.store.add(record)
        if backend == "inline":
            self._execute_local(record.id, tool, payload)
        elif backend == "queued-local":
            worker = threading.Thread(
                target=self._queued_local_worker, args=(record.id, tool, payload),
                daemon=True,
            )
            worker.start()
        else:
            self._submit_remote(record.id, payload)
        return record.id

    def _execute_local(self, job_id: str, tool: str, payload: dict[str, Any]) -> None:
        self.store.transition(job_id, "running")
        try:
            result = self._executor(tool, payload, qubit_cap=self.qubit_cap)
        except QexError as exc:
            self.store.transition(job_id, "failed", error=exc.to_payload())
        else:
            self.store.transition(job_id, "completed", result=result)

    def _queued_local_worker(self, job_id: str, tool: str, payload: dict[str, Any]) -> None:
        delay = self.scheduler_delay
        if self.scheduler_jitter > 0.0:
            delay += random.uniform(0.0, self.scheduler_jitter)
        if delay > 0.0:
            time.sleep(delay)
        self._execute_local(job_id, tool, payload)

    def _submit_remote(self, job_id: str, payload: dict[str, Any]) -> None:
        if self.remote is None:
            self._fail(job_id, BackendUnavailableError("no remote service configured"))
            return
        try:
            body = self.remote.submit_job(
                qasm=payload.get("openqasm_code", ""),
                shots=payload.get("shots"),
                machine=payload.get("machine", "H2-1E"),
                seed=payload.get("seed"),
            )
        except QexError as exc:
            self._fail(job_id, exc)
            return
        self.store.set_remote_ref(job_id, body["job_id"])

    def _fail(self, job_id: str, exc: QexError) -> None:
        if self.store.get(job_id).status == "queued":
            self.store.transition(job_id, "running")
        self.store.transition(job_id, "failed", error=exc.to_payload())

    # --- polling and retrieval -------------------------------------------------

    def _refresh_remote(self, record: JobRecord) -> None:
        """Refresh a remote job's status, at most once per poll interval.

        Concurrent pollers of one job serialize on a per-job lock so the
        terminal transition happens exactly once.
        """
        if self.remote is None or record.remote_ref is None:
            return
        with self._lock:
            refresh_lock = self._refresh_locks.setdefault(record.id, threading.Lock())
        if not refresh_lock.acquire(blocking=False):
            return  # another poller is already refreshing this job
        try:
            with self._lock:
                last = self._last_refresh.get(record.id, 0.0)
                now = time.monotonic()
                if now - last < self.poll_interval:
                    return
                self._last_refresh[record.id] = now
            if self.store.get(record.id).status not in ("queued", "running"):
                return
            self._refresh_remote_locked(record)
        finally:
            refresh_lock.release()

    def _refresh_remote_locked(self, record: JobRecord) -> None:
        status = self.remote.job_status(record.remote_ref)
        if status == "completed":
            body = self.remote.job_result(record.remote_ref)
            counts = {key: int(value) for key, value in body["counts"].items()}
            shots = int(body["shots"])
            result = {
                "job_id": record.id,
                "status": "completed",
                "shots": shots,
                "counts": counts,
                "probabilities": probabilities_from_counts(counts, shots),
            }
            if self.store.get(record.id).status == "queued":
                self.store.transition(record.id, "running")
            self.store.transition(record.id, "completed", result=result)
        elif status == "failed":
            self._fail(record.id, BackendUnavailableError("remote job failed"))

    def poll(self, job_id: str) -> str:
        """Current status; remote jobs are refreshed lazily."""
        record = self.store.get(job_id)
        if record.backend == "remote" and record.status in ("queued", "running"):
            self._refresh_remote(record)
        return self.store.get(job_id).status

    def fetch_result(self, job_id: str) -> dict[str, Any]:
        """Stored result if completed; otherwise a status payload.

        A still-pending job is a success-shaped ``{"job_id", "status"}`` body,
        never an error: retrieval is expected to be retried. A failed job
        returns its structured error under ``"error"``.
        """
        status = self.poll(job_id)
        record = self.store.get(job_id)
        if status == "completed":
            assert record.result is not None
            return dict(record.result)
        if status == "failed":
            return {"job_id": job_id, "status": "failed", "error": record.error}
        return {"job_id": job_id, "status": status}

    def wait(self, job_id: str, timeout: float | None = None) -> str:
        """Block until the job is terminal (or timeout); returns the status."""
        deadline = None if timeout is None else time.monotonic() + timeout
        while True:
            status = self.poll(job_id)
            if status in ("completed", "failed"):
                return status
            remaining = None if deadline is None else deadline - time.monotonic()
            if remaining is not None and remaining <= 0:
                return status
            step = self.poll_interval if remaining is None else min(self.poll_interval, remaining)
            if self.store.wait_terminal(job_id, step):
                return self.store.get(job_id).status

    def list_jobs(self) -> list[dict[str, Any]]:
        """Summaries ordered by submission time."""
        return [record.summary() for record in self.store.list()]
