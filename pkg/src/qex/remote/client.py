"""HTTP client for the cloud-queue emulator's /v1 contract."""

from __future__ import annotations

from typing import Any

import requests

from ..errors import BackendUnavailableError, RemoteServiceError


class RemoteClient:
    """Thin wrapper over the emulator REST endpoints.

    Connection-level failures raise :class:`BackendUnavailableError`;
    structured service errors (4xx/5xx with a JSON ``error`` body) raise
    :class:`RemoteServiceError` relaying the embedded error.
    """

    def __init__(self, base_url: str, timeout: float = 10.0,
                 session: requests.Session | None = None):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self._session = session or requests.Session()

    def _request(self, method: str, path: str, body: dict[str, Any] | None = None) -> dict[str, Any]:
        url = f"{self.base_url}{path}"
        try:
            response = self._session.request(method, url, json=body, timeout=self.timeout)
        except (requests.ConnectionError, requests.Timeout) as exc:
            raise BackendUnavailableError(f"remote service unreachable at {url}: {exc}") from exc
        try:
            payload = response.json()
        except ValueError:
            payload = {}
        if response.status_code >= 400:
            error = payload.get("error") if isinstance(payload, dict) else None
            if error is None and isinstance(payload, dict) and "status" in payload:
                # 409: result requested before completion
                error = {"type": "JobPending", "message": "job not completed",
                         "status": payload["status"]}
            raise RemoteServiceError(
                f"remote service returned HTTP {response.status_code}",
                remote_error=error, http_status=response.status_code,
            )
        return payload

    def submit_job(self, qasm: str, shots: Any, machine: str = "H2-1E",
                   seed: int | None = None) -> dict[str, Any]:
        body: dict[str, Any] = {"qasm": qasm, "shots": shots, "machine": machine}
        if seed is not None:
            body["seed"] = seed
        return self._request("POST", "/v1/jobs", body)

    def job_status(self, remote_id: str) -> str:
        return self._request("GET", f"/v1/jobs/{remote_id}")["status"]

    def job_result(self, remote_id: str) -> dict[str, Any]:
        return self._request("GET", f"/v1/jobs/{remote_id}/result")
