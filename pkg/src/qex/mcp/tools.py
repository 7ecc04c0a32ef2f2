"""MCP tool registry: descriptors, argument validation, and handlers.

Four tools are advertised. The generic names are canonical; the legacy
CUDA-Q/Quantinuum-style names remain callable as aliases so existing prompts
keep working against this server.

Domain failures surface as ``is_error`` tool results carrying the structured
error JSON, never as JSON-RPC protocol errors; only schema violations are
rejected at the protocol layer.
"""

from __future__ import annotations

import json
from typing import Any

from ..errors import QexError, UnknownJobError
from ..jobs import Orchestrator

TOOL_ALIASES = {
    "sampler_qasm_cudaq": "sampler_qasm_sim",
    "estimator_qasm_cudaq": "estimator_qasm_sim",
    "sampler_qasm_quantinuum": "sampler_qasm_remote",
    "get_quantinuum_result": "get_remote_result",
}

_OBSERVABLE_TERMS_SCHEMA = {
    "type": "array",
    "items": {
        "type": "object",
        "properties": {
            "coeff": {"type": "number"},
            "pauli": {"type": "string"},
        },
        "required": ["coeff", "pauli"],
    },
}

TOOL_DESCRIPTORS: list[dict[str, Any]] = [
    {
        "name": "sampler_qasm_sim",
        "description": (
            "Execute an OpenQASM 2.0 circuit on the local state-vector engine and "
            "return measurement counts over the requested number of shots. The "
            "circuit must end with measurements. Optional seed gives reproducible "
            "counts; backend 'queued-local' routes through the simulated batch queue."
        ),
        "inputSchema": {
            "type": "object",
            "properties": {
                "openqasm_code": {"type": "string", "description": "OpenQASM 2.0 source"},
                "shots": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer"},
                "backend": {"type": "string", "enum": ["inline", "queued-local"]},
            },
            "required": ["openqasm_code", "shots"],
            "additionalProperties": False,
        },
    },
    {
        "name": "estimator_qasm_sim",
        "description": (
            "Compute the expectation value of a Pauli-sum observable for the final "
            "state of an OpenQASM 2.0 circuit. observable_terms is a JSON array of "
            '{"coeff": <number>, "pauli": "<tokens like \'Z0 Z1\'>"} objects. '
            "shots null (or omitted) selects the analytic value; an integer selects "
            "shot-based estimation with a reported standard error."
        ),
        "inputSchema": {
            "type": "object",
            "properties": {
                "openqasm_code": {"type": "string", "description": "OpenQASM 2.0 source"},
                "observable_terms": _OBSERVABLE_TERMS_SCHEMA,
                "shots": {"type": ["integer", "null"], "minimum": 1},
                "seed": {"type": "integer"},
            },
            "required": ["openqasm_code", "observable_terms"],
            "additionalProperties": False,
        },
    },
    {
        "name": "sampler_qasm_remote",
        "description": (
            "Submit an OpenQASM 2.0 circuit to the remote cloud-queue service for "
            "asynchronous execution. Returns a job_id immediately; retrieve counts "
            "later with get_remote_result."
        ),
        "inputSchema": {
            "type": "object",
            "properties": {
                "openqasm_code": {"type": "string", "description": "OpenQASM 2.0 source"},
                "shots": {"type": "integer", "minimum": 1},
                "machine": {"type": "string", "description": "target machine label"},
                "seed": {"type": "integer"},
            },
            "required": ["openqasm_code", "shots"],
            "additionalProperties": False,
        },
    },
    {
        "name": "get_remote_result",
        "description": (
            "Fetch the result of a previously submitted job. While the job is "
            "still queued or running, returns its status (retry later); once "
            "completed, returns counts and probabilities."
        ),
        "inputSchema": {
            "type": "object",
            "properties": {
                "job_id": {"type": "string"},
            },
            "required": ["job_id"],
            "additionalProperties": False,
        },
    },
]

TOOL_NAMES = [descriptor["name"] for descriptor in TOOL_DESCRIPTORS]
_SCHEMAS = {descriptor["name"]: descriptor["inputSchema"] for descriptor in TOOL_DESCRIPTORS}

# One schema-valid example payload per tool; kept beside the descriptors so the
# self-consistency test can confirm every schema accepts its own golden input.
GOLDEN_PAYLOADS: dict[str, dict[str, Any]] = {
    "sampler_qasm_sim": {
        "openqasm_code": "qreg q[1];\ncreg c[1];\nh q[0];\nmeasure q -> c;",
        "shots": 100,
        "seed": 1,
    },
    "estimator_qasm_sim": {
        "openqasm_code": "qreg q[2];\nh q[0];\ncx q[0], q[1];",
        "observable_terms": [{"coeff": 1.0, "pauli": "Z0 Z1"}],
        "shots": None,
    },
    "sampler_qasm_remote": {
        "openqasm_code": "qreg q[1];\ncreg c[1];\nx q[0];\nmeasure q -> c;",
        "shots": 10,
        "machine": "H2-1E",
    },
    "get_remote_result": {"job_id": "0123abcd"},
}


class SchemaViolation(Exception):
    """Arguments do not match the advertised input schema (-32602)."""


def _type_ok(value: Any, expected: str) -> bool:
    if expected == "string":
        return isinstance(value, str)
    if expected == "integer":
        return isinstance(value, int) and not isinstance(value, bool)
    if expected == "number":
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if expected == "boolean":
        return isinstance(value, bool)
    if expected == "array":
        return isinstance(value, list)
    if expected == "object":
        return isinstance(value, dict)
    if expected == "null":
        return value is None
    return False


def _validate(value: Any, schema: dict[str, Any], path: str) -> None:
    expected = schema.get("type")
    if expected is not None:
        options = expected if isinstance(expected, list) else [expected]
        if not any(_type_ok(value, option) for option in options):
            raise SchemaViolation(f"{path}: expected {' or '.join(options)}")
    if "enum" in schema and value not in schema["enum"]:
        raise SchemaViolation(f"{path}: must be one of {schema['enum']}")
    if "minimum" in schema and isinstance(value, (int, float)) and not isinstance(value, bool):
        if value < schema["minimum"]:
            raise SchemaViolation(f"{path}: must be >= {schema['minimum']}")
    if isinstance(value, dict) and (schema.get("type") == "object" or "properties" in schema):
        properties = schema.get("properties", {})
        for name in schema.get("required", []):
            if name not in value:
                raise SchemaViolation(f"{path}: missing required property {name!r}")
        if schema.get("additionalProperties") is False:
            unknown = set(value) - set(properties)
            if unknown:
                raise SchemaViolation(f"{path}: unknown propert{'ies' if len(unknown) > 1 else 'y'} "
                                      f"{sorted(unknown)}")
        for name, subschema in properties.items():
            if name in value:
                _validate(value[name], subschema, f"{path}.{name}")
    if isinstance(value, list) and "items" in schema:
        for index, item in enumerate(value):
            _validate(item, schema["items"], f"{path}[{index}]")


def validate_arguments(tool: str, arguments: Any) -> None:
    """Check tools/call arguments against the advertised schema."""
    if not isinstance(arguments, dict):
        raise SchemaViolation("arguments: expected object")
    _validate(arguments, _SCHEMAS[tool], "arguments")


def resolve_tool(name: str) -> str | None:
    """Canonical tool name for ``name``, resolving aliases; None if unknown."""
    if name in _SCHEMAS:
        return name
    return TOOL_ALIASES.get(name)


class ToolHandlers:
    """Bind the tool surface to one orchestrator instance."""

    def __init__(self, orchestrator: Orchestrator):
        self.orchestrator = orchestrator

    def call(self, tool: str, arguments: dict[str, Any]) -> tuple[dict[str, Any], bool]:
        """Run a canonical tool; returns (result body, is_error)."""
        handler = getattr(self, "_" + tool)
        return handler(arguments)

    def _run_and_collect(self, tool: str, payload: dict[str, Any],
                         backend: str) -> tuple[dict[str, Any], bool]:
        job_id = self.orchestrator.submit(tool, payload, backend)
        self.orchestrator.wait(job_id)
        record = self.orchestrator.store.get(job_id)
        if record.status == "completed":
            assert record.result is not None
            return record.result, False
        assert record.error is not None
        return {"error": record.error}, True

    def _sampler_qasm_sim(self, args: dict[str, Any]) -> tuple[dict[str, Any], bool]:
        backend = args.get("backend", "inline")
        payload = {key: args[key] for key in ("openqasm_code", "shots", "seed") if key in args}
        return self._run_and_collect("sampler", payload, backend)

    def _estimator_qasm_sim(self, args: dict[str, Any]) -> tuple[dict[str, Any], bool]:
        payload = {key: args[key] for key in
                   ("openqasm_code", "observable_terms", "shots", "seed") if key in args}
        return self._run_and_collect("estimator", payload, "inline")

    def _sampler_qasm_remote(self, args: dict[str, Any]) -> tuple[dict[str, Any], bool]:
        payload = {key: args[key] for key in
                   ("openqasm_code", "shots", "machine", "seed") if key in args}
        job_id = self.orchestrator.submit("sampler", payload, "remote")
        record = self.orchestrator.store.get(job_id)
        if record.status == "failed":
            assert record.error is not None
            return {"error": record.error}, True
        return {
            "job_id": job_id,
            "status": record.status,
            "machine": payload.get("machine", "H2-1E"),
        }, False

    def _get_remote_result(self, args: dict[str, Any]) -> tuple[dict[str, Any], bool]:
        job_id = args["job_id"]
        try:
            body = self.orchestrator.fetch_result(job_id)
        except UnknownJobError as exc:
            return {"error": exc.to_payload()}, True
        except QexError as exc:  # pragma: no cover - defensive
            return {"error": exc.to_payload()}, True
        if body.get("status") == "failed":
            return {"error": body.get("error"), "job_id": job_id}, True
        return body, False


def tool_result(body: dict[str, Any], is_error: bool) -> dict[str, Any]:
    """Wrap a result body in the MCP tool-result envelope."""
    return {
        "content": [{"type": "text", "text": json.dumps(body)}],
        "isError": is_error,
    }
