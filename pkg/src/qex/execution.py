"""Turn validated tool payloads into result JSON bodies.

This layer is shared by the MCP endpoint, the CLI, and the job orchestrator,
so one payload produces one result shape no matter which surface ran it.
"""

from __future__ import annotations

import math
from typing import Any

from .circuit import CircuitIR
from .errors import ValidationError
from .observables import parse_observable_terms
from .qasm import parse_qasm
from .simulator import expectation, expectation_sampled, sample


def round_sig(value: float, digits: int = 6) -> float:
    """Round to at most ``digits`` significant digits."""
    if value == 0.0 or not math.isfinite(value):
        return value
    return float(f"{value:.{digits}g}")


def probabilities_from_counts(counts: dict[str, int], shots: int) -> dict[str, float]:
    """count/shots per outcome, rounded to 6 significant digits."""
    return {key: round_sig(count / shots) for key, count in counts.items()}


def compile_qasm(payload: dict[str, Any]) -> tuple[str, CircuitIR]:
    code = payload.get("openqasm_code")
    if not isinstance(code, str):
        raise ValidationError("openqasm_code must be a string")
    return code, parse_qasm(code)


def _require_shots(payload: dict[str, Any]) -> int:
    shots = payload.get("shots")
    if isinstance(shots, bool) or not isinstance(shots, int):
        raise ValidationError("shots must be an integer")
    if shots < 1:
        raise ValidationError("shots must be >= 1")
    return shots


def _optional_seed(payload: dict[str, Any]) -> int | None:
    seed = payload.get("seed")
    if seed is None:
        return None
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ValidationError("seed must be an integer")
    return seed


def run_sampler(payload: dict[str, Any], *, qubit_cap: int | None = None) -> dict[str, Any]:
    """Sampler result body: echoed code, shots, counts, probabilities, seed."""
    code, circuit = compile_qasm(payload)
    shots = _require_shots(payload)
    result = sample(circuit, shots, _optional_seed(payload), qubit_cap=qubit_cap)
    return {
        "openqasm_code": code,
        "shots": result.shots,
        "counts": result.counts,
        "probabilities": probabilities_from_counts(result.counts, result.shots),
        "seed": result.seed,
    }


def run_estimator(payload: dict[str, Any], *, qubit_cap: int | None = None) -> dict[str, Any]:
    """Estimator result body; shots null/absent selects the analytic path."""
    _, circuit = compile_qasm(payload)
    if "observable_terms" not in payload:
        raise ValidationError("observable_terms is required")
    observable = parse_observable_terms(payload["observable_terms"])
    shots = payload.get("shots")
    if shots is None:
        return {"expectation": expectation(circuit, observable, qubit_cap=qubit_cap)}
    if isinstance(shots, bool) or not isinstance(shots, int):
        raise ValidationError("shots must be an integer or null")
    if shots < 1:
        raise ValidationError("shots must be >= 1")
    estimate = expectation_sampled(
        circuit, observable, shots, _optional_seed(payload), qubit_cap=qubit_cap
    )
    return {
        "expectation": estimate.value,
        "shots": estimate.shots,
        "std_error": estimate.std_error,
        "seed": estimate.seed,
    }


_LOCAL_TOOLS = {
    "sampler": run_sampler,
    "estimator": run_estimator,
}


def execute_tool(tool: str, payload: dict[str, Any], *, qubit_cap: int | None = None) -> dict[str, Any]:
    """Dispatch a locally executable tool by short name."""
    try:
        runner = _LOCAL_TOOLS[tool]
    except KeyError:
        raise ValueError(f"not a locally executable tool: {tool!r}") from None
    return runner(payload, qubit_cap=qubit_cap)
