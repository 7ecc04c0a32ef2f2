"""qex: OpenQASM 2.0 execution toolkit.

A dense state-vector engine with measurement sampling and Pauli-observable
expectation values, exposed three ways: a Python API, an MCP tool server over
newline-delimited JSON-RPC stdio, and a CLI. A bundled HTTP service emulates
an asynchronous cloud quantum queue for remote-execution workflows.
"""

__version__ = "0.1.0"

from .circuit import BarrierOp, CircuitIR, GateOp, MeasureOp
from .observables import Observable, PauliTerm, parse_observable_terms
from .qasm import parse_qasm, to_qasm
from .simulator import (
    Counts,
    SampledExpectation,
    StateVector,
    expectation,
    expectation_sampled,
    outcome_distribution,
    run,
    sample,
)

__all__ = [
    "__version__",
    "BarrierOp", "CircuitIR", "GateOp", "MeasureOp",
    "Observable", "PauliTerm", "parse_observable_terms",
    "parse_qasm", "to_qasm",
    "Counts", "SampledExpectation", "StateVector",
    "expectation", "expectation_sampled", "outcome_distribution", "run", "sample",
]
