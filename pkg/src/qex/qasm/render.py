"""Render a circuit IR back to canonical OpenQASM 2.0 text.

The rendering is a fixed point: parsing and lowering the output reproduces
the input IR exactly (register tables included). Parameters print with
``repr`` so float values round-trip bit-exactly.
"""

from __future__ import annotations

from ..circuit import BarrierOp, CircuitIR, GateOp, MeasureOp


def _operand(index: int, table: dict[str, tuple[int, int]]) -> str:
    for name, (offset, size) in table.items():
        if offset <= index < offset + size:
            return f"{name}[{index - offset}]"
    raise ValueError(f"index {index} not covered by any register")


def _param(value: float) -> str:
    text = repr(float(value))
    # repr emits no parentheses, so a leading '-' re-parses as unary minus
    return text


def to_qasm(circuit: CircuitIR) -> str:
    """Canonical OpenQASM 2.0 serialization of a lowered circuit."""
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";']
    for name, (_, size) in sorted(circuit.qreg_table.items(), key=lambda kv: kv[1][0]):
        lines.append(f"qreg {name}[{size}];")
    for name, (_, size) in sorted(circuit.creg_table.items(), key=lambda kv: kv[1][0]):
        lines.append(f"creg {name}[{size}];")
    for op in circuit.ops:
        if isinstance(op, GateOp):
            params = f"({', '.join(_param(p) for p in op.params)})" if op.params else ""
            operands = ", ".join(_operand(q, circuit.qreg_table) for q in op.qubits)
            lines.append(f"{op.gate}{params} {operands};")
        elif isinstance(op, MeasureOp):
            lines.append(
                f"measure {_operand(op.qubit, circuit.qreg_table)} -> "
                f"{_operand(op.clbit, circuit.creg_table)};"
            )
        elif isinstance(op, BarrierOp):
            operands = ", ".join(_operand(q, circuit.qreg_table) for q in op.qubits)
            lines.append(f"barrier {operands};")
    return "\n".join(lines) + "\n"
