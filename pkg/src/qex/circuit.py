"""Executable circuit intermediate representation.

A lowered circuit is flat: registers are laid out contiguously in declaration
order, user-defined gates are fully macro-expanded to the built-in gate set,
and every parameter is a concrete float (radians).

Index convention used everywhere downstream: qubit ``q`` is bit ``(b >> q) & 1``
of a basis-state index ``b``, i.e. qubit 0 is the least significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class GateOp:
    """Application of one built-in gate to pairwise-distinct qubits."""

    gate: str
    params: tuple[float, ...]
    qubits: tuple[int, ...]


@dataclass(frozen=True)
class MeasureOp:
    """Projective readout of one qubit into one classical bit."""

    qubit: int
    clbit: int


@dataclass(frozen=True)
class BarrierOp:
    """Scheduling marker; a no-op for the dense engine."""

    qubits: tuple[int, ...]


Op = GateOp | MeasureOp | BarrierOp


@dataclass
class CircuitIR:
    """Validated, macro-expanded circuit over flat qubit/clbit indices."""

    n_qubits: int
    n_clbits: int
    qreg_table: dict[str, tuple[int, int]] = field(default_factory=dict)
    creg_table: dict[str, tuple[int, int]] = field(default_factory=dict)
    ops: list[Op] = field(default_factory=list)

    @property
    def gate_ops(self) -> list[GateOp]:
        return [op for op in self.ops if isinstance(op, GateOp)]

    @property
    def measure_ops(self) -> list[MeasureOp]:
        return [op for op in self.ops if isinstance(op, MeasureOp)]

    @property
    def has_measurements(self) -> bool:
        return any(isinstance(op, MeasureOp) for op in self.ops)

    def measured_clbits(self) -> list[int]:
        """Classical bit positions written by at least one measurement."""
        return sorted({op.clbit for op in self.measure_ops})
