"""Dense state-vector execution of circuit IR.

Two primitives are provided on top of :func:`run`: measurement sampling
(:func:`sample`) and Pauli-observable expectation values (:func:`expectation`,
:func:`expectation_sampled`).

Sampling draws from the exact outcome distribution (multinomial over
``|amplitude|^2`` marginals) rather than collapsing the state per shot; this
is valid because mid-circuit measurement is rejected, and costs
``O(2^n + shots)``. Randomness comes from numpy's PCG64 generator, so a fixed
seed reproduces results bit-for-bit across platforms; when no seed is given
one is drawn from OS entropy and echoed back for replay.

Bitstring convention: character ``i`` (left to right) of an outcome key is
classical bit ``c[i]``; unmeasured classical bits read ``'0'``.
"""

from __future__ import annotations

import logging
import secrets
from dataclasses import dataclass

import numpy as np

from .circuit import BarrierOp, CircuitIR, GateOp, MeasureOp
from .errors import CapacityError, MidCircuitMeasureError, NoMeasurementError, PauliIndexError
from .gates import gate_matrix
from .observables import Observable

logger = logging.getLogger(__name__)

DEFAULT_QUBIT_CAP = 24

_PAULI_GATE = {"X": "x", "Y": "y", "Z": "z"}

# basis-change prefix mapping each axis eigenbasis onto the computational basis
_BASIS_CHANGE = {"X": ("h",), "Y": ("sdg", "h"), "Z": ()}


def _fresh_seed() -> int:
    return secrets.randbits(63)


class StateVector:
    """2^n complex amplitudes; qubit q is bit q (LSB) of the basis index."""

    def __init__(self, n_qubits: int, amplitudes: np.ndarray | None = None):
        self.n_qubits = n_qubits
        if amplitudes is None:
            self.amplitudes = np.zeros(2 ** n_qubits, dtype=np.complex128)
            self.amplitudes[0] = 1.0
        else:
            self.amplitudes = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
            if self.amplitudes.size != 2 ** n_qubits:
                raise ValueError("amplitude length does not match qubit count")

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def apply_matrix(self, matrix: np.ndarray, qubits: tuple[int, ...] | list[int]) -> None:
        """Apply a 2^k unitary to the given qubits via tensor contraction.

        The matrix reads its operands MSB-first; no 2^n x 2^n embedding is
        ever materialized.
        """
        n, k = self.n_qubits, len(qubits)
        tensor = self.amplitudes.reshape((2,) * n)
        axes = [n - 1 - q for q in qubits]
        mat = np.asarray(matrix, dtype=np.complex128).reshape((2,) * (2 * k))
        tensor = np.tensordot(mat, tensor, axes=(list(range(k, 2 * k)), axes))
        tensor = np.moveaxis(tensor, list(range(k)), axes)
        self.amplitudes = np.ascontiguousarray(tensor).reshape(-1)

    def apply_gate(self, op: GateOp) -> None:
        self.apply_matrix(gate_matrix(op.gate, op.params), op.qubits)


@dataclass
class Counts:
    """Measurement statistics: bitstring -> occurrences, plus the seed used."""

    counts: dict[str, int]
    shots: int
    seed: int


@dataclass
class SampledExpectation:
    """Shot-based estimate of an observable with its standard error."""

    value: float
    std_error: float
    shots: int
    seed: int


def _check_capacity(circuit: CircuitIR, qubit_cap: int | None) -> None:
    cap = DEFAULT_QUBIT_CAP if qubit_cap is None else qubit_cap
    if circuit.n_qubits > cap:
        raise CapacityError(
            f"circuit needs {circuit.n_qubits} qubits, engine capacity is {cap}"
        )


def split_terminal_measures(circuit: CircuitIR) -> tuple[list[GateOp], list[MeasureOp]]:
    """Separate gates from measurements, requiring all measures terminal."""
    gates: list[GateOp] = []
    measures: list[MeasureOp] = []
    for op in circuit.ops:
        if isinstance(op, MeasureOp):
            measures.append(op)
        elif isinstance(op, GateOp):
            if measures:
                raise MidCircuitMeasureError(
                    f"gate {op.gate!r} appears after a measurement; "
                    "mid-circuit measurement is not supported"
                )
            gates.append(op)
        elif isinstance(op, BarrierOp):
            continue
    return gates, measures


def run(circuit: CircuitIR, *, qubit_cap: int | None = None) -> StateVector:
    """State after applying the circuit's gates to |0...0>.

    Measurements, if present, must all be terminal; they are not applied.
    """
    _check_capacity(circuit, qubit_cap)
    gates, _ = split_terminal_measures(circuit)
    state = StateVector(circuit.n_qubits)
    for op in gates:
        state.apply_gate(op)
    return state


def _classical_distribution(
    state: StateVector, measures: list[MeasureOp], n_clbits: int
) -> tuple[np.ndarray, np.ndarray]:
    """Exact outcome distribution over classical-bit configurations.

    Returns (outcome integers, probabilities); outcome bit c is clbit c.
    Measurements are folded in program order, so later writes to a classical
    bit overwrite earlier ones.
    """
    probs = state.probabilities()
    basis = np.arange(probs.size, dtype=np.int64)
    outcomes = np.zeros(probs.size, dtype=np.int64)
    for op in measures:
        bit = (basis >> op.qubit) & 1
        outcomes = (outcomes & ~(1 << op.clbit)) | (bit << op.clbit)
    keys, inverse = np.unique(outcomes, return_inverse=True)
    agg = np.zeros(keys.size)
    np.add.at(agg, inverse, probs)
    return keys, agg


def _bitstring(outcome: int, n_clbits: int) -> str:
    return "".join("1" if (outcome >> c) & 1 else "0" for c in range(n_clbits))


def outcome_distribution(circuit: CircuitIR, *, qubit_cap: int | None = None) -> dict[str, float]:
    """Exact probability of every classical outcome with nonzero weight."""
    _check_capacity(circuit, qubit_cap)
    gates, measures = split_terminal_measures(circuit)
    if not measures:
        raise NoMeasurementError("circuit has no measurement")
    state = StateVector(circuit.n_qubits)
    for op in gates:
        state.apply_gate(op)
    keys, probs = _classical_distribution(state, measures, circuit.n_clbits)
    return {
        _bitstring(int(key), circuit.n_clbits): float(p)
        for key, p in zip(keys, probs)
        if p > 0.0
    }


def sample(circuit: CircuitIR, shots: int, seed: int | None = None,
           *, qubit_cap: int | None = None) -> Counts:
    """Draw ``shots`` multinomial samples from the circuit's exact outcome
    distribution using a seeded PCG64 generator."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    _check_capacity(circuit, qubit_cap)
    gates, measures = split_terminal_measures(circuit)
    if not measures:
        raise NoMeasurementError("circuit has no measurement")
    state = StateVector(circuit.n_qubits)
    for op in gates:
        state.apply_gate(op)
    keys, probs = _classical_distribution(state, measures, circuit.n_clbits)
    probs = probs / probs.sum()
    used_seed = _fresh_seed() if seed is None else int(seed)
    rng = np.random.default_rng(used_seed)
    draws = rng.multinomial(shots, probs)
    counts: dict[str, int] = {}
    order = np.argsort(keys)
    for k in order:
        if draws[k] > 0:
            counts[_bitstring(int(keys[k]), circuit.n_clbits)] = int(draws[k])
    return Counts(counts=counts, shots=shots, seed=used_seed)


def pauli_expectation(state: StateVector, observable: Observable) -> complex:
    """Raw complex <psi|O|psi>; the imaginary part is numerical noise for
    real-coefficient observables."""
    total = 0.0 + 0.0j
    for term in observable.terms:
        if term.is_identity:
            total += term.coeff
            continue
        scratch = state.copy()
        for qubit in sorted(term.factors):
            axis = term.factors[qubit]
            scratch.apply_matrix(gate_matrix(_PAULI_GATE[axis]), (qubit,))
        total += term.coeff * np.vdot(state.amplitudes, scratch.amplitudes)
    return complex(total)


def _validate_indices(circuit: CircuitIR, observable: Observable) -> None:
    if observable.max_index >= circuit.n_qubits:
        raise PauliIndexError(
            f"pauli index {observable.max_index} out of range for "
            f"{circuit.n_qubits}-qubit circuit"
        )


def _estimator_state(circuit: CircuitIR, qubit_cap: int | None) -> tuple[StateVector, CircuitIR]:
    _check_capacity(circuit, qubit_cap)
    gates, measures = split_terminal_measures(circuit)
    if measures:
        logger.warning(
            "ignoring %d terminal measurement(s) in estimator input", len(measures)
        )
    state = StateVector(circuit.n_qubits)
    for op in gates:
        state.apply_gate(op)
    return state, circuit


def expectation(circuit: CircuitIR, observable: Observable,
                *, qubit_cap: int | None = None) -> float:
    """Analytic <psi|O|psi> for the circuit's final state.

    Terminal measurements in the input are ignored (with a warning); each
    Pauli string is applied to a scratch copy and contracted against the
    state, identity terms contribute their coefficient exactly.
    """
    _validate_indices(circuit, observable)
    state, _ = _estimator_state(circuit, qubit_cap)
    return float(pauli_expectation(state, observable).real)


def expectation_sampled(circuit: CircuitIR, observable: Observable, shots: int,
                        seed: int | None = None,
                        *, qubit_cap: int | None = None) -> SampledExpectation:
    """Shot-based observable estimate.

    Each non-identity term is measured in its own basis: the term's qubits get
    the basis-change prefix (H for X; S-dagger then H for Y), ``shots``
    outcomes are drawn from the marginal distribution of those qubits, and the
    term expectation is the mean eigenvalue ``(-1)^parity``. Identity terms
    contribute exactly. The reported standard error combines the per-term
    binomial errors in quadrature.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    _validate_indices(circuit, observable)
    state, _ = _estimator_state(circuit, qubit_cap)
    used_seed = _fresh_seed() if seed is None else int(seed)
    rng = np.random.default_rng(used_seed)

    value = 0.0
    variance = 0.0
    for term in observable.terms:
        if term.is_identity:
            value += term.coeff
            continue
        rotated = state.copy()
        targets = sorted(term.factors)
        for qubit in targets:
            for gate in _BASIS_CHANGE[term.factors[qubit]]:
                rotated.apply_matrix(gate_matrix(gate), (qubit,))
        probs = rotated.probabilities()
        basis = np.arange(probs.size, dtype=np.int64)
        parity = np.zeros(probs.size, dtype=np.int64)
        for qubit in targets:
            parity ^= (basis >> qubit) & 1
        plus = float(probs[parity == 0].sum())
        minus = float(probs[parity == 1].sum())
        total = plus + minus
        draws = rng.multinomial(shots, [plus / total, minus / total])
        estimate = (draws[0] - draws[1]) / shots
        value += term.coeff * estimate
        variance += term.coeff ** 2 * max(0.0, 1.0 - estimate ** 2) / shots
    return SampledExpectation(
        value=value, std_error=float(np.sqrt(variance)), shots=shots, seed=used_seed
    )
