"""Lowering: register layout, macro expansion, broadcast, expression
evaluation, and the canonical-render round trip."""

from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import numpy as np

from helpers import GHZ_QASM, QAOA_QASM, random_circuit
from qex.circuit import BarrierOp, GateOp, MeasureOp
from qex.errors import SemanticError
from qex.gates import GATE_SIGNATURES
from qex.qasm import parse_qasm, to_qasm


def test_ghz_lowering():
    circuit = parse_qasm(GHZ_QASM)
    assert circuit.n_qubits == 3
    assert circuit.n_clbits == 3
    assert circuit.ops == [
        GateOp("h", (), (0,)),
        GateOp("cx", (), (0, 1)),
        GateOp("cx", (), (0, 2)),
        MeasureOp(0, 0),
        MeasureOp(1, 1),
        MeasureOp(2, 2),
    ]


def test_qaoa_lowering():
    circuit = parse_qasm(QAOA_QASM)
    assert circuit.n_qubits == 3
    assert not circuit.has_measurements
    assert len(circuit.ops) == 15
    assert circuit.ops[-3:] == [
        GateOp("rx", (1.6,), (0,)),
        GateOp("rx", (1.6,), (1,)),
        GateOp("rx", (1.6,), (2,)),
    ]


def test_registers_contiguous_in_declaration_order():
    circuit = parse_qasm("qreg a[2];\nqreg b[3];\ncreg c[1];\nx b[0];")
    assert circuit.qreg_table == {"a": (0, 2), "b": (2, 3)}
    assert circuit.n_qubits == 5
    assert circuit.ops == [GateOp("x", (), (2,))]


def test_measure_size_mismatch():
    with pytest.raises(SemanticError):
        parse_qasm("qreg q[3];\ncreg c[2];\nmeasure q -> c;")


def test_measure_mixed_forms_rejected():
    with pytest.raises(SemanticError):
        parse_qasm("qreg q[2];\ncreg c[2];\nmeasure q[0] -> c;")


def test_undeclared_register():
    with pytest.raises(SemanticError):
        parse_qasm("qreg q[1];\nh r[0];")


def test_index_out_of_bounds():
    with pytest.raises(SemanticError) as excinfo:
        parse_qasm("qreg q[2];\nh q[2];")
    assert excinfo.value.line == 2


def test_duplicate_qubit_operand():
    with pytest.raises(SemanticError):
        parse_qasm("qreg q[2];\ncx q[0], q[0];")


def test_arity_mismatch():
    with pytest.raises(SemanticError):
        parse_qasm("qreg q[2];\ncx q[0];")


def test_param_count_mismatch():
    with pytest.raises(SemanticError):
        parse_qasm("qreg q[1];\nrx q[0];")
    with pytest.raises(SemanticError):
        parse_qasm("qreg q[1];\nrx(0.1, 0.2) q[0];")


def test_zero_size_register_rejected():
    with pytest.raises(SemanticError):
        parse_qasm("qreg q[0];")


def test_duplicate_register_name():
    with pytest.raises(SemanticError):
        parse_qasm("qreg q[1];\ncreg q[1];")


def test_user_gate_expansion():
    circuit = parse_qasm(
        "gate zz(gamma) a, b { cx a, b; rz(2*gamma) b; cx a, b; }\n"
        "qreg q[2];\nzz(0.7) q[0], q[1];"
    )
    assert circuit.ops == [
        GateOp("cx", (), (0, 1)),
        GateOp("rz", (1.4,), (1,)),
        GateOp("cx", (), (0, 1)),
    ]


def test_nested_user_gates():
    circuit = parse_qasm(
        "gate inner a { h a; }\n"
        "gate outer a, b { inner a; cx a, b; inner b; }\n"
        "qreg q[2];\nouter q[0], q[1];"
    )
    assert [op.gate for op in circuit.ops] == ["h", "cx", "h"]


def test_self_referential_gate_rejected():
    with pytest.raises(SemanticError):
        parse_qasm("gate loop a { loop a; }\nqreg q[1];\nloop q[0];")


def test_gate_redefinition_rejected():
    with pytest.raises(SemanticError):
        parse_qasm("gate h a { x a; }")


def test_macro_duplicate_actual_qubit_rejected():
    with pytest.raises(SemanticError):
        parse_qasm("gate two a, b { cx a, b; }\nqreg q[2];\ntwo q[1], q[1];")


def test_whole_register_broadcast():
    circuit = parse_qasm("qreg q[3];\nh q;")
    assert circuit.ops == [GateOp("h", (), (q,)) for q in range(3)]


def test_two_register_broadcast():
    circuit = parse_qasm("qreg a[2];\nqreg b[2];\ncx a, b;")
    assert circuit.ops == [GateOp("cx", (), (0, 2)), GateOp("cx", (), (1, 3))]


def test_broadcast_mixed_scalar():
    circuit = parse_qasm("qreg a[1];\nqreg b[2];\ncx a[0], b;")
    assert circuit.ops == [GateOp("cx", (), (0, 1)), GateOp("cx", (), (0, 2))]


def test_broadcast_size_mismatch():
    with pytest.raises(SemanticError):
        parse_qasm("qreg a[2];\nqreg b[3];\ncx a, b;")


def test_barrier_preserved_and_expanded():
    circuit = parse_qasm("qreg q[2];\nbarrier q;\nh q[0];")
    assert circuit.ops[0] == BarrierOp((0, 1))


@pytest.mark.parametrize("expr,expected", [
    ("pi", math.pi),
    ("2*pi/4", math.pi / 2),
    ("-2^2", -4.0),        # unary minus binds looser than ^
    ("2^-1", 0.5),
    ("2^3^2", 512.0),      # right-associative power
    ("1+2*3", 7.0),
    ("(1+2)*3", 9.0),
    ("--1.5", 1.5),
])
def test_expression_evaluation(expr, expected):
    circuit = parse_qasm(f"qreg q[1];\nrz({expr}) q[0];")
    op = circuit.ops[0]
    assert isinstance(op, GateOp)
    assert op.params[0] == pytest.approx(expected, abs=1e-12)


def test_division_by_zero():
    with pytest.raises(SemanticError):
        parse_qasm("qreg q[1];\nrz(1/0) q[0];")


def test_non_finite_power():
    with pytest.raises(SemanticError):
        parse_qasm("qreg q[1];\nrz((-2.0)^0.5) q[0];")


def test_unbound_parameter_at_top_level():
    with pytest.raises(SemanticError):
        parse_qasm("qreg q[1];\nrz(theta) q[0];")


def test_every_builtin_gate_lowers():
    for name, (n_params, n_qubits) in GATE_SIGNATURES.items():
        params = f"({', '.join('0.5' for _ in range(n_params))})" if n_params else ""
        operands = ", ".join(f"q[{i}]" for i in range(n_qubits))
        circuit = parse_qasm(f"qreg q[3];\n{name}{params} {operands};")
        op = circuit.ops[0]
        assert isinstance(op, GateOp) and op.gate == name
        # wrong arity must raise
        bad_operands = ", ".join(f"q[{i}]" for i in range(n_qubits + 1))
        with pytest.raises(SemanticError):
            parse_qasm(f"qreg q[4];\n{name}{params} {bad_operands};")


# --- round trip property ---------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(
    seed=st.integers(0, 2 ** 31 - 1),
    n_qubits=st.integers(1, 5),
    depth=st.integers(0, 12),
    measure=st.booleans(),
)
def test_render_parse_round_trip(seed, n_qubits, depth, measure):
    """Canonical rendering re-parses to the identical IR."""
    circuit = random_circuit(np.random.default_rng(seed), n_qubits, depth, measure=measure)
    rendered = to_qasm(circuit)
    again = parse_qasm(rendered)
    assert again == circuit
    assert to_qasm(again) == rendered


def test_round_trip_multi_register():
    circuit = parse_qasm(
        "qreg a[1];\nqreg b[2];\ncreg c[2];\nh a[0];\ncx a[0], b[1];\n"
        "barrier a[0], b[0];\nmeasure b[0] -> c[0];\nmeasure b[1] -> c[1];"
    )
    assert parse_qasm(to_qasm(circuit)) == circuit
