"""Parser behavior: program structure, optional header, rejected features."""

from __future__ import annotations

import pytest

from helpers import GHZ_QASM
from qex.errors import IncludeError, ParseError, UnsupportedError
from qex.qasm import parse_source
from qex.qasm.ast_nodes import (
    BarrierStmt,
    CregDecl,
    GateCall,
    GateDecl,
    MeasureStmt,
    QregDecl,
)


def test_ghz_listing_structure():
    program = parse_source(GHZ_QASM)
    assert program.version is None  # header-less form is accepted
    assert program.includes == ["qelib1.inc"]
    assert len([s for s in program.statements if isinstance(s, QregDecl)]) == 1
    assert len([s for s in program.statements if isinstance(s, CregDecl)]) == 1
    gate_calls = [s for s in program.statements if isinstance(s, GateCall)]
    assert [c.name for c in gate_calls] == ["h", "cx", "cx"]
    measures = [s for s in program.statements if isinstance(s, MeasureStmt)]
    assert len(measures) == 1
    assert measures[0].source.index is None  # whole-register measure


def test_minimal_program():
    program = parse_source("OPENQASM 2.0; qreg q[1];")
    assert program.version == "2.0"
    assert len(program.statements) == 1


def test_version_header_optional():
    from qex.qasm import parse_qasm

    with_header = parse_qasm('OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[1];\nh q[0];')
    without_header = parse_qasm('include "qelib1.inc";\nqreg q[1];\nh q[0];')
    assert with_header == without_header


def test_wrong_version_rejected():
    with pytest.raises(UnsupportedError):
        parse_source("OPENQASM 3.0;\nqreg q[1];")


def test_if_conditional_unsupported():
    with pytest.raises(UnsupportedError) as excinfo:
        parse_source("qreg q[1]; creg c[1]; if (c==1) x q[0];")
    assert "if" in str(excinfo.value)
    assert excinfo.value.line == 1


def test_opaque_unsupported():
    with pytest.raises(UnsupportedError):
        parse_source("opaque magic q;")


def test_non_standard_include_rejected():
    with pytest.raises(IncludeError):
        parse_source('include "mylib.inc";\nqreg q[1];')


def test_parse_error_carries_location():
    with pytest.raises(ParseError) as excinfo:
        parse_source("qreg q[;")
    assert excinfo.value.line == 1
    assert excinfo.value.column is not None


def test_unexpected_eof():
    with pytest.raises(ParseError):
        parse_source("qreg q[")


def test_gate_declaration_captured():
    program = parse_source(
        "gate foo(theta) a, b { rz(theta) a; cx a, b; barrier a, b; }\nqreg q[2];"
    )
    decl = program.statements[0]
    assert isinstance(decl, GateDecl)
    assert decl.params == ("theta",)
    assert decl.qargs == ("a", "b")
    assert len(decl.body) == 3
    assert isinstance(decl.body[2], BarrierStmt)


def test_measure_in_gate_body_rejected():
    with pytest.raises(ParseError):
        parse_source("gate bad a { measure a -> c[0]; }")


def test_barrier_statement():
    program = parse_source("qreg q[2];\nbarrier q[0], q[1];")
    assert isinstance(program.statements[1], BarrierStmt)


def test_expression_parsing_shapes():
    program = parse_source("qreg q[1];\nu1(2*pi/4 + 1.5^2^1 - -3) q[0];")
    call = program.statements[1]
    assert isinstance(call, GateCall)
    assert len(call.params) == 1
