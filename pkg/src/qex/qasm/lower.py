"""Lower a parsed OpenQASM 2.0 program to the flat circuit IR.

Registers are laid out contiguously in declaration order. User-defined gates
are recursively macro-expanded down to the built-in gate set with formal
parameters substituted and evaluated to radians. Whole-register operands
broadcast per the OpenQASM 2.0 rules.
"""

from __future__ import annotations

import math
from typing import Mapping

from ..circuit import BarrierOp, CircuitIR, GateOp, MeasureOp, Op
from ..errors import SemanticError
from ..gates import GATE_SIGNATURES
from .ast_nodes import (
    Arg,
    BarrierStmt,
    BinOp,
    CregDecl,
    Expr,
    GateCall,
    GateDecl,
    MeasureStmt,
    Num,
    ParamRef,
    PiConst,
    Program,
    QregDecl,
    Unary,
)


def eval_expr(expr: Expr, env: Mapping[str, float], line: int, column: int) -> float:
    """Evaluate an angle expression with all formal parameters bound."""
    if isinstance(expr, Num):
        return expr.value
    if isinstance(expr, PiConst):
        return math.pi
    if isinstance(expr, ParamRef):
        if expr.name not in env:
            raise SemanticError(f"undefined parameter {expr.name!r}", line=line, column=column)
        return env[expr.name]
    if isinstance(expr, Unary):
        return -eval_expr(expr.operand, env, line, column)
    if isinstance(expr, BinOp):
        left = eval_expr(expr.left, env, line, column)
        right = eval_expr(expr.right, env, line, column)
        try:
            if expr.op == "+":
                value = left + right
            elif expr.op == "-":
                value = left - right
            elif expr.op == "*":
                value = left * right
            elif expr.op == "/":
                if right == 0.0:
                    raise SemanticError("division by zero", line=line, column=column)
                value = left / right
            elif expr.op == "^":
                value = math.pow(left, right)
            else:  # pragma: no cover - parser emits no other operators
                raise SemanticError(f"unknown operator {expr.op!r}", line=line, column=column)
        except (OverflowError, ValueError):
            raise SemanticError("expression does not evaluate to a finite real",
                                line=line, column=column) from None
        if not math.isfinite(value):
            raise SemanticError("expression does not evaluate to a finite real",
                                line=line, column=column)
        return value
    raise SemanticError("malformed expression", line=line, column=column)  # pragma: no cover


class _Lowering:
    def __init__(self) -> None:
        self.qreg_table: dict[str, tuple[int, int]] = {}
        self.creg_table: dict[str, tuple[int, int]] = {}
        self.user_gates: dict[str, GateDecl] = {}
        self.n_qubits = 0
        self.n_clbits = 0
        self.ops: list[Op] = []

    # --- declarations -------------------------------------------------------

    def declare(self, stmt: QregDecl | CregDecl) -> None:
        table = self.qreg_table if isinstance(stmt, QregDecl) else self.creg_table
        if stmt.name in self.qreg_table or stmt.name in self.creg_table:
            raise SemanticError(f"register {stmt.name!r} already declared",
                                line=stmt.line, column=stmt.column)
        if stmt.size < 1:
            raise SemanticError(f"register {stmt.name!r} must have positive size",
                                line=stmt.line, column=stmt.column)
        if isinstance(stmt, QregDecl):
            table[stmt.name] = (self.n_qubits, stmt.size)
            self.n_qubits += stmt.size
        else:
            table[stmt.name] = (self.n_clbits, stmt.size)
            self.n_clbits += stmt.size

    def declare_gate(self, stmt: GateDecl) -> None:
        if stmt.name in GATE_SIGNATURES or stmt.name in self.user_gates:
            raise SemanticError(f"gate {stmt.name!r} already defined",
                                line=stmt.line, column=stmt.column)
        if len(set(stmt.params)) != len(stmt.params) or len(set(stmt.qargs)) != len(stmt.qargs):
            raise SemanticError(f"duplicate formal name in gate {stmt.name!r}",
                                line=stmt.line, column=stmt.column)
        self.user_gates[stmt.name] = stmt

    # --- operand resolution ---------------------------------------------------

    def resolve(self, arg: Arg, table: dict[str, tuple[int, int]], what: str) -> list[int]:
        """Flatten an argument to global indices; a bare name covers the register."""
        if arg.register not in table:
            raise SemanticError(f"undeclared {what} register {arg.register!r}",
                                line=arg.line, column=arg.column)
        offset, size = table[arg.register]
        if arg.index is None:
            return list(range(offset, offset + size))
        if not 0 <= arg.index < size:
            raise SemanticError(
                f"index {arg.index} out of bounds for {what} register "
                f"{arg.register!r} of size {size}",
                line=arg.line, column=arg.column,
            )
        return [offset + arg.index]

    def broadcast(self, call: GateCall) -> list[tuple[int, ...]]:
        """OpenQASM broadcast: bare registers must share one size; indexed
        operands are repeated across the broadcast width."""
        resolved = [self.resolve(arg, self.qreg_table, "quantum") for arg in call.args]
        widths = {len(ix) for arg, ix in zip(call.args, resolved) if arg.index is None}
        if len(widths) > 1:
            raise SemanticError(
                f"mismatched register sizes in {call.name!r} operands",
                line=call.line, column=call.column,
            )
        width = widths.pop() if widths else 1
        rows = []
        for k in range(width):
            row = tuple(ix[k] if len(ix) > 1 else ix[0] for ix in resolved)
            rows.append(row)
        return rows

    # --- gate expansion ----------------------------------------------------------

    def emit_gate(self, name: str, params: list[float], qubits: tuple[int, ...],
                  line: int, column: int, stack: tuple[str, ...]) -> None:
        if name in stack:
            raise SemanticError(f"recursive definition of gate {name!r}", line=line, column=column)
        if name in GATE_SIGNATURES:
            n_params, n_qubits = GATE_SIGNATURES[name]
            if len(params) != n_params:
                raise SemanticError(
                    f"gate {name!r} takes {n_params} parameter(s), got {len(params)}",
                    line=line, column=column,
                )
            if len(qubits) != n_qubits:
                raise SemanticError(
                    f"gate {name!r} takes {n_qubits} qubit(s), got {len(qubits)}",
                    line=line, column=column,
                )
            if len(set(qubits)) != len(qubits):
                raise SemanticError(f"duplicate qubit operand in {name!r}",
                                    line=line, column=column)
            self.ops.append(GateOp(name, tuple(params), qubits))
            return
        if name in self.user_gates:
            decl = self.user_gates[name]
            if len(params) != len(decl.params):
                raise SemanticError(
                    f"gate {name!r} takes {len(decl.params)} parameter(s), got {len(params)}",
                    line=line, column=column,
                )
            if len(qubits) != len(decl.qargs):
                raise SemanticError(
                    f"gate {name!r} takes {len(decl.qargs)} qubit(s), got {len(qubits)}",
                    line=line, column=column,
                )
            if len(set(qubits)) != len(qubits):
                raise SemanticError(f"duplicate qubit operand in {name!r}",
                                    line=line, column=column)
            env = dict(zip(decl.params, params))
            qmap = dict(zip(decl.qargs, qubits))
            for stmt in decl.body:
                if isinstance(stmt, BarrierStmt):
                    self.ops.append(BarrierOp(tuple(
                        self._formal_qubit(arg, qmap) for arg in stmt.args
                    )))
                    continue
                values = [eval_expr(p, env, stmt.line, stmt.column) for p in stmt.params]
                operands = tuple(self._formal_qubit(arg, qmap) for arg in stmt.args)
                self.emit_gate(stmt.name, values, operands, stmt.line, stmt.column,
                               stack + (name,))
            return
        raise SemanticError(f"unknown gate {name!r}", line=line, column=column)

    @staticmethod
    def _formal_qubit(arg: Arg, qmap: Mapping[str, int]) -> int:
        if arg.index is not None or arg.register not in qmap:
            raise SemanticError(f"unknown qubit {arg.register!r} in gate body",
                                line=arg.line, column=arg.column)
        return qmap[arg.register]

    # --- statement dispatch ---------------------------------------------------

    def lower_measure(self, stmt: MeasureStmt) -> None:
        sources = self.resolve(stmt.source, self.qreg_table, "quantum")
        targets = self.resolve(stmt.target, self.creg_table, "classical")
        if (stmt.source.index is None) != (stmt.target.index is None) or \
                len(sources) != len(targets):
            raise SemanticError(
                "measure operand sizes do not match "
                f"({len(sources)} qubit(s) -> {len(targets)} bit(s))",
                line=stmt.line, column=stmt.column,
            )
        for qubit, clbit in zip(sources, targets):
            self.ops.append(MeasureOp(qubit, clbit))

    def run(self, program: Program) -> CircuitIR:
        for stmt in program.statements:
            if isinstance(stmt, (QregDecl, CregDecl)):
                self.declare(stmt)
            elif isinstance(stmt, GateDecl):
                self.declare_gate(stmt)
            elif isinstance(stmt, GateCall):
                values = [eval_expr(p, {}, stmt.line, stmt.column) for p in stmt.params]
                for operands in self.broadcast(stmt):
                    self.emit_gate(stmt.name, values, operands, stmt.line, stmt.column, ())
            elif isinstance(stmt, BarrierStmt):
                qubits: list[int] = []
                for arg in stmt.args:
                    qubits.extend(self.resolve(arg, self.qreg_table, "quantum"))
                self.ops.append(BarrierOp(tuple(qubits)))
            elif isinstance(stmt, MeasureStmt):
                self.lower_measure(stmt)
            else:  # pragma: no cover
                raise SemanticError("unsupported statement")
        return CircuitIR(
            n_qubits=self.n_qubits,
            n_clbits=self.n_clbits,
            qreg_table=self.qreg_table,
            creg_table=self.creg_table,
            ops=self.ops,
        )


def lower(program: Program) -> CircuitIR:
    """Semantic analysis and macro expansion of a parsed program."""
    return _Lowering().run(program)
