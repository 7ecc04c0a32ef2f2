"""AST produced by the OpenQASM 2.0 parser, before lowering."""

from __future__ import annotations

from dataclasses import dataclass, field


# --- parameter expressions ----------------------------------------------------

class Expr:
    """Base class for angle-expression nodes."""


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class PiConst(Expr):
    pass


@dataclass(frozen=True)
class ParamRef(Expr):
    name: str


@dataclass(frozen=True)
class Unary(Expr):
    op: str  # only '-'
    operand: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # + - * / ^
    left: Expr
    right: Expr


# --- statements ----------------------------------------------------------------

@dataclass(frozen=True)
class Arg:
    """Register reference, optionally indexed. ``index is None`` means the
    whole register (or a formal qubit name inside a gate body)."""

    register: str
    index: int | None
    line: int
    column: int


@dataclass(frozen=True)
class QregDecl:
    name: str
    size: int
    line: int
    column: int


@dataclass(frozen=True)
class CregDecl:
    name: str
    size: int
    line: int
    column: int


@dataclass(frozen=True)
class GateCall:
    name: str
    params: tuple[Expr, ...]
    args: tuple[Arg, ...]
    line: int
    column: int


@dataclass(frozen=True)
class BarrierStmt:
    args: tuple[Arg, ...]
    line: int
    column: int


@dataclass(frozen=True)
class MeasureStmt:
    source: Arg
    target: Arg
    line: int
    column: int


@dataclass(frozen=True)
class GateDecl:
    name: str
    params: tuple[str, ...]
    qargs: tuple[str, ...]
    body: tuple[GateCall | BarrierStmt, ...]
    line: int
    column: int


Stmt = QregDecl | CregDecl | GateDecl | GateCall | BarrierStmt | MeasureStmt


@dataclass
class Program:
    """Top-level AST: optional version, resolved includes, statement list."""

    version: str | None = None
    includes: list[str] = field(default_factory=list)
    statements: list[Stmt] = field(default_factory=list)
