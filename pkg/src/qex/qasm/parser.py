"""Recursive-descent parser for OpenQASM 2.0.

Grammar notes:
  - The ``OPENQASM 2.0;`` header is optional (generated programs often omit it).
  - Only ``include "qelib1.inc";`` is accepted; it resolves to the built-in
    gate table, never to the filesystem.
  - ``if (...)`` and ``opaque`` are rejected with UnsupportedError.
  - Expression grammar: ``^`` is right-associative and binds tighter than
    unary minus; unary minus binds tighter than ``* /`` and ``+ -``.
"""

from __future__ import annotations

from ..errors import IncludeError, ParseError, UnsupportedError
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
from .tokens import Token, tokenize

STANDARD_INCLUDE = "qelib1.inc"


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # --- token plumbing ---------------------------------------------------

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def advance(self) -> Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            raise ParseError(
                "unexpected end of input",
                line=last.line if last else 1,
                column=last.column + len(last.lexeme) if last else 1,
            )
        self.pos += 1
        return tok

    def check(self, kind: str, lexeme: str | None = None) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == kind and (lexeme is None or tok.lexeme == lexeme)

    def expect(self, kind: str, lexeme: str | None = None, what: str | None = None) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != kind or (lexeme is not None and tok.lexeme != lexeme):
            expected = what or (lexeme if lexeme is not None else kind)
            found = f"{tok.lexeme!r}" if tok is not None else "end of input"
            line = tok.line if tok else (self.tokens[-1].line if self.tokens else 1)
            column = tok.column if tok else (self.tokens[-1].column if self.tokens else 1)
            raise ParseError(f"expected {expected}, found {found}", line=line, column=column)
        return self.advance()

    # --- top level ---------------------------------------------------------

    def parse_program(self) -> Program:
        program = Program()
        if self.check("keyword", "OPENQASM"):
            tok = self.advance()
            version = self.expect("real", what="version number")
            if version.lexeme != "2.0":
                raise UnsupportedError(
                    f"unsupported OpenQASM version {version.lexeme}",
                    line=tok.line, column=tok.column,
                )
            self.expect("symbol", ";")
            program.version = version.lexeme
        while not self.at_end():
            if self.check("keyword", "include"):
                program.includes.append(self.parse_include())
            else:
                program.statements.append(self.parse_statement())
        return program

    def parse_include(self) -> str:
        kw = self.advance()
        name_tok = self.expect("symbol", what="quoted include path")
        if not (name_tok.lexeme.startswith('"') and name_tok.lexeme.endswith('"')):
            raise ParseError("expected quoted include path", line=name_tok.line, column=name_tok.column)
        self.expect("symbol", ";")
        name = name_tok.lexeme[1:-1]
        if name != STANDARD_INCLUDE:
            raise IncludeError(
                f'only include "{STANDARD_INCLUDE}" is supported, got "{name}"',
                line=kw.line, column=kw.column,
            )
        return name

    def parse_statement(self) -> QregDecl | CregDecl | GateDecl | GateCall | BarrierStmt | MeasureStmt:
        tok = self.peek()
        assert tok is not None
        if tok.kind == "keyword":
            if tok.lexeme in ("qreg", "creg"):
                return self.parse_reg_decl()
            if tok.lexeme == "gate":
                return self.parse_gate_decl()
            if tok.lexeme == "measure":
                return self.parse_measure()
            if tok.lexeme == "barrier":
                return self.parse_barrier()
            if tok.lexeme == "if":
                raise UnsupportedError(
                    "'if' conditionals are not supported", line=tok.line, column=tok.column
                )
            if tok.lexeme == "opaque":
                raise UnsupportedError(
                    "'opaque' declarations are not supported", line=tok.line, column=tok.column
                )
            raise ParseError(f"unexpected {tok.lexeme!r}", line=tok.line, column=tok.column)
        if tok.kind == "identifier":
            return self.parse_gate_call()
        raise ParseError(f"unexpected {tok.lexeme!r}", line=tok.line, column=tok.column)

    # --- declarations ------------------------------------------------------

    def parse_reg_decl(self) -> QregDecl | CregDecl:
        kw = self.advance()
        name = self.expect("identifier", what="register name")
        self.expect("symbol", "[")
        size = self.expect("integer", what="register size")
        self.expect("symbol", "]")
        self.expect("symbol", ";")
        cls = QregDecl if kw.lexeme == "qreg" else CregDecl
        return cls(name.lexeme, int(size.lexeme), kw.line, kw.column)

    def parse_gate_decl(self) -> GateDecl:
        kw = self.advance()
        name = self.expect("identifier", what="gate name")
        params: list[str] = []
        if self.check("symbol", "("):
            self.advance()
            if not self.check("symbol", ")"):
                params.append(self.expect("identifier", what="parameter name").lexeme)
                while self.check("symbol", ","):
                    self.advance()
                    params.append(self.expect("identifier", what="parameter name").lexeme)
            self.expect("symbol", ")")
        qargs = [self.expect("identifier", what="qubit argument").lexeme]
        while self.check("symbol", ","):
            self.advance()
            qargs.append(self.expect("identifier", what="qubit argument").lexeme)
        self.expect("symbol", "{")
        body: list[GateCall | BarrierStmt] = []
        while not self.check("symbol", "}"):
            tok = self.peek()
            if tok is None:
                raise ParseError("unterminated gate body", line=kw.line, column=kw.column)
            if tok.kind == "keyword" and tok.lexeme == "barrier":
                body.append(self.parse_barrier())
            elif tok.kind == "identifier":
                body.append(self.parse_gate_call())
            else:
                raise ParseError(
                    f"only gate calls and barriers are allowed in a gate body, found {tok.lexeme!r}",
                    line=tok.line, column=tok.column,
                )
        self.expect("symbol", "}")
        return GateDecl(name.lexeme, tuple(params), tuple(qargs), tuple(body), kw.line, kw.column)

    # --- statements ----------------------------------------------------------

    def parse_argument(self) -> Arg:
        name = self.expect("identifier", what="register name")
        index: int | None = None
        if self.check("symbol", "["):
            self.advance()
            index_tok = self.expect("integer", what="index")
            self.expect("symbol", "]")
            index = int(index_tok.lexeme)
        return Arg(name.lexeme, index, name.line, name.column)

    def parse_measure(self) -> MeasureStmt:
        kw = self.advance()
        source = self.parse_argument()
        self.expect("symbol", "->")
        target = self.parse_argument()
        self.expect("symbol", ";")
        return MeasureStmt(source, target, kw.line, kw.column)

    def parse_barrier(self) -> BarrierStmt:
        kw = self.advance()
        args = [self.parse_argument()]
        while self.check("symbol", ","):
            self.advance()
            args.append(self.parse_argument())
        self.expect("symbol", ";")
        return BarrierStmt(tuple(args), kw.line, kw.column)

    def parse_gate_call(self) -> GateCall:
        name = self.advance()
        params: list[Expr] = []
        if self.check("symbol", "("):
            self.advance()
            if not self.check("symbol", ")"):
                params.append(self.parse_expr())
                while self.check("symbol", ","):
                    self.advance()
                    params.append(self.parse_expr())
            self.expect("symbol", ")")
        args = [self.parse_argument()]
        while self.check("symbol", ","):
            self.advance()
            args.append(self.parse_argument())
        self.expect("symbol", ";")
        return GateCall(name.lexeme, tuple(params), tuple(args), name.line, name.column)

    # --- expressions -----------------------------------------------------------
    # additive < multiplicative < unary minus < power (right-assoc) < atom

    def parse_expr(self) -> Expr:
        return self.parse_additive()

    def parse_additive(self) -> Expr:
        node = self.parse_multiplicative()
        while self.check("symbol", "+") or self.check("symbol", "-"):
            op = self.advance().lexeme
            node = BinOp(op, node, self.parse_multiplicative())
        return node

    def parse_multiplicative(self) -> Expr:
        node = self.parse_unary()
        while self.check("symbol", "*") or self.check("symbol", "/"):
            op = self.advance().lexeme
            node = BinOp(op, node, self.parse_unary())
        return node

    def parse_unary(self) -> Expr:
        if self.check("symbol", "-"):
            self.advance()
            return Unary("-", self.parse_unary())
        return self.parse_power()

    def parse_power(self) -> Expr:
        base = self.parse_atom()
        if self.check("symbol", "^"):
            self.advance()
            return BinOp("^", base, self.parse_unary())
        return base

    def parse_atom(self) -> Expr:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of expression", line=1, column=1)
        if tok.kind in ("integer", "real"):
            self.advance()
            return Num(float(tok.lexeme))
        if tok.kind == "keyword" and tok.lexeme == "pi":
            self.advance()
            return PiConst()
        if tok.kind == "identifier":
            self.advance()
            return ParamRef(tok.lexeme)
        if tok.kind == "symbol" and tok.lexeme == "(":
            self.advance()
            node = self.parse_expr()
            self.expect("symbol", ")")
            return node
        raise ParseError(f"unexpected {tok.lexeme!r} in expression", line=tok.line, column=tok.column)


def parse(tokens: list[Token]) -> Program:
    """Parse a token stream into a Program AST."""
    return _Parser(tokens).parse_program()


def parse_source(source: str) -> Program:
    """Tokenize and parse OpenQASM 2.0 text."""
    return parse(tokenize(source))
