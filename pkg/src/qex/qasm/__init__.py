"""OpenQASM 2.0 frontend: lexing, parsing, lowering, and rendering."""

from __future__ import annotations

from ..circuit import CircuitIR
from .lower import lower
from .parser import parse, parse_source
from .render import to_qasm
from .tokens import Token, tokenize

__all__ = ["Token", "tokenize", "parse", "parse_source", "lower", "to_qasm", "parse_qasm"]


def parse_qasm(source: str) -> CircuitIR:
    """Full pipeline: source text to executable circuit IR."""
    return lower(parse(tokenize(source)))
