"""OpenQASM 2.0 lexer."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import LexError

KEYWORDS = frozenset(
    {"OPENQASM", "include", "qreg", "creg", "gate", "measure", "barrier", "opaque", "if", "pi"}
)

# Two-character symbols must be tried before their one-character prefixes.
_SYMBOLS = ("->", "==", ";", ",", "(", ")", "[", "]", "{", "}", "+", "-", "*", "/", "^", "=", "<", ">")

_WORD_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?")


@dataclass(frozen=True)
class Token:
    """One lexical unit; line/column are 1-based positions in the source."""

    kind: str  # keyword | identifier | integer | real | symbol
    lexeme: str
    line: int
    column: int


def tokenize(source: str) -> list[Token]:
    """Lex OpenQASM 2.0 source, stripping // comments.

    A leading ``#`` directly before ``include`` is tolerated and normalized,
    matching the header-less program form emitted by code generators.
    """
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(source)

    def error(msg: str) -> LexError:
        return LexError(msg, line=line, column=col)

    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if source.startswith("//", i):
            while i < n and source[i] != "\n":
                i += 1
            continue
        if ch == "#":
            rest = source[i + 1:]
            stripped = rest.lstrip(" \t")
            if stripped.startswith("include"):
                skipped = len(rest) - len(stripped)
                tokens.append(Token("keyword", "include", line, col))
                i += 1 + skipped + len("include")
                col += 1 + skipped + len("include")
                continue
            raise error("illegal character '#'")
        if ch == '"':
            end = source.find('"', i + 1)
            if end == -1 or "\n" in source[i:end]:
                raise error("unterminated string literal")
            lexeme = source[i:end + 1]
            tokens.append(Token("symbol", lexeme, line, col))
            col += len(lexeme)
            i = end + 1
            continue
        word = _WORD_RE.match(source, i)
        if word:
            lexeme = word.group()
            kind = "keyword" if lexeme in KEYWORDS else "identifier"
            tokens.append(Token(kind, lexeme, line, col))
            i = word.end()
            col += len(lexeme)
            continue
        number = _NUMBER_RE.match(source, i)
        if number:
            lexeme = number.group()
            end = number.end()
            if end < n and (source[end].isalpha() or source[end] in "._"):
                raise error(f"malformed numeric literal starting at {lexeme!r}")
            kind = "integer" if lexeme.isdigit() else "real"
            tokens.append(Token(kind, lexeme, line, col))
            i = end
            col += len(lexeme)
            continue
        for sym in _SYMBOLS:
            if source.startswith(sym, i):
                tokens.append(Token("symbol", sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise error(f"illegal character {ch!r}")
    return tokens
