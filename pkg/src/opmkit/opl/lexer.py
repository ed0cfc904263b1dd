"""Tokenizer for the .opm dialect."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int = 1


class Tok(Enum):
    STRING = "string"
    WORD = "word"
    DOT = "'.'"
    COMMA = "','"
    EOF = "end of input"


@dataclass(frozen=True)
class Token:
    kind: Tok
    value: str
    span: SourceSpan


class LexError(Exception):
    def __init__(self, code: str, message: str, span: SourceSpan):
        super().__init__(message)
        self.code = code
        self.message = message
        self.span = span


def tokenize(text: str) -> tuple[list[Token], list[LexError]]:
    """Split ``text`` into tokens.

    Lexing continues past errors so that one pass reports every bad token.
    The returned token list always ends with an EOF token.
    """
    tokens: list[Token] = []
    errors: list[LexError] = []
    i, n = 0, len(text)
    line, col = 1, 1

    def advance(k: int = 1) -> None:
        nonlocal i, line, col
        for _ in range(k):
            if text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = text[i]
        if ch == "\n" or ch.isspace():
            advance()
        elif text.startswith("//", i):
            while i < n and text[i] != "\n":
                advance()
        elif ch == '"':
            start_line, start_col = line, col
            advance()
            buf: list[str] = []
            closed = False
            while i < n and text[i] not in "\r\n":
                c = text[i]
                if c == '"':
                    advance()
                    closed = True
                    break
                if c == "\\":
                    nxt = text[i + 1] if i + 1 < n else ""
                    if nxt in ('"', "\\"):
                        buf.append(nxt)
                        advance(2)
                        continue
                    errors.append(
                        LexError("P002", f"invalid escape '\\{nxt}'; only \\\" and \\\\ are allowed",
                                 SourceSpan(line, col, 2 if nxt and nxt not in "\r\n" else 1))
                    )
                    advance()
                    continue
                buf.append(c)
                advance()
            if not closed:
                errors.append(
                    LexError("P001", "unterminated string", SourceSpan(start_line, start_col, max(col - start_col, 1)))
                )
            tokens.append(Token(Tok.STRING, "".join(buf), SourceSpan(start_line, start_col, col - start_col)))
        elif ch.isascii() and ch.isalpha():
            start = i
            start_col = col
            while i < n and text[i].isascii() and text[i].isalpha():
                advance()
            tokens.append(Token(Tok.WORD, text[start:i], SourceSpan(line, start_col, i - start)))
        elif ch == ".":
            tokens.append(Token(Tok.DOT, ".", SourceSpan(line, col)))
            advance()
        elif ch == ",":
            tokens.append(Token(Tok.COMMA, ",", SourceSpan(line, col)))
            advance()
        else:
            errors.append(LexError("P003", f"unexpected character {ch!r}", SourceSpan(line, col)))
            advance()
    tokens.append(Token(Tok.EOF, "", SourceSpan(line, col)))
    return tokens, errors
