"""Textual OPM dialect (a line-oriented stand-in, not ISO 19450 OPL)."""

from .generator import generate, quote
from .lexer import SourceSpan
from .parser import LINK_VERBS, ParseDiagnostic, ParseError, parse, parse_with_diagnostics

__all__ = [
    "LINK_VERBS",
    "ParseDiagnostic",
    "ParseError",
    "SourceSpan",
    "generate",
    "parse",
    "parse_with_diagnostics",
    "quote",
]
