"""Lexing, parsing and desugaring of the restricted C input language."""

from .ast import AstFunction, SourceSpan
from .lexer import Token, tokenize
from .normalize import normalize
from .parser import parse, parse_source
from .printer import function_to_c, program_to_c


def load_functions(source: str, filename: str = "<input>") -> list[AstFunction]:
    """Tokenize, parse and normalize every function of ``source``."""
    return [normalize(f) for f in parse(tokenize(source, filename), filename)]


__all__ = [
    "AstFunction",
    "SourceSpan",
    "Token",
    "function_to_c",
    "load_functions",
    "normalize",
    "parse",
    "parse_source",
    "program_to_c",
    "tokenize",
]
