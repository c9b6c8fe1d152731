"""Tokenizer for the restricted C subset."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import LexError
from .ast import SourceSpan

KEYWORDS = frozenset(
    """
    int short char long unsigned signed void float double fixed const static
    if else for while do switch case default break return
    goto struct union enum typedef continue sizeof extern volatile register
    """.split()
)

# Longest operators first so the alternation is greedy.
OPERATORS = [
    "<<=", ">>=", "...",
    "++", "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "->",
    "+", "-", "*", "/", "%", "<", ">", "=", "!", "~", "&", "|", "^",
    "(", ")", "[", "]", "{", "}", ";", ",", ":", "?", ".",
]

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<line_comment>//[^\n]*)
  | (?P<block_comment>/\*.*?\*/)
  | (?P<fixed>(?:(?:\d+\.\d*|\.\d+)(?:[eE][-+]?\d+)?|\d+[eE][-+]?\d+)[fF]?)
  | (?P<int>0[xX][0-9a-fA-F]+[uUlL]*|\d+[uUlL]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>"""
    + "|".join(re.escape(op) for op in OPERATORS)
    + r""")
    """,
    re.VERBOSE | re.DOTALL,
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident | keyword | int | fixed | op
    text: str
    span: SourceSpan
    value: object = None

    def is_op(self, *ops: str) -> bool:
        return self.kind == "op" and self.text in ops

    def is_kw(self, *words: str) -> bool:
        return self.kind == "keyword" and self.text in words


def tokenize(source: str, filename: str = "<input>") -> list[Token]:
    """Split ``source`` into tokens, dropping whitespace and comments."""
    tokens: list[Token] = []
    pos = 0
    line = 1
    line_start = 0
    n = len(source)
    while pos < n:
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            span = SourceSpan(filename, line, pos - line_start + 1)
            if source.startswith("/*", pos):
                raise LexError("unterminated block comment", span)
            raise LexError(f"illegal character {source[pos]!r}", span)
        kind = m.lastgroup
        text = m.group()
        span = SourceSpan(filename, line, pos - line_start + 1)
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "block_comment":
            newlines = text.count("\n")
            if newlines:
                line += newlines
                line_start = pos + text.rfind("\n") + 1
        elif kind in ("ws", "line_comment"):
            pass
        elif kind == "ident":
            tokens.append(Token("keyword" if text in KEYWORDS else "ident", text, span))
        elif kind == "int":
            digits = text.rstrip("uUlL")
            if digits[:2] in ("0x", "0X"):
                value = int(digits, 16)
            elif len(digits) > 1 and digits[0] == "0":
                try:
                    value = int(digits, 8)
                except ValueError:
                    raise LexError(f"invalid octal literal {text!r}", span) from None
            else:
                value = int(digits)
            tokens.append(Token("int", text, span, value))
        elif kind == "fixed":
            tokens.append(Token("fixed", text, span, float(text.rstrip("fF"))))
        else:
            tokens.append(Token("op", text, span))
        pos = m.end()
    return tokens
