"""AST for the restricted C subset.

Nodes are frozen dataclasses. Spans are excluded from equality so that two
trees parsed from differently formatted sources compare structurally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


NO_SPAN = SourceSpan("<none>", 1, 1)

BINARY_OPS = frozenset(
    ["+", "-", "*", "/", "%", "<<", ">>", "&", "|", "^", "&&", "||", "<=", "<", ">", ">=", "==", "!="]
)
TEST_OPS = frozenset(["<=", "<", ">", ">=", "==", "!="])
UNARY_OPS = frozenset(["-", "!", "~"])
COMPOUND_ASSIGN_OPS = frozenset(["+=", "-=", "*=", "/=", "%=", "<<=", ">>=", "&=", "|=", "^="])

ELEMENT_BITS = {"char": 8, "short": 16, "int": 32, "long": 32, "float": 32, "double": 64, "fixed": 16}


# -- expressions ------------------------------------------------------------


@dataclass(frozen=True)
class Literal:
    value: Union[int, float]
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Var:
    name: str
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class ArrayRef:
    name: str
    indices: tuple
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Expr"
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Assign:
    """``target op value``; ``op`` is ``=`` or a compound operator like ``+=``."""

    target: Union[Var, ArrayRef]
    value: "Expr"
    op: str = "="
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class IncDec:
    """``++x`` / ``x--`` before normalization."""

    op: str
    target: Union[Var, ArrayRef]
    prefix: bool
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Call:
    callee: str
    args: tuple
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)


Expr = Union[Literal, Var, ArrayRef, Binary, Unary, Assign, IncDec, Call]


# -- statements ---------------------------------------------------------------


@dataclass(frozen=True)
class InitList:
    """Brace initializer for static arrays; elements are literals or nested lists."""

    items: tuple
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Decl:
    name: str
    elem_type: str
    dims: tuple = ()
    init: Optional[Union["Expr", InitList]] = None
    const: bool = False
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)

    @property
    def is_array(self) -> bool:
        return bool(self.dims)


@dataclass(frozen=True)
class ExprStmt:
    expr: Expr
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Block:
    stmts: tuple
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class If:
    cond: Expr
    then: "Stmt"
    orelse: Optional["Stmt"] = None
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class For:
    init: Optional[Expr]
    cond: Optional[Expr]
    step: Optional[Expr]
    body: "Stmt"
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class While:
    cond: Expr
    body: "Stmt"
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class DoWhile:
    body: "Stmt"
    cond: Expr
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Case:
    labels: tuple
    body: tuple
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Switch:
    scrutinee: Expr
    cases: tuple
    default: Optional[tuple] = None
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Return:
    value: Optional[Expr] = None
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Break:
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)


Stmt = Union[ExprStmt, Block, If, For, While, DoWhile, Switch, Return, Decl, Break]


@dataclass(frozen=True)
class Param:
    name: str
    elem_type: str
    is_array: bool = False
    dims: tuple = ()
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class AstFunction:
    name: str
    return_type: str
    params: tuple
    locals: tuple
    body: Block
    globals: tuple = ()
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)

    def param(self, name: str) -> Optional[Param]:
        for p in self.params:
            if p.name == name:
                return p
        return None

    def global_decl(self, name: str) -> Optional[Decl]:
        for g in self.globals:
            if g.name == name:
                return g
        return None

    def local_decl(self, name: str) -> Optional[Decl]:
        for d in self.locals:
            if d.name == name:
                return d
        return None


# -- traversal helpers ----------------------------------------------------------


def iter_expr(e):
    """Yield ``e`` and every sub-expression, pre-order."""
    yield e
    if isinstance(e, ArrayRef):
        for ix in e.indices:
            yield from iter_expr(ix)
    elif isinstance(e, Binary):
        yield from iter_expr(e.left)
        yield from iter_expr(e.right)
    elif isinstance(e, Unary):
        yield from iter_expr(e.operand)
    elif isinstance(e, Assign):
        yield from iter_expr(e.target)
        yield from iter_expr(e.value)
    elif isinstance(e, IncDec):
        yield from iter_expr(e.target)
    elif isinstance(e, Call):
        for a in e.args:
            yield from iter_expr(a)


def child_stmts(s):
    if isinstance(s, Block):
        return list(s.stmts)
    if isinstance(s, If):
        return [s.then] + ([s.orelse] if s.orelse is not None else [])
    if isinstance(s, (For, While, DoWhile)):
        return [s.body]
    if isinstance(s, Switch):
        out = [st for c in s.cases for st in c.body]
        if s.default is not None:
            out.extend(s.default)
        return out
    return []


def stmt_exprs(s):
    if isinstance(s, ExprStmt):
        return [s.expr]
    if isinstance(s, If):
        return [s.cond]
    if isinstance(s, For):
        return [e for e in (s.init, s.cond, s.step) if e is not None]
    if isinstance(s, (While, DoWhile)):
        return [s.cond]
    if isinstance(s, Switch):
        return [s.scrutinee]
    if isinstance(s, Return):
        return [s.value] if s.value is not None else []
    if isinstance(s, Decl):
        return [s.init] if s.init is not None and not isinstance(s.init, InitList) else []
    return []


def iter_stmts(s):
    """Yield ``s`` and every nested statement, pre-order."""
    yield s
    for c in child_stmts(s):
        yield from iter_stmts(c)


def iter_all_exprs(s):
    for st in iter_stmts(s):
        for e in stmt_exprs(st):
            yield from iter_expr(e)
