"""Recursive-descent parser for the restricted C subset.

The subset: integer and fixed-point scalars and statically sized arrays,
``if``/``for``/``while``/``do``/``switch``/``return``, the usual arithmetic,
logic and comparison operators, and calls between functions of the same
file.  Pointers, dynamic allocation, ``goto``, recursion and casts are
rejected with :class:`UnsupportedConstructError` so that a corpus can be
triaged separately from genuine syntax errors.
"""

from __future__ import annotations

from typing import Optional

from ..errors import ParseError, UnsupportedConstructError
from . import ast as A
from .lexer import Token, tokenize

BASE_TYPES = ("int", "short", "char", "long", "float", "double", "fixed", "void")
TYPE_MODIFIERS = ("const", "static", "unsigned", "signed", "extern", "volatile", "register")
UNSUPPORTED_KEYWORDS = {
    "goto": "goto",
    "struct": "struct types",
    "union": "union types",
    "enum": "enum types",
    "typedef": "typedef",
    "continue": "continue",
    "sizeof": "sizeof",
}
DYNAMIC_MEMORY = frozenset(["malloc", "calloc", "realloc", "free", "alloca"])

_BINARY_PREC = {
    "||": 1,
    "&&": 2,
    "|": 3,
    "^": 4,
    "&": 5,
    "==": 6, "!=": 6,
    "<": 7, "<=": 7, ">": 7, ">=": 7,
    "<<": 8, ">>": 8,
    "+": 9, "-": 9,
    "*": 10, "/": 10, "%": 10,
}
_ASSIGN_OPS = ("=",) + tuple(sorted(A.COMPOUND_ASSIGN_OPS))


class Parser:
    def __init__(self, tokens: list[Token], filename: str = "<input>"):
        self.tokens = tokens
        self.pos = 0
        self.filename = filename
        self.globals: dict[str, A.Decl] = {}
        self.functions: list[A.AstFunction] = []
        self.prototypes: set[str] = set()
        # per-function state
        self._scope: dict[str, object] = {}
        self._locals: list[A.Decl] = []
        self._switch_depth = 0
        self._calls: list[A.Call] = []
        self._call_log: list[tuple[str, A.Call]] = []

    # -- token helpers ----------------------------------------------------

    def peek(self, offset: int = 0) -> Optional[Token]:
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def _eof_span(self) -> A.SourceSpan:
        if self.tokens:
            last = self.tokens[-1].span
            return A.SourceSpan(last.file, last.line, last.column + len(self.tokens[-1].text))
        return A.SourceSpan(self.filename, 1, 1)

    def advance(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self._eof_span())
        self.pos += 1
        return tok

    def at_op(self, *ops: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.is_op(*ops)

    def at_kw(self, *words: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.is_kw(*words)

    def expect_op(self, op: str) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError(f"expected {op!r} but reached end of input", self._eof_span())
        if not tok.is_op(op):
            self._reject_unsupported(tok)
            raise ParseError(f"expected {op!r}, found {tok.text!r}", tok.span)
        self.pos += 1
        return tok

    def expect_ident(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("expected identifier but reached end of input", self._eof_span())
        if tok.kind != "ident":
            self._reject_unsupported(tok)
            raise ParseError(f"expected identifier, found {tok.text!r}", tok.span)
        self.pos += 1
        return tok

    def _reject_unsupported(self, tok: Token) -> None:
        if tok.kind == "keyword" and tok.text in UNSUPPORTED_KEYWORDS:
            raise UnsupportedConstructError(UNSUPPORTED_KEYWORDS[tok.text], tok.span)
        if tok.is_op("*"):
            raise UnsupportedConstructError("pointer", tok.span)
        if tok.is_op("->", "."):
            raise UnsupportedConstructError("member access", tok.span)

    # -- top level ------------------------------------------------------

    def at_type(self) -> bool:
        return self.at_kw(*BASE_TYPES, *TYPE_MODIFIERS)

    def parse_type(self) -> tuple[str, bool]:
        """Return (element type, const flag)."""
        const = False
        base = None
        start = self.peek()
        while self.at_kw(*BASE_TYPES, *TYPE_MODIFIERS):
            tok = self.advance()
            if tok.text == "const":
                const = True
            elif tok.text in BASE_TYPES:
                if base in ("long", "short") and tok.text in ("int", "long"):
                    continue
                base = tok.text
        if base is None:
            # "unsigned x" and friends default to int
            if start is not None and start.kind == "keyword":
                base = "int"
            else:
                raise ParseError("expected a type", start.span if start else self._eof_span())
        return base, const

    def parse_program(self) -> list[A.AstFunction]:
        while self.peek() is not None:
            tok = self.peek()
            self._reject_unsupported(tok)
            if not self.at_type():
                raise ParseError(f"expected a declaration, found {tok.text!r}", tok.span)
            elem, const = self.parse_type()
            if self.at_op("*"):
                raise UnsupportedConstructError("pointer", self.peek().span)
            name_tok = self.expect_ident()
            if self.at_op("("):
                self.parse_function_rest(elem, name_tok)
            else:
                for d in self.parse_declarators(elem, const, name_tok, top_level=True):
                    if d.name in self.globals:
                        raise ParseError(f"redefinition of global {d.name!r}", d.span)
                    self.globals[d.name] = d
        self._check_calls()
        globals_ = tuple(self.globals.values())
        return [
            A.AstFunction(f.name, f.return_type, f.params, f.locals, f.body, globals_, f.span)
            for f in self.functions
        ]

    def _check_calls(self) -> None:
        defined = {f.name for f in self.functions}
        graph: dict[str, list[A.Call]] = {}
        for fn_name, call in self._call_log:
            if call.callee not in defined:
                raise UnsupportedConstructError(f"call to unknown function {call.callee!r}", call.span)
            graph.setdefault(fn_name, []).append(call)
        # reject recursion (direct or mutual)
        state: dict[str, int] = {}

        def visit(name: str) -> None:
            state[name] = 1
            for call in graph.get(name, []):
                s = state.get(call.callee, 0)
                if s == 1:
                    raise UnsupportedConstructError(f"recursion through {call.callee!r}", call.span)
                if s == 0:
                    visit(call.callee)
            state[name] = 2

        for f in self.functions:
            if state.get(f.name, 0) == 0:
                visit(f.name)

    def parse_function_rest(self, ret_type: str, name_tok: Token) -> None:
        name = name_tok.text
        if name in DYNAMIC_MEMORY:
            raise UnsupportedConstructError(f"definition of allocator {name!r}", name_tok.span)
        if any(f.name == name for f in self.functions):
            raise ParseError(f"redefinition of function {name!r}", name_tok.span)
        self.expect_op("(")
        params: list[A.Param] = []
        if self.at_kw("void") and self.peek(1) is not None and self.peek(1).is_op(")"):
            self.advance()
        elif not self.at_op(")"):
            while True:
                params.append(self.parse_param())
                if not self.at_op(","):
                    break
                self.advance()
        self.expect_op(")")
        names = [p.name for p in params]
        for i, p in enumerate(params):
            if p.name in names[:i]:
                raise ParseError(f"duplicate parameter {p.name!r}", p.span)
        if self.at_op(";"):
            self.advance()
            self.prototypes.add(name)
            return
        self._scope = {p.name: p for p in params}
        self._locals = []
        self._calls = []
        body = self.parse_block()
        self._call_log.extend((name, c) for c in self._calls)
        self.functions.append(
            A.AstFunction(name, ret_type, tuple(params), tuple(self._locals), body, (), name_tok.span)
        )

    def parse_param(self) -> A.Param:
        start = self.peek()
        if start is None or not self.at_type():
            if start is not None:
                self._reject_unsupported(start)
            raise ParseError("expected parameter type", start.span if start else self._eof_span())
        elem, _ = self.parse_type()
        if self.at_op("*"):
            raise UnsupportedConstructError("pointer parameter", self.peek().span)
        name_tok = self.expect_ident()
        dims = self.parse_dims(allow_open=True)
        return A.Param(name_tok.text, elem, bool(dims), dims, name_tok.span)

    def parse_dims(self, allow_open: bool = False) -> tuple:
        dims = []
        while self.at_op("["):
            lb = self.advance()
            if self.at_op("]"):
                if not (allow_open and not dims):
                    raise ParseError("array dimension required", lb.span)
                self.advance()
                dims.append(None)
                continue
            tok = self.advance()
            if tok.kind != "int":
                raise UnsupportedConstructError("non-constant array dimension", tok.span)
            dims.append(tok.value)
            self.expect_op("]")
        return tuple(dims)

    def parse_declarators(self, elem: str, const: bool, first: Token, top_level: bool = False) -> list[A.Decl]:
        decls = []
        name_tok = first
        while True:
            dims = self.parse_dims()
            init = None
            if self.at_op("="):
                self.advance()
                if self.at_op("{"):
                    init = self.parse_init_list()
                else:
                    init = self.parse_assign() if not top_level else self.parse_constant_expr()
            d = A.Decl(name_tok.text, elem, dims, init, const, name_tok.span)
            decls.append(d)
            if not top_level:
                self._scope[d.name] = d
                self._locals.append(d)
            if not self.at_op(","):
                break
            self.advance()
            if self.at_op("*"):
                raise UnsupportedConstructError("pointer", self.peek().span)
            name_tok = self.expect_ident()
        self.expect_op(";")
        return decls

    def parse_constant_expr(self):
        tok = self.peek()
        e = self.parse_assign()
        for sub in A.iter_expr(e):
            if not isinstance(sub, (A.Literal, A.Unary, A.Binary)):
                raise ParseError("global initializer must be constant", tok.span)
        return e

    def parse_init_list(self) -> A.InitList:
        lb = self.expect_op("{")
        items = []
        while not self.at_op("}"):
            if self.at_op("{"):
                items.append(self.parse_init_list())
            else:
                tok = self.peek()
                neg = False
                if self.at_op("-"):
                    self.advance()
                    neg = True
                    tok = self.peek()
                lit = self.advance()
                if lit.kind not in ("int", "fixed"):
                    raise ParseError("initializer element must be a numeric literal", lit.span)
                items.append(A.Literal(-lit.value if neg else lit.value, tok.span))
            if not self.at_op(","):
                break
            self.advance()
        self.expect_op("}")
        return A.InitList(tuple(items), lb.span)

    # -- statements -------------------------------------------------------------

    def parse_block(self) -> A.Block:
        lb = self.expect_op("{")
        stmts = []
        while not self.at_op("}"):
            if self.peek() is None:
                raise ParseError("unterminated block", lb.span)
            stmts.extend(self.parse_stmt_list_item())
        self.expect_op("}")
        return A.Block(tuple(stmts), lb.span)

    def parse_stmt_list_item(self) -> list:
        if self.at_type():
            elem, const = self.parse_type()
            if self.at_op("*"):
                raise UnsupportedConstructError("pointer", self.peek().span)
            name_tok = self.expect_ident()
            if self.at_op("("):
                raise UnsupportedConstructError("nested function", name_tok.span)
            return self.parse_declarators(elem, const, name_tok)
        return [self.parse_stmt()]

    def parse_stmt(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("expected statement", self._eof_span())
        self._reject_unsupported(tok)
        if tok.is_op("{"):
            return self.parse_block()
        if tok.is_kw("if"):
            return self.parse_if()
        if tok.is_kw("for"):
            return self.parse_for()
        if tok.is_kw("while"):
            self.advance()
            self.expect_op("(")
            cond = self.parse_condition()
            self.expect_op(")")
            body = self.parse_body()
            return A.While(cond, body, tok.span)
        if tok.is_kw("do"):
            self.advance()
            body = self.parse_body()
            if not self.at_kw("while"):
                t = self.peek()
                raise ParseError("expected 'while' after do body", t.span if t else self._eof_span())
            self.advance()
            self.expect_op("(")
            cond = self.parse_condition()
            self.expect_op(")")
            self.expect_op(";")
            return A.DoWhile(body, cond, tok.span)
        if tok.is_kw("switch"):
            return self.parse_switch()
        if tok.is_kw("return"):
            self.advance()
            value = None if self.at_op(";") else self.parse_expr()
            self.expect_op(";")
            return A.Return(value, tok.span)
        if tok.is_kw("break"):
            raise UnsupportedConstructError("break outside a switch case", tok.span)
        if tok.is_kw("case", "default"):
            raise ParseError(f"{tok.text!r} outside switch", tok.span)
        if tok.is_op(";"):
            self.advance()
            return A.Block((), tok.span)
        if self.at_type():
            raise ParseError("declaration not allowed here", tok.span)
        e = self.parse_expr()
        self.expect_op(";")
        return A.ExprStmt(e, tok.span)

    def parse_body(self):
        """Loop/branch body; a declaration needs braces."""
        if self.at_type():
            raise ParseError("declaration requires an enclosing block", self.peek().span)
        saved = self._switch_depth
        self._switch_depth = 0
        try:
            return self.parse_stmt()
        finally:
            self._switch_depth = saved

    def parse_if(self) -> A.If:
        tok = self.advance()
        self.expect_op("(")
        cond = self.parse_condition()
        self.expect_op(")")
        then = self.parse_body()
        orelse = None
        if self.at_kw("else"):
            self.advance()
            orelse = self.parse_body()
        return A.If(cond, then, orelse, tok.span)

    def parse_for(self) -> A.For:
        tok = self.advance()
        self.expect_op("(")
        init = None
        if self.at_type():
            elem, const = self.parse_type()
            name_tok = self.expect_ident()
            if not self.at_op("="):
                raise ParseError("for-loop declaration needs an initializer", name_tok.span)
            self.advance()
            value = self.parse_assign()
            init = A.Decl(name_tok.text, elem, (), value, const, name_tok.span)
            self._scope[init.name] = init
            self._locals.append(init)
            self.expect_op(";")
        else:
            if not self.at_op(";"):
                init = self.parse_expr()
                self._reject_calls(init)
            self.expect_op(";")
        cond = None if self.at_op(";") else self.parse_condition()
        self.expect_op(";")
        step = None
        if not self.at_op(")"):
            step = self.parse_expr()
            self._reject_calls(step)
        self.expect_op(")")
        body = self.parse_body()
        return A.For(init, cond, step, body, tok.span)

    def parse_switch(self) -> A.Switch:
        tok = self.advance()
        self.expect_op("(")
        scrutinee = self.parse_condition()
        self.expect_op(")")
        self.expect_op("{")
        arms: list[tuple[list, list, A.SourceSpan]] = []  # (labels or None for default, body, span)
        seen: set = set()
        has_default = False
        while not self.at_op("}"):
            t = self.peek()
            if t is None:
                raise ParseError("unterminated switch", tok.span)
            if t.is_kw("case"):
                self.advance()
                label = self.parse_case_label()
                if label in seen:
                    raise ParseError(f"duplicate case label {label}", t.span)
                seen.add(label)
                self.expect_op(":")
                arms.append(([label], [], t.span))
            elif t.is_kw("default"):
                self.advance()
                self.expect_op(":")
                if has_default:
                    raise ParseError("duplicate default label", t.span)
                has_default = True
                arms.append((None, [], t.span))
            else:
                if not arms:
                    raise ParseError("statement before first case label", t.span)
                if t.is_kw("break"):
                    self.advance()
                    self.expect_op(";")
                    arms[-1][1].append(A.Break(t.span))
                else:
                    self._switch_depth += 1
                    try:
                        arms[-1][1].extend(self.parse_stmt_list_item())
                    finally:
                        self._switch_depth -= 1
        self.expect_op("}")
        # merge empty fall-through labels into the next arm; reject other fall-through
        cases: list[A.Case] = []
        default = None
        pending: list = []
        for i, (labels, body, span) in enumerate(arms):
            last = i == len(arms) - 1
            if not body and not last:
                if labels is None:
                    raise UnsupportedConstructError("default label falling through", span)
                pending.extend(labels)
                continue
            for j, st in enumerate(body):
                if isinstance(st, A.Break) and j != len(body) - 1:
                    raise UnsupportedConstructError("break before end of case", st.span)
            if body and not last and not isinstance(body[-1], (A.Break, A.Return)):
                raise UnsupportedConstructError("case fall-through", span)
            if labels is None:
                if pending:
                    raise UnsupportedConstructError("case labels falling into default", span)
                default = tuple(body)
            else:
                cases.append(A.Case(tuple(pending + labels), tuple(body), span))
            pending = []
        return A.Switch(scrutinee, tuple(cases), default, tok.span)

    def parse_case_label(self) -> int:
        neg = False
        if self.at_op("-"):
            self.advance()
            neg = True
        tok = self.advance()
        if tok.kind != "int":
            raise ParseError("case label must be an integer constant", tok.span)
        return -tok.value if neg else tok.value

    # -- expressions -------------------------------------------------------------

    def parse_condition(self):
        e = self.parse_expr()
        self._reject_calls(e)
        return e

    def _reject_calls(self, e) -> None:
        for sub in A.iter_expr(e):
            if isinstance(sub, A.Call):
                raise UnsupportedConstructError("function call inside a loop or branch header", sub.span)

    def parse_expr(self):
        e = self.parse_assign()
        if self.at_op(","):
            raise UnsupportedConstructError("comma operator", self.peek().span)
        return e

    def parse_assign(self):
        start = self.peek()
        lhs = self.parse_binary(1)
        if self.at_op("?"):
            raise UnsupportedConstructError("conditional operator", self.peek().span)
        if self.at_op(*_ASSIGN_OPS):
            op_tok = self.advance()
            if not isinstance(lhs, (A.Var, A.ArrayRef)):
                raise ParseError("left side of assignment is not assignable", op_tok.span)
            self._check_writable(lhs, op_tok)
            rhs = self.parse_assign()
            return A.Assign(lhs, rhs, op_tok.text, start.span)
        return lhs

    def _check_writable(self, target, tok: Token) -> None:
        decl = self._scope.get(target.name) or self.globals.get(target.name)
        if isinstance(decl, A.Decl) and decl.const:
            raise ParseError(f"assignment to const {target.name!r}", tok.span)

    def parse_binary(self, min_prec: int):
        left = self.parse_unary()
        while True:
            tok = self.peek()
            if tok is None or tok.kind != "op" or tok.text not in _BINARY_PREC:
                return left
            prec = _BINARY_PREC[tok.text]
            if prec < min_prec:
                return left
            self.advance()
            right = self.parse_binary(prec + 1)
            left = A.Binary(tok.text, left, right, tok.span)

    def parse_unary(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("expected expression", self._eof_span())
        if tok.is_op("-", "!", "~"):
            self.advance()
            return A.Unary(tok.text, self.parse_unary(), tok.span)
        if tok.is_op("+"):
            self.advance()
            return self.parse_unary()
        if tok.is_op("++", "--"):
            self.advance()
            target = self.parse_unary()
            if not isinstance(target, (A.Var, A.ArrayRef)):
                raise ParseError(f"operand of {tok.text} is not assignable", tok.span)
            self._check_writable(target, tok)
            return A.IncDec(tok.text, target, True, tok.span)
        if tok.is_op("&"):
            raise UnsupportedConstructError("address-of operator", tok.span)
        if tok.is_op("*"):
            raise UnsupportedConstructError("pointer dereference", tok.span)
        if tok.is_op("(") and self.peek(1) is not None and (
            self.peek(1).is_kw(*BASE_TYPES, *TYPE_MODIFIERS)
        ):
            raise UnsupportedConstructError("type cast", tok.span)
        return self.parse_postfix()

    def parse_postfix(self):
        e = self.parse_primary()
        while True:
            tok = self.peek()
            if tok is not None and tok.is_op("++", "--"):
                self.advance()
                if not isinstance(e, (A.Var, A.ArrayRef)):
                    raise ParseError(f"operand of {tok.text} is not assignable", tok.span)
                self._check_writable(e, tok)
                e = A.IncDec(tok.text, e, False, e.span)
            elif tok is not None and tok.is_op("->", "."):
                raise UnsupportedConstructError("member access", tok.span)
            elif tok is not None and tok.is_op("["):
                raise ParseError("subscript of non-identifier", tok.span)
            else:
                return e

    def parse_primary(self):
        tok = self.advance()
        if tok.kind == "int" or tok.kind == "fixed":
            return A.Literal(tok.value, tok.span)
        if tok.kind == "ident":
            if self.at_op("("):
                return self.parse_call(tok)
            self._resolve(tok)
            if self.at_op("["):
                indices = []
                while self.at_op("["):
                    self.advance()
                    indices.append(self.parse_expr())
                    self.expect_op("]")
                return A.ArrayRef(tok.text, tuple(indices), tok.span)
            return A.Var(tok.text, tok.span)
        if tok.is_op("("):
            e = self.parse_expr()
            self.expect_op(")")
            return e
        self._reject_unsupported(tok)
        raise ParseError(f"unexpected token {tok.text!r}", tok.span)

    def _resolve(self, tok: Token) -> None:
        if tok.text not in self._scope and tok.text not in self.globals:
            raise ParseError(f"undeclared identifier {tok.text!r}", tok.span)

    def parse_call(self, name_tok: Token) -> A.Call:
        if name_tok.text in DYNAMIC_MEMORY:
            raise UnsupportedConstructError(f"dynamic memory ({name_tok.text})", name_tok.span)
        self.expect_op("(")
        args = []
        if not self.at_op(")"):
            while True:
                args.append(self.parse_assign())
                if not self.at_op(","):
                    break
                self.advance()
        self.expect_op(")")
        call = A.Call(name_tok.text, tuple(args), name_tok.span)
        self._calls.append(call)
        return call


def parse(tokens: list[Token], filename: Optional[str] = None) -> list[A.AstFunction]:
    """Parse a token list into one :class:`AstFunction` per definition, in order."""
    if filename is None:
        filename = tokens[0].span.file if tokens else "<input>"
    return Parser(tokens, filename).parse_program()


def parse_source(source: str, filename: str = "<input>") -> list[A.AstFunction]:
    return parse(tokenize(source, filename), filename)
