"""Desugaring of compound assignment and increment/decrement."""

from __future__ import annotations

from dataclasses import replace

from . import ast as A


def _expr(e):
    if isinstance(e, A.Assign):
        target = _expr(e.target)
        value = _expr(e.value)
        if e.op != "=":
            value = A.Binary(e.op[:-1], target, value, e.span)
        return A.Assign(target, value, "=", e.span)
    if isinstance(e, A.IncDec):
        target = _expr(e.target)
        one = A.Literal(1, e.span)
        return A.Assign(target, A.Binary(e.op[0], target, one, e.span), "=", e.span)
    if isinstance(e, A.ArrayRef):
        return replace(e, indices=tuple(_expr(i) for i in e.indices))
    if isinstance(e, A.Binary):
        return replace(e, left=_expr(e.left), right=_expr(e.right))
    if isinstance(e, A.Unary):
        return replace(e, operand=_expr(e.operand))
    if isinstance(e, A.Call):
        return replace(e, args=tuple(_expr(a) for a in e.args))
    return e


def _opt(e):
    return None if e is None else _expr(e)


def _stmt(s):
    if isinstance(s, A.ExprStmt):
        return replace(s, expr=_expr(s.expr))
    if isinstance(s, A.Block):
        return replace(s, stmts=tuple(_stmt(x) for x in s.stmts))
    if isinstance(s, A.If):
        return replace(s, cond=_expr(s.cond), then=_stmt(s.then), orelse=None if s.orelse is None else _stmt(s.orelse))
    if isinstance(s, A.For):
        init = _stmt(s.init) if isinstance(s.init, A.Decl) else _opt(s.init)
        return replace(s, init=init, cond=_opt(s.cond), step=_opt(s.step), body=_stmt(s.body))
    if isinstance(s, (A.While, A.DoWhile)):
        return replace(s, cond=_expr(s.cond), body=_stmt(s.body))
    if isinstance(s, A.Switch):
        cases = tuple(replace(c, body=tuple(_stmt(x) for x in c.body)) for c in s.cases)
        default = None if s.default is None else tuple(_stmt(x) for x in s.default)
        return replace(s, scrutinee=_expr(s.scrutinee), cases=cases, default=default)
    if isinstance(s, A.Return):
        return replace(s, value=_opt(s.value))
    if isinstance(s, A.Decl):
        if s.init is None or isinstance(s.init, A.InitList):
            return s
        return replace(s, init=_expr(s.init))
    return s


def normalize(fn: A.AstFunction) -> A.AstFunction:
    """Rewrite ``x op= e`` to ``x = x op e`` and ``x++`` to ``x = x + 1``.

    Short-circuit operators are left as binary operators.  The result is
    idempotent under a second application.
    """
    return replace(
        fn,
        body=_stmt(fn.body),
        locals=tuple(_stmt(d) for d in fn.locals),
    )
