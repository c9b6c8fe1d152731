"""Pretty-printer producing source that re-parses to a structurally equal AST."""

from __future__ import annotations

from . import ast as A


def _lit(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def expr_to_c(e) -> str:
    if isinstance(e, A.Literal):
        return _lit(e.value)
    if isinstance(e, A.Var):
        return e.name
    if isinstance(e, A.ArrayRef):
        return e.name + "".join(f"[{expr_to_c(i)}]" for i in e.indices)
    if isinstance(e, A.Binary):
        return f"({expr_to_c(e.left)} {e.op} {expr_to_c(e.right)})"
    if isinstance(e, A.Unary):
        return f"{e.op}({expr_to_c(e.operand)})"
    if isinstance(e, A.Assign):
        return f"{expr_to_c(e.target)} {e.op} {expr_to_c(e.value)}"
    if isinstance(e, A.IncDec):
        t = expr_to_c(e.target)
        return f"{e.op}{t}" if e.prefix else f"{t}{e.op}"
    if isinstance(e, A.Call):
        return f"{e.callee}({', '.join(expr_to_c(a) for a in e.args)})"
    raise TypeError(f"not an expression: {e!r}")


def _init_to_c(init) -> str:
    if isinstance(init, A.InitList):
        return "{" + ", ".join(_init_to_c(i) for i in init.items) + "}"
    if isinstance(init, A.Literal):
        return _lit(init.value)
    return expr_to_c(init)


def decl_to_c(d: A.Decl) -> str:
    const = "const " if d.const else ""
    dims = "".join(f"[{n}]" for n in d.dims)
    init = f" = {_init_to_c(d.init)}" if d.init is not None else ""
    return f"{const}{d.elem_type} {d.name}{dims}{init};"


def _stmt_lines(s, depth: int) -> list[str]:
    pad = "    " * depth
    if isinstance(s, A.ExprStmt):
        return [f"{pad}{expr_to_c(s.expr)};"]
    if isinstance(s, A.Decl):
        return [pad + decl_to_c(s)]
    if isinstance(s, A.Block):
        return [pad + "{"] + [l for x in s.stmts for l in _stmt_lines(x, depth + 1)] + [pad + "}"]
    if isinstance(s, A.If):
        out = [f"{pad}if ({expr_to_c(s.cond)})"] + _braced(s.then, depth)
        if s.orelse is not None:
            out += [f"{pad}else"] + _braced(s.orelse, depth)
        return out
    if isinstance(s, A.For):
        if isinstance(s.init, A.Decl):
            init = decl_to_c(s.init)[:-1]
        else:
            init = "" if s.init is None else expr_to_c(s.init)
        cond = "" if s.cond is None else expr_to_c(s.cond)
        step = "" if s.step is None else expr_to_c(s.step)
        return [f"{pad}for ({init}; {cond}; {step})"] + _braced(s.body, depth)
    if isinstance(s, A.While):
        return [f"{pad}while ({expr_to_c(s.cond)})"] + _braced(s.body, depth)
    if isinstance(s, A.DoWhile):
        return [f"{pad}do"] + _braced(s.body, depth) + [f"{pad}while ({expr_to_c(s.cond)});"]
    if isinstance(s, A.Switch):
        out = [f"{pad}switch ({expr_to_c(s.scrutinee)})", pad + "{"]
        for c in s.cases:
            out += [f"{pad}case {l}:" for l in c.labels]
            out += [l for x in c.body for l in _stmt_lines(x, depth + 1)]
        if s.default is not None:
            out.append(f"{pad}default:")
            out += [l for x in s.default for l in _stmt_lines(x, depth + 1)]
        return out + [pad + "}"]
    if isinstance(s, A.Return):
        return [f"{pad}return;" if s.value is None else f"{pad}return {expr_to_c(s.value)};"]
    if isinstance(s, A.Break):
        return [f"{pad}break;"]
    raise TypeError(f"not a statement: {s!r}")


def _braced(s, depth: int) -> list[str]:
    # a then-branch that is itself an else-less if followed by our else is the one
    # shape that does not round-trip (dangling else); callers avoid generating it
    if isinstance(s, A.Block):
        return _stmt_lines(s, depth)
    return _stmt_lines(s, depth + 1)


def function_to_c(fn: A.AstFunction) -> str:
    params = []
    for p in fn.params:
        dims = "".join("[]" if n is None else f"[{n}]" for n in p.dims)
        params.append(f"{p.elem_type} {p.name}{dims}")
    head = f"{fn.return_type} {fn.name}({', '.join(params) or 'void'})"
    return "\n".join([head] + _stmt_lines(fn.body, 0)) + "\n"


def program_to_c(functions: list[A.AstFunction]) -> str:
    """Print globals (from the first function) followed by every function."""
    lines = []
    if functions:
        lines += [decl_to_c(g) for g in functions[0].globals]
        if lines:
            lines.append("")
    return "\n".join(lines) + "\n".join(function_to_c(f) for f in functions)
