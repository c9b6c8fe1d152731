"""Affine forms of integer subscript expressions.

A form is a tuple of ``(name, coefficient)`` pairs sorted by name, where the
empty name carries the constant term.  ``None`` stands for a non-affine
expression.
"""

from __future__ import annotations

from typing import Callable, Optional

from ..frontend import ast as A

Form = tuple


def _add(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + sign * v
    return {k: v for k, v in out.items() if v != 0 or k == ""}


def _scale(a: dict, c: int) -> dict:
    return {k: v * c for k, v in a.items() if v * c != 0 or k == ""}


def affine_dict(e, name_of: Callable[[str], str] = lambda n: n) -> Optional[dict]:
    if isinstance(e, A.Literal):
        return {"": e.value} if isinstance(e.value, int) else None
    if isinstance(e, A.Var):
        return {"": 0, name_of(e.name): 1}
    if isinstance(e, A.Unary) and e.op == "-":
        inner = affine_dict(e.operand, name_of)
        return None if inner is None else _scale(inner, -1)
    if isinstance(e, A.Binary) and e.op in ("+", "-"):
        l, r = affine_dict(e.left, name_of), affine_dict(e.right, name_of)
        if l is None or r is None:
            return None
        return _add(l, r, 1 if e.op == "+" else -1)
    if isinstance(e, A.Binary) and e.op in ("*", "<<"):
        l, r = affine_dict(e.left, name_of), affine_dict(e.right, name_of)
        if l is None or r is None:
            return None
        if e.op == "<<":
            if len(r) == 1 and r[""] >= 0:
                return _scale(l, 1 << r[""])
            return None
        if len(l) == 1:
            return _scale(r, l[""])
        if len(r) == 1:
            return _scale(l, r[""])
    return None


def to_form(d: Optional[dict]) -> Optional[Form]:
    if d is None:
        return None
    d = dict(d)
    d.setdefault("", 0)
    return tuple(sorted(d.items()))


def affine(e, name_of: Callable[[str], str] = lambda n: n) -> Optional[Form]:
    return to_form(affine_dict(e, name_of))


def const_of(form: Form) -> int:
    return dict(form).get("", 0)


def variables(form: Form) -> dict:
    return {k: v for k, v in form if k != ""}


def provably_distinct(a: Optional[tuple], b: Optional[tuple]) -> bool:
    """True if two subscript tuples can never address the same element."""
    if a is None or b is None or len(a) != len(b):
        return False
    for fa, fb in zip(a, b):
        if fa is None or fb is None:
            continue
        if variables(fa) == variables(fb) and const_of(fa) != const_of(fb):
            return True
    return False


def provably_equal(a: Optional[tuple], b: Optional[tuple]) -> bool:
    return a is not None and b is not None and None not in a and a == b
