"""Memory-class assignment (N1..N4) for the data of a function."""

from __future__ import annotations

from collections import Counter

from ..frontend import ast as A
from .model import MemoryClass

RETURN_DATUM = "return"


def _reads(e, out: Counter) -> None:
    """Count read occurrences in ``e`` (assignment targets are not reads)."""
    if isinstance(e, A.Assign):
        if isinstance(e.target, A.ArrayRef):
            for ix in e.target.indices:
                _reads(ix, out)
        _reads(e.value, out)
    elif isinstance(e, A.IncDec):
        out[e.target.name] += 1
        if isinstance(e.target, A.ArrayRef):
            for ix in e.target.indices:
                _reads(ix, out)
    elif isinstance(e, (A.Var, A.ArrayRef)):
        out[e.name] += 1
        if isinstance(e, A.ArrayRef):
            for ix in e.indices:
                _reads(ix, out)
    elif isinstance(e, A.Binary):
        _reads(e.left, out)
        _reads(e.right, out)
    elif isinstance(e, A.Unary):
        _reads(e.operand, out)
    elif isinstance(e, A.Call):
        for a in e.args:
            _reads(a, out)


def _assignments(e):
    for sub in A.iter_expr(e):
        if isinstance(sub, A.Assign):
            yield sub.target.name, sub.value
        elif isinstance(sub, A.IncDec):
            yield sub.target.name, sub.target


class _Facts:
    def __init__(self, fn: A.AstFunction):
        self.fn = fn
        self.reads: Counter = Counter()
        self.accumulators: set[str] = set()
        self.defs: dict[str, list] = {}
        self._stmt(fn.body, in_loop=False)
        for d in fn.locals:
            if d.init is not None:
                self.defs.setdefault(d.name, []).append(d.init)

    def _expr(self, e, in_loop: bool) -> None:
        _reads(e, self.reads)
        for name, value in _assignments(e):
            self.defs.setdefault(name, []).append(value)
            if in_loop:
                inner = Counter()
                _reads(value, inner)
                if inner[name]:
                    self.accumulators.add(name)

    def _stmt(self, s, in_loop: bool) -> None:
        if isinstance(s, A.For):
            for part in (s.init, s.cond, s.step):
                if isinstance(part, A.Decl):
                    if part.init is not None:
                        self._expr(part.init, False)
                elif part is not None:
                    self._expr(part, False)
            self._stmt(s.body, True)
            return
        if isinstance(s, (A.While, A.DoWhile)):
            self._expr(s.cond, False)
            self._stmt(s.body, True)
            return
        if isinstance(s, A.Decl):
            if s.init is not None and not isinstance(s.init, A.InitList):
                _reads(s.init, self.reads)
            return
        for e in A.stmt_exprs(s):
            self._expr(e, in_loop)
        for c in A.child_stmts(s):
            self._stmt(c, in_loop)


def is_io(name: str, fn: A.AstFunction) -> bool:
    return name == RETURN_DATUM or fn.param(name) is not None or (
        fn.global_decl(name) is not None and fn.local_decl(name) is None
    )


def _is_input_copy(value, fn: A.AstFunction) -> bool:
    return isinstance(value, (A.Var, A.ArrayRef, A.InitList)) and (
        isinstance(value, A.InitList) or is_io(value.name, fn)
    )


def classify_function(fn: A.AstFunction) -> dict[str, MemoryClass]:
    """Memory class of every datum referenced by ``fn``.

    Parameters, globals and the returned value are N1.  A local written as
    ``v = f(v, ...)`` inside a loop body is an accumulator (N4).  A local that
    only ever holds copies of input data (or a constant table) and is read
    more than once is re-used input (N3).  Everything else is a temporary (N2).
    """
    facts = _Facts(fn)
    names = set(facts.reads) | set(facts.defs) | {d.name for d in fn.locals}
    out = {RETURN_DATUM: MemoryClass.N1}
    for name in sorted(names):
        out[name] = _classify(name, fn, facts)
    return out


def _classify(name: str, fn: A.AstFunction, facts: _Facts) -> MemoryClass:
    if is_io(name, fn):
        return MemoryClass.N1
    if name in facts.accumulators:
        return MemoryClass.N4
    defs = facts.defs.get(name, [])
    if defs and facts.reads[name] > 1 and all(_is_input_copy(v, fn) for v in defs):
        return MemoryClass.N3
    return MemoryClass.N2


def classify_memory(name: str, fn: A.AstFunction) -> MemoryClass:
    """Memory class of a single datum of ``fn``."""
    return _classify(name, fn, _Facts(fn))
