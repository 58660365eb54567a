"""Boolean update-function expressions.

An update function is a finite tree of ``Var``, ``Const``, ``Not``,
``And`` and ``Or`` nodes over named variables.  The concrete syntax is

    expr := or
    or   := and ('|' and)*
    and  := lit ('&' lit)*
    lit  := '!' lit | '(' expr ')' | ident | '0' | '1'

``!`` binds tightest, then ``&``, then ``|``.  Chains of ``&`` and ``|``
parse left-associatively into binary nodes, whitespace is ignored, and
identifiers match ``[A-Za-z_][A-Za-z0-9_]*``.

Expressions are immutable values: every operation here is pure and the
node classes are frozen, so trees can be shared freely.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union

from .errors import MissingVariableError, ParseError, UnknownVariableError

__all__ = [
    "Var",
    "Const",
    "Not",
    "And",
    "Or",
    "BoolExpr",
    "parse_expr",
    "evaluate",
    "substitute",
    "free_vars",
    "serialize_expr",
]


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Not:
    child: "BoolExpr"


@dataclass(frozen=True)
class And:
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class Or:
    left: "BoolExpr"
    right: "BoolExpr"


BoolExpr = Union[Var, Const, Not, And, Or]

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def _tokenize(text: str):
    """Split ``text`` into (kind, text, byte offset) triples."""
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "!&|()":
            tokens.append((c, c, i))
            i += 1
            continue
        if c in "01":
            tokens.append(("const", c, i))
            i += 1
            continue
        m = IDENT_RE.match(text, i)
        if m:
            tokens.append(("ident", m.group(), i))
            i = m.end()
            continue
        raise ParseError(f"unexpected character {c!r}", offset=i)
    tokens.append(("end", "", n))
    return tokens


def parse_expr(text: str, known_vars: Optional[Iterable[str]] = None) -> BoolExpr:
    """Parse the concrete syntax above into an expression tree.

    If ``known_vars`` is given, every identifier must be a member of it,
    otherwise an :class:`UnknownVariableError` names the offender.
    Syntax errors carry the byte offset of the offending token.
    """
    if not text.strip():
        raise ParseError("empty expression", offset=0)
    known = set(known_vars) if known_vars is not None else None
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos]

    def take():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def parse_or():
        node = parse_and()
        while peek()[0] == "|":
            take()
            node = Or(node, parse_and())
        return node

    def parse_and():
        node = parse_lit()
        while peek()[0] == "&":
            take()
            node = And(node, parse_lit())
        return node

    def parse_lit():
        kind, tok, off = take()
        if kind == "!":
            return Not(parse_lit())
        if kind == "(":
            node = parse_or()
            kind2, _, off2 = take()
            if kind2 != ")":
                raise ParseError("expected ')'", offset=off2)
            return node
        if kind == "const":
            return Const(int(tok))
        if kind == "ident":
            if known is not None and tok not in known:
                raise UnknownVariableError(tok, offset=off)
            return Var(tok)
        shown = tok if tok else "end of input"
        raise ParseError(f"expected a literal, got {shown!r}", offset=off)

    node = parse_or()
    kind, tok, off = peek()
    if kind != "end":
        raise ParseError(f"unexpected trailing input {tok!r}", offset=off)
    return node


def evaluate(expr: BoolExpr, assignment: Mapping[str, int]) -> int:
    """Evaluate ``expr`` to 0 or 1 under a complete variable assignment."""
    if isinstance(expr, Var):
        try:
            return 1 if assignment[expr.name] else 0
        except KeyError:
            raise MissingVariableError(expr.name) from None
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Not):
        return 1 - evaluate(expr.child, assignment)
    if isinstance(expr, And):
        return evaluate(expr.left, assignment) & evaluate(expr.right, assignment)
    if isinstance(expr, Or):
        return evaluate(expr.left, assignment) | evaluate(expr.right, assignment)
    raise TypeError(f"not an expression node: {expr!r}")


def substitute(expr: BoolExpr, renaming: Mapping[str, str]) -> BoolExpr:
    """Rename variables: every ``Var(a)`` with ``a`` in ``renaming`` becomes
    ``Var(renaming[a])``.  The tree structure is otherwise untouched; no
    simplification happens even when the result repeats a conjunct.
    """
    if isinstance(expr, Var):
        new = renaming.get(expr.name)
        return Var(new) if new is not None else expr
    if isinstance(expr, Const):
        return expr
    if isinstance(expr, Not):
        return Not(substitute(expr.child, renaming))
    if isinstance(expr, And):
        return And(substitute(expr.left, renaming), substitute(expr.right, renaming))
    if isinstance(expr, Or):
        return Or(substitute(expr.left, renaming), substitute(expr.right, renaming))
    raise TypeError(f"not an expression node: {expr!r}")


def free_vars(expr: BoolExpr) -> list[str]:
    """Variable names occurring in ``expr``, in first-occurrence order."""
    seen: dict[str, None] = {}

    def walk(e):
        if isinstance(e, Var):
            seen.setdefault(e.name)
        elif isinstance(e, Not):
            walk(e.child)
        elif isinstance(e, (And, Or)):
            walk(e.left)
            walk(e.right)

    walk(expr)
    return list(seen)


# Precedence levels used to keep serialized output minimally parenthesized.
_PREC = {Or: 0, And: 1, Not: 2, Var: 3, Const: 3}


def serialize_expr(expr: BoolExpr) -> str:
    """Render ``expr`` so that ``parse_expr`` reproduces it structurally."""

    def render(e, floor):
        if isinstance(e, Var):
            s = e.name
        elif isinstance(e, Const):
            s = str(e.value)
        elif isinstance(e, Not):
            s = "!" + render(e.child, 2)
        elif isinstance(e, And):
            s = render(e.left, 1) + " & " + render(e.right, 2)
        elif isinstance(e, Or):
            s = render(e.left, 0) + " | " + render(e.right, 1)
        else:
            raise TypeError(f"not an expression node: {e!r}")
        if _PREC[type(e)] < floor:
            return "(" + s + ")"
        return s

    return render(expr, 0)
