"""Poset expressions over the base posets with ``+`` (linear sum) and ``*`` (gluing).

Grammar::

    expr  := term ('+' term)*
    term  := atom ('*' atom)*
    atom  := NAME | '@' PATH | '(' expr ')'

``*`` binds tighter than ``+``; both are left-associative. The unicode
operators ⊕ and ⊗ are accepted as synonyms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .poset import (
    BASE_LEVELS,
    Poset,
    PosetError,
    base_poset,
    canonical_base_name,
    load_poset,
    oplus,
    otimes,
)


@dataclass(frozen=True)
class Base:
    name: str


@dataclass(frozen=True)
class Custom:
    """Leaf holding a poset loaded from an ``@file`` reference."""
    source: str
    poset: Poset


@dataclass(frozen=True)
class Oplus:
    left: "PosetExpr"
    right: "PosetExpr"


@dataclass(frozen=True)
class Otimes:
    left: "PosetExpr"
    right: "PosetExpr"


PosetExpr = Union[Base, Custom, Oplus, Otimes]


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class ExprEvalError(PosetError):
    def __init__(self, message: str, path: str):
        super().__init__(f"{message} (at {path})")
        self.path = path


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<name>D_?3|Sp|S'|[EBQRS])(?![A-Za-z0-9_'])
  | (?P<file>@[^\s()+*⊕⊗]+)
  | (?P<op>[+*⊕⊗()])
  | (?P<bad>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)

_BINARY = {"+": (1, Oplus), "⊕": (1, Oplus), "*": (2, Otimes), "⊗": (2, Otimes)}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind == "bad":
            raise ExprSyntaxError(f"unknown base poset {m.group()!r}", pos)
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def parse_expr(text: str, base_dir: str | Path | None = None, validate: bool = True) -> PosetExpr:
    """Parse an expression string; ``@file`` leaves are loaded relative to base_dir.

    With ``validate`` the tree is evaluated once so that a gluing whose
    operands lack a greatest/least element is rejected here (ExprEvalError).
    """
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos]

    def advance():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def atom() -> PosetExpr:
        kind, value, at = advance()
        if kind == "name":
            return Base(canonical_base_name(value))
        if kind == "file":
            path = Path(value[1:])
            if base_dir is not None and not path.is_absolute():
                path = Path(base_dir) / path
            try:
                return Custom(value[1:], load_poset(path))
            except OSError as exc:
                raise ExprSyntaxError(f"cannot read poset file {str(path)!r}: {exc.strerror}", at) from None
        if value == "(":
            inner = climb(1)
            kind, value, at = advance()
            if value != ")":
                raise ExprSyntaxError("expected ')'", at)
            return inner
        what = "end of input" if kind == "end" else repr(value)
        raise ExprSyntaxError(f"expected a poset name, '@file' or '(' but found {what}", at)

    def climb(min_prec: int) -> PosetExpr:
        lhs = atom()
        while True:
            kind, value, at = peek()
            if kind != "op" or value not in _BINARY:
                return lhs
            prec, node = _BINARY[value]
            if prec < min_prec:
                return lhs
            advance()
            rhs = climb(prec + 1)
            lhs = node(lhs, rhs)

    tree = climb(1)
    kind, value, at = peek()
    if kind != "end":
        raise ExprSyntaxError(f"unexpected {value!r}", at)
    if validate:
        eval_expr(tree)
    return tree


def format_expr(e: PosetExpr) -> str:
    """Render with the fewest parentheses that reparse to the same tree."""
    if isinstance(e, Base):
        return e.name
    if isinstance(e, Custom):
        return "@" + e.source
    left, right = format_expr(e.left), format_expr(e.right)
    if isinstance(e, Oplus):
        if isinstance(e.right, Oplus):
            right = f"({right})"
        return f"{left} + {right}"
    if isinstance(e.left, Oplus):
        left = f"({left})"
    if isinstance(e.right, (Oplus, Otimes)):
        right = f"({right})"
    return f"{left} * {right}"


def eval_expr(e: PosetExpr, path: str = "root") -> Poset:
    if isinstance(e, Base):
        return base_poset(e.name)
    if isinstance(e, Custom):
        return e.poset
    left = eval_expr(e.left, path + ".left")
    right = eval_expr(e.right, path + ".right")
    if isinstance(e, Oplus):
        return oplus(left, right)
    try:
        return otimes(left, right)
    except PosetError as exc:
        raise ExprEvalError(str(exc), path) from None


def leaves(e: PosetExpr) -> list[Base | Custom]:
    if isinstance(e, (Base, Custom)):
        return [e]
    return leaves(e.left) + leaves(e.right)


def is_base_only(e: PosetExpr) -> bool:
    return all(isinstance(leaf, Base) and leaf.name in BASE_LEVELS for leaf in leaves(e))
