"""Propositional formulas: trees, a small recursive-descent parser, a printer.

Grammar, loosest first::

    imp  := disj ('->' imp)?          right associative
    disj := conj ('|' conj)*          left associative
    conj := neg ('&' neg)*            left associative
    neg  := '~' neg | atom
    atom := identifier | '0' | '1' | '(' imp ')'

``~a`` is stored as ``a -> 0``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import ParseError


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


Formula = Union[Var, Bot, Top, And, Or, Implies]


def Not(phi: Formula) -> Implies:
    return Implies(phi, Bot())


def is_negation(phi: Formula) -> bool:
    return isinstance(phi, Implies) and isinstance(phi.right, Bot)


# -- measures ----------------------------------------------------------------------

def implication_rank(phi: Formula) -> int:
    """Deepest nesting of implications; a negation counts as one."""
    if isinstance(phi, Implies):
        return 1 + max(implication_rank(phi.left), implication_rank(phi.right))
    if isinstance(phi, (And, Or)):
        return max(implication_rank(phi.left), implication_rank(phi.right))
    return 0


def size(phi: Formula) -> int:
    if isinstance(phi, (And, Or, Implies)):
        return 1 + size(phi.left) + size(phi.right)
    return 1


def variables(phi: Formula) -> frozenset[str]:
    if isinstance(phi, Var):
        return frozenset([phi.name])
    if isinstance(phi, (And, Or, Implies)):
        return variables(phi.left) | variables(phi.right)
    return frozenset()


# -- parsing -----------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(->|→)|([~¬])|([&∧])|([|∨])|(\()|(\))|([01⊥⊤])"
                    r"|([A-Za-z_][A-Za-z0-9_']*))")
_KINDS = ("imp", "not", "and", "or", "lp", "rp", "const", "ident")


def _tokens(text: str) -> Iterator[tuple[str, str, int]]:
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            yield ("end", "", pos)
            return
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = pos + (len(m.group(0)) - len(m.group(0).lstrip()))
        kind = next(k for k, g in zip(_KINDS, m.groups()) if g is not None)
        yield (kind, m.group(m.lastindex), start)
        pos = m.end()


class _Parser:
    def __init__(self, text: str):
        self.toks = list(_tokens(text))
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def take(self, kind: str) -> tuple[str, str, int]:
        tok = self.toks[self.i]
        if tok[0] != kind:
            found = tok[1] or "end of input"
            raise ParseError(f"expected {kind}, found {found!r}", tok[2])
        self.i += 1
        return tok

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek()[0] == "imp":
            self.i += 1
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        out = self.conj()
        while self.peek()[0] == "or":
            self.i += 1
            out = Or(out, self.conj())
        return out

    def conj(self) -> Formula:
        out = self.neg()
        while self.peek()[0] == "and":
            self.i += 1
            out = And(out, self.neg())
        return out

    def neg(self) -> Formula:
        if self.peek()[0] == "not":
            self.i += 1
            return Not(self.neg())
        return self.atom()

    def atom(self) -> Formula:
        kind, text, pos = self.peek()
        if kind == "ident":
            self.i += 1
            return Var(text)
        if kind == "const":
            self.i += 1
            return Top() if text in ("1", "⊤") else Bot()
        if kind == "lp":
            self.i += 1
            inner = self.imp()
            self.take("rp")
            return inner
        raise ParseError(f"expected a formula, found {text or 'end of input'!r}", pos)


def parse(text: str) -> Formula:
    p = _Parser(text)
    phi = p.imp()
    p.take("end")
    return phi


# -- printing ----------------------------------------------------------------------

def _prec(phi: Formula) -> int:
    if is_negation(phi):
        return 4
    return {Implies: 1, Or: 2, And: 3}.get(type(phi), 5)


def to_text(phi: Formula) -> str:
    """Shortest bracketing that parses back to the same tree."""
    if isinstance(phi, Var):
        return phi.name
    if isinstance(phi, Bot):
        return "0"
    if isinstance(phi, Top):
        return "1"
    if is_negation(phi):
        inner = to_text(phi.left)
        return "~" + (inner if _prec(phi.left) >= 4 else f"({inner})")
    me = _prec(phi)

    def wrap(sub: Formula, need: int) -> str:
        s = to_text(sub)
        return s if _prec(sub) >= need else f"({s})"

    if isinstance(phi, Implies):
        return f"{wrap(phi.left, 2)} -> {wrap(phi.right, 1)}"
    op = " | " if isinstance(phi, Or) else " & "
    return wrap(phi.left, me) + op + wrap(phi.right, me + 1)


def sort_key(phi: Formula) -> tuple[int, int, str]:
    """Rank, then size, then printed form."""
    return (implication_rank(phi), size(phi), to_text(phi))
