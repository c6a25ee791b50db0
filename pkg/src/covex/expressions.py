"""Boolean expressions over feature-value atoms.

Grammar (whitespace between tokens is ignored)::

    expr   := disj
    disj   := conj ('|' conj)*
    conj   := unary ('&' unary)*
    unary  := '!' unary | '(' expr ')' | atom
    atom   := NAME '=' TOKEN

'!' binds tighter than '&', which binds tighter than '|'. NAME must be a
feature of the theory and TOKEN a value of that feature's domain; both are
words over [A-Za-z0-9_.+-]. Parse problems raise ParseError with a 0-based
character position.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import ParseError
from .theory import ClassificationTheory, Literal

_WORD = re.compile(r"[A-Za-z0-9_.+-]+")


class Expr:
    """Base class for parsed expression nodes."""

    def evaluate(self, values: Sequence[int]) -> bool:
        raise NotImplementedError

    def atoms(self) -> Iterator["Atom"]:
        raise NotImplementedError


@dataclass(frozen=True)
class Atom(Expr):
    literal: Literal
    text: str

    def evaluate(self, values: Sequence[int]) -> bool:
        return values[self.literal.feature] == self.literal.value

    def atoms(self):
        yield self

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class Not(Expr):
    operand: Expr

    def evaluate(self, values: Sequence[int]) -> bool:
        return not self.operand.evaluate(values)

    def atoms(self):
        yield from self.operand.atoms()

    def __str__(self) -> str:
        return f"!({self.operand})"


@dataclass(frozen=True)
class And(Expr):
    left: Expr
    right: Expr

    def evaluate(self, values: Sequence[int]) -> bool:
        return self.left.evaluate(values) and self.right.evaluate(values)

    def atoms(self):
        yield from self.left.atoms()
        yield from self.right.atoms()

    def __str__(self) -> str:
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Or(Expr):
    left: Expr
    right: Expr

    def evaluate(self, values: Sequence[int]) -> bool:
        return self.left.evaluate(values) or self.right.evaluate(values)

    def atoms(self):
        yield from self.left.atoms()
        yield from self.right.atoms()

    def __str__(self) -> str:
        return f"({self.left} | {self.right})"


class _Parser:
    def __init__(self, theory: ClassificationTheory, text: str):
        self.theory = theory
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def fail(self, message: str) -> ParseError:
        return ParseError(message, position=self.pos)

    def word(self, what: str) -> str:
        self.skip_ws()
        m = _WORD.match(self.text, self.pos)
        if not m:
            raise self.fail(f"expected {what}")
        self.pos = m.end()
        return m.group()

    # grammar ----------------------------------------------------------

    def parse(self) -> Expr:
        node = self.disj()
        self.skip_ws()
        if self.pos != len(self.text):
            raise self.fail("unexpected trailing input")
        return node

    def disj(self) -> Expr:
        node = self.conj()
        while self.peek() == "|":
            self.pos += 1
            node = Or(node, self.conj())
        return node

    def conj(self) -> Expr:
        node = self.unary()
        while self.peek() == "&":
            self.pos += 1
            node = And(node, self.unary())
        return node

    def unary(self) -> Expr:
        ch = self.peek()
        if ch == "!":
            self.pos += 1
            return Not(self.unary())
        if ch == "(":
            self.pos += 1
            node = self.disj()
            if self.peek() != ")":
                raise self.fail("expected ')'")
            self.pos += 1
            return node
        return self.atom()

    def atom(self) -> Expr:
        start = self.pos
        name = self.word("a feature name")
        self.skip_ws()
        if self.peek() != "=":
            raise self.fail("expected '=' after feature name")
        self.pos += 1
        token = self.word("a value token")
        try:
            lit = self.theory.literal(name, token)
        except Exception as exc:
            self.pos = start
            raise self.fail(str(exc)) from None
        return Atom(lit, f"{name}={token}")


def parse_expression(theory: ClassificationTheory, text: str) -> Expr:
    """Parse a boolean expression over the theory's feature-value atoms."""
    if not text or not text.strip():
        raise ParseError("empty expression", position=0)
    return _Parser(theory, text).parse()
