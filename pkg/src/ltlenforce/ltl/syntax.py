"""Text syntax for LTL formulas.

Grammar, loosest binding first::

    iff     := implies ('<->' implies)*          left-associative
    implies := or ('->' implies)?                right-associative
    or      := and ('|' and)*
    and     := binop ('&' binop)*
    binop   := unary (('U' | 'R') binop)?        right-associative
    unary   := ('!' | 'X' | 'G' | 'F') unary | primary
    primary := 'true' | 'false' | ATOM | '(' iff ')'
"""
from __future__ import annotations

import re
from typing import Iterable, Optional

from .formula import (
    FALSE, TRUE, And, Atom, Eventually, FalseConst, Formula, Globally, Iff,
    Implies, Next, Not, Or, Release, TrueConst, Until,
)

KEYWORDS = {"true", "false", "X", "G", "F", "U", "R"}

_TOKEN = re.compile(r"\s*(?:(<->|->|[!&|()])|([A-Za-z_][A-Za-z0-9_]*))")


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownAtomError(ValueError):
    pass


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(1) if m.group(1) else m.start(2)
        tokens.append((m.group(1) or m.group(2), start))
        pos = m.end()
    tokens.append(("<eof>", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, alphabet: Optional[frozenset]):
        self.tokens = _tokenize(text)
        self.i = 0
        self.alphabet = alphabet

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def advance(self) -> tuple:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> None:
        tok, pos = self.advance()
        if tok != value:
            raise FormulaSyntaxError(f"expected {value!r}, found {tok!r}", pos)

    def parse(self) -> Formula:
        f = self.iff()
        tok, pos = self.tokens[self.i]
        if tok != "<eof>":
            raise FormulaSyntaxError(f"unexpected token {tok!r}", pos)
        return f

    def iff(self) -> Formula:
        f = self.implies()
        while self.peek() == "<->":
            self.advance()
            f = Iff(f, self.implies())
        return f

    def implies(self) -> Formula:
        f = self.disjunction()
        if self.peek() == "->":
            self.advance()
            return Implies(f, self.implies())
        return f

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek() == "|":
            self.advance()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.binop()
        while self.peek() == "&":
            self.advance()
            f = And(f, self.binop())
        return f

    def binop(self) -> Formula:
        f = self.unary()
        op = self.peek()
        if op in ("U", "R"):
            self.advance()
            rhs = self.binop()
            return Until(f, rhs) if op == "U" else Release(f, rhs)
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "!":
            self.advance()
            return Not(self.unary())
        if tok == "X":
            self.advance()
            return Next(self.unary())
        if tok == "G":
            self.advance()
            return Globally(self.unary())
        if tok == "F":
            self.advance()
            return Eventually(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        tok, pos = self.advance()
        if tok == "(":
            f = self.iff()
            self.expect(")")
            return f
        if tok == "true":
            return TRUE
        if tok == "false":
            return FALSE
        if tok == "<eof>":
            raise FormulaSyntaxError("unexpected end of input", pos)
        if tok in KEYWORDS or not (tok[0].isalpha() or tok[0] == "_"):
            raise FormulaSyntaxError(f"unexpected token {tok!r}", pos)
        if self.alphabet is not None and tok not in self.alphabet:
            raise UnknownAtomError(f"atom {tok!r} at position {pos} is not in the alphabet")
        return Atom(tok)


def parse_formula(text: str, alphabet: Optional[Iterable[str]] = None) -> Formula:
    """Parse ``text``; if ``alphabet`` is given, atoms outside it are rejected."""
    return _Parser(text, frozenset(alphabet) if alphabet is not None else None).parse()


# printer ---------------------------------------------------------------------

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Until: 5, Release: 5}
_SYMBOL = {Iff: "<->", Implies: "->", Or: "|", And: "&", Until: "U", Release: "R"}
_RIGHT_ASSOC = (Implies, Until, Release)
_UNARY_SYMBOL = {Not: "!", Next: "X", Globally: "G", Eventually: "F"}


def _bare_operand(f: Formula) -> bool:
    return isinstance(f, (Atom, TrueConst, FalseConst)) or (
        isinstance(f, Not) and isinstance(f.operand, (Atom, TrueConst, FalseConst))
    )


def print_formula(f: Formula) -> str:
    if isinstance(f, TrueConst):
        return "true"
    if isinstance(f, FalseConst):
        return "false"
    if isinstance(f, Atom):
        return f.name
    kind = type(f)
    if kind in _UNARY_SYMBOL:
        inner = print_formula(f.operand)
        if not _bare_operand(f.operand):
            inner = f"({inner})"
        sep = "" if kind is Not else " "
        return f"{_UNARY_SYMBOL[kind]}{sep}{inner}"
    prec = _PREC[kind]
    right_assoc = kind in _RIGHT_ASSOC
    left = _wrap(f.left, prec, strict=right_assoc)
    right = _wrap(f.right, prec, strict=not right_assoc)
    return f"{left} {_SYMBOL[kind]} {right}"


def _wrap(child: Formula, prec: int, strict: bool) -> str:
    text = print_formula(child)
    child_prec = _PREC.get(type(child), 6)
    if child_prec < prec or (strict and child_prec == prec):
        return f"({text})"
    return text
