"""LTL abstract syntax.

Formulas are immutable and hashable, so they can be used as dictionary keys,
set members and cache keys.  Conjunction and disjunction are binary.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union


@dataclass(frozen=True)
class TrueConst:
    def __repr__(self) -> str:
        return "TRUE"


@dataclass(frozen=True)
class FalseConst:
    def __repr__(self) -> str:
        return "FALSE"


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Not:
    operand: Formula


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next:
    operand: Formula


@dataclass(frozen=True)
class Globally:
    operand: Formula


@dataclass(frozen=True)
class Eventually:
    operand: Formula


@dataclass(frozen=True)
class Until:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Release:
    left: Formula
    right: Formula


Formula = Union[
    TrueConst, FalseConst, Atom, Not, And, Or, Implies, Iff,
    Next, Globally, Eventually, Until, Release,
]


def _cache_hash(cls) -> None:
    # formulas are hashed constantly by caches and dict keys; the generated
    # hash walks the whole tree, so remember it on the instance
    structural = cls.__hash__

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = structural(self)
            object.__setattr__(self, "_hash", h)
            return h

    cls.__hash__ = __hash__


for _cls in (TrueConst, FalseConst, Atom, Not, And, Or, Implies, Iff,
             Next, Globally, Eventually, Until, Release):
    _cache_hash(_cls)

TRUE = TrueConst()
FALSE = FalseConst()

UNARY = (Not, Next, Globally, Eventually)
BINARY = (And, Or, Implies, Iff, Until, Release)
TEMPORAL = (Next, Globally, Eventually, Until, Release)


def children(f: Formula) -> tuple:
    if isinstance(f, UNARY):
        return (f.operand,)
    if isinstance(f, BINARY):
        return (f.left, f.right)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    """Yield every node of ``f`` in post-order (children first)."""
    stack = [(f, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            yield node
            continue
        stack.append((node, True))
        for child in reversed(children(node)):
            stack.append((child, False))


def ap_formula(f: Formula) -> frozenset:
    """Names of the atomic propositions occurring in ``f``."""
    return frozenset(n.name for n in subformulas(f) if isinstance(n, Atom))


def depth(f: Formula) -> int:
    kids = children(f)
    if not kids:
        return 0
    return 1 + max(depth(k) for k in kids)


def is_literal(f: Formula) -> bool:
    return isinstance(f, Atom) or (isinstance(f, Not) and isinstance(f.operand, Atom))


def conj(*parts: Formula) -> Formula:
    """Left-nested conjunction; the empty conjunction is TRUE."""
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(*parts: Formula) -> Formula:
    """Left-nested disjunction; the empty disjunction is FALSE."""
    if not parts:
        return FALSE
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def flatten(f: Formula, kind: type) -> list:
    """Operands of a (possibly nested) chain of ``kind`` nodes, in order."""
    if isinstance(f, kind):
        return flatten(f.left, kind) + flatten(f.right, kind)
    return [f]


def has_temporal_outside_next(f: Formula) -> bool:
    """True if some G/F/U/R node of ``f`` has no X ancestor."""
    if isinstance(f, Next):
        return False
    if isinstance(f, (Globally, Eventually, Until, Release)):
        return True
    return any(has_temporal_outside_next(k) for k in children(f))
