"""Syntactic simplification.

The rule set is small and sound: constant folding for every connective,
flattening of conjunction/disjunction chains with duplicate removal and
complementary-pair detection, double negation, and ``X true -> true``.
Below G, F, U and R only constant folding is applied, so the bodies of
future obligations keep their shape.
"""
from __future__ import annotations

from functools import lru_cache

from .formula import (
    FALSE, TRUE, And, Atom, Eventually, FalseConst, Formula, Globally, Iff,
    Implies, Next, Not, Or, Release, TrueConst, Until, conj, disj, flatten,
)


def simplify(f: Formula) -> Formula:
    return _simplify(f, True)


def fold_constants(f: Formula) -> Formula:
    return _simplify(f, False)


def is_false(f: Formula) -> bool:
    """Sound but incomplete test for ``f == false``."""
    return isinstance(simplify(f), FalseConst)


def _negate(f: Formula) -> Formula:
    if isinstance(f, TrueConst):
        return FALSE
    if isinstance(f, FalseConst):
        return TRUE
    if isinstance(f, Not):
        return f.operand
    return Not(f)


def _chain(parts: list, kind: type) -> Formula:
    unit, absorber = (TRUE, FALSE) if kind is And else (FALSE, TRUE)
    seen = []
    for p in parts:
        if p == absorber:
            return absorber
        if p == unit or p in seen:
            continue
        seen.append(p)
    for p in seen:
        if _negate(p) in seen and not isinstance(p, (TrueConst, FalseConst)):
            return absorber
    return conj(*seen) if kind is And else disj(*seen)


def _binary_fold(kind: type, left: Formula, right: Formula) -> Formula:
    unit, absorber = (TRUE, FALSE) if kind is And else (FALSE, TRUE)
    if left == absorber or right == absorber:
        return absorber
    if left == unit:
        return right
    if right == unit:
        return left
    return kind(left, right)


@lru_cache(maxsize=200_000)
def _simplify(f: Formula, full: bool) -> Formula:
    if isinstance(f, (TrueConst, FalseConst, Atom)):
        return f
    if isinstance(f, Not):
        inner = _simplify(f.operand, full)
        if isinstance(inner, (TrueConst, FalseConst)):
            return _negate(inner)
        if full and isinstance(inner, Not):
            return inner.operand
        return Not(inner)
    if isinstance(f, (And, Or)):
        kind = type(f)
        if full:
            return _chain([_simplify(p, True) for p in flatten(f, kind)], kind)
        return _binary_fold(kind, _simplify(f.left, False), _simplify(f.right, False))
    if isinstance(f, Implies):
        left, right = _simplify(f.left, full), _simplify(f.right, full)
        if isinstance(left, FalseConst) or isinstance(right, TrueConst):
            return TRUE
        if isinstance(left, TrueConst):
            return right
        if isinstance(right, FalseConst):
            return _negate(left)
        return Implies(left, right)
    if isinstance(f, Iff):
        left, right = _simplify(f.left, full), _simplify(f.right, full)
        for a, b in ((left, right), (right, left)):
            if isinstance(a, TrueConst):
                return b
            if isinstance(a, FalseConst):
                return _negate(b)
        return Iff(left, right)
    if isinstance(f, Next):
        inner = _simplify(f.operand, full)
        if isinstance(inner, (TrueConst, FalseConst)):
            return inner
        return Next(inner)
    if isinstance(f, (Globally, Eventually)):
        inner = _simplify(f.operand, False)
        if isinstance(inner, (TrueConst, FalseConst)):
            return inner
        return type(f)(inner)
    if isinstance(f, Until):
        left, right = _simplify(f.left, False), _simplify(f.right, False)
        if isinstance(right, (TrueConst, FalseConst)):
            return right
        if isinstance(left, FalseConst):
            # the operand leaves the temporal context
            return _simplify(f.right, full)
        if isinstance(left, TrueConst):
            return Eventually(right)
        return Until(left, right)
    if isinstance(f, Release):
        left, right = _simplify(f.left, False), _simplify(f.right, False)
        if isinstance(right, (TrueConst, FalseConst)):
            return right
        if isinstance(left, TrueConst):
            return _simplify(f.right, full)
        if isinstance(left, FalseConst):
            return Globally(right)
        return Release(left, right)
    raise TypeError(f"not a formula: {f!r}")
