"""Expansion of temporal operators and the normal-form pipeline.

``rwt`` unfolds G, F, U and R one step so that every temporal operator other
than X ends up below an X.  ``to_dnf`` then pushes negations inward and
distributes conjunction over disjunction; applied to the output of ``rwt`` it
yields a disjunction of ``present & X future`` monomials.
"""
from __future__ import annotations

from .formula import (
    FALSE, TRUE, And, Atom, Eventually, FalseConst, Formula, Globally, Iff,
    Implies, Next, Not, Or, Release, TrueConst, Until,
)


def rwt(f: Formula) -> Formula:
    if isinstance(f, (TrueConst, FalseConst, Atom, Next)):
        return f
    if isinstance(f, Not):
        return Not(rwt(f.operand))
    if isinstance(f, (And, Or, Implies, Iff)):
        return type(f)(rwt(f.left), rwt(f.right))
    if isinstance(f, Until):
        return Or(rwt(f.right), And(rwt(f.left), Next(f)))
    if isinstance(f, Release):
        return And(rwt(f.right), Or(rwt(f.left), Next(f)))
    if isinstance(f, Globally):
        return And(rwt(f.operand), Next(f))
    if isinstance(f, Eventually):
        return Or(rwt(f.operand), Next(f))
    raise TypeError(f"not a formula: {f!r}")


def neg_f(f: Formula) -> Formula:
    """Negation of ``f`` pushed one level down, dualising the operator."""
    if isinstance(f, FalseConst):
        return TRUE
    if isinstance(f, TrueConst):
        return FALSE
    if isinstance(f, Atom):
        return Not(f)
    if isinstance(f, Not):
        return f.operand
    if isinstance(f, Implies):
        return And(f.left, neg_f(f.right))
    if isinstance(f, Iff):
        return Or(And(neg_f(f.left), f.right), And(f.left, neg_f(f.right)))
    if isinstance(f, Or):
        return And(neg_f(f.left), neg_f(f.right))
    if isinstance(f, And):
        return Or(neg_f(f.left), neg_f(f.right))
    if isinstance(f, Release):
        return Until(neg_f(f.left), neg_f(f.right))
    if isinstance(f, Until):
        return Release(neg_f(f.left), neg_f(f.right))
    if isinstance(f, Globally):
        return Eventually(neg_f(f.operand))
    if isinstance(f, Eventually):
        return Globally(neg_f(f.operand))
    if isinstance(f, Next):
        return Next(neg_f(f.operand))
    raise TypeError(f"not a formula: {f!r}")


def nf(f: Formula) -> Formula:
    """Remove -> and <-> and drive negations onto atoms.

    Operands of temporal operators are left untouched.
    """
    if isinstance(f, (TrueConst, FalseConst, Atom)):
        return f
    if isinstance(f, Not):
        if isinstance(f.operand, Atom):
            return f
        return nf(neg_f(f.operand))
    if isinstance(f, Implies):
        return Or(nf(Not(f.left)), nf(f.right))
    if isinstance(f, Iff):
        return Or(And(nf(f.left), nf(f.right)), And(nf(Not(f.left)), nf(Not(f.right))))
    if isinstance(f, (And, Or)):
        return type(f)(nf(f.left), nf(f.right))
    return f


def is_dnf(f: Formula, in_monomial: bool = False) -> bool:
    if isinstance(f, Or):
        return not in_monomial and is_dnf(f.left, False) and is_dnf(f.right, False)
    if isinstance(f, And):
        return is_dnf(f.left, True) and is_dnf(f.right, True)
    if isinstance(f, Not):
        return isinstance(f.operand, Atom)
    if isinstance(f, (Implies, Iff)):
        return False
    # atoms, constants and temporal operators are monomial members
    return True


def distrib(f: Formula) -> Formula:
    """One pass of distribution of & over |, keeping operands in source order."""
    if isinstance(f, And):
        if isinstance(f.right, Or):
            return Or(distrib(And(f.left, f.right.left)), distrib(And(f.left, f.right.right)))
        if isinstance(f.left, Or):
            return Or(distrib(And(f.left.left, f.right)), distrib(And(f.left.right, f.right)))
        return And(distrib(f.left), distrib(f.right))
    if isinstance(f, Or):
        return Or(distrib(f.left), distrib(f.right))
    return f


def to_dnf(f: Formula) -> Formula:
    f = nf(f)
    while not is_dnf(f, False):
        g = distrib(f)
        if g == f:
            raise RuntimeError(f"distribution made no progress on {f!r}")
        f = g
    return f


def tdnf(f: Formula) -> Formula:
    """``to_dnf(rwt(f))``: a disjunction of present/next monomials."""
    return to_dnf(rwt(f))
