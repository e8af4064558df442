"""LTL syntax, rewriting, simplification and event arithmetic."""
from .events import (
    EMPTY, AlphabetPartition, Event, Trace, distance, event, event_key,
    format_event, parse_event, subsets,
)
from .formula import (
    FALSE, TRUE, And, Atom, Eventually, FalseConst, Formula, Globally, Iff,
    Implies, Next, Not, Or, Release, TrueConst, Until, ap_formula, conj, depth,
    disj, has_temporal_outside_next, subformulas,
)
from .rewrite import distrib, is_dnf, neg_f, nf, rwt, tdnf, to_dnf
from .sat import equivalent, is_satisfiable, is_unsatisfiable
from .simplify import fold_constants, is_false, simplify
from .syntax import FormulaSyntaxError, UnknownAtomError, parse_formula, print_formula

__all__ = [name for name in dir() if not name.startswith("_")]
