"""Temporal obligation pairs and the temporal correction log (TCL).

A TCL maps candidate output events to the obligations that would remain if
that event were emitted, together with the candidate's distance to the
observed event.  It is a plain ``dict[Event, tuple[TopSet, int]]``; the
functions here never mutate their arguments.
"""
from __future__ import annotations

from typing import NamedTuple

from .ltl.events import Event, distance, event_key, format_event, parse_event, subsets
from .ltl.formula import (
    FALSE, TRUE, And, Atom, FalseConst, Formula, Next, Not, Or, TrueConst,
    ap_formula, conj, flatten,
)
from .ltl.rewrite import tdnf
from .ltl.sat import is_satisfiable
from .ltl.simplify import simplify
from .ltl.syntax import parse_formula, print_formula


class Top(NamedTuple):
    """A temporal obligation pair: ``present & X future``."""

    present: Formula
    future: Formula


TopSet = tuple  # of Top, deduplicated, insertion-ordered
Tcl = dict  # Event -> (TopSet, distance)


class MalformedFormulaError(ValueError):
    pass


def dedup(tops) -> TopSet:
    out = []
    for t in tops:
        if t not in out:
            out.append(t)
    return tuple(out)


def encode(f: Formula) -> TopSet:
    """Split a formula in temporal DNF into (present, future) pairs."""
    pairs = []
    for monomial in flatten(f, Or):
        present, future = [], []
        for part in flatten(monomial, And):
            if isinstance(part, Next):
                future.append(part.operand)
            elif isinstance(part, (Atom, TrueConst, FalseConst)) or (
                isinstance(part, Not) and isinstance(part.operand, Atom)
            ):
                present.append(part)
            else:
                raise MalformedFormulaError(f"not a TDNF monomial member: {print_formula(part)}")
        pairs.append(Top(simplify(conj(*present)), simplify(conj(*future))))
    return dedup(pairs)


def decode(tops: TopSet) -> Formula:
    """The disjunction of ``present & X future`` denoted by a TopSet.

    The disjunction is balanced so that large sets stay shallow.
    """
    parts = [And(t.present, Next(t.future)) for t in tops]
    if not parts:
        return FALSE
    while len(parts) > 1:
        paired = [Or(x, y) for x, y in zip(parts[::2], parts[1::2])]
        parts = paired + parts[len(paired) * 2:]
    return parts[0]


def rw_local(p: Formula, obs: Event, local_ap) -> Formula:
    """Evaluate the locally observable atoms of a present obligation."""
    local_ap = frozenset(local_ap)

    def sub(f: Formula) -> Formula:
        if isinstance(f, Atom):
            if f.name in obs:
                return TRUE
            if f.name in local_ap:
                return FALSE
            return f
        if isinstance(f, Not):
            return Not(sub(f.operand))
        if isinstance(f, (And, Or)):
            return type(f)(sub(f.left), sub(f.right))
        return f

    return simplify(sub(p))


def apr(tcl: Tcl) -> frozenset:
    """Atoms still occurring in some present obligation of the TCL."""
    out = frozenset()
    for tops, _ in tcl.values():
        for t in tops:
            out |= ap_formula(t.present)
    return out


def initial_tcl(phi: Formula) -> Tcl:
    return {frozenset(): (encode(tdnf(phi)), 0)}


def update_tcl(tcl: Tcl, sigma_local: Event, local_ap) -> Tcl:
    """Expand every entry with each assignment of the local, still-open atoms."""
    scope = frozenset(local_ap) & apr(tcl)
    local_choices = list(subsets(scope))
    out = {}
    for old_event, (tops, n) in tcl.items():
        for choice in local_choices:
            rewritten = dedup(Top(rw_local(t.present, choice, local_ap), t.future) for t in tops)
            out[old_event | choice] = (rewritten, n + distance(choice, sigma_local, scope))
    return out


def obligation_alive(top: Top, exact: bool = True) -> bool:
    """Whether a pair can still be satisfied.

    With ``exact`` the future is checked for satisfiability; otherwise only
    the syntactic simplifier is consulted.
    """
    if isinstance(simplify(top.present), FalseConst):
        return False
    if exact:
        return is_satisfiable(top.future)
    return not isinstance(simplify(top.future), FalseConst)


def reduce(tcl: Tcl, exact: bool = True) -> Tcl:
    """Drop dead pairs, then drop events left with no pair."""
    out = {}
    for ev, (tops, n) in tcl.items():
        kept = tuple(t for t in tops if obligation_alive(t, exact))
        if kept:
            out[ev] = (kept, n)
    return out


def next_formula(tops: TopSet) -> Formula:
    """Disjunction of the futures of a TopSet, simplified."""
    out = FALSE
    for t in tops:
        out = Or(out, t.future)
    return simplify(out)


# canonical text -------------------------------------------------------------

def format_entry(ev: Event, tops: TopSet, n: int) -> str:
    pairs = "".join(
        f" ; ({print_formula(t.present)} | {print_formula(t.future)})" for t in tops
    )
    return f"{format_event(ev)} -> dist={n}{pairs}"


def format_tcl(tcl: Tcl) -> str:
    ordered = sorted(tcl.items(), key=lambda kv: (kv[1][1], event_key(kv[0])))
    return "\n".join(format_entry(ev, tops, n) for ev, (tops, n) in ordered)


def parse_entry(line: str) -> tuple:
    head, *pairs = line.split(" ; ")
    event_text, _, dist_text = head.partition(" -> ")
    if not dist_text.startswith("dist="):
        raise ValueError(f"malformed TCL line: {line!r}")
    tops = []
    for pair in pairs:
        pair = pair.strip()
        if not (pair.startswith("(") and pair.endswith(")")):
            raise ValueError(f"malformed obligation pair: {pair!r}")
        # presents never contain a disjunction, so the first bar separates
        present, sep, future = pair[1:-1].partition(" | ")
        if not sep:
            raise ValueError(f"malformed obligation pair: {pair!r}")
        tops.append(Top(parse_formula(present), parse_formula(future)))
    return parse_event(event_text), tuple(tops), int(dist_text[len("dist="):])


def parse_tcl(text: str) -> Tcl:
    out = {}
    for line in text.splitlines():
        if line.strip():
            ev, tops, n = parse_entry(line)
            out[ev] = (tops, n)
    return out
