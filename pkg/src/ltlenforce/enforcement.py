"""Enforcer state machines for the global- and local-exploration protocols.

One enforcer runs per component.  Within a timestamp, the correction log
travels from enforcer to enforcer: each one evaluates the atoms it can see,
prunes dead candidates and passes the log to the lowest-indexed enforcer
that can still evaluate something.  In global mode the whole log travels
and the last holder broadcasts it so that every enforcer applies the same
decision.  In local mode each enforcer keeps a single candidate before
forwarding it, and the last one broadcasts the next formula.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Union

from .encoding import (
    Tcl, Top, TopSet, apr, format_entry, format_tcl, initial_tcl, next_formula,
    parse_entry, parse_tcl, reduce, update_tcl,
)
from .ltl.events import AlphabetPartition, Event, event_key
from .ltl.formula import TRUE, Formula
from .ltl.sat import is_satisfiable
from .ltl.simplify import is_false
from .ltl.syntax import parse_formula, print_formula

log = logging.getLogger(__name__)

GLOBAL = "global"
LOCAL = "local"
ALGORITHMS = (GLOBAL, LOCAL)

_TOP_TRUE = Top(TRUE, TRUE)


class EnforcementError(RuntimeError):
    pass


class RejectedSpecificationError(ValueError):
    """The specification is unsatisfiable, so nothing can be enforced."""


class ProtocolError(EnforcementError):
    pass


class UnreachableAlphabetError(EnforcementError):
    pass


class EmptyDomainError(EnforcementError):
    pass


class FalseNextFormulaError(EnforcementError):
    """The next formula simplified to false."""


# messages -------------------------------------------------------------------

@dataclass(frozen=True)
class TclTransfer:
    tcl: Tcl = field(hash=False)

    @property
    def entries(self) -> int:
        return len(self.tcl)


@dataclass(frozen=True)
class TclEntry:
    event: Event
    tops: TopSet
    distance: int

    @property
    def entries(self) -> int:
        return 1


@dataclass(frozen=True)
class FinalBroadcast:
    tcl: Tcl = field(hash=False)

    @property
    def entries(self) -> int:
        return len(self.tcl)


@dataclass(frozen=True)
class NextFormula:
    formula: Formula

    @property
    def entries(self) -> int:
        return 0


Message = Union[TclTransfer, TclEntry, FinalBroadcast, NextFormula]


def serialize_message(msg: Message) -> str:
    if isinstance(msg, TclTransfer):
        return "TCL\n" + format_tcl(msg.tcl)
    if isinstance(msg, FinalBroadcast):
        return "FINAL\n" + format_tcl(msg.tcl)
    if isinstance(msg, TclEntry):
        return "ENTRY\n" + format_entry(msg.event, msg.tops, msg.distance)
    if isinstance(msg, NextFormula):
        return "NEXT\n" + print_formula(msg.formula)
    raise TypeError(f"not a message: {msg!r}")


def parse_message(text: str) -> Message:
    kind, _, body = text.partition("\n")
    if kind == "TCL":
        return TclTransfer(parse_tcl(body))
    if kind == "FINAL":
        return FinalBroadcast(parse_tcl(body))
    if kind == "ENTRY":
        return TclEntry(*parse_entry(body.strip()))
    if kind == "NEXT":
        return NextFormula(parse_formula(body.strip()))
    raise ValueError(f"unknown message kind {kind!r}")


# round inputs ---------------------------------------------------------------

@dataclass(frozen=True)
class Observation:
    event: Event


@dataclass(frozen=True)
class Delivery:
    sender: int
    message: Message


# decisions ------------------------------------------------------------------

def init_state(phi: Formula) -> Tcl:
    if not is_satisfiable(phi):
        raise RejectedSpecificationError(f"specification is unsatisfiable: {print_formula(phi)}")
    return initial_tcl(phi)


def route_next(tcl: Tcl, self_index: int, partition: AlphabetPartition) -> Optional[int]:
    """Lowest-indexed other enforcer that can evaluate an open atom; None when done."""
    remaining = apr(tcl)
    if not remaining:
        return None
    for k in range(1, len(partition) + 1):
        if k != self_index and partition.local(k) & remaining:
            return k
    raise UnreachableAlphabetError(f"no enforcer observes {sorted(remaining)}")


def _closest(tcl: Tcl) -> list:
    if not tcl:
        raise EmptyDomainError("no candidate event survives")
    best = min(n for _, n in tcl.values())
    return [ev for ev, (_, n) in tcl.items() if n == best]


def _prefer_true(tcl: Tcl, candidates: list) -> list:
    done = [ev for ev in candidates if _TOP_TRUE in tcl[ev][0]]
    return done or candidates


def global_decision(tcl: Tcl) -> tuple:
    """Pick the output event from a fully evaluated TCL; return it with the next formula."""
    if apr(tcl):
        raise ProtocolError("decision on a TCL with unevaluated atoms")
    candidates = _prefer_true(tcl, _closest(tcl))
    chosen = min(candidates, key=event_key)
    return chosen, next_formula(tcl[chosen][0])


def local_decision(tcl: Tcl, remaining_nonempty: bool) -> Event:
    candidates = _closest(tcl)
    if remaining_nonempty:
        most = max(len(tcl[ev][0]) for ev in candidates)
        candidates = [ev for ev in candidates if len(tcl[ev][0]) == most]
    else:
        candidates = _prefer_true(tcl, candidates)
    return min(candidates, key=event_key)


def _check_next(formula: Formula) -> Formula:
    if is_false(formula):
        raise FalseNextFormulaError("next formula simplified to false")
    return formula


# the enforcer ---------------------------------------------------------------

IDLE, WAITING, EVALUATED, DONE = "idle", "waiting", "evaluated", "done"


@dataclass
class DomainRecord:
    enforcer: int
    size: int
    scope: int


class Enforcer:
    """Enforcer M_index.  Feed it inputs with :meth:`step`."""

    def __init__(self, index: int, partition: AlphabetPartition, formula: Formula,
                 algorithm: str = GLOBAL, exact: bool = True):
        if algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {algorithm!r}")
        self.index = index
        self.partition = partition
        self.local_ap = partition.local(index)
        self.formula = formula
        self.algorithm = algorithm
        self.exact = exact
        self._reset()

    def _reset(self) -> None:
        self.state = IDLE
        self.sigma: Event = frozenset()
        self.evaluated: frozenset = frozenset()
        self.chosen: Optional[Event] = None
        self.local_output: Optional[Event] = None
        self.next: Optional[Formula] = None
        self.domain_records: list = []

    @property
    def others(self) -> list:
        return [k for k in range(1, len(self.partition) + 1) if k != self.index]

    @property
    def done(self) -> bool:
        return self.state == DONE

    def step(self, item: Union[Observation, Delivery]) -> list:
        """Consume one input and return the ``(destination, message)`` pairs to send."""
        if isinstance(item, Observation):
            return self.observe(item.event)
        return self.receive(item.sender, item.message)

    def observe(self, sigma_local: Event) -> list:
        if self.state != IDLE:
            raise ProtocolError(f"M{self.index} observed twice in one round")
        if not sigma_local <= self.local_ap:
            raise ValueError(f"M{self.index} cannot observe {sorted(sigma_local - self.local_ap)}")
        self.sigma = frozenset(sigma_local)
        self.state = WAITING
        if self.index == 1:
            return self._evaluate(init_state(self.formula))
        return []

    def receive(self, sender: int, msg: Message) -> list:
        if self.algorithm == GLOBAL:
            if isinstance(msg, TclTransfer) and self.state == WAITING:
                if not apr(msg.tcl):
                    log.info("M%d got a fully evaluated TCL from M%d; deciding", self.index, sender)
                    self._decide_global(msg.tcl)
                    return []
                return self._evaluate(msg.tcl)
            if isinstance(msg, FinalBroadcast) and self.state in (WAITING, EVALUATED):
                self._decide_global(msg.tcl)
                return []
        else:
            if isinstance(msg, TclEntry) and self.state == WAITING:
                return self._evaluate({msg.event: (msg.tops, msg.distance)})
            if isinstance(msg, NextFormula) and self.state in (WAITING, EVALUATED):
                self.next = msg.formula
                if self.local_output is None:
                    self.local_output = self.sigma
                self.state = DONE
                return []
        raise ProtocolError(
            f"M{self.index} ({self.algorithm}, {self.state}) cannot consume "
            f"{type(msg).__name__} from M{sender}"
        )

    def _evaluate(self, tcl: Tcl) -> list:
        scope = self.local_ap & apr(tcl)
        if scope:
            tcl = update_tcl(tcl, self.sigma, self.local_ap)
            self.domain_records.append(DomainRecord(self.index, len(tcl), len(scope)))
            self.evaluated = scope
        # reduce even without an update: the initial pairs may already be dead
        tcl = reduce(tcl, exact=self.exact)
        if not tcl:
            raise EmptyDomainError(f"M{self.index}: every candidate violates the formula")
        if self.algorithm == GLOBAL:
            dest = route_next(tcl, self.index, self.partition)
            if dest is not None:
                self.state = EVALUATED
                return [(dest, TclTransfer(tcl))]
            self._decide_global(tcl)
            return [(k, FinalBroadcast(tcl)) for k in self.others]

        chosen = local_decision(tcl, bool(apr(tcl)))
        tops, n = tcl[chosen]
        self.chosen = chosen
        self.local_output = self._project(chosen)
        kept = {chosen: (tops, n)}
        dest = route_next(kept, self.index, self.partition)
        if dest is not None:
            self.state = EVALUATED
            return [(dest, TclEntry(chosen, tops, n))]
        self.next = _check_next(next_formula(tops))
        self.state = DONE
        return [(k, NextFormula(self.next)) for k in self.others]

    def _decide_global(self, tcl: Tcl) -> None:
        chosen, nxt = global_decision(tcl)
        self.chosen = chosen
        self.next = _check_next(nxt)
        self.local_output = self._project(chosen)
        self.state = DONE

    def _project(self, chosen: Event) -> Event:
        # atoms this enforcer never evaluated keep their observed value
        return (chosen & self.evaluated) | (self.sigma - self.evaluated)

    def end_round(self) -> None:
        if self.state != DONE:
            raise ProtocolError(f"M{self.index} has not finished the round")
        self.formula = self.next
        self._reset()
