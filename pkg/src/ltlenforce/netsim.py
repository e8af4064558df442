"""Deterministic message-passing simulator for a set of enforcers.

Messages sit in one priority queue keyed by delivery time and send order, so
with the default zero latency delivery is plain FIFO.  Per-channel latencies
keep each channel FIFO because a channel always has the same delay.  A
threaded driver is provided as well; it should agree with the deterministic
one on every outcome.
"""
from __future__ import annotations

import heapq
import queue
import threading
from dataclasses import dataclass, field
from typing import Optional

from .enforcement import (
    GLOBAL, Delivery, Enforcer, Observation, ProtocolError, serialize_message,
)
from .ltl.events import AlphabetPartition, Event, format_event
from .ltl.formula import Formula
from .ltl.syntax import print_formula


class DeadlockError(ProtocolError):
    pass


class AgreementError(ProtocolError):
    pass


@dataclass
class RoundStats:
    messages_sent: int = 0
    max_message_entries: int = 0
    max_domain_size: int = 0

    def count(self, msg) -> None:
        self.messages_sent += 1
        self.max_message_entries = max(self.max_message_entries, msg.entries)


@dataclass
class RoundOutcome:
    chosen_event: Event
    local_outputs: list
    next_formula: Formula
    stats: RoundStats


@dataclass
class RoundLog:
    timestamp: int
    formula: Formula
    input_event: Event
    deliveries: list = field(default_factory=list)  # (sender, receiver, message)
    domains: list = field(default_factory=list)  # DomainRecord
    decisions: list = field(default_factory=list)  # (chosen, next formula) per enforcer
    outcome: Optional[RoundOutcome] = None

    def to_text(self) -> str:
        lines = [
            f"round {self.timestamp}",
            f"formula: {print_formula(self.formula)}",
            f"input: {format_event(self.input_event)}",
        ]
        for sender, receiver, msg in self.deliveries:
            lines.append(f"deliver M{sender} -> M{receiver}")
            lines.extend("  " + ln for ln in serialize_message(msg).splitlines())
        for rec in self.domains:
            lines.append(f"domain M{rec.enforcer} size={rec.size} scope={rec.scope}")
        if self.outcome is not None:
            out = self.outcome
            lines.append(f"output: {format_event(out.chosen_event)}")
            lines.append("local: " + " ".join(
                f"M{i}={format_event(e)}" for i, e in enumerate(out.local_outputs, start=1)
            ))
            lines.append(f"next: {print_formula(out.next_formula)}")
            s = out.stats
            lines.append(
                f"stats: messages={s.messages_sent} max_entries={s.max_message_entries} "
                f"max_domain={s.max_domain_size}"
            )
        return "\n".join(lines)


class Network:
    """A set of enforcers sharing one specification, driven round by round."""

    def __init__(self, formula: Formula, partition: AlphabetPartition,
                 algorithm: str = GLOBAL, exact: bool = True, latency=None):
        self.partition = partition
        self.algorithm = algorithm
        self.formula = formula
        self.latency = dict(latency or {})
        self.enforcers = [
            Enforcer(i, partition, formula, algorithm, exact)
            for i in range(1, len(partition) + 1)
        ]
        self.timestamp = 0
        self.logs: list = []

    def _split(self, sigma: Event) -> list:
        stray = frozenset(sigma) - self.partition.atoms
        if stray:
            raise ValueError(f"event mentions atoms outside every component: {sorted(stray)}")
        return self.partition.project(frozenset(sigma))

    def run_round(self, sigma: Event) -> RoundOutcome:
        self.timestamp += 1
        record = RoundLog(self.timestamp, self.formula, frozenset(sigma))
        stats = RoundStats()
        heap: list = []
        seq = 0

        def post(now, sender, sends):
            nonlocal seq
            for dest, msg in sends:
                stats.count(msg)
                delay = self.latency.get((sender, dest), 0)
                heapq.heappush(heap, (now + delay, seq, sender, dest, msg))
                seq += 1

        for enf, local in zip(self.enforcers, self._split(sigma)):
            post(0, enf.index, enf.step(Observation(local)))
        limit = 4 * len(self.enforcers) + 4
        while heap:
            now, _, sender, dest, msg = heapq.heappop(heap)
            record.deliveries.append((sender, dest, msg))
            if len(record.deliveries) > limit:
                raise ProtocolError("message bound exceeded")
            post(now, dest, self.enforcers[dest - 1].step(Delivery(sender, msg)))

        outcome = self._finish(record, stats)
        self.logs.append(record)
        return outcome

    def _finish(self, record: RoundLog, stats: RoundStats) -> RoundOutcome:
        stuck = [e.index for e in self.enforcers if not e.done]
        if stuck:
            raise DeadlockError(f"enforcers {stuck} never finished the round")
        record.decisions = [(e.chosen, e.next) for e in self.enforcers]
        nexts = {e.next for e in self.enforcers}
        if len(nexts) != 1:
            raise AgreementError("enforcers disagree on the next formula")
        if self.algorithm == GLOBAL and len({e.chosen for e in self.enforcers}) != 1:
            raise AgreementError("enforcers disagree on the chosen event")
        for e in self.enforcers:
            record.domains.extend(e.domain_records)
        stats.max_domain_size = max((r.size for r in record.domains), default=0)
        locals_ = [e.local_output for e in self.enforcers]
        outcome = RoundOutcome(frozenset().union(*locals_), locals_, nexts.pop(), stats)
        record.outcome = outcome
        for e in self.enforcers:
            e.end_round()
        self.formula = outcome.next_formula
        return outcome

    def run_trace(self, trace) -> tuple:
        outputs = [self.run_round(sigma).chosen_event for sigma in trace]
        return outputs, self.logs

    def run_round_threaded(self, sigma: Event, timeout: float = 10.0) -> RoundOutcome:
        """Same round, one thread per enforcer and a queue per inbox."""
        self.timestamp += 1
        record = RoundLog(self.timestamp, self.formula, frozenset(sigma))
        stats = RoundStats()
        lock = threading.Lock()
        inboxes = {e.index: queue.Queue() for e in self.enforcers}
        errors: list = []

        for enf, local in zip(self.enforcers, self._split(sigma)):
            inboxes[enf.index].put(Observation(local))

        def worker(enf: Enforcer) -> None:
            try:
                while not enf.done:
                    item = inboxes[enf.index].get(timeout=timeout)
                    if isinstance(item, Delivery):
                        with lock:
                            record.deliveries.append((item.sender, enf.index, item.message))
                    for dest, msg in enf.step(item):
                        with lock:
                            stats.count(msg)
                        inboxes[dest].put(Delivery(enf.index, msg))
            except queue.Empty:
                errors.append(DeadlockError(f"M{enf.index} timed out"))
            except Exception as exc:  # surfaced in the caller
                errors.append(exc)

        threads = [threading.Thread(target=worker, args=(e,), daemon=True) for e in self.enforcers]
        for t in threads:
            t.start()
        for t in threads:
            t.join(timeout)
        if errors:
            raise errors[0]
        outcome = self._finish(record, stats)
        self.logs.append(record)
        return outcome


def run_trace(formula: Formula, partition: AlphabetPartition, trace,
              algorithm: str = GLOBAL, exact: bool = True, latency=None) -> tuple:
    """Run a whole trace on a fresh network; return ``(outputs, logs)``."""
    return Network(formula, partition, algorithm, exact, latency).run_trace(trace)
