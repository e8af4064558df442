"""Events, traces, the event distance and alphabet partitions."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

Event = frozenset  # of atom names; an absent name is false
Trace = list  # of Event

EMPTY = frozenset()


def event(*names: str) -> Event:
    return frozenset(names)


def distance(a: Event, b: Event, scope: Iterable[str]) -> int:
    """Number of atoms of ``scope`` on which ``a`` and ``b`` disagree."""
    return len(frozenset(scope) & (a ^ b))


def event_key(e: Event) -> tuple:
    """Lexicographic order on events under the canonical atom order."""
    return tuple(sorted(e))


def subsets(atoms: Iterable[str]) -> Iterator[Event]:
    """All subsets of ``atoms``, ordered by size then lexicographically."""
    ordered = sorted(atoms)
    for k in range(len(ordered) + 1):
        for combo in combinations(ordered, k):
            yield frozenset(combo)


def format_event(e: Event) -> str:
    return "{" + ",".join(sorted(e)) + "}"


def parse_event(text: str) -> Event:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError(f"event must be written as {{a,b,...}}: {text!r}")
    body = text[1:-1].strip()
    if not body:
        return EMPTY
    names = [n.strip() for n in body.split(",")]
    if any(not n for n in names):
        raise ValueError(f"empty atom name in {text!r}")
    return frozenset(names)


@dataclass(frozen=True)
class AlphabetPartition:
    """Disjoint, nonempty local alphabets AP_1..AP_n; component indices are 1-based."""

    components: tuple

    def __post_init__(self):
        comps = tuple(frozenset(c) for c in self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise ValueError("a partition needs at least one component")
        seen = set()
        for i, comp in enumerate(comps, start=1):
            if not comp:
                raise ValueError(f"component M{i} is empty")
            overlap = seen & comp
            if overlap:
                raise ValueError(f"atoms {sorted(overlap)} belong to several components")
            seen |= comp

    @property
    def atoms(self) -> frozenset:
        return frozenset().union(*self.components)

    def __len__(self) -> int:
        return len(self.components)

    def local(self, index: int) -> frozenset:
        return self.components[index - 1]

    def owner(self, atom: str) -> int:
        for i, comp in enumerate(self.components, start=1):
            if atom in comp:
                return i
        raise KeyError(atom)

    def project(self, e: Event) -> list:
        return [e & comp for comp in self.components]
