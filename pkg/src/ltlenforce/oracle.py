"""Brute-force reference semantics used to cross-check the enforcers.

Nothing here calls the simplifier, the rewriting functions or the
satisfiability checker; only the formula types are shared with the rest of
the package.

``bad_prefix`` is bounded: it only considers continuations ``v . w^omega``
with ``|v| < loop_bound`` and ``|w| <= loop_bound``.  For each formula the
truth values at the start of every such continuation are computed once, as
bit vectors over the subformulas whose value depends on the future, and
cached.  A query then only walks its prefix backwards.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .ltl.events import Event, distance, event_key, subsets
from .ltl.formula import (
    And, Atom, Eventually, FalseConst, Formula, Globally, Iff, Implies, Next,
    Not, Or, Release, TrueConst, Until, ap_formula, subformulas,
)


class Verdict(enum.Enum):
    BAD = "Bad"
    NOT_BAD = "NotBad"


class OracleError(RuntimeError):
    pass


@dataclass(frozen=True)
class Lasso:
    """The infinite trace ``prefix . loop . loop . ...``."""

    prefix: tuple
    loop: tuple

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(frozenset(e) for e in self.prefix))
        object.__setattr__(self, "loop", tuple(frozenset(e) for e in self.loop))
        if not self.loop:
            raise ValueError("a lasso needs a nonempty loop")

    def __len__(self) -> int:
        return len(self.prefix) + len(self.loop)

    def successor(self, i: int) -> int:
        return i + 1 if i + 1 < len(self) else len(self.prefix)

    def letter(self, i: int) -> Event:
        p = len(self.prefix)
        return self.prefix[i] if i < p else self.loop[i - p]


# lasso evaluation -----------------------------------------------------------

def eval_lasso(f: Formula, w: Lasso) -> bool:
    """Whether the lasso satisfies ``f`` at position 0."""
    return _labels(f, w, {})[0]


def _labels(f: Formula, w: Lasso, memo: dict) -> list:
    if f in memo:
        return memo[f]
    n = len(w)
    succ = [w.successor(i) for i in range(n)]
    if isinstance(f, TrueConst):
        out = [True] * n
    elif isinstance(f, FalseConst):
        out = [False] * n
    elif isinstance(f, Atom):
        out = [f.name in w.letter(i) for i in range(n)]
    elif isinstance(f, Not):
        out = [not x for x in _labels(f.operand, w, memo)]
    elif isinstance(f, Next):
        sub = _labels(f.operand, w, memo)
        out = [sub[succ[i]] for i in range(n)]
    elif isinstance(f, (And, Or, Implies, Iff)):
        left, right = _labels(f.left, w, memo), _labels(f.right, w, memo)
        op = {
            And: lambda x, y: x and y,
            Or: lambda x, y: x or y,
            Implies: lambda x, y: (not x) or y,
            Iff: lambda x, y: x == y,
        }[type(f)]
        out = [op(x, y) for x, y in zip(left, right)]
    elif isinstance(f, (Until, Eventually)):
        # least fixpoint of  out[i] = right[i] or (left[i] and out[succ i])
        if isinstance(f, Until):
            left, right = _labels(f.left, w, memo), _labels(f.right, w, memo)
        else:
            left, right = [True] * n, _labels(f.operand, w, memo)
        out = _fixpoint(False, lambda o: [right[i] or (left[i] and o[succ[i]]) for i in range(n)], n)
    elif isinstance(f, (Release, Globally)):
        # greatest fixpoint of  out[i] = right[i] and (left[i] or out[succ i])
        if isinstance(f, Release):
            left, right = _labels(f.left, w, memo), _labels(f.right, w, memo)
        else:
            left, right = [False] * n, _labels(f.operand, w, memo)
        out = _fixpoint(True, lambda o: [right[i] and (left[i] or o[succ[i]]) for i in range(n)], n)
    else:
        raise TypeError(f"not a formula: {f!r}")
    memo[f] = out
    return out


def _fixpoint(start: bool, step, n: int) -> list:
    cur = [start] * n
    while True:
        nxt = step(cur)
        if nxt == cur:
            return cur
        cur = nxt


# bounded bad-prefix check ---------------------------------------------------

class _Compiled:
    """Vectorised evaluation tables for one formula."""

    def __init__(self, f: Formula):
        self.formula = f
        self.atoms = sorted(ap_formula(f))
        self.nodes = list(dict.fromkeys(subformulas(f)))  # post-order, unique
        self.index = {g: i for i, g in enumerate(self.nodes)}
        # nodes whose value at i+1 is needed to evaluate position i, plus the root
        carried = {f}
        for g in self.nodes:
            if isinstance(g, Next):
                carried.add(g.operand)
            elif isinstance(g, (Until, Release, Globally, Eventually)):
                carried.add(g)
        self.carried = [g for g in self.nodes if g in carried]
        self.slot = {g: i for i, g in enumerate(self.carried)}
        self.root_slot = self.slot[f]
        k = len(self.atoms)
        self.letters = np.array(list(product([False, True], repeat=k)), dtype=bool).reshape(2 ** k, k)

    def letter_bits(self, e: Event) -> np.ndarray:
        return np.array([a in e for a in self.atoms], dtype=bool)

    def step_back(self, states: np.ndarray, letters: np.ndarray) -> np.ndarray:
        """Carried values at position i from letters at i and carried values at i+1.

        ``states`` and ``letters`` are row-aligned.
        """
        m = states.shape[0]
        val = {}
        for g in self.nodes:
            if isinstance(g, TrueConst):
                v = np.ones(m, dtype=bool)
            elif isinstance(g, FalseConst):
                v = np.zeros(m, dtype=bool)
            elif isinstance(g, Atom):
                v = letters[:, self.atoms.index(g.name)]
            elif isinstance(g, Not):
                v = ~val[g.operand]
            elif isinstance(g, And):
                v = val[g.left] & val[g.right]
            elif isinstance(g, Or):
                v = val[g.left] | val[g.right]
            elif isinstance(g, Implies):
                v = ~val[g.left] | val[g.right]
            elif isinstance(g, Iff):
                v = val[g.left] == val[g.right]
            elif isinstance(g, Next):
                v = states[:, self.slot[g.operand]]
            elif isinstance(g, Until):
                v = val[g.right] | (val[g.left] & states[:, self.slot[g]])
            elif isinstance(g, Release):
                v = val[g.right] & (val[g.left] | states[:, self.slot[g]])
            elif isinstance(g, Eventually):
                v = val[g.operand] | states[:, self.slot[g]]
            elif isinstance(g, Globally):
                v = val[g.operand] & states[:, self.slot[g]]
            else:
                raise TypeError(f"not a formula: {g!r}")
            val[g] = v
        return np.stack([val[g] for g in self.carried], axis=1)

    def step_all(self, states: np.ndarray) -> np.ndarray:
        """One step back under every letter, deduplicated."""
        nl = self.letters.shape[0]
        rep_states = np.repeat(states, nl, axis=0)
        rep_letters = np.tile(self.letters, (states.shape[0], 1))
        return np.unique(self.step_back(rep_states, rep_letters), axis=0)

    def loop_states(self, length: int) -> np.ndarray:
        """Carried values at the start of every loop ``w`` with ``|w| = length``."""
        nl = self.letters.shape[0]
        combos = np.array(list(product(range(nl), repeat=length)), dtype=np.intp)
        loops = self.letters[combos]  # (n_loops, length, k)
        shape = loops.shape[:2]
        nxt = lambda v: np.roll(v, -1, axis=1)
        val = {}
        # children are final before their parent, so each node gets its own fixpoint
        for g in self.nodes:
            if isinstance(g, TrueConst):
                v = np.ones(shape, dtype=bool)
            elif isinstance(g, FalseConst):
                v = np.zeros(shape, dtype=bool)
            elif isinstance(g, Atom):
                v = loops[:, :, self.atoms.index(g.name)]
            elif isinstance(g, Not):
                v = ~val[g.operand]
            elif isinstance(g, And):
                v = val[g.left] & val[g.right]
            elif isinstance(g, Or):
                v = val[g.left] | val[g.right]
            elif isinstance(g, Implies):
                v = ~val[g.left] | val[g.right]
            elif isinstance(g, Iff):
                v = val[g.left] == val[g.right]
            elif isinstance(g, Next):
                v = nxt(val[g.operand])
            else:
                if isinstance(g, Until):
                    left, right, v = val[g.left], val[g.right], np.zeros(shape, dtype=bool)
                elif isinstance(g, Eventually):
                    left, right, v = True, val[g.operand], np.zeros(shape, dtype=bool)
                elif isinstance(g, Release):
                    left, right, v = val[g.left], val[g.right], np.ones(shape, dtype=bool)
                else:
                    left, right, v = False, val[g.operand], np.ones(shape, dtype=bool)
                until = isinstance(g, (Until, Eventually))
                for _ in range(length + 1):
                    new = right | (left & nxt(v)) if until else right & (left | nxt(v))
                    if np.array_equal(new, v):
                        break
                    v = new
            val[g] = v
        start = np.stack([val[g][:, 0] for g in self.carried], axis=1)
        return np.unique(start, axis=0)


@lru_cache(maxsize=4096)
def _compiled(f: Formula) -> _Compiled:
    return _Compiled(f)


@lru_cache(maxsize=4096)
def _continuation_states(f: Formula, loop_bound: int) -> np.ndarray:
    """Carried values at the start of every ``v . w^omega`` within the bound."""
    comp = _compiled(f)
    start = np.unique(
        np.concatenate([comp.loop_states(n) for n in range(1, loop_bound + 1)]), axis=0
    )
    seen = start
    frontier = start
    for _ in range(loop_bound - 1):
        frontier = comp.step_all(frontier)
        seen = np.unique(np.concatenate([seen, frontier]), axis=0)
    return seen


def bad_prefix(f: Formula, u, loop_bound: int = 3) -> Verdict:
    """Bad iff no bounded lasso continuation of ``u`` satisfies ``f``."""
    if loop_bound < 1:
        raise ValueError("loop_bound must be at least 1")
    comp = _compiled(f)
    states = _continuation_states(f, loop_bound)
    for e in reversed(list(u)):
        bits = np.broadcast_to(comp.letter_bits(e), (states.shape[0], len(comp.atoms)))
        states = np.unique(comp.step_back(states, bits), axis=0)
    return Verdict.NOT_BAD if states[:, comp.root_slot].any() else Verdict.BAD


def is_bad(f: Formula, u, loop_bound: int = 3) -> bool:
    return bad_prefix(f, u, loop_bound) is Verdict.BAD


# reference enforcer ---------------------------------------------------------

def safe_events(f: Formula, history, sigma: Event, loop_bound: int = 3) -> list:
    """Events that keep ``history . e`` out of bad(f), ordered by distance then name.

    Atoms of ``sigma`` that ``f`` does not mention are passed through.
    """
    atoms = ap_formula(f)
    keep = frozenset(sigma) - atoms
    history = list(history)
    out = []
    for core in subsets(atoms):
        e = core | keep
        if not is_bad(f, history + [e], loop_bound):
            out.append(e)
    out.sort(key=lambda e: (distance(e, sigma, atoms | sigma | e), event_key(e)))
    return out


def min_safe_distance(f: Formula, history, sigma: Event, loop_bound: int = 3) -> int:
    safe = safe_events(f, history, sigma, loop_bound)
    if not safe:
        raise OracleError("every event leads to a bad prefix")
    return len(safe[0] ^ frozenset(sigma))


def reference_enforcer(f: Formula, trace, loop_bound: int = 3) -> list:
    """Centralised enforcer: closest safe event at each step, ties broken by name."""
    if is_bad(f, [], loop_bound):
        raise OracleError("the specification has no model within the bound")
    out = []
    for sigma in trace:
        safe = safe_events(f, out, sigma, loop_bound)
        if not safe:
            raise OracleError("every event leads to a bad prefix")
        out.append(safe[0])
    return out
