"""Random formulas, partitions, traces and lassos shared by the test modules."""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product

from hypothesis import strategies as st

from ltlenforce.ltl import (
    FALSE, TRUE, And, AlphabetPartition, Atom, Eventually, Globally, Iff,
    Implies, Next, Not, Or, Release, Until, is_satisfiable, parse_formula,
)
from ltlenforce.oracle import Lasso

ATOMS = ("a", "b", "c", "d")
UNARY_OPS = (Not, Next, Globally, Eventually)
BINARY_OPS = (And, Or, Implies, Iff, Until, Release)

TRAFFIC = parse_formula("G((g1 & g3 & !(g2 | g4)) | (!(g1 | g3) & g2 & g4))")
TRAFFIC_PARTITION = AlphabetPartition(
    tuple(frozenset({f"g{i}", f"y{i}", f"r{i}"}) for i in range(1, 5))
)
EXAMPLE = parse_formula("!(G a | F b)")
EXAMPLE_PARTITION = AlphabetPartition((frozenset({"a"}), frozenset({"b"})))


# hypothesis strategies ------------------------------------------------------

def formulas(max_depth: int = 4, atoms=ATOMS):
    leaves = st.one_of(
        st.sampled_from([Atom(a) for a in atoms]),
        st.sampled_from([TRUE, FALSE]),
    )
    if max_depth == 0:
        return leaves
    sub = st.deferred(lambda: formulas(max_depth - 1, atoms))
    return st.one_of(
        leaves,
        st.builds(lambda op, x: op(x), st.sampled_from(UNARY_OPS), sub),
        st.builds(lambda op, x, y: op(x, y), st.sampled_from(BINARY_OPS), sub, sub),
    )


events = st.frozensets(st.sampled_from(ATOMS))

lassos = st.builds(
    Lasso,
    st.lists(events, max_size=3).map(tuple),
    st.lists(events, min_size=1, max_size=2).map(tuple),
)


@st.composite
def partitions(draw, atoms=ATOMS):
    n = draw(st.integers(2, 3))
    owners = draw(st.lists(st.integers(0, n - 1), min_size=len(atoms), max_size=len(atoms)))
    # make every component nonempty
    owners = list(owners)
    for k in range(n):
        if k not in owners:
            owners[k] = k
    comps = [frozenset(a for a, o in zip(atoms, owners) if o == k) for k in range(n)]
    return AlphabetPartition(tuple(c for c in comps if c))


# seeded generator for the large sweeps ---------------------------------------

def random_formula(rng: random.Random, depth: int = 4, atoms=ATOMS):
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.08:
            return rng.choice([TRUE, FALSE])
        return Atom(rng.choice(atoms))
    if rng.random() < 0.4:
        return rng.choice(UNARY_OPS)(random_formula(rng, depth - 1, atoms))
    op = rng.choice(BINARY_OPS)
    return op(random_formula(rng, depth - 1, atoms), random_formula(rng, depth - 1, atoms))


def random_partition(rng: random.Random, atoms=ATOMS) -> AlphabetPartition:
    n = rng.choice((2, 3))
    shuffled = list(atoms)
    rng.shuffle(shuffled)
    cuts = sorted(rng.sample(range(1, len(shuffled)), n - 1))
    bounds = [0, *cuts, len(shuffled)]
    return AlphabetPartition(tuple(
        frozenset(shuffled[lo:hi]) for lo, hi in zip(bounds, bounds[1:])
    ))


def random_event(rng: random.Random, atoms=ATOMS) -> frozenset:
    return frozenset(a for a in atoms if rng.random() < 0.5)


@dataclass
class Instance:
    formula: object
    partition: AlphabetPartition
    trace: list


def random_instances(count: int, seed: int = 0, max_len: int = 5) -> list:
    """Satisfiable formulas of depth <= 4 with a partition and a trace each."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        f = random_formula(rng)
        if not is_satisfiable(f):
            continue
        trace = [random_event(rng) for _ in range(rng.randint(1, max_len))]
        out.append(Instance(f, random_partition(rng), trace))
    return out


def all_lassos(atoms, max_prefix: int, max_loop: int):
    letters = [frozenset(a for a, bit in zip(atoms, bits) if bit)
               for bits in product((False, True), repeat=len(atoms))]
    for p in range(max_prefix + 1):
        for prefix in product(letters, repeat=p):
            for n in range(1, max_loop + 1):
                for loop in product(letters, repeat=n):
                    yield Lasso(prefix, loop)


def random_lasso(rng: random.Random, atoms=ATOMS, max_prefix: int = 3, max_loop: int = 2) -> Lasso:
    prefix = tuple(random_event(rng, atoms) for _ in range(rng.randint(0, max_prefix)))
    loop = tuple(random_event(rng, atoms) for _ in range(rng.randint(1, max_loop)))
    return Lasso(prefix, loop)
