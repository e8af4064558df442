"""Exact LTL satisfiability over infinite traces.

The formula is put in negation normal form over U/R/X and expanded into a
generalized Buchi automaton with the on-the-fly tableau of Gerth, Peled,
Vardi and Wolper.  The language is nonempty iff some reachable strongly
connected component with a cycle meets every acceptance set.
"""
from __future__ import annotations

from functools import lru_cache

import networkx as nx

from .formula import (
    FALSE, TRUE, And, Atom, Eventually, FalseConst, Formula, Globally, Iff,
    Implies, Next, Not, Or, Release, TrueConst, Until, subformulas,
)
from .simplify import simplify


def to_nnf(f: Formula, negate: bool = False) -> Formula:
    """Negation normal form using only and/or/X/U/R over literals."""
    if isinstance(f, TrueConst):
        return FALSE if negate else TRUE
    if isinstance(f, FalseConst):
        return TRUE if negate else FALSE
    if isinstance(f, Atom):
        return Not(f) if negate else f
    if isinstance(f, Not):
        return to_nnf(f.operand, not negate)
    if isinstance(f, And):
        kind = Or if negate else And
        return kind(to_nnf(f.left, negate), to_nnf(f.right, negate))
    if isinstance(f, Or):
        kind = And if negate else Or
        return kind(to_nnf(f.left, negate), to_nnf(f.right, negate))
    if isinstance(f, Implies):
        return to_nnf(Or(Not(f.left), f.right), negate)
    if isinstance(f, Iff):
        both = And(f.left, f.right)
        neither = And(Not(f.left), Not(f.right))
        return to_nnf(Or(both, neither), negate)
    if isinstance(f, Next):
        return Next(to_nnf(f.operand, negate))
    if isinstance(f, Globally):
        return to_nnf(Release(FALSE, f.operand), negate)
    if isinstance(f, Eventually):
        return to_nnf(Until(TRUE, f.operand), negate)
    if isinstance(f, Until):
        kind = Release if negate else Until
        return kind(to_nnf(f.left, negate), to_nnf(f.right, negate))
    if isinstance(f, Release):
        kind = Until if negate else Release
        return kind(to_nnf(f.left, negate), to_nnf(f.right, negate))
    raise TypeError(f"not a formula: {f!r}")


def _complement(lit: Formula) -> Formula:
    return lit.operand if isinstance(lit, Not) else Not(lit)


def _tableau(f: Formula):
    """Return (graph, init, node_old) for the automaton of NNF formula ``f``."""
    init = -1
    graph = nx.DiGraph()
    graph.add_node(init)
    nodes = {}
    node_old = {}
    stack = [(init, frozenset([f]), frozenset(), frozenset())]
    while stack:
        incoming, new, old, nxt = stack.pop()
        if not new:
            key = (old, nxt)
            if key in nodes:
                graph.add_edge(incoming, nodes[key])
                continue
            nid = len(nodes)
            nodes[key] = nid
            node_old[nid] = old
            graph.add_edge(incoming, nid)
            stack.append((nid, nxt, frozenset(), frozenset()))
            continue
        eta = next(iter(new))
        rest = new - {eta}
        if isinstance(eta, TrueConst):
            stack.append((incoming, rest, old, nxt))
        elif isinstance(eta, FalseConst):
            continue
        elif isinstance(eta, (Atom, Not)):
            if _complement(eta) in old:
                continue
            stack.append((incoming, rest, old | {eta}, nxt))
        elif isinstance(eta, And):
            stack.append((incoming, rest | ({eta.left, eta.right} - old), old | {eta}, nxt))
        elif isinstance(eta, Or):
            for side in (eta.left, eta.right):
                stack.append((incoming, rest | ({side} - old), old | {eta}, nxt))
        elif isinstance(eta, Until):
            stack.append((incoming, rest | ({eta.left} - old), old | {eta}, nxt | {eta}))
            stack.append((incoming, rest | ({eta.right} - old), old | {eta}, nxt))
        elif isinstance(eta, Release):
            stack.append((incoming, rest | ({eta.right} - old), old | {eta}, nxt | {eta}))
            stack.append((incoming, rest | ({eta.left, eta.right} - old), old | {eta}, nxt))
        elif isinstance(eta, Next):
            stack.append((incoming, rest, old | {eta}, nxt | {eta.operand}))
        else:
            raise TypeError(f"formula not in NNF: {eta!r}")
    return graph, init, node_old


@lru_cache(maxsize=50_000)
def is_satisfiable(f: Formula) -> bool:
    """True iff some infinite trace satisfies ``f``."""
    quick = simplify(f)
    if isinstance(quick, FalseConst):
        return False
    if isinstance(quick, TrueConst):
        return True
    g = to_nnf(quick)
    untils = [u for u in set(subformulas(g)) if isinstance(u, Until)]
    graph, init, node_old = _tableau(g)
    reachable = nx.descendants(graph, init)
    sub = graph.subgraph(reachable)
    for comp in nx.strongly_connected_components(sub):
        if len(comp) == 1:
            (n,) = comp
            if not sub.has_edge(n, n):
                continue
        if all(
            any(u not in node_old[n] or u.right in node_old[n] for n in comp)
            for u in untils
        ):
            return True
    return False


def is_unsatisfiable(f: Formula) -> bool:
    return not is_satisfiable(f)


def equivalent(f: Formula, g: Formula) -> bool:
    return not is_satisfiable(Not(Iff(f, g)))
