"""Brute-force verifiers used to cross-check the production algorithms.

Nothing here shares search code with ``paths`` or ``reachability``: the
point is to reach the same answers by a different road. DAG separation is
decided through the moralized ancestral subgraph, adjustment through the
proper back-door graph, and possible descendants by enumerating paths.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import EnumerationCapError, GraphValidationError, PreconditionError
from .graph import Edge, GraphClass, Mark, MixedGraph, NodeSet, proper_backdoor_graph

DEFAULT_CAP = 20


@dataclass(frozen=True)
class DagClass:
    source: MixedGraph
    members: tuple[MixedGraph, ...]
    literal: bool = False

    def __len__(self):
        return len(self.members)

    def __iter__(self) -> Iterator[MixedGraph]:
        return iter(self.members)


def _unshielded_colliders(nodes, parents_of, adjacent) -> set[tuple[str, str, str]]:
    out = set()
    for b in nodes:
        ps = sorted(parents_of[b])
        for i, a in enumerate(ps):
            for c in ps[i + 1:]:
                if not adjacent(a, c):
                    out.add((a, b, c))
    return out


def enumerate_dag_extensions(g: MixedGraph, cap: int = DEFAULT_CAP,
                             literal: bool = False) -> DagClass:
    """All DAGs obtained by orienting the undirected edges of an MPDAG.

    By default an orientation is kept only if it is acyclic and creates no
    unshielded collider that ``g`` does not already have. ``literal=True``
    drops the collider condition and keeps every acyclic orientation.
    """
    if g.kind not in (GraphClass.MPDAG, GraphClass.DAG):
        raise GraphValidationError("DAG enumeration needs an MPDAG")
    und = sorted(g.undirected_edges())
    if len(und) > cap:
        raise EnumerationCapError(f"{len(und)} undirected edges exceed the cap of {cap}")
    nodes = g.nodes
    adj = {n: set(g.neighbors(n)) for n in nodes}
    pa: dict[str, set] = {n: set() for n in nodes}
    for u, v in g.directed_edges():
        pa[v].add(u)
    base = _unshielded_colliders(nodes, pa, lambda a, c: c in adj[a])

    def reaches(src, dst):
        # is there a directed path src -> ... -> dst in the partial orientation
        seen, todo = {src}, [src]
        while todo:
            u = todo.pop()
            if u == dst:
                return True
            for w in nodes:
                if u in pa[w] and w not in seen:
                    seen.add(w)
                    todo.append(w)
        return False

    out: list[MixedGraph] = []

    def rec(i):
        if i == len(und):
            edges = [Edge.of(p, c, Mark.TAIL, Mark.ARROW) for c in nodes for p in pa[c]]
            out.append(MixedGraph(nodes, edges, GraphClass.DAG, validate=False))
            return
        a, b = und[i]
        for u, v in ((a, b), (b, a)):
            if reaches(v, u):
                continue
            if not literal and any(p not in adj[u] and (min(p, u), v, max(p, u)) not in base
                                   for p in pa[v]):
                continue
            pa[v].add(u)
            rec(i + 1)
            pa[v].discard(u)

    rec(0)
    return DagClass(g, tuple(out), literal)


# -- DAG-level verdicts ----------------------------------------------------

def _parents_map(d: MixedGraph) -> dict[str, set]:
    pa: dict[str, set] = {n: set() for n in d.nodes}
    for u, v in d.directed_edges():
        pa[v].add(u)
    return pa


def _up(pa: dict[str, set], start: Iterable[str]) -> set[str]:
    seen = set(start)
    todo = list(seen)
    while todo:
        for p in pa[todo.pop()]:
            if p not in seen:
                seen.add(p)
                todo.append(p)
    return seen


def _down(pa: dict[str, set], start: Iterable[str], avoid=frozenset()) -> set[str]:
    ch: dict[str, set] = {n: set() for n in pa}
    for c, ps in pa.items():
        for p in ps:
            ch[p].add(c)
    seen = set(start)
    todo = list(seen)
    while todo:
        for c in ch[todo.pop()]:
            if c not in seen and c not in avoid:
                seen.add(c)
                todo.append(c)
    return seen


def dsep_moral(d: MixedGraph, A: Iterable[str], B: Iterable[str], C: Iterable[str]) -> bool:
    """d-separation by moralizing the ancestral subgraph of A u B u C."""
    if d.kind is not GraphClass.DAG:
        raise GraphValidationError("dsep_moral needs a DAG")
    A, B, C = set(A), set(B), set(C)
    if not A or not B:
        return True
    pa = _parents_map(d)
    keep = _up(pa, A | B | C)
    nbr: dict[str, set] = {n: set() for n in keep}
    for c in keep:
        ps = sorted(pa[c])
        for p in ps:
            nbr[p].add(c)
            nbr[c].add(p)
        for i, p in enumerate(ps):
            for q in ps[i + 1:]:
                nbr[p].add(q)
                nbr[q].add(p)
    seen = set(A)
    todo = deque(A)
    while todo:
        u = todo.popleft()
        if u in B:
            return False
        for w in nbr[u]:
            if w not in seen and w not in C:
                seen.add(w)
                todo.append(w)
    return True


def dag_forbidden(d: MixedGraph, X: Iterable[str], Y: Iterable[str]) -> NodeSet:
    """Forb in a DAG: descendants of the nodes on proper causal paths."""
    X, Y = set(X), set(Y)
    pa = _parents_map(d)
    first = {c for x in X for c in _children(pa, x)} - X
    down = _down(pa, first, avoid=frozenset(X))
    # keep the nodes that still reach Y through non-X nodes
    on_path = {n for n in down if Y & _down(pa, [n], avoid=frozenset(X))}
    return NodeSet(_down(pa, on_path))


def _children(pa, x):
    return {c for c, ps in pa.items() if x in ps}


def adjustment_via_pbd(d: MixedGraph, X, Y, W) -> bool:
    """Clause (b) of the adjustment criterion: W d-separates X and Y in the proper back-door graph."""
    return dsep_moral(proper_backdoor_graph(d, X, Y), X, Y, W)


def dag_adjustment_verdict(d: MixedGraph, X, Y, Z, S) -> bool:
    """Whether S is accepted for (X, Y, Z) in the DAG ``d``."""
    X, Y, Z, S = set(X), set(Y), set(Z), set(S)
    pa = _parents_map(d)
    if Z & _down(pa, X):
        raise PreconditionError("z-in-descendants", "Z meets De(X) in this DAG")
    W = S | Z
    if W & dag_forbidden(d, X, Y):
        return False
    return adjustment_via_pbd(d, X, Y, W)


def class_verdicts(g: MixedGraph, X, Y, Z, S, cap: int = DEFAULT_CAP) -> list[bool]:
    return [dag_adjustment_verdict(d, X, Y, Z, S) for d in enumerate_dag_extensions(g, cap)]


def verify_criterion_across_class(g: MixedGraph, X, Y, Z, S, cap: int = DEFAULT_CAP) -> bool:
    """True iff the graph-level verdict matches the verdict in every represented DAG."""
    from .criterion import (check_amenability, check_applicability,
                            check_conditional_adjustment)

    if not check_applicability(g, X, Y, Z).satisfied:
        raise PreconditionError("z-in-possde", "Z contains a possible descendant of X")
    if not check_amenability(g, X, Y).satisfied:
        raise PreconditionError("not-amenable", "X and Y are not amenable")
    verdict = check_conditional_adjustment(g, X, Y, Z, S).satisfied
    return all(v == verdict for v in class_verdicts(g, X, Y, Z, S, cap))


# -- strict path definitions ----------------------------------------------

def strict_possibly_causal(g: MixedGraph, p: Sequence[str]) -> bool:
    """No pair i < j of path nodes with an arrowhead at the earlier one."""
    for j in range(len(p)):
        for i in range(j):
            if g.adjacent(p[i], p[j]) and g.mark(p[j], p[i]) is Mark.ARROW:
                return False
    return True


def strict_possible_descendants(g: MixedGraph, W: Iterable[str]) -> NodeSet:
    """PossDe by enumerating every simple path and testing it pairwise."""
    found = set(W)
    for w in W:
        stack = [(w,)]
        while stack:
            p = stack.pop()
            for n in g.neighbors(p[-1]):
                if n in p:
                    continue
                q = p + (n,)
                if strict_possibly_causal(g, q):
                    found.add(n)
                    stack.append(q)
    return NodeSet(found)


def strict_possible_ancestors(g: MixedGraph, W: Iterable[str]) -> NodeSet:
    """Nodes with a strictly possibly causal path into W (W included)."""
    W = set(W)
    return NodeSet({v for v in g.nodes if v in W or W & strict_possible_descendants(g, [v])})


# -- canonical DAG of a MAG -------------------------------------------------

def canonical_dag(m: MixedGraph) -> MixedGraph:
    """Replace each bidirected edge A <-> B by a fresh latent L_A_B with L_A_B -> A, B."""
    pa: dict[str, set] = {n: set() for n in m.nodes}
    bidirected = []
    for e in m.edges:
        marks = (e.mark_at_a, e.mark_at_b)
        if marks == (Mark.TAIL, Mark.ARROW):
            pa[e.b].add(e.a)
        elif marks == (Mark.ARROW, Mark.TAIL):
            pa[e.a].add(e.b)
        elif marks == (Mark.ARROW, Mark.ARROW):
            bidirected.append((e.a, e.b))
        else:
            raise GraphValidationError("canonical_dag accepts only -> and <-> edges")
    for n in m.nodes:
        if n in _up(pa, pa[n]):
            raise GraphValidationError(f"directed cycle through {n}")
    for a, b in bidirected:
        if a in _up(pa, [b]) or b in _up(pa, [a]):
            raise GraphValidationError(f"not ancestral: {a} <-> {b} closes an almost directed cycle")
    used = set(m.nodes)
    edges = [Edge.of(p, c, Mark.TAIL, Mark.ARROW) for c in m.nodes for p in pa[c]]
    for a, b in bidirected:
        name, k = f"L_{a}_{b}", 1
        while name in used:
            k += 1
            name = f"L_{a}_{b}_{k}"
        used.add(name)
        edges += [Edge.of(name, a, Mark.TAIL, Mark.ARROW), Edge.of(name, b, Mark.TAIL, Mark.ARROW)]
    return MixedGraph(used, edges, GraphClass.DAG)
