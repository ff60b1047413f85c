"""Random DAGs, CPDAGs, MPDAGs and queries for the property suites."""

from __future__ import annotations

import random
from itertools import combinations

from .graph import Edge, GraphClass, Mark, MixedGraph, apply_meek_closure

NAMES = "ABCDEFGHIJKLMNOP"


def random_dag(rng: random.Random, n: int, p: float = 0.4) -> MixedGraph:
    """Erdos-Renyi DAG over the first ``n`` letters with a random causal order."""
    nodes = list(NAMES[:n])
    order = nodes[:]
    rng.shuffle(order)
    edges = [Edge.of(u, v, Mark.TAIL, Mark.ARROW)
             for i, u in enumerate(order) for v in order[i + 1:] if rng.random() < p]
    return MixedGraph(nodes, edges, GraphClass.DAG)


def _pdag(d: MixedGraph, directed: set) -> MixedGraph:
    edges = []
    for u, v in d.directed_edges():
        if (u, v) in directed:
            edges.append(Edge.of(u, v, Mark.TAIL, Mark.ARROW))
        else:
            edges.append(Edge.of(u, v, Mark.TAIL, Mark.TAIL))
    return MixedGraph(d.nodes, edges, GraphClass.MPDAG, validate=False)


def cpdag(d: MixedGraph) -> MixedGraph:
    """Keep the edges of unshielded colliders directed, then close under Meek's rules."""
    keep = set()
    for c in d.nodes:
        for a, b in combinations(d.parents(c), 2):
            if not d.adjacent(a, b):
                keep |= {(a, c), (b, c)}
    return apply_meek_closure(_pdag(d, keep))


def random_mpdag(rng: random.Random, max_nodes: int = 6, max_undirected: int = 4,
                 p: float = 0.4, knowledge: float = 0.1) -> tuple[MixedGraph, MixedGraph]:
    """An MPDAG and a DAG it represents.

    Starts from the CPDAG of a random DAG, orients some undirected edges as
    in that DAG (background knowledge) and closes under Meek's rules, adding
    knowledge until at most ``max_undirected`` edges stay undirected.
    """
    n = rng.randint(2, max_nodes)
    d = random_dag(rng, n, p)
    truth = set(d.directed_edges())
    g = cpdag(d)
    directed = set(g.directed_edges())
    while True:
        und = g.undirected_edges()
        extra = [e for e in und if rng.random() < knowledge]
        if len(und) - len(extra) > max_undirected:
            extra = und[: len(und) - max_undirected] + extra
        if not extra and len(und) <= max_undirected:
            return g, d
        for a, b in extra:
            directed.add((a, b) if (a, b) in truth else (b, a))
        g = apply_meek_closure(_pdag(d, directed))
        directed = set(g.directed_edges())
        if len(g.undirected_edges()) <= max_undirected:
            return g, d


def random_query(rng: random.Random, g: MixedGraph, max_x: int = 2, max_y: int = 2,
                 max_z: int = 2) -> tuple[list, list, list, list]:
    """Random pairwise disjoint (X, Y, Z, S); X and Y non-empty."""
    nodes = list(g.nodes)
    rng.shuffle(nodes)
    nx = rng.randint(1, min(max_x, len(nodes) - 1))
    ny = rng.randint(1, min(max_y, len(nodes) - nx))
    X, Y, rest = nodes[:nx], nodes[nx:nx + ny], nodes[nx + ny:]
    nz = rng.randint(0, min(max_z, len(rest)))
    Z, rest = rest[:nz], rest[nz:]
    S = [v for v in rest if rng.random() < 0.5]
    return sorted(X), sorted(Y), sorted(Z), sorted(S)
