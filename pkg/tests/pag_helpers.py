"""Random PAG-shaped graphs for property tests.

A graph is kept only if it is closed under the two basic orientation rules
and its circle component is chordal. Graphs without those properties cannot
be PAGs, and the search-based possible descendants need them.
"""

import random

import networkx as nx

from cadjust.graph import Edge, GraphClass, Mark, MixedGraph

T, A, C = Mark.TAIL, Mark.ARROW, Mark.CIRCLE


def _close(nodes, marks):
    # marks[(u, v)] is the mark at v on the edge u *-* v
    changed = True
    while changed:
        changed = False
        for (a, b), m in list(marks.items()):
            if m is not A:
                continue
            for c in nodes:
                # a *-> b o-* c with a, c non-adjacent gives b -> c
                if c not in (a, b) and (b, c) in marks and (a, c) not in marks and marks[(c, b)] is C:
                    marks[(c, b)], marks[(b, c)] = T, A
                    changed = True
        for a, b in list(marks):
            for c in nodes:
                if c in (a, b) or (b, c) not in marks or (a, c) not in marks:
                    continue
                ab = marks[(a, b)] is A and marks[(b, a)] is T
                bc = marks[(b, c)] is A and marks[(c, b)] is T
                if ((ab and marks[(b, c)] is A) or (marks[(a, b)] is A and bc)) and marks[(a, c)] is C:
                    marks[(a, c)] = A
                    changed = True
    return marks


def _chordal_circles(g):
    h = nx.Graph()
    h.add_nodes_from(g.nodes)
    h.add_edges_from((e.a, e.b) for e in g.edges if e.mark_at_a is C and e.mark_at_b is C)
    return nx.is_chordal(h)


def random_pag(rng: random.Random, max_nodes: int = 7, p: float = 0.4):
    """A closed PAG-shaped graph, or None when the draw is unusable."""
    order = list("ABCDEFGH"[:rng.randint(1, max_nodes)])
    rng.shuffle(order)
    marks = {}
    for i, u in enumerate(order):
        for v in order[i + 1:]:
            if rng.random() < p:
                tok = rng.choice(["->", "o->", "o-o"])
                marks[(u, v)] = C if tok == "o-o" else A
                marks[(v, u)] = T if tok == "->" else C
    marks = _close(order, marks)
    edges = [Edge.of(u, v, marks[(v, u)], marks[(u, v)]) for u, v in marks if u < v]
    try:
        g = MixedGraph(order, edges, GraphClass.PAG)
    except Exception:
        return None
    return g if _chordal_circles(g) else None
