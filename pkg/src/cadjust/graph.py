"""Mixed-graph data model, text format, Meek closure and graph transforms.

Graphs are immutable. Every edge carries one mark per endpoint (tail, arrow
or circle) and every graph is tagged with the class it belongs to: ``DAG``,
``MPDAG`` or ``PAG``. Construction validates the class invariants.

Text format::

    mpdag
    # comment
    node V9
    V3 -> X
    V3 -- V1

The first significant line names the class. Edge tokens are ``->``, ``--``,
``<->``, ``o->`` and ``o-o``; ``node N`` declares a node that may be
isolated.
"""

from __future__ import annotations

import enum
import re
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .errors import GraphSyntaxError, GraphValidationError, QueryError


class Mark(enum.Enum):
    TAIL = "-"
    ARROW = ">"
    CIRCLE = "o"


class GraphClass(enum.Enum):
    DAG = "dag"
    MPDAG = "mpdag"
    PAG = "pag"


T, A, C = Mark.TAIL, Mark.ARROW, Mark.CIRCLE

# token -> (mark at left node, mark at right node)
TOKENS = {
    "->": (T, A),
    "--": (T, T),
    "<->": (A, A),
    "o->": (C, A),
    "o-o": (C, C),
}
_TOKEN_OF = {marks: tok for tok, marks in TOKENS.items()}

_ALLOWED = {
    GraphClass.DAG: {(T, A)},
    GraphClass.MPDAG: {(T, A), (T, T)},
    GraphClass.PAG: {(T, A), (A, A), (C, A), (C, C)},
}

NODE_RE = re.compile(r"[A-Za-z0-9_]+\Z")


class NodeSet(frozenset):
    """A frozenset of node names that iterates in sorted order."""

    def __iter__(self):
        return iter(sorted(frozenset.__iter__(self)))

    def __repr__(self):
        return "{" + ", ".join(self) + "}"


@dataclass(frozen=True)
class Edge:
    """An edge ``a *-* b`` stored with ``a < b``."""

    a: str
    b: str
    mark_at_a: Mark
    mark_at_b: Mark

    @classmethod
    def of(cls, u: str, v: str, mark_u: Mark, mark_v: Mark) -> "Edge":
        if u == v:
            raise GraphValidationError(f"self loop on {u}")
        if u < v:
            return cls(u, v, mark_u, mark_v)
        return cls(v, u, mark_v, mark_u)

    def token_line(self) -> str:
        """Render as ``left token right`` in the text format."""
        marks = (self.mark_at_a, self.mark_at_b)
        if marks in _TOKEN_OF:
            return f"{self.a} {_TOKEN_OF[marks]} {self.b}"
        return f"{self.b} {_TOKEN_OF[marks[::-1]]} {self.a}"

    def other(self, node: str) -> str:
        return self.b if node == self.a else self.a



class MixedGraph:
    """Immutable graph with per-endpoint edge marks and a class tag."""

    __slots__ = ("_nodes", "_kind", "_marks", "_edges", "_hash")

    def __init__(self, nodes: Iterable[str], edges: Iterable[Edge],
                 kind: GraphClass, *, validate: bool = True):
        node_set = set(nodes)
        marks: dict[str, dict[str, Mark]] = {}
        edge_list = []
        for e in edges:
            node_set.update((e.a, e.b))
            if e.b in marks.get(e.a, {}):
                raise GraphValidationError(f"duplicate edge between {e.a} and {e.b}")
            marks.setdefault(e.a, {})[e.b] = e.mark_at_b
            marks.setdefault(e.b, {})[e.a] = e.mark_at_a
            edge_list.append(e)
        for n in node_set:
            if not NODE_RE.match(n):
                raise GraphValidationError(f"invalid node name {n!r}")
            marks.setdefault(n, {})
        self._nodes = tuple(sorted(node_set))
        self._kind = GraphClass(kind)
        self._marks = marks
        self._edges = tuple(sorted(edge_list, key=lambda e: (e.a, e.b)))
        self._hash = hash((self._kind, self._nodes, tuple(
            (e.a, e.b, e.mark_at_a, e.mark_at_b) for e in self._edges)))
        if validate:
            _validate(self)

    @classmethod
    def build(cls, kind, edges=(), nodes=(), *, validate=True) -> "MixedGraph":
        """Build from ``(left, token, right)`` triples, e.g. ``("A", "->", "B")``."""
        kind = GraphClass(kind)
        out = []
        for u, tok, v in edges:
            if tok not in TOKENS:
                raise GraphValidationError(f"unknown edge token {tok!r}")
            mu, mv = TOKENS[tok]
            out.append(Edge.of(u, v, mu, mv))
        return cls(nodes, out, kind, validate=validate)

    # -- basic accessors -------------------------------------------------

    @property
    def nodes(self) -> tuple[str, ...]:
        return self._nodes

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    @property
    def kind(self) -> GraphClass:
        return self._kind

    def __contains__(self, node) -> bool:
        return node in self._marks

    def __len__(self) -> int:
        return len(self._nodes)

    def __eq__(self, other):
        if not isinstance(other, MixedGraph):
            return NotImplemented
        return (self._kind, self._nodes, self._edges) == (other._kind, other._nodes, other._edges)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"<MixedGraph {self._kind.value}: {len(self._nodes)} nodes, {len(self._edges)} edges>"

    def mark(self, u: str, v: str) -> Mark | None:
        """Mark at ``v`` on the edge between ``u`` and ``v`` (None if non-adjacent)."""
        return self._marks[u].get(v)

    def adjacent(self, u: str, v: str) -> bool:
        return v in self._marks[u]

    def neighbors(self, u: str) -> tuple[str, ...]:
        return tuple(sorted(self._marks[u]))

    def is_directed(self, u: str, v: str) -> bool:
        """True iff ``u -> v``."""
        return self._marks[u].get(v) is A and self._marks[v][u] is T

    def is_undirected(self, u: str, v: str) -> bool:
        return self._marks[u].get(v) is T and self._marks[v][u] is T

    def is_bidirected(self, u: str, v: str) -> bool:
        return self._marks[u].get(v) is A and self._marks[v][u] is A

    def children(self, u: str) -> tuple[str, ...]:
        return tuple(v for v in self.neighbors(u) if self.is_directed(u, v))

    def parents(self, u: str) -> tuple[str, ...]:
        return tuple(v for v in self.neighbors(u) if self.is_directed(v, u))

    def edge(self, u: str, v: str) -> Edge | None:
        m = self._marks[u].get(v)
        if m is None:
            return None
        return Edge.of(u, v, self._marks[v][u], m)

    def directed_edges(self) -> list[tuple[str, str]]:
        out = []
        for e in self._edges:
            if (e.mark_at_a, e.mark_at_b) == (T, A):
                out.append((e.a, e.b))
            elif (e.mark_at_a, e.mark_at_b) == (A, T):
                out.append((e.b, e.a))
        return out

    def undirected_edges(self) -> list[tuple[str, str]]:
        return [(e.a, e.b) for e in self._edges if e.mark_at_a is T and e.mark_at_b is T]

    def check_nodes(self, nodes: Iterable[str]) -> NodeSet:
        """Return ``nodes`` as a NodeSet, raising QueryError on unknown names."""
        ns = NodeSet(nodes)
        unknown = sorted(n for n in ns if n not in self._marks)
        if unknown:
            raise QueryError(f"unknown node(s): {', '.join(unknown)}")
        return ns

    def replace(self, edges: Iterable[Edge] | None = None, kind: GraphClass | None = None,
                nodes: Iterable[str] | None = None, validate: bool = True) -> "MixedGraph":
        return MixedGraph(self._nodes if nodes is None else nodes,
                          self._edges if edges is None else edges,
                          self._kind if kind is None else kind, validate=validate)


# -- validation ------------------------------------------------------------

def _directed_cycle(nodes, directed) -> list[str] | None:
    """Return a directed cycle as a node list, or None."""
    succ: dict[str, list[str]] = {n: [] for n in nodes}
    for u, v in directed:
        succ[u].append(v)
    color = dict.fromkeys(nodes, 0)
    for root in sorted(nodes):
        if color[root]:
            continue
        stack = [(root, iter(sorted(succ[root])))]
        path = [root]
        color[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[node] = 2
                stack.pop()
                path.pop()
            elif color[nxt] == 1:
                return path[path.index(nxt):] + [nxt]
            elif color[nxt] == 0:
                color[nxt] = 1
                path.append(nxt)
                stack.append((nxt, iter(sorted(succ[nxt]))))
    return None


def _strict_ancestors(g: MixedGraph, node: str) -> set[str]:
    seen, todo = set(), deque(g.parents(node))
    while todo:
        u = todo.popleft()
        if u not in seen:
            seen.add(u)
            todo.extend(g.parents(u))
    return seen


def _validate(g: MixedGraph) -> None:
    allowed = _ALLOWED[g.kind]
    for e in g.edges:
        if (e.mark_at_a, e.mark_at_b) not in allowed and (e.mark_at_b, e.mark_at_a) not in allowed:
            raise GraphValidationError(
                f"edge {e.token_line()} is not allowed in a {g.kind.value} graph")
    cycle = _directed_cycle(g.nodes, g.directed_edges())
    if cycle:
        raise GraphValidationError("directed cycle: " + " -> ".join(cycle))
    if g.kind is GraphClass.MPDAG:
        closed = apply_meek_closure(g)
        if closed != g:
            changed = sorted(set(closed.directed_edges()) - set(g.directed_edges()))
            u, v = changed[0]
            raise GraphValidationError(
                f"not closed under the Meek rules: {u} -- {v} is forced to {u} -> {v}")
    elif g.kind is GraphClass.PAG:
        for e in g.edges:
            if e.mark_at_a is A and e.mark_at_b is A:
                if e.a in _strict_ancestors(g, e.b) or e.b in _strict_ancestors(g, e.a):
                    raise GraphValidationError(
                        f"almost directed cycle through {e.a} <-> {e.b}")


# -- text format -----------------------------------------------------------

def parse_graph(text: str) -> MixedGraph:
    """Parse the text format into a validated graph."""
    kind = None
    nodes: list[str] = []
    edges: list[Edge] = []
    seen_pairs: dict[frozenset, int] = {}
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]
        if kind is None:
            word, col = tokens[0]
            if len(tokens) != 1 or word not in {c.value for c in GraphClass}:
                raise GraphSyntaxError(
                    "expected a header line naming the class (dag, mpdag or pag)", lineno, col)
            kind = GraphClass(word)
            continue
        if len(tokens) == 2 and tokens[0][0] == "node":
            name, col = tokens[1]
            if not NODE_RE.match(name):
                raise GraphSyntaxError(f"invalid node name {name!r}", lineno, col)
            nodes.append(name)
            continue
        if len(tokens) != 3:
            raise GraphSyntaxError("expected 'A <token> B' or 'node N'", lineno, tokens[0][1])
        (u, cu), (tok, ct), (v, cv) = tokens
        for name, col in ((u, cu), (v, cv)):
            if not NODE_RE.match(name):
                raise GraphSyntaxError(f"invalid node name {name!r}", lineno, col)
        if tok not in TOKENS:
            raise GraphSyntaxError(f"unknown edge token {tok!r}", lineno, ct)
        if u == v:
            raise GraphSyntaxError(f"self loop on {u}", lineno, cu)
        pair = frozenset((u, v))
        if pair in seen_pairs:
            raise GraphSyntaxError(
                f"duplicate edge between {u} and {v} (first on line {seen_pairs[pair]})", lineno, cu)
        seen_pairs[pair] = lineno
        marks = TOKENS[tok]
        if marks not in _ALLOWED[kind] and marks[::-1] not in _ALLOWED[kind]:
            raise GraphSyntaxError(f"edge token {tok!r} is not allowed in a {kind.value} graph",
                                   lineno, ct)
        edges.append(Edge.of(u, v, *marks))
    if kind is None:
        raise GraphSyntaxError("empty input: missing header line", 1, 1)
    return MixedGraph(nodes, edges, kind)


def serialize_graph(g: MixedGraph) -> str:
    """Canonical text: header, isolated nodes sorted, then edges sorted by endpoints."""
    lines = [g.kind.value]
    lines += [f"node {n}" for n in g.nodes if not g.neighbors(n)]
    lines += [e.token_line() for e in g.edges]
    return "\n".join(lines) + "\n"


# -- Meek closure ----------------------------------------------------------

def apply_meek_closure(g: MixedGraph) -> MixedGraph:
    """Orient undirected edges with Meek's rules R1-R4 until nothing changes.

    The input may only contain ``->`` and ``--`` edges with an acyclic
    directed part. The result is tagged MPDAG. Raises GraphValidationError
    when the closure produces a directed cycle.
    """
    for e in g.edges:
        if {e.mark_at_a, e.mark_at_b} - {T, A} or (e.mark_at_a is A and e.mark_at_b is A):
            raise GraphValidationError("Meek closure needs a partially directed graph")
    nodes = g.nodes
    adj = {n: set(g.neighbors(n)) for n in nodes}
    pa = {n: set() for n in nodes}
    ch = {n: set() for n in nodes}
    und = {n: set() for n in nodes}
    for u, v in g.directed_edges():
        pa[v].add(u)
        ch[u].add(v)
    for u, v in g.undirected_edges():
        und[u].add(v)
        und[v].add(u)
    if _directed_cycle(nodes, g.directed_edges()):
        raise GraphValidationError("input has a directed cycle")

    def forced(a, b):
        # R1: c -> a -- b, c and b non-adjacent
        if any(c not in adj[b] for c in pa[a]):
            return True
        # R2: a -> c -> b
        if ch[a] & pa[b]:
            return True
        # R3: a -- c -> b, a -- d -> b, c and d non-adjacent
        for c, d in combinations(sorted(und[a] & pa[b]), 2):
            if d not in adj[c]:
                return True
        # R4: c -> d -> b, a adjacent to c and d, c and b non-adjacent
        for d in pa[b] & adj[a]:
            for c in pa[d]:
                if c != a and c in adj[a] and c not in adj[b]:
                    return True
        return False

    changed = True
    while changed:
        changed = False
        for u in nodes:
            for v in sorted(und[u]):
                if v < u:
                    continue
                for a, b in ((u, v), (v, u)):
                    if forced(a, b):
                        und[a].discard(b)
                        und[b].discard(a)
                        ch[a].add(b)
                        pa[b].add(a)
                        changed = True
                        break
    directed = [(u, v) for u in nodes for v in ch[u]]
    cycle = _directed_cycle(nodes, directed)
    if cycle:
        raise GraphValidationError(
            "Meek closure produced a directed cycle: " + " -> ".join(cycle))
    edges = [Edge.of(u, v, T, A) for u, v in directed]
    edges += [Edge.of(u, v, T, T) for u in nodes for v in und[u] if u < v]
    return MixedGraph(nodes, edges, GraphClass.MPDAG, validate=False)


# -- transforms ------------------------------------------------------------

def induced_subgraph(g: MixedGraph, keep: Iterable[str]) -> MixedGraph:
    keep = g.check_nodes(keep)
    edges = [e for e in g.edges if e.a in keep and e.b in keep]
    return MixedGraph(keep, edges, g.kind, validate=False)


def _require_dag(g: MixedGraph, what: str) -> None:
    if g.kind is not GraphClass.DAG:
        raise GraphValidationError(f"{what} needs a DAG, got a {g.kind.value} graph")


def skeleton_size(g: MixedGraph) -> int:
    return len(g.edges)


def moral_graph(d: MixedGraph) -> MixedGraph:
    """Marry unmarried parents of every node, then drop orientations.

    The result contains only ``--`` edges and is tagged MPDAG (an undirected
    graph is trivially closed under the Meek rules).
    """
    _require_dag(d, "moral_graph")
    pairs = {frozenset((e.a, e.b)) for e in d.edges}
    for c in d.nodes:
        for p, q in combinations(d.parents(c), 2):
            pairs.add(frozenset((p, q)))
    edges = [Edge.of(*sorted(p), T, T) for p in pairs]
    return MixedGraph(d.nodes, edges, GraphClass.MPDAG, validate=False)


def _reaches_avoiding(d: MixedGraph, start: str, targets: frozenset, avoid: frozenset) -> bool:
    seen, todo = {start}, [start]
    while todo:
        u = todo.pop()
        if u in targets:
            return True
        for w in d.children(u):
            if w not in seen and w not in avoid:
                seen.add(w)
                todo.append(w)
    return False


def proper_backdoor_graph(d: MixedGraph, X: Iterable[str], Y: Iterable[str]) -> MixedGraph:
    """Remove the first edge of every proper causal path from X to Y."""
    _require_dag(d, "proper_backdoor_graph")
    X, Y = d.check_nodes(X), d.check_nodes(Y)
    if X & Y:
        raise QueryError("X and Y must be disjoint")
    drop = set()
    for x in X:
        for c in d.children(x):
            if c not in X and _reaches_avoiding(d, c, Y, X):
                drop.add((x, c))
    edges = [e for e in d.edges if (e.a, e.b) not in drop and (e.b, e.a) not in drop]
    return d.replace(edges=edges, validate=False)


def delete_edges_into(d: MixedGraph, W: Iterable[str]) -> MixedGraph:
    """The manipulated graph with every edge into W removed."""
    _require_dag(d, "delete_edges_into")
    W = d.check_nodes(W)
    return d.replace(edges=[e for e in d.edges if not any(
        (n in W and d.mark(e.other(n), n) is A) for n in (e.a, e.b))], validate=False)


def delete_edges_out_of(d: MixedGraph, W: Iterable[str]) -> MixedGraph:
    """The manipulated graph with every edge out of W removed."""
    _require_dag(d, "delete_edges_out_of")
    W = d.check_nodes(W)
    return d.replace(edges=[e for e in d.edges if not any(
        (n in W and d.mark(e.other(n), n) is T) for n in (e.a, e.b))], validate=False)


def to_dag(g: MixedGraph) -> MixedGraph:
    """Re-tag a fully directed MPDAG as a DAG."""
    if g.undirected_edges() or g.kind is GraphClass.PAG:
        raise GraphValidationError("graph is not fully directed")
    return g.replace(kind=GraphClass.DAG)
