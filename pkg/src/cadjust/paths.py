"""Path status, path enumeration, blocking, m-separation and edge visibility.

Only definite-status paths matter for blocking, so enumeration abandons any
prefix as soon as an interior node turns out to be of non-definite status.
Every enumeration is returned in canonical order: shorter paths first, ties
broken lexicographically on the node sequence.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .errors import GraphValidationError, QueryError
from .graph import GraphClass, Mark, MixedGraph, NodeSet
from .reachability import ancestors


class Status(enum.Enum):
    ENDPOINT = "endpoint"
    COLLIDER = "collider"
    DEFINITE_NON_COLLIDER = "definite-non-collider"
    NON_DEFINITE = "non-definite"


class PathFilter(enum.Enum):
    ALL = "all"
    NON_CAUSAL = "noncausal"
    POSSIBLY_CAUSAL = "possibly-causal"


def node_status(g: MixedGraph, a: str, b: str, c: str) -> Status:
    """Status of ``b`` on the subpath ``<a, b, c>``."""
    at_b_from_a, at_b_from_c = g.mark(a, b), g.mark(c, b)
    if at_b_from_a is Mark.ARROW and at_b_from_c is Mark.ARROW:
        return Status.COLLIDER
    # b -> a or b -> c on the path
    if (at_b_from_a is Mark.TAIL and g.mark(b, a) is Mark.ARROW) or \
            (at_b_from_c is Mark.TAIL and g.mark(b, c) is Mark.ARROW):
        return Status.DEFINITE_NON_COLLIDER
    # a *-- b --* c (undirected) or a *-o b o-* c, unshielded
    if at_b_from_a is not Mark.ARROW and at_b_from_c is not Mark.ARROW and not g.adjacent(a, c):
        return Status.DEFINITE_NON_COLLIDER
    return Status.NON_DEFINITE


_ARROWS = {
    (Mark.TAIL, Mark.ARROW): "->", (Mark.ARROW, Mark.TAIL): "<-",
    (Mark.TAIL, Mark.TAIL): "--", (Mark.ARROW, Mark.ARROW): "<->",
    (Mark.CIRCLE, Mark.ARROW): "o->", (Mark.ARROW, Mark.CIRCLE): "<-o",
    (Mark.CIRCLE, Mark.CIRCLE): "o-o",
}


@dataclass(frozen=True)
class PathWitness:
    """A path together with the status of each of its nodes in its graph."""

    nodes: tuple[str, ...]
    statuses: tuple[Status, ...]

    @classmethod
    def of(cls, g: MixedGraph, nodes: Sequence[str]) -> "PathWitness":
        nodes = tuple(nodes)
        check_path(g, nodes)
        st = [Status.ENDPOINT]
        st += [node_status(g, *nodes[i - 1:i + 2]) for i in range(1, len(nodes) - 1)]
        if len(nodes) > 1:
            st.append(Status.ENDPOINT)
        return cls(nodes, tuple(st))

    @property
    def definite_status(self) -> bool:
        return Status.NON_DEFINITE not in self.statuses

    def colliders(self) -> list[str]:
        return [n for n, s in zip(self.nodes, self.statuses) if s is Status.COLLIDER]

    def non_colliders(self) -> list[str]:
        return [n for n, s in zip(self.nodes, self.statuses) if s is Status.DEFINITE_NON_COLLIDER]

    def render(self, g: MixedGraph) -> str:
        """Human-readable form, e.g. ``X <- V2 -> Y``."""
        out = [self.nodes[0]]
        for u, v in zip(self.nodes, self.nodes[1:]):
            out += [_ARROWS[g.mark(v, u), g.mark(u, v)], v]
        return " ".join(out)

    def to_dict(self) -> dict:
        return {"nodes": list(self.nodes), "statuses": [s.value for s in self.statuses]}

    def __len__(self):
        return len(self.nodes)


@dataclass(frozen=True)
class PathClass:
    possibly_causal: bool
    definite_status: bool
    proper: bool | None  # None when no X was given


@dataclass(frozen=True)
class SeparationVerdict:
    separated: bool
    witness: PathWitness | None = None


def check_path(g: MixedGraph, nodes: Sequence[str]) -> None:
    g.check_nodes(nodes)
    if len(nodes) < 2:
        raise QueryError("a path needs at least two nodes")
    if len(set(nodes)) != len(nodes):
        raise QueryError("path nodes must be distinct")
    for u, v in zip(nodes, nodes[1:]):
        if not g.adjacent(u, v):
            raise QueryError(f"{u} and {v} are not adjacent")


def is_possibly_causal(g: MixedGraph, nodes: Sequence[str]) -> bool:
    """No edge with an arrowhead at an earlier node, over all node pairs of the path."""
    for i, u in enumerate(nodes):
        for w in nodes[i + 1:]:
            if g.mark(w, u) is Mark.ARROW:
                return False
    return True


def is_possibly_causal_consecutive(g: MixedGraph, nodes: Sequence[str]) -> bool:
    """Shortcut that looks at consecutive edges only."""
    return all(g.mark(v, u) is not Mark.ARROW for u, v in zip(nodes, nodes[1:]))


def classify_path(g: MixedGraph, nodes: Sequence[str], X: Iterable[str] | None = None) -> PathClass:
    w = PathWitness.of(g, nodes)
    proper = None
    if X is not None:
        X = g.check_nodes(X)
        proper = w.nodes[0] in X and not (set(w.nodes[1:]) & X)
    return PathClass(is_possibly_causal(g, w.nodes), w.definite_status, proper)


# -- enumeration -----------------------------------------------------------

Prune = Callable[[list, str], bool]


def _search(g: MixedGraph, sources: Iterable[str], targets: frozenset,
            barred: frozenset, through_targets: bool,
            keep: Prune | None = None, definite: bool = True) -> Iterator[tuple[str, ...]]:
    """DFS over simple definite-status paths from ``sources`` to ``targets``.

    With ``definite=False`` paths of any status are produced.

    ``barred`` nodes may not appear after the first node. ``keep(path, w)`` is
    consulted before appending ``w``; returning False drops that branch.
    """
    for s in sorted(sources):
        path = [s]
        on = {s}
        stack = [iter(g.neighbors(s))]
        while stack:
            w = next(stack[-1], None)
            if w is None:
                stack.pop()
                on.discard(path.pop())
                continue
            if w in on or w in barred:
                continue
            if definite and len(path) >= 2 and node_status(g, path[-2], path[-1], w) is Status.NON_DEFINITE:
                continue
            if keep is not None and not keep(path, w):
                continue
            path.append(w)
            on.add(w)
            if w in targets:
                yield tuple(path)
                if not through_targets:
                    on.discard(path.pop())
                    continue
            stack.append(iter(g.neighbors(w)))


def _canonical(paths: Iterable[tuple[str, ...]]) -> list[tuple[str, ...]]:
    return sorted(set(paths), key=lambda p: (len(p), p))


def _xy(g: MixedGraph, X, Y) -> tuple[NodeSet, NodeSet]:
    X, Y = g.check_nodes(X), g.check_nodes(Y)
    if X & Y:
        raise QueryError("X and Y must be disjoint")
    return X, Y


def _causal_keep(g: MixedGraph) -> Prune:
    # extending by w keeps the path possibly causal iff w puts no arrowhead on any earlier node
    return lambda path, w: all(g.mark(w, v) is not Mark.ARROW for v in path if g.adjacent(w, v))


def _open_keep(g: MixedGraph, C: frozenset, an_c: frozenset) -> Prune:
    def keep(path, w):
        if len(path) < 2:
            return True
        b = path[-1]
        st = node_status(g, path[-2], b, w)
        if st is Status.COLLIDER:
            return b in an_c
        return b not in C
    return keep


def enumerate_proper_definite_status_paths(
        g: MixedGraph, X: Iterable[str], Y: Iterable[str],
        filter: PathFilter | str = PathFilter.ALL) -> list[PathWitness]:
    """All proper definite-status paths from X to Y, canonical order.

    Members of Y may appear in the interior of a path.
    """
    X, Y = _xy(g, X, Y)
    filter = PathFilter(filter)
    keep = _causal_keep(g) if filter is PathFilter.POSSIBLY_CAUSAL else None
    found = _search(g, X, frozenset(Y), frozenset(X), True, keep)
    if filter is PathFilter.NON_CAUSAL:
        found = (p for p in found if not is_possibly_causal(g, p))
    return [PathWitness.of(g, p) for p in _canonical(found)]


def is_blocked(g: MixedGraph, p: PathWitness | Sequence[str], C: Iterable[str]) -> bool:
    """True unless every definite non-collider is outside C and every collider is in An(C)."""
    if not isinstance(p, PathWitness):
        p = PathWitness.of(g, p)
    if not p.definite_status:
        raise QueryError("path is not of definite status")
    C = g.check_nodes(C)
    if any(n in C for n in p.non_colliders()):
        return True
    cols = p.colliders()
    if not cols:
        return False
    an_c = ancestors(g, C) if C else frozenset()
    return not all(c in an_c for c in cols)


def open_paths(g: MixedGraph, X: Iterable[str], Y: Iterable[str], C: Iterable[str],
               filter: PathFilter | str = PathFilter.NON_CAUSAL) -> list[PathWitness]:
    """Proper definite-status paths from X to Y that C leaves open, canonical order."""
    X, Y = _xy(g, X, Y)
    C = g.check_nodes(C)
    filter = PathFilter(filter)
    an_c = frozenset(ancestors(g, C)) if C else frozenset()
    keep_open = _open_keep(g, frozenset(C), an_c)
    if filter is PathFilter.POSSIBLY_CAUSAL:
        causal = _causal_keep(g)
        keep = lambda path, w: keep_open(path, w) and causal(path, w)  # noqa: E731
    else:
        keep = keep_open
    found = _search(g, X, frozenset(Y), frozenset(X), True, keep)
    if filter is PathFilter.NON_CAUSAL:
        found = (p for p in found if not is_possibly_causal(g, p))
    return [PathWitness.of(g, p) for p in _canonical(found)]


def possibly_causal_paths(g: MixedGraph, X: Iterable[str], Y: Iterable[str],
                          first_step: Callable[[str, str], bool] | None = None) -> list[PathWitness]:
    """Proper possibly causal paths from X to Y of any status, canonical order.

    ``first_step(x, v)`` optionally restricts the first edge of the path.
    """
    X, Y = _xy(g, X, Y)
    causal = _causal_keep(g)

    def keep(path, w):
        if len(path) == 1 and first_step is not None and not first_step(path[0], w):
            return False
        return causal(path, w)

    found = _search(g, X, frozenset(Y), frozenset(X), True, keep, definite=False)
    return [PathWitness.of(g, p) for p in _canonical(found)]


def first_open_path(g: MixedGraph, X, Y, C,
                    filter: PathFilter | str = PathFilter.NON_CAUSAL) -> PathWitness | None:
    found = open_paths(g, X, Y, C, filter)
    return found[0] if found else None


def m_separated(g: MixedGraph, A: Iterable[str], B: Iterable[str],
                C: Iterable[str]) -> SeparationVerdict:
    """Decide whether C blocks every definite-status path between A and B.

    When it does not, the witness is the shortest open path (lexicographically
    first among the shortest).
    """
    A, B, C = g.check_nodes(A), g.check_nodes(B), g.check_nodes(C)
    if A & B or A & C or B & C:
        raise QueryError("A, B and C must be pairwise disjoint")
    if not A or not B:
        return SeparationVerdict(True)
    an_c = frozenset(ancestors(g, C)) if C else frozenset()
    keep = _open_keep(g, frozenset(C), an_c)
    found = _canonical(_search(g, A, frozenset(B), frozenset(A), False, keep))
    if not found:
        return SeparationVerdict(True)
    return SeparationVerdict(False, PathWitness.of(g, found[0]))


# -- visibility ------------------------------------------------------------

def is_visible(g: MixedGraph, x: str, y: str) -> bool:
    """Whether the directed PAG edge ``x -> y`` is visible.

    It is visible iff some V outside Adj(y) has an arrowhead into x, either
    directly or through a chain of bidirected edges whose interior nodes are
    all parents of y.
    """
    if g.kind is not GraphClass.PAG:
        raise GraphValidationError("visibility is defined for PAG-class graphs")
    g.check_nodes([x, y])
    if not g.is_directed(x, y):
        raise QueryError(f"{x} -> {y} is not an edge of the graph")

    def grants(v, into):
        return v != y and not g.adjacent(v, y) and g.mark(v, into) is Mark.ARROW

    if any(grants(v, x) for v in g.neighbors(x)):
        return True
    pa_y = set(g.parents(y)) - {x}
    start = [w for w in g.neighbors(x) if w in pa_y and g.is_bidirected(w, x)]
    seen, todo = set(start), deque(start)
    while todo:
        w = todo.popleft()
        if any(grants(v, w) for v in g.neighbors(w)):
            return True
        for u in g.neighbors(w):
            if u in pa_y and u not in seen and g.is_bidirected(u, w):
                seen.add(u)
                todo.append(u)
    return False


def backdoor_paths(d: MixedGraph, X: Iterable[str], Y: Iterable[str],
                   proper: bool = True) -> list[PathWitness]:
    """Paths from X to Y whose first edge points into X (DAGs only)."""
    if d.kind is not GraphClass.DAG:
        raise GraphValidationError("back-door paths are exposed for DAGs only")
    X, Y = _xy(d, X, Y)
    keep = lambda path, w: len(path) > 1 or d.is_directed(w, path[0])  # noqa: E731
    barred = frozenset(X) if proper else frozenset()
    return [PathWitness.of(d, p)
            for p in _canonical(_search(d, X, frozenset(Y), barred, True, keep))]
