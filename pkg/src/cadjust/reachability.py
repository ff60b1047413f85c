"""Ancestral relations, possible mediators and forbidden sets.

Every closure here is reflexive: a node is its own ancestor, descendant,
possible ancestor and possible descendant. ``parents`` is the exception: it
is the union of the parents of W with W itself removed.

Possible descendants are found by graph search over edges that carry no
arrowhead at the end we leave from (``->``, ``--``, ``o->`` and ``o-o``
traversed from the tail or circle side). The search only follows unshielded
walks: every possibly causal path has an unshielded possibly causal
subsequence, while a walk that cuts a corner can run against a shortcut edge
(``A -> C``, ``C -- B``, ``B -- A`` does not make A a possible descendant of C).
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from typing import Callable, Iterable

from .errors import QueryError
from .graph import Mark, MixedGraph, NodeSet

RELATIONS = ("Pa", "PossPa", "Ch", "An", "De", "PossAn", "PossDe")


def _closure(g: MixedGraph, start: Iterable[str], step: Callable[[str], Iterable[str]],
             avoid: frozenset = frozenset()) -> NodeSet:
    seen = set(start)
    todo = deque(seen)
    while todo:
        u = todo.popleft()
        for w in step(u):
            if w not in seen and w not in avoid:
                seen.add(w)
                todo.append(w)
    return NodeSet(seen)


def _possible_children(g: MixedGraph, u: str) -> list[str]:
    # u *-* w can be followed towards w when there is no arrowhead at u
    return [w for w in g.neighbors(u) if g.mark(w, u) is not Mark.ARROW]


def _possible_parents(g: MixedGraph, u: str) -> list[str]:
    return [w for w in g.neighbors(u) if g.mark(u, w) is not Mark.ARROW]


def _unshielded_closure(g: MixedGraph, start: Iterable[str], forward: bool) -> NodeSet:
    # states are (previous node, current node); the next node must not be
    # adjacent to the previous one
    step = _possible_children if forward else _possible_parents
    found = set(start)
    seen = {(None, v) for v in found}
    todo = deque(seen)
    while todo:
        prev, u = todo.popleft()
        for w in step(g, u):
            if w == prev or (prev is not None and g.adjacent(prev, w)):
                continue
            if (u, w) not in seen:
                seen.add((u, w))
                found.add(w)
                todo.append((u, w))
    return NodeSet(found)


def parents(g: MixedGraph, W: Iterable[str]) -> NodeSet:
    """Pa(W): every node with a directed edge into W, minus W itself."""
    W = g.check_nodes(W)
    return NodeSet({p for w in W for p in g.parents(w)} - W)


def possible_parents(g: MixedGraph, W: Iterable[str]) -> NodeSet:
    """Nodes joined to W by an edge without an arrowhead at the node, minus W."""
    W = g.check_nodes(W)
    return NodeSet({p for w in W for p in _possible_parents(g, w)} - W)


def children(g: MixedGraph, W: Iterable[str]) -> NodeSet:
    W = g.check_nodes(W)
    return NodeSet({c for w in W for c in g.children(w)} - W)


def ancestors(g: MixedGraph, W: Iterable[str]) -> NodeSet:
    return _closure(g, g.check_nodes(W), g.parents)


def descendants(g: MixedGraph, W: Iterable[str]) -> NodeSet:
    return _closure(g, g.check_nodes(W), g.children)


def possible_ancestors(g: MixedGraph, W: Iterable[str]) -> NodeSet:
    return _unshielded_closure(g, g.check_nodes(W), forward=False)


def possible_descendants(g: MixedGraph, W: Iterable[str]) -> NodeSet:
    return _unshielded_closure(g, g.check_nodes(W), forward=True)


def relation(g: MixedGraph, name: str, W: Iterable[str]) -> NodeSet:
    """Dispatch by relation name (one of ``RELATIONS``)."""
    table = {
        "Pa": parents, "PossPa": possible_parents, "Ch": children,
        "An": ancestors, "De": descendants,
        "PossAn": possible_ancestors, "PossDe": possible_descendants,
    }
    if name not in table:
        raise QueryError(f"unknown relation {name!r}; expected one of {', '.join(RELATIONS)}")
    return table[name](g, W)


def _check_xy(g: MixedGraph, X, Y) -> tuple[NodeSet, NodeSet]:
    X, Y = g.check_nodes(X), g.check_nodes(Y)
    if not X or not Y:
        raise QueryError("X and Y must be non-empty")
    if X & Y:
        raise QueryError("X and Y must be disjoint")
    return X, Y


@lru_cache(maxsize=4096)
def _mediators(g: MixedGraph, X: frozenset, Y: frozenset) -> NodeSet:
    # Only nodes that can still reach Y without passing through X are worth
    # visiting; that prunes every dead branch of the search.
    useful = set(_closure(g, Y, lambda u: _possible_parents(g, u), avoid=X))
    found: set[str] = set()
    for x in X:
        # DFS keeping the path so the strict pairwise test can run
        path = [x]
        on_path = {x}

        def extend(u):
            for w in _possible_children(g, u):
                if w in on_path or w in X or w not in useful:
                    continue
                # no earlier node may carry an arrowhead from w
                if any(g.mark(w, v) is Mark.ARROW for v in path if g.adjacent(w, v)):
                    continue
                path.append(w)
                on_path.add(w)
                if w in Y:
                    found.update(path[1:])
                extend(w)
                path.pop()
                on_path.discard(w)

        extend(x)
    return NodeSet(found)


def possible_mediators(g: MixedGraph, X: Iterable[str], Y: Iterable[str]) -> NodeSet:
    """Non-X nodes lying on some proper possibly causal path from X to Y.

    Every member of Y that is reached this way is included.
    """
    X, Y = _check_xy(g, X, Y)
    return _mediators(g, frozenset(X), frozenset(Y))


def causal_mediators(g: MixedGraph, X: Iterable[str], Y: Iterable[str]) -> NodeSet:
    """Non-X nodes lying on some proper directed path from X to Y."""
    X, Y = _check_xy(g, X, Y)
    down = _closure(g, [c for x in X for c in g.children(x) if c not in X], g.children, avoid=X)
    up = _closure(g, Y, g.parents, avoid=X)
    return NodeSet(set(down) & set(up))


@lru_cache(maxsize=4096)
def _forbidden(g: MixedGraph, X: frozenset, Y: frozenset) -> NodeSet:
    med = _mediators(g, X, Y)
    if not med:
        return NodeSet()
    return possible_descendants(g, med)


def forbidden_set(g: MixedGraph, X: Iterable[str], Y: Iterable[str]) -> NodeSet:
    """Forb(X, Y): possible descendants of the possible mediators."""
    X, Y = _check_xy(g, X, Y)
    return _forbidden(g, frozenset(X), frozenset(Y))
