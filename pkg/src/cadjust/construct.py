"""Closed-form conditional adjustment sets.

Four constructions are offered:

``parent``  Pa(X) \\ Z for a single treatment in a DAG or MPDAG
``adjust``  [PossAn(X u Y) u An(Z)] \\ [Forb u X u Y u Z] (DAG/MPDAG), with
            PossAn(Z) in place of An(Z) for PAGs
``oset``    Pa(possible mediators) \\ [Forb u X u Y u Z]

Every constructed set is re-checked against the criterion. A set that fails
is still returned, flagged with ``preconditions_met=False``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

from .criterion import (check_amenability, check_applicability,
                        check_conditional_adjustment, check_query)
from .errors import PreconditionError
from .graph import GraphClass, MixedGraph, NodeSet
from .reachability import (ancestors, forbidden_set, parents, possible_ancestors,
                           possible_descendants, possible_mediators)

NO_SET = "no conditional adjustment set exists"


class SetKind(enum.Enum):
    PARENT_SET = "parent"
    ADJUST = "adjust"
    OSET = "oset"
    ADJUST_PAG = "adjust-pag"


@dataclass(frozen=True)
class ConstructedSet:
    kind: SetKind
    members: NodeSet
    preconditions_met: bool
    reasons: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "members": list(self.members),
                "preconditions_met": self.preconditions_met, "reasons": list(self.reasons)}


def adjust_members(g: MixedGraph, X, Y, Z) -> NodeSet:
    """The Adjust formula for the graph's class, without any checking."""
    X, Y, Z = NodeSet(X), NodeSet(Y), NodeSet(Z)
    z_part = possible_ancestors(g, Z) if g.kind is GraphClass.PAG else ancestors(g, Z)
    keep = possible_ancestors(g, X | Y) | z_part
    return NodeSet(keep - forbidden_set(g, X, Y) - X - Y - Z)


def o_members(g: MixedGraph, X, Y, Z) -> NodeSet:
    X, Y, Z = NodeSet(X), NodeSet(Y), NodeSet(Z)
    pa = parents(g, possible_mediators(g, X, Y))
    return NodeSet(pa - forbidden_set(g, X, Y) - X - Y - Z)


def _require(cond: bool, name: str, message: str) -> None:
    if not cond:
        raise PreconditionError(name, message)


def _common_preconditions(g: MixedGraph, X, Y, Z, classes) -> None:
    _require(g.kind in classes, "graph-class",
             f"this construction needs a {' or '.join(c.value for c in classes)} graph")
    rep = check_applicability(g, X, Y, Z)
    _require(rep.satisfied, "z-in-possde",
             f"Z contains {rep.witness}, a possible descendant of X")
    rep = check_amenability(g, X, Y)
    _require(rep.satisfied, "not-amenable",
             "not amenable: " + (rep.witness.render(g) if rep.witness else ""))


def _finish(g, kind, X, Y, Z, members) -> ConstructedSet:
    rep = check_conditional_adjustment(g, X, Y, Z, members)
    if rep.satisfied:
        return ConstructedSet(kind, members, True)
    return ConstructedSet(kind, members, False, (NO_SET,))


_DIRECTED = (GraphClass.DAG, GraphClass.MPDAG)


def parent_adjustment(g: MixedGraph, X, Y, Z=()) -> ConstructedSet:
    X, Y, Z, _ = check_query(g, X, Y, Z)
    _require(len(X) == 1, "singleton-x", "the parent set needs a single treatment node")
    _common_preconditions(g, X, Y, Z, _DIRECTED)
    pa = parents(g, X)
    _require(not (Y & pa), "y-in-parents", "an outcome node is a parent of X")
    return _finish(g, SetKind.PARENT_SET, X, Y, Z, NodeSet(pa - Z))


def adjust_set_mpdag(g: MixedGraph, X, Y, Z=()) -> ConstructedSet:
    X, Y, Z, _ = check_query(g, X, Y, Z)
    _common_preconditions(g, X, Y, Z, _DIRECTED)
    return _finish(g, SetKind.ADJUST, X, Y, Z, adjust_members(g, X, Y, Z))


def o_set(g: MixedGraph, X, Y, Z=()) -> ConstructedSet:
    X, Y, Z, _ = check_query(g, X, Y, Z)
    _common_preconditions(g, X, Y, Z, _DIRECTED)
    _require(Y <= possible_descendants(g, X), "y-not-in-possde",
             "every outcome must be a possible descendant of X")
    return _finish(g, SetKind.OSET, X, Y, Z, o_members(g, X, Y, Z))


def adjust_set_pag(g: MixedGraph, X, Y, Z=()) -> ConstructedSet:
    X, Y, Z, _ = check_query(g, X, Y, Z)
    _common_preconditions(g, X, Y, Z, (GraphClass.PAG,))
    return _finish(g, SetKind.ADJUST_PAG, X, Y, Z, adjust_members(g, X, Y, Z))


METHODS = ("parent", "adjust", "oset")


def construct(g: MixedGraph, method: str, X, Y, Z=()) -> ConstructedSet:
    """Dispatch by method name; ``adjust`` picks the PAG variant for PAGs."""
    if method == "parent":
        return parent_adjustment(g, X, Y, Z)
    if method == "oset":
        return o_set(g, X, Y, Z)
    if method == "adjust":
        if g.kind is GraphClass.PAG:
            return adjust_set_pag(g, X, Y, Z)
        return adjust_set_mpdag(g, X, Y, Z)
    raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")


def exclude_nodes(g: MixedGraph, cs: ConstructedSet, X, Y, Z,
                  exclude: Iterable[str]) -> ConstructedSet:
    """Drop unmeasured nodes from a constructed set and re-check the result."""
    exclude = g.check_nodes(exclude)
    if not (cs.members & exclude):
        return cs
    members = NodeSet(cs.members - exclude)
    rep = check_conditional_adjustment(g, X, Y, Z, members)
    if rep.satisfied:
        return ConstructedSet(cs.kind, members, cs.preconditions_met, cs.reasons)
    reason = f"invalid after excluding {', '.join(NodeSet(cs.members & exclude))}"
    return ConstructedSet(cs.kind, members, False, cs.reasons + (reason,))
