"""Decision procedures for covariate adjustment.

A query is a tuple (X, Y, Z, S) of pairwise disjoint node sets. The
conditional criterion asks whether S, used together with the conditioning
set Z, identifies the effect of X on Y within the stratum Z. Checks run in a
fixed order so that reports are stable:

1. applicability: Z contains no possible descendant of X
2. amenability: every proper possibly causal path from X to Y starts with a
   directed edge out of X (a visible one in a PAG)
3. S avoids the forbidden set
4. S together with Z blocks every proper non-causal definite-status path
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Union

from .errors import GraphValidationError, PreconditionError, QueryError
from .graph import GraphClass, MixedGraph, NodeSet
from .paths import PathFilter, PathWitness, is_visible, open_paths, possibly_causal_paths
from .reachability import descendants, forbidden_set, possible_descendants


class Verdict(enum.Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    INAPPLICABLE = "inapplicable"


class Clause(enum.Enum):
    FORBIDDEN_HIT = "forbidden-hit"
    OPEN_PATH = "open-path"
    NOT_AMENABLE = "not-amenable"
    Z_IN_POSSDE = "z-in-possde"
    DESCENDANT_HIT = "descendant-hit"


Witness = Union[str, PathWitness, None]


@dataclass(frozen=True)
class CriterionReport:
    verdict: Verdict
    clause: Clause | None = None
    witness: Witness = None

    def __post_init__(self):
        if (self.verdict is Verdict.SATISFIED) != (self.witness is None):
            raise ValueError("a witness is required exactly when the check fails")

    @property
    def satisfied(self) -> bool:
        return self.verdict is Verdict.SATISFIED

    def to_dict(self) -> dict:
        w = self.witness
        if isinstance(w, PathWitness):
            w = w.to_dict()
        return {
            "verdict": self.verdict.value,
            "clause": self.clause.value if self.clause else None,
            "witness": w,
        }


PASS = CriterionReport(Verdict.SATISFIED)


def check_query(g: MixedGraph, X, Y, Z=(), S=()) -> tuple[NodeSet, NodeSet, NodeSet, NodeSet]:
    """Validate node names and pairwise disjointness; return the four sets."""
    sets = [g.check_nodes(v) for v in (X, Y, Z, S)]
    if not sets[0] or not sets[1]:
        raise QueryError("X and Y must be non-empty")
    names = "XYZS"
    for i in range(4):
        for j in range(i + 1, 4):
            common = sets[i] & sets[j]
            if common:
                raise QueryError(f"{names[i]} and {names[j]} overlap in {', '.join(NodeSet(common))}")
    return tuple(sets)


def check_applicability(g: MixedGraph, X, Y, Z) -> CriterionReport:
    X, Y, Z, _ = check_query(g, X, Y, Z)
    hit = Z & possible_descendants(g, X)
    if hit:
        return CriterionReport(Verdict.INAPPLICABLE, Clause.Z_IN_POSSDE, min(hit))
    return PASS


def _good_first_edge(g: MixedGraph):
    if g.kind is GraphClass.PAG:
        return lambda x, v: g.is_directed(x, v) and is_visible(g, x, v)
    return g.is_directed


def check_amenability(g: MixedGraph, X, Y) -> CriterionReport:
    X, Y, _, _ = check_query(g, X, Y)
    good = _good_first_edge(g)
    bad = possibly_causal_paths(g, X, Y, first_step=lambda x, v: not good(x, v))
    if bad:
        return CriterionReport(Verdict.VIOLATED, Clause.NOT_AMENABLE, bad[0])
    return PASS


def _adjustment_clauses(g: MixedGraph, X, Y, S, C) -> CriterionReport:
    hit = S & forbidden_set(g, X, Y)
    if hit:
        return CriterionReport(Verdict.VIOLATED, Clause.FORBIDDEN_HIT, min(hit))
    found = open_paths(g, X, Y, C, PathFilter.NON_CAUSAL)
    if found:
        return CriterionReport(Verdict.VIOLATED, Clause.OPEN_PATH, found[0])
    return PASS


def check_conditional_adjustment(g: MixedGraph, X, Y, Z, S) -> CriterionReport:
    """Full conditional criterion; works for DAG, MPDAG and PAG inputs."""
    X, Y, Z, S = check_query(g, X, Y, Z, S)
    for pre in (check_applicability(g, X, Y, Z), check_amenability(g, X, Y)):
        if not pre.satisfied:
            return pre
    return _adjustment_clauses(g, X, Y, S, S | Z)


def check_unconditional_adjustment(g: MixedGraph, X, Y, W) -> CriterionReport:
    """Adjustment criterion for the set W with no conditioning stratum."""
    X, Y, _, W = check_query(g, X, Y, (), W)
    pre = check_amenability(g, X, Y)
    if not pre.satisfied:
        return pre
    return _adjustment_clauses(g, X, Y, W, W)


def check_conditional_backdoor(d: MixedGraph, X, Y, Z, S) -> CriterionReport:
    """Conditional back-door criterion for DAGs (sufficient, not necessary)."""
    if d.kind is not GraphClass.DAG:
        raise GraphValidationError("the back-door criterion is defined for DAGs")
    X, Y, Z, S = check_query(d, X, Y, Z, S)
    de_x = descendants(d, X)
    if Z & de_x:
        raise PreconditionError("z-in-descendants",
                                f"Z contains descendants of X: {', '.join(NodeSet(Z & de_x))}")
    if S & de_x:
        return CriterionReport(Verdict.VIOLATED, Clause.DESCENDANT_HIT, min(S & de_x))
    for p in open_paths(d, X, Y, S | Z, PathFilter.ALL):
        if d.is_directed(p.nodes[1], p.nodes[0]):
            return CriterionReport(Verdict.VIOLATED, Clause.OPEN_PATH, p)
    return PASS


@dataclass(frozen=True)
class ExistenceReport:
    """Outcome of the existence test.

    ``adjustment_set`` is the Adjust set when it works and None otherwise.
    ``candidate`` is the Adjust set that was tested (None when a
    precondition failed first). ``blocking_path`` is an open path that the
    candidate could not block.
    """

    adjustment_set: NodeSet | None
    candidate: NodeSet | None
    report: CriterionReport
    blocking_path: PathWitness | None = None

    @property
    def exists(self) -> bool:
        return self.adjustment_set is not None


def exists_conditional_adjustment(g: MixedGraph, X, Y, Z=()) -> ExistenceReport:
    """Test the Adjust set only; it passes iff some conditional adjustment set exists."""
    from .construct import adjust_members

    X, Y, Z, _ = check_query(g, X, Y, Z)
    for pre in (check_applicability(g, X, Y, Z), check_amenability(g, X, Y)):
        if not pre.satisfied:
            return ExistenceReport(None, None, pre)
    cand = adjust_members(g, X, Y, Z)
    rep = _adjustment_clauses(g, X, Y, cand, cand | Z)
    if rep.satisfied:
        return ExistenceReport(cand, cand, rep)
    path = rep.witness if isinstance(rep.witness, PathWitness) else None
    if path is not None:
        # an open non-collider that is forbidden explains why no set can block the path
        forb = forbidden_set(g, X, Y)
        stuck = [n for n in path.non_colliders() if n in forb]
        if stuck:
            rep = CriterionReport(Verdict.VIOLATED, Clause.FORBIDDEN_HIT, stuck[0])
    return ExistenceReport(None, cand, rep, path)


def applicable_and_amenable(g: MixedGraph, X: Iterable[str], Y: Iterable[str],
                            Z: Iterable[str]) -> bool:
    return check_applicability(g, X, Y, Z).satisfied and check_amenability(g, X, Y).satisfied
