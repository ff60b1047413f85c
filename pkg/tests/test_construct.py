import pytest

from cadjust.construct import (NO_SET, SetKind, adjust_set_mpdag, adjust_set_pag, construct,
                               exclude_nodes, o_set, parent_adjustment)
from cadjust.criterion import check_conditional_adjustment
from cadjust.errors import PreconditionError
from cadjust.graph import GraphClass, MixedGraph

X12 = ["X1", "X2"]


def members(cs):
    return set(cs.members)


def test_example_sets(fig3a):
    assert members(parent_adjustment(fig3a, ["X"], ["Y"], ["V1"])) == {"V2", "V3"}
    assert members(adjust_set_mpdag(fig3a, ["X"], ["Y"], ["V1"])) == {"V2", "V3", "V4"}
    assert members(o_set(fig3a, ["X"], ["Y"], ["V1"])) == {"V2", "V4"}


def test_pag_adjust(fig4):
    cs = adjust_set_pag(fig4, ["X"], ["Y"], ["V1"])
    assert cs.kind is SetKind.ADJUST_PAG and members(cs) == {"V2", "V4"}
    assert construct(fig4, "adjust", ["X"], ["Y"], ["V1"]) == cs


def test_parent_fig1(fig1):
    assert members(parent_adjustment(fig1, ["X"], ["Y"], ["Age"])) == {"Smoking"}


def test_fig3b_sets(fig3b):
    cs = adjust_set_mpdag(fig3b, X12, ["Y"], ["Z"])
    assert members(cs) == {"L", "S", "W"} and cs.preconditions_met
    cs = o_set(fig3b, X12, ["Y"], ["Z"])
    assert members(cs) == {"L"} and cs.preconditions_met
    dropped = exclude_nodes(fig3b, cs, X12, ["Y"], ["Z"], ["L"])
    assert members(dropped) == set() and not dropped.preconditions_met


def test_isolated_pair():
    g = MixedGraph.build(GraphClass.DAG, [], nodes=["X", "Y"])
    cs = adjust_set_mpdag(g, ["X"], ["Y"])
    assert members(cs) == set() and cs.preconditions_met


def test_failed_set_is_still_returned(fig5):
    cs = adjust_set_mpdag(fig5, X12, ["Y"], ["V2"])
    assert not cs.preconditions_met and cs.reasons == (NO_SET,)


@pytest.mark.parametrize("fn, fig, args, tag", [
    (parent_adjustment, "fig3b", (X12, ["Y"], ["Z"]), "singleton-x"),
    (adjust_set_mpdag, "fig3c", (["X"], ["Y"], ["V3"]), "not-amenable"),
    (adjust_set_mpdag, "fig3b", (X12, ["Y"], ["Z", "W"]), "z-in-possde"),
    (adjust_set_mpdag, "fig4", (["X"], ["Y"], ["V1"]), "graph-class"),
    (adjust_set_pag, "fig3a", (["X"], ["Y"], ["V1"]), "graph-class"),
    (o_set, "fig3a", (["X"], ["V4"], []), "y-not-in-possde"),
])
def test_preconditions(figs, fn, fig, args, tag):
    with pytest.raises(PreconditionError) as info:
        fn(figs[fig], *args)
    assert info.value.name == tag


def test_y_in_parents():
    g = MixedGraph.build(GraphClass.DAG, [("Y", "->", "X")])
    with pytest.raises(PreconditionError) as info:
        parent_adjustment(g, ["X"], ["Y"])
    assert info.value.name == "y-in-parents"


def test_unknown_method(fig3a):
    with pytest.raises(ValueError):
        construct(fig3a, "magic", ["X"], ["Y"])


def test_constructed_sets_pass(figs):
    cases = [("fig3a", ["X"], ["Y"], ["V1"]), ("fig3b", X12, ["Y"], ["Z"]),
             ("fig1", ["X"], ["Y"], ["Age"])]
    for name, X, Y, Z in cases:
        g = figs[name]
        for method in ("adjust", "oset"):
            cs = construct(g, method, X, Y, Z)
            assert check_conditional_adjustment(g, X, Y, Z, cs.members).satisfied
