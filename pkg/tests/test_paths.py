import pytest

from cadjust.errors import QueryError
from cadjust.graph import GraphClass, MixedGraph, delete_edges_into, delete_edges_out_of, parse_graph
from cadjust.paths import (PathFilter, PathWitness, Status, backdoor_paths, classify_path,
                           enumerate_proper_definite_status_paths, is_blocked, is_possibly_causal,
                           is_visible, m_separated, node_status, open_paths)

# frozen from an independent networkx enumeration of all simple paths
FIG3A_NONCAUSAL = [
    ("X", "V1", "Y"), ("X", "V2", "Y"),
    ("X", "V1", "V2", "Y"), ("X", "V2", "V1", "Y"), ("X", "V3", "V1", "Y"),
    ("X", "V3", "V1", "V2", "Y"),
]


def nodes_of(ws):
    return [w.nodes for w in ws]


def test_classify(fig3a, fig3c):
    c = classify_path(fig3c, ["X", "V1", "V2", "Y"], ["X"])
    assert c.possibly_causal and c.definite_status and c.proper
    c = classify_path(fig3a, ["X", "V2", "Y"], ["X"])
    assert not c.possibly_causal and c.definite_status and c.proper
    d = MixedGraph.build(GraphClass.DAG, [("A", "->", "B")])
    assert classify_path(d, ["A", "B"]).possibly_causal


def test_classify_rejects_non_path(fig3a):
    with pytest.raises(QueryError):
        classify_path(fig3a, ["X", "V4"])


def test_strict_definition_checks_all_pairs():
    # consecutive edges look fine, but C -> A points back at the first node
    g = parse_graph("mpdag\nA -- B\nB -- C\nC -> A")
    assert not is_possibly_causal(g, ["A", "B", "C"])


def test_node_status(fig3a, fig4):
    assert node_status(fig3a, "X", "V2", "Y") is Status.DEFINITE_NON_COLLIDER
    assert node_status(fig3a, "V1", "Y", "V4") is Status.COLLIDER
    assert node_status(fig3a, "V3", "V1", "V2") is Status.DEFINITE_NON_COLLIDER
    # V1 o-o V2 o-> X: V1 and X adjacent, so V2 is not of definite status
    assert node_status(fig4, "V1", "V2", "X") is Status.NON_DEFINITE


def test_enumerate_noncausal_fig3a(fig3a):
    found = enumerate_proper_definite_status_paths(fig3a, ["X"], ["Y"], PathFilter.NON_CAUSAL)
    assert sorted(nodes_of(found)) == sorted(FIG3A_NONCAUSAL)


def test_enumerate_possibly_causal(fig3a, fig3b, fig3c):
    assert nodes_of(enumerate_proper_definite_status_paths(fig3a, ["X"], ["Y"], "possibly-causal")) \
        == [("X", "Y")]
    got = enumerate_proper_definite_status_paths(fig3b, ["X1", "X2"], ["Y"], "possibly-causal")
    assert nodes_of(got) == [("X1", "Y"), ("X2", "Y")]
    got = enumerate_proper_definite_status_paths(fig3c, ["X"], ["Y"], "possibly-causal")
    assert nodes_of(got) == [("X", "Y"), ("X", "V1", "V2", "Y")]


def test_enumerate_fig5_noncausal(fig5):
    got = enumerate_proper_definite_status_paths(fig5, ["X1", "X2"], ["Y"], "noncausal")
    assert sorted(nodes_of(got)) == [("X1", "V2", "Y"), ("X2", "V1", "Y")]


def test_enumeration_is_sorted(fig3a):
    got = nodes_of(enumerate_proper_definite_status_paths(fig3a, ["X"], ["Y"], "all"))
    assert got == sorted(got, key=lambda p: (len(p), p))


def test_blocking(fig3a):
    assert not is_blocked(fig3a, ["X", "V2", "Y"], ["V1"])
    assert is_blocked(fig3a, ["X", "V2", "Y"], ["V1", "V2"])


def test_collider_opened_by_descendant():
    g = parse_graph("dag\nA -> C\nB -> C\nC -> D")
    assert is_blocked(g, ["A", "C", "B"], [])
    assert not is_blocked(g, ["A", "C", "B"], ["D"])


def test_open_paths_given_set(fig3a):
    got = nodes_of(open_paths(fig3a, ["X"], ["Y"], ["V1"], "noncausal"))
    assert got == [("X", "V2", "Y")]


def test_separation_fig5(fig5):
    g = delete_edges_into(fig5, ["X2"])
    assert m_separated(g, ["Y"], ["X1"], ["V1", "V2", "X2"]).separated


def test_separation_fig1_witness(fig1):
    v = m_separated(fig1, ["X"], ["Y"], ["Age"])
    assert not v.separated
    assert v.witness.nodes == ("X", "Y")
    assert ("X", "Smoking", "Y") in nodes_of(open_paths(fig1, ["X"], ["Y"], ["Age"]))
    g = delete_edges_out_of(fig1, ["X"])
    assert m_separated(g, ["X"], ["Y"], ["Age"]).witness.nodes == ("X", "Smoking", "Y")


def test_separated_has_no_witness(fig1):
    g = delete_edges_out_of(fig1, ["X"])
    v = m_separated(g, ["X"], ["Y"], ["Age", "Smoking"])
    assert v.separated and v.witness is None


def test_visibility(fig4):
    assert is_visible(fig4, "X", "Y")
    assert not is_visible(fig4, "V2", "Y")
    assert not is_visible(fig4, "V1", "Y")
    two = parse_graph("pag\nA -> B")
    assert not is_visible(two, "A", "B")


def test_backdoor_paths(fig1, fig3b):
    assert sorted(nodes_of(backdoor_paths(fig1, ["X"], ["Y"]))) == [
        ("X", "Age", "Y"), ("X", "Smoking", "Y")]
    assert ("X2", "S", "L", "Y") in nodes_of(backdoor_paths(fig3b, ["X1", "X2"], ["Y"], proper=True))


def test_witness_render(fig3a, fig4):
    w = PathWitness.of(fig3a, ["X", "V2", "Y"])
    assert w.render(fig3a) == "X <- V2 -> Y"
    assert w.to_dict()["statuses"] == ["endpoint", "definite-non-collider", "endpoint"]
    assert PathWitness.of(fig4, ["V1", "V2", "X"]).render(fig4) == "V1 o-o V2 o-> X"
