"""Cycle detection, clustering, stretching, transcripts."""

import pytest

from ncsp.algebra import Alphabet
from ncsp.encoding import parse_map
from ncsp.errors import GraphError, ParseError, RunningIntersectionError
from ncsp.factorgraph import build_factor_graph, global_kernel_support
from ncsp.fixtures import n3_stretch_transcript, nadler_cluster_transcript
from ncsp.network import NetworkCode, SinkSpec, transmit
from ncsp.transform import (Cluster, apply_transcript, auto_acyclic,
                            check_exactness, cluster, find_cycles,
                            format_transcript, parse_transcript, stretch)

from conftest import n3_chain_graph

GF2 = Alphabet.gf(2)


def four_cycle_graph():
    """Two parity factors over the same variable pair: one 4-cycle."""
    m1 = parse_map("x1 + x2", 2, GF2)
    code = NetworkCode(2, GF2, (("g1", m1), ("g2", m1)),
                       (SinkSpec("T", frozenset({1}), ("g1", "g2")),))
    return build_factor_graph(code, "T", {"g1": 0, "g2": 0})


def test_butterfly_graph_is_tree(butterfly):
    obs = transmit(butterfly, (0, 0), "T1")
    g = build_factor_graph(butterfly, "T1", obs)
    assert find_cycles(g) == []
    assert check_exactness(g).exact


def test_n3_has_two_six_cycles(n3):
    g = build_factor_graph(n3, "43", transmit(n3, (0,) * 5, "43"))
    cycles = find_cycles(g)
    assert len(cycles) == 2
    assert sorted(len(c) for c in cycles) == [6, 6]
    assert {frozenset(c) for c in cycles} == {
        frozenset({"x1", "e31", "x2", "e33", "x3", "e32"}),
        frozenset({"x4", "e34", "x3", "e35", "x5", "e36"}),
    }
    assert not check_exactness(g).exact


def test_four_cycle_detected_and_clustered_away():
    g = four_cycle_graph()
    cycles = find_cycles(g)
    assert len(cycles) == 1 and len(cycles[0]) == 4
    g2 = cluster(g, {"x1", "x2"})
    assert find_cycles(g2) == []
    merged = g2.nodes["x1+x2"]
    assert merged.domain == (1, 2)
    assert merged.kernel.is_trivial
    assert check_exactness(g2).exact


def test_cluster_single_node_is_identity_up_to_id():
    g = four_cycle_graph()
    g2 = cluster(g, {"g1"})
    assert g2.nodes["g1"].domain == g.nodes["g1"].domain
    assert g2.edges == g.edges
    assert len(g2.nodes) == len(g.nodes)


def test_cluster_nadler_nonlinear_factors(nadler):
    obs = transmit(nadler, (1, 0, 1, 1, 0), "T495")
    g = build_factor_graph(nadler, "T495", obs)
    steps = nadler_cluster_transcript(nadler, "T495")
    g2 = apply_transcript(g, steps)
    merged = [n for n in g2.nodes.values() if n.kind == "cluster"]
    assert len(merged) == 1
    assert merged[0].domain == (1, 2, 3, 4, 5)
    assert check_exactness(g2).exact
    assert global_kernel_support(g2) == global_kernel_support(g)


def test_cluster_empty_set_rejected(butterfly):
    g = build_factor_graph(butterfly, "T1", transmit(butterfly, (0, 0), "T1"))
    with pytest.raises(GraphError):
        cluster(g, set())


def test_stretch_builds_the_n3_chain(n3):
    g = n3_chain_graph(n3)
    # domains along the chain, frozen from the transformation by hand
    expected = {
        "e33": (2, 3), "x2": (2, 3), "e31": (1, 2, 3), "x1": (1, 3),
        "e32": (1, 3), "x3": (3,), "e34": (3, 4), "x4": (3, 4),
        "e36": (3, 4, 5), "x5": (3, 5), "e35": (3, 5),
    }
    assert {nid: g.nodes[nid].domain for nid in g.node_ids()} == expected
    assert len(g.edges) == 10
    rep = check_exactness(g)
    assert rep.exact


def test_stretch_preserves_global_support(n3):
    for x in [(0, 0, 0, 0, 0), (1, 2, 3, 0, 1)]:
        obs = transmit(n3, x, "43")
        g = build_factor_graph(n3, "43", obs)
        g2 = apply_transcript(g, n3_stretch_transcript())
        assert global_kernel_support(g2) == global_kernel_support(g)


def test_stretch_empty_path_is_identity(butterfly):
    g = build_factor_graph(butterfly, "T1", transmit(butterfly, (0, 0), "T1"))
    g2 = stretch(g, 1, ())
    assert g2.edges == g.edges
    assert {n: g2.nodes[n].domain for n in g2.nodes} == \
           {n: g.nodes[n].domain for n in g.nodes}


def test_stretch_existing_variable_is_noop_for_that_node(n3):
    g = build_factor_graph(n3, "43", transmit(n3, (0,) * 5, "43"))
    g2 = stretch(g, 3, ("x3", "e32"))
    assert g2.nodes["e32"].domain == g.nodes["e32"].domain


def test_stretch_bad_path_rejected(n3):
    g = build_factor_graph(n3, "43", transmit(n3, (0,) * 5, "43"))
    with pytest.raises(GraphError):
        stretch(g, 3, ("x3", "e36"))  # not adjacent


def test_deletion_violating_running_intersection_rejected(n3):
    g = build_factor_graph(n3, "43", transmit(n3, (0,) * 5, "43"))
    with pytest.raises(RunningIntersectionError):
        # without stretching x3 first, cutting both left-cycle attachments
        # strands e32 from the other nodes that contain x3
        stretch(g, 3, (), ("x3-e33", "x3-e32"))


def test_check_exactness_single_node():
    from ncsp.factorgraph import ClusterGraph, GraphNode, KernelTable
    g = ClusterGraph(1, GF2,
                     [GraphNode("x1", "variable", (1,), KernelTable.trivial(2))],
                     set())
    assert check_exactness(g).exact


def test_auto_acyclic_identity_on_trees(butterfly):
    g = build_factor_graph(butterfly, "T1", transmit(butterfly, (1, 0), "T1"))
    g2, steps = auto_acyclic(g)
    assert steps == []
    assert g2.edges == g.edges


def test_auto_acyclic_nadler(nadler):
    obs = transmit(nadler, (0, 1, 0, 1, 1), "T495")
    g = build_factor_graph(nadler, "T495", obs)
    g2, steps = auto_acyclic(g)
    assert steps
    assert check_exactness(g2).exact
    assert max(len(n.domain) for n in g2.nodes.values()) <= 5
    assert global_kernel_support(g2) == global_kernel_support(g)


def test_auto_acyclic_n3(n3):
    g = build_factor_graph(n3, "43", transmit(n3, (1, 1, 1, 1, 1), "43"))
    g2, steps = auto_acyclic(g)
    assert check_exactness(g2).exact
    assert global_kernel_support(g2) == global_kernel_support(g)
    # replaying the transcript reproduces the same graph
    g3 = apply_transcript(g, steps)
    assert g3.edges == g2.edges
    assert {n: g3.nodes[n].domain for n in g3.nodes} == \
           {n: g2.nodes[n].domain for n in g2.nodes}


def test_transcript_text_roundtrip():
    steps = n3_stretch_transcript() + [Cluster(frozenset({"x1", "x2"}))]
    text = format_transcript(steps)
    again = parse_transcript(text)
    assert again == steps


def test_transcript_parse_errors():
    with pytest.raises(ParseError):
        parse_transcript("cluster\n")
    with pytest.raises(ParseError):
        parse_transcript("stretch 3 path a b\n")
    with pytest.raises(ParseError):
        parse_transcript("warp x3 path a b\n")


def test_edge_spec_resolution_with_dashed_ids():
    # node ids containing '-' must still resolve in delete specs
    m = parse_map("x1 + x2", 2, GF2)
    code = NetworkCode(2, GF2, (("g-1", m), ("g-2", m)),
                       (SinkSpec("T", frozenset({1}), ("g-1", "g-2")),))
    g = build_factor_graph(code, "T", {"g-1": 0, "g-2": 0})
    g2 = stretch(g, 1, ("x1", "g-1", "x2", "g-2"), ("x1-g-1",))
    assert not g2.has_edge("x1", "g-1")
    assert find_cycles(g2) == []


def test_edge_spec_no_match(n3):
    g = build_factor_graph(n3, "43", transmit(n3, (0,) * 5, "43"))
    with pytest.raises(GraphError):
        stretch(g, 3, (), ("x1-e36",))
