"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

from itertools import product

import numpy as np
import pytest

from ncsp.algebra import Alphabet
from ncsp.factorgraph import (ClusterGraph, GraphNode, KernelTable,
                              build_factor_graph, variable_node_id)
from ncsp.fixtures import (make_butterfly, make_combination_nadler,
                           make_n3_sink43, n3_stretch_transcript,
                           nadler_cluster_transcript)
from ncsp.network import transmit
from ncsp.transform import apply_transcript


@pytest.fixture(scope="session")
def butterfly():
    return make_butterfly()


@pytest.fixture(scope="session")
def nadler():
    return make_combination_nadler()


@pytest.fixture(scope="session")
def n3():
    return make_n3_sink43()


@pytest.fixture(scope="session")
def n3_transcript():
    return n3_stretch_transcript()


def n3_chain_graph(code, x=(0, 0, 1, 0, 0)):
    """The transcript-transformed eleven-node chain for one source tuple."""
    obs = transmit(code, x, "43")
    g = build_factor_graph(code, "43", obs)
    return apply_transcript(g, n3_stretch_transcript())


def nadler_clustered_graph(code, x=(0, 0, 0, 0, 0), sink_id="T495"):
    obs = transmit(code, x, sink_id)
    g = build_factor_graph(code, sink_id, obs)
    return apply_transcript(g, nadler_cluster_transcript(code, sink_id))


def brute_support(code, sink_id, obs):
    """Pure-python enumeration of observation-consistent source tuples,
    independent of the numpy-backed production path."""
    from ncsp.encoding import eval_map
    sink = code.sink(sink_id)
    out = set()
    for x in product(range(code.alphabet.q), repeat=code.omega):
        if all(eval_map(code.edge_map(e), x, code.alphabet) == obs[e]
               for e in sink.in_edges):
            out.add(x)
    return out


def cost_shape_chain(q: int) -> ClusterGraph:
    """A chain with the same node domains, kernel domains and edges as the
    transformed six-edge fixture, over an arbitrary alphabet size.

    Kernels are single-configuration indicators of one fixed assignment, so
    the decode is unique at every q; operation counts depend only on the
    domain structure, which matches the real fixture exactly.
    """
    a = Alphabet.z4() if q == 4 else Alphabet.gf(q)
    x_true = tuple((3 * i + 1) % q for i in range(5))  # arbitrary fixed tuple

    def indicator(domain):
        bits = np.zeros(q ** len(domain), dtype=bool)
        idx = 0
        for pos, v in enumerate(domain):
            idx += x_true[v - 1] * q**pos
        bits[idx] = True
        return KernelTable(domain, q, bits)

    kernel_domains = {
        "e31": (1, 2), "e32": (1, 3), "e33": (2, 3),
        "e34": (3, 4), "e35": (3, 5), "e36": (4, 5),
    }
    node_domains = {
        "e31": (1, 2, 3), "e32": (1, 3), "e33": (2, 3),
        "e34": (3, 4), "e35": (3, 5), "e36": (3, 4, 5),
        "x1": (1, 3), "x2": (2, 3), "x3": (3,), "x4": (3, 4), "x5": (3, 5),
    }
    nodes = []
    for i in range(1, 6):
        nid = variable_node_id(i)
        nodes.append(GraphNode(nid, "variable", node_domains[nid],
                               KernelTable.trivial(q)))
    for nid, kdom in kernel_domains.items():
        nodes.append(GraphNode(nid, "factor", node_domains[nid], indicator(kdom)))
    chain = ["e33", "x2", "e31", "x1", "e32", "x3", "e34", "x4", "e36", "x5", "e35"]
    edges = {frozenset(pair) for pair in zip(chain, chain[1:])}
    return ClusterGraph(5, a, nodes, edges)
