"""Cluster graphs with Boolean local kernels, and their construction.

A node carries a local domain (a sorted tuple of 1-based variable indices)
and a Boolean local kernel over a subdomain of it.  The freshly built
per-sink graph is bipartite (variable/factor); transformations may produce
general cluster nodes.

Boolean tables are stored flat over the configuration space of their
domain.  The configuration index is mixed-radix with the *smallest* domain
variable least significant, so serialized tables are bit-exact across
implementations:

    index( (v_{d0}, v_{d1}, ...) ) = sum_k v_{dk} * q**k
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Alphabet
from .encoding import EncodingMap, Linear, eval_map, support_vars
from .errors import BudgetExceeded, NcspError
from .network import DEFAULT_BUDGET, NetworkCode, Observation, SinkSpec

VARIABLE = "variable"
FACTOR = "factor"
CLUSTER = "cluster"


# -- flat Boolean tables -----------------------------------------------------

def table_grid(bits: np.ndarray, domain: tuple[int, ...], q: int) -> np.ndarray:
    """View the flat table as a len(domain)-dimensional grid."""
    return bits.reshape((q,) * len(domain), order="F")


def extend_table(bits: np.ndarray, domain: tuple[int, ...],
                 target: tuple[int, ...], q: int) -> np.ndarray:
    """Extend by indifference onto a superset domain (both sorted)."""
    if domain == target:
        return bits
    g = table_grid(bits, domain, q)
    for pos, v in enumerate(target):
        if v not in domain:
            g = np.expand_dims(g, axis=pos)
    g = np.broadcast_to(g, (q,) * len(target))
    return g.flatten(order="F")


def conjoin_tables(tables: list[tuple[np.ndarray, tuple[int, ...]]],
                   target: tuple[int, ...], q: int) -> np.ndarray:
    """Pointwise AND of tables extended to the target domain."""
    out = np.ones(q ** len(target), dtype=bool)
    for bits, dom in tables:
        out &= extend_table(bits, dom, target, q)
    return out


def eliminate_table(bits: np.ndarray, domain: tuple[int, ...],
                    keep: tuple[int, ...], q: int) -> np.ndarray:
    """OR away all domain variables outside ``keep``."""
    drop = tuple(i for i, v in enumerate(domain) if v not in keep)
    if not drop:
        return bits
    g = table_grid(bits, domain, q).any(axis=drop)
    return g.flatten(order="F")


def restrict_table(bits: np.ndarray, domain: tuple[int, ...],
                   pins: dict[int, int], q: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Slice the table at fixed values of some variables (an index lookup)."""
    g = table_grid(bits, domain, q)
    indexer = tuple(pins[v] if v in pins else slice(None) for v in domain)
    rest = tuple(v for v in domain if v not in pins)
    return np.ascontiguousarray(g[indexer]).flatten(order="F"), rest


def table_support(bits: np.ndarray, domain: tuple[int, ...], q: int) -> list[tuple[int, ...]]:
    """Configurations mapped to 1, in index order."""
    out = []
    for idx in np.nonzero(bits)[0]:
        idx = int(idx)
        cfg = []
        for _ in domain:
            cfg.append(idx % q)
            idx //= q
        out.append(tuple(cfg))
    return out


@dataclass(frozen=True)
class KernelTable:
    domain: tuple[int, ...]
    q: int
    bits: np.ndarray  # flat bool, length q**len(domain)

    def __post_init__(self):
        if tuple(sorted(self.domain)) != self.domain:
            raise NcspError("kernel domain must be sorted")
        if len(self.bits) != self.q ** len(self.domain):
            raise NcspError("kernel table size mismatch")

    @property
    def is_trivial(self) -> bool:
        return bool(self.bits.all())

    def support(self) -> list[tuple[int, ...]]:
        return table_support(self.bits, self.domain, self.q)

    @staticmethod
    def trivial(q: int) -> "KernelTable":
        return KernelTable((), q, np.ones(1, dtype=bool))


def build_kernel(m: EncodingMap, y: int, a: Alphabet) -> KernelTable:
    """Indicator table of f(x_S) = y over the map's syntactic support S."""
    domain = tuple(sorted(support_vars(m)))
    q = a.q
    n = q ** len(domain)
    idx = np.arange(n)
    omega = len(m.coefficients) if isinstance(m, Linear) else m.omega
    args: list = [0] * omega
    for pos, v in enumerate(domain):
        args[v - 1] = (idx // q**pos) % q
    values = np.asarray(eval_map(m, args, a))
    if values.ndim == 0:
        values = np.full(n, int(values), dtype=np.int64)
    return KernelTable(domain, q, values == y)


# -- graphs ------------------------------------------------------------------

@dataclass(frozen=True)
class GraphNode:
    node_id: str
    kind: str
    domain: tuple[int, ...]
    kernel: KernelTable

    def __post_init__(self):
        if not set(self.kernel.domain) <= set(self.domain):
            raise NcspError(f"node {self.node_id}: kernel domain exceeds node domain")


class ClusterGraph:
    """Immutable-by-convention undirected graph of kernel-carrying nodes."""

    def __init__(self, omega: int, alphabet: Alphabet,
                 nodes: list[GraphNode], edges: set[frozenset[str]]):
        self.omega = omega
        self.alphabet = alphabet
        self.nodes: dict[str, GraphNode] = {}
        for n in nodes:
            if n.node_id in self.nodes:
                raise NcspError(f"duplicate node id {n.node_id!r}")
            self.nodes[n.node_id] = n
        for e in edges:
            a, b = sorted(e)
            if a == b or a not in self.nodes or b not in self.nodes:
                raise NcspError(f"bad edge {sorted(e)}")
        self.edges = frozenset(edges)

    def node(self, node_id: str) -> GraphNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise NcspError(f"unknown node {node_id!r}") from None

    def neighbors(self, node_id: str) -> list[str]:
        self.node(node_id)
        out = []
        for e in self.edges:
            if node_id in e:
                (other,) = e - {node_id}
                out.append(other)
        return sorted(out)

    def has_edge(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self.edges

    def node_ids(self) -> list[str]:
        return sorted(self.nodes)

    def replace(self, nodes: list[GraphNode], edges: set[frozenset[str]]) -> "ClusterGraph":
        return ClusterGraph(self.omega, self.alphabet, nodes, edges)


def variable_node_id(i: int) -> str:
    return f"x{i}"


def build_factor_graph(code: NetworkCode, sink: SinkSpec | str,
                       obs: Observation) -> ClusterGraph:
    """Per-sink factor graph: one variable node per source message, one
    factor node per incoming edge, an edge wherever the message participates
    in the map.  Node count is omega + |In(T_k)|."""
    if isinstance(sink, str):
        sink = code.sink(sink)
    missing = [e for e in sink.in_edges if e not in obs]
    if missing:
        raise NcspError(f"observation missing edges {missing}")
    extra = [e for e in obs if e not in sink.in_edges]
    if extra:
        raise NcspError(f"observation covers unknown edges {extra}")
    a = code.alphabet
    nodes = [GraphNode(variable_node_id(i), VARIABLE, (i,), KernelTable.trivial(a.q))
             for i in range(1, code.omega + 1)]
    edges: set[frozenset[str]] = set()
    for e in sink.in_edges:
        a.check(obs[e])
        kern = build_kernel(code.edge_map(e), obs[e], a)
        nodes.append(GraphNode(e, FACTOR, kern.domain, kern))
        for i in kern.domain:
            edges.add(frozenset((variable_node_id(i), e)))
    return ClusterGraph(code.omega, a, nodes, edges)


def global_kernel_support(g: ClusterGraph,
                          budget: int = DEFAULT_BUDGET) -> set[tuple[int, ...]]:
    """Support of the conjunction of all local kernels over the full tuple
    space; the reference oracle for every sum-product result."""
    q = g.alphabet.q
    n = q ** g.omega
    if n > budget:
        raise BudgetExceeded(f"q^omega = {n} exceeds {budget}")
    full = tuple(range(1, g.omega + 1))
    mask = np.ones(n, dtype=bool)
    for node in g.nodes.values():
        k = node.kernel
        if k.is_trivial:
            continue
        mask &= extend_table(k.bits, k.domain, full, q)
    return set(table_support(mask, full, q))


def dump_graph(g: ClusterGraph) -> str:
    """Deterministic text rendering used by golden tests."""
    lines = [f"omega {g.omega}", f"alphabet {g.alphabet.spec_string()}"]
    for nid in g.node_ids():
        n = g.nodes[nid]
        dom = ",".join(f"x{i}" for i in n.domain) or "-"
        if n.kernel.is_trivial:
            kern = "1"
        else:
            kern = ";".join(",".join(map(str, cfg)) for cfg in n.kernel.support())
        lines.append(f"node {nid} kind={n.kind} domain={dom} kernel={kern}")
    for e in sorted(tuple(sorted(e)) for e in g.edges):
        lines.append(f"edge {e[0]} -- {e[1]}")
    return "\n".join(lines) + "\n"
