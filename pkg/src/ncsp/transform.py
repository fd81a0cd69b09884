"""Cycle detection and the exactness-restoring graph transformations.

Two transformations are supported: clustering a set of nodes into one
(union domain, conjunction kernel) and stretching a variable along a path
(the variable joins every local domain on the path, kernels untouched)
with explicit edge deletions.  Message passing stays exact as long as the
result is acyclic and satisfies the running-intersection property, which
``check_exactness`` verifies.

Transcripts record transformation steps in a replayable one-line-per-step
text form:

    cluster <id> <id> ...
    stretch x<i> path <id> <id> ... delete <id>-<id> ...
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GraphError, ParseError, RunningIntersectionError
from .factorgraph import (CLUSTER, ClusterGraph, GraphNode, KernelTable,
                          conjoin_tables)


# -- cycles ------------------------------------------------------------------

def find_cycles(g: ClusterGraph) -> list[list[str]]:
    """A cycle basis of the graph, each cycle an ordered node-id sequence.

    Fundamental cycles of a breadth-first spanning forest rooted at the
    lexicographically smallest ids; empty iff the graph is a forest.
    """
    parent: dict[str, str | None] = {}
    depth: dict[str, int] = {}
    tree_edges: set[frozenset[str]] = set()
    for root in g.node_ids():
        if root in parent:
            continue
        parent[root] = None
        depth[root] = 0
        queue = [root]
        while queue:
            u = queue.pop(0)
            for v in g.neighbors(u):
                if v not in parent:
                    parent[v] = u
                    depth[v] = depth[u] + 1
                    tree_edges.add(frozenset((u, v)))
                    queue.append(v)
    cycles = []
    for e in sorted(tuple(sorted(e)) for e in g.edges):
        if frozenset(e) in tree_edges:
            continue
        u, v = e
        pu, pv = [u], [v]
        a, b = u, v
        while depth[a] > depth[b]:
            a = parent[a]
            pu.append(a)
        while depth[b] > depth[a]:
            b = parent[b]
            pv.append(b)
        while a != b:
            a, b = parent[a], parent[b]
            pu.append(a)
            pv.append(b)
        cycle = pu + pv[-2::-1]  # u .. lca .. v, closing edge implied
        cycles.append(_normalize_cycle(cycle))
    return cycles


def _normalize_cycle(cycle: list[str]) -> list[str]:
    k = cycle.index(min(cycle))
    rot = cycle[k:] + cycle[:k]
    rev = [rot[0]] + rot[:0:-1]
    return min(rot, rev)


def is_forest(g: ClusterGraph) -> bool:
    return not find_cycles(g)


# -- running intersection ----------------------------------------------------

def running_intersection_violations(g: ClusterGraph) -> list[int]:
    """Variables whose occurrence set induces a disconnected subgraph."""
    holders: dict[int, list[str]] = {}
    for n in g.nodes.values():
        for v in n.domain:
            holders.setdefault(v, []).append(n.node_id)
    bad = []
    for var in sorted(holders):
        ids = set(holders[var])
        seen = {min(ids)}
        queue = [min(ids)]
        while queue:
            u = queue.pop()
            for w in g.neighbors(u):
                if w in ids and w not in seen:
                    seen.add(w)
                    queue.append(w)
        if seen != ids:
            bad.append(var)
    return bad


@dataclass(frozen=True)
class ExactnessReport:
    acyclic: bool
    cycles: tuple[tuple[str, ...], ...]
    ri_violations: tuple[int, ...]

    @property
    def exact(self) -> bool:
        return self.acyclic and not self.ri_violations

    def __str__(self):
        if self.exact:
            return "exact (acyclic, running intersection holds)"
        parts = []
        if not self.acyclic:
            parts.append(f"{len(self.cycles)} cycle(s): " +
                         "; ".join("-".join(c) for c in self.cycles))
        if self.ri_violations:
            parts.append("running intersection violated for " +
                         ", ".join(f"x{v}" for v in self.ri_violations))
        return "not exact: " + "; ".join(parts)


def check_exactness(g: ClusterGraph) -> ExactnessReport:
    cycles = find_cycles(g)
    return ExactnessReport(not cycles, tuple(tuple(c) for c in cycles),
                           tuple(running_intersection_violations(g)))


# -- transformations ---------------------------------------------------------

@dataclass(frozen=True)
class Cluster:
    node_ids: frozenset[str]


@dataclass(frozen=True)
class Stretch:
    var: int
    path: tuple[str, ...]
    deletes: tuple[str, ...]  # raw "<id>-<id>" edge specs


TransformStep = Cluster | Stretch


def cluster(g: ClusterGraph, node_ids, new_id: str | None = None) -> ClusterGraph:
    """Merge the given nodes into one with the union domain and the
    conjunction kernel; outside edges are inherited, parallels merged."""
    ids = set(node_ids)
    if not ids:
        raise GraphError("cannot cluster an empty node set")
    for nid in ids:
        g.node(nid)
    if new_id is None:
        new_id = "+".join(sorted(ids)) if len(ids) > 1 else next(iter(ids))
    members = [g.nodes[i] for i in sorted(ids)]
    domain = tuple(sorted(set().union(*(m.domain for m in members))))
    kdom = tuple(sorted(set().union(*(m.kernel.domain for m in members))))
    q = g.alphabet.q
    bits = conjoin_tables([(m.kernel.bits, m.kernel.domain) for m in members], kdom, q)
    kind = members[0].kind if len(members) == 1 else CLUSTER
    if new_id in g.nodes and new_id not in ids:
        raise GraphError(f"cluster id {new_id!r} collides with an existing node")
    merged = GraphNode(new_id, kind, domain, KernelTable(kdom, q, bits))
    # rebuild edges, collapsing members onto the new id
    edges: set[frozenset[str]] = set()
    for e in g.edges:
        a, b = sorted(e)
        a2 = new_id if a in ids else a
        b2 = new_id if b in ids else b
        if a2 != b2:
            edges.add(frozenset((a2, b2)))
    nodes = []
    placed = False
    for n in g.nodes.values():
        if n.node_id in ids:
            if not placed:
                nodes.append(merged)
                placed = True
        else:
            nodes.append(n)
    return g.replace(nodes, edges)


def _resolve_edge_spec(g: ClusterGraph, spec) -> frozenset[str]:
    if isinstance(spec, (tuple, list)):
        a, b = spec
        pair = frozenset((a, b))
        if pair not in g.edges:
            raise GraphError(f"edge {a}-{b} does not exist")
        return pair
    candidates = []
    for i, ch in enumerate(spec):
        if ch != "-":
            continue
        a, b = spec[:i], spec[i + 1:]
        if a in g.nodes and b in g.nodes and frozenset((a, b)) in g.edges:
            candidates.append(frozenset((a, b)))
    if not candidates:
        raise GraphError(f"edge spec {spec!r} matches no edge")
    if len(set(candidates)) > 1:
        raise GraphError(f"edge spec {spec!r} is ambiguous")
    return candidates[0]


def stretch(g: ClusterGraph, var: int, path, deletes=()) -> ClusterGraph:
    """Add ``var`` to every local domain along the path (kernels unchanged),
    then remove the listed edges.  Fails if a deletion breaks the running
    intersection property for any variable."""
    path = tuple(path)
    for nid in path:
        g.node(nid)
    for a, b in zip(path, path[1:]):
        if not g.has_edge(a, b):
            raise GraphError(f"path nodes {a} and {b} are not adjacent")
    if not any(var in n.domain for n in g.nodes.values()):
        raise GraphError(f"variable x{var} occurs in no node")
    doomed = {_resolve_edge_spec(g, spec) for spec in deletes}
    on_path = set(path)
    nodes = []
    for n in g.nodes.values():
        if n.node_id in on_path and var not in n.domain:
            nodes.append(GraphNode(n.node_id, n.kind,
                                   tuple(sorted(set(n.domain) | {var})), n.kernel))
        else:
            nodes.append(n)
    out = g.replace(nodes, set(g.edges) - doomed)
    bad = running_intersection_violations(out)
    if bad:
        raise RunningIntersectionError(
            "running intersection violated for " + ", ".join(f"x{v}" for v in bad))
    return out


def apply_step(g: ClusterGraph, step: TransformStep) -> ClusterGraph:
    if isinstance(step, Cluster):
        return cluster(g, step.node_ids)
    return stretch(g, step.var, step.path, step.deletes)


def apply_transcript(g: ClusterGraph, steps) -> ClusterGraph:
    for step in steps:
        g = apply_step(g, step)
    return g


# -- automatic cycle removal -------------------------------------------------

def auto_acyclic(g: ClusterGraph) -> tuple[ClusterGraph, list[TransformStep]]:
    """Greedy cycle removal by clustering only: repeatedly merge the two
    adjacent nodes on the shortest remaining cycle whose domain union is
    smallest (ties broken lexicographically).  Terminates because the node
    count strictly decreases; never stretches, so no edge-deletion guesses."""
    steps: list[TransformStep] = []
    while True:
        cycles = find_cycles(g)
        if not cycles:
            return g, steps
        cyc = min(cycles, key=lambda c: (len(c), c))
        best = None
        for i in range(len(cyc)):
            a, b = cyc[i], cyc[(i + 1) % len(cyc)]
            union = set(g.nodes[a].domain) | set(g.nodes[b].domain)
            key = (len(union), tuple(sorted((a, b))))
            if best is None or key < best[0]:
                best = (key, (a, b))
        pair = frozenset(best[1])
        steps.append(Cluster(pair))
        g = cluster(g, pair)


# -- transcript text form ------------------------------------------------------

def format_transcript(steps) -> str:
    lines = []
    for s in steps:
        if isinstance(s, Cluster):
            lines.append("cluster " + " ".join(sorted(s.node_ids)))
        else:
            line = f"stretch x{s.var} path " + " ".join(s.path)
            if s.deletes:
                line += " delete " + " ".join(s.deletes)
            lines.append(line)
    return "\n".join(lines) + ("\n" if lines else "")


def parse_transcript(text: str) -> list[TransformStep]:
    steps: list[TransformStep] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "cluster":
            if len(tokens) < 2:
                raise ParseError("cluster needs at least one node id", line=lineno)
            steps.append(Cluster(frozenset(tokens[1:])))
        elif tokens[0] == "stretch":
            if len(tokens) < 3 or not tokens[1].startswith("x") or tokens[2] != "path":
                raise ParseError("expected 'stretch x<i> path ...'", line=lineno)
            try:
                var = int(tokens[1][1:])
            except ValueError:
                raise ParseError(f"bad variable token {tokens[1]!r}", line=lineno) from None
            rest = tokens[3:]
            deletes: tuple[str, ...] = ()
            if "delete" in rest:
                k = rest.index("delete")
                deletes = tuple(rest[k + 1:])
                rest = rest[:k]
            steps.append(Stretch(var, tuple(rest), deletes))
        else:
            raise ParseError(f"unknown transcript step {tokens[0]!r}", line=lineno)
    return steps
