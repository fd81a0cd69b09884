"""Decoding at a sink: support extraction, traceback, reference decoders.

Four methods are provided.

``decode_sp(traceback=True)`` runs the single-root schedule, reads the root
variables off the root state, then walks outward restricting each node's
cached partial state to the already-decoded values; reverse messages are
never computed.  Restricting a partial state to known values prices
``q**|A|`` conjunctions, one per retained configuration of the undecoded
part ``A``.

``decode_sp(traceback=False)`` is the bidirectional reference schedule: an
inward pass, then per-branch outward walks that compute reverse messages
and extract full states at per-variable nodes.  The first branch walked is
extracted in full; on later branches, variables whose value is already
pinned by a single materialized message table restricted to the decoded
coordinates are read off by a free support scan, and reverse messages whose
eliminated variables are all decoded degrade to free decision-feedback
slices.  Both shortcuts are sound whenever the observation identifies the
demanded tuple uniquely, which is also verified as the values are produced.

``decode_bruteforce`` enumerates the full tuple space and is the reference
oracle.  ``decode_gaussian`` row-reduces linear systems over fields with
pivot analysis, so partial demands work on underdetermined systems.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import Alphabet
from .encoding import Linear
from .engine import (MessageStore, OpCounter, SingleVertex,
                     compute_message, compute_slice_message, compute_state, run)
from .errors import (AmbiguousDecode, InconsistentObservations, NcspError,
                     NotLinearCode, ScheduleError, Underdetermined)
from .factorgraph import (ClusterGraph, eliminate_table, restrict_table,
                          table_support, variable_node_id)
from .network import (DEFAULT_BUDGET, NetworkCode, Observation, SinkSpec,
                      support_mask, tuple_grid)
from .transform import check_exactness

SP_TRACEBACK = "sp-traceback"
SP_MULTIVERTEX = "sp-multivertex"
BRUTE_FORCE = "brute-force"
GAUSSIAN = "gaussian"


@dataclass
class DecodeResult:
    sink_id: str | None
    method: str
    values: dict[int, int]
    cost: OpCounter | None = None
    operations: list[dict] = field(default_factory=list)
    transcript_used: list | None = None  # TransformStep list, when one applied

    def render(self) -> str:
        lines = [f"x{i} = {self.values[i]}" for i in sorted(self.values)]
        if self.cost is not None:
            lines.append(f"cost: {self.cost}")
        return "\n".join(lines) + "\n"

    def as_dict(self) -> dict:
        out = {
            "sink": self.sink_id,
            "method": self.method,
            "values": {f"x{i}": v for i, v in sorted(self.values.items())},
        }
        if self.cost is not None:
            out["cost"] = {"and": self.cost.conjunctions, "or": self.cost.disjunctions}
        if self.transcript_used is not None:
            from .transform import format_transcript
            out["transcript"] = format_transcript(self.transcript_used).splitlines()
        return out


@dataclass(frozen=True)
class FastDecodabilityReport:
    sink_id: str | None
    acyclic: bool
    max_domain: int
    omega: int
    fast_decodable: bool
    complexity_class: str
    full_demand: bool

    def render(self) -> str:
        lines = [
            f"acyclic: {'yes' if self.acyclic else 'no'}",
            f"max local domain: {self.max_domain} (omega = {self.omega})",
            f"fast decodable: {'yes' if self.fast_decodable else 'no'}",
            f"complexity class: {self.complexity_class}",
        ]
        if not self.full_demand:
            lines.append("note: demand is partial; fast decodability is "
                         "defined for sinks demanding all messages")
        return "\n".join(lines) + "\n"


def extract_support(domain: tuple[int, ...], table: np.ndarray,
                    wanted, q: int) -> set[tuple[int, ...]]:
    """Projection of the table's support onto the wanted coordinates.

    A scan over stored entries: costs zero semiring operations.
    """
    wanted = tuple(sorted(wanted))
    if not set(wanted) <= set(domain):
        raise NcspError(f"wanted {wanted} outside domain {domain}")
    pos = [domain.index(v) for v in wanted]
    return {tuple(cfg[p] for p in pos) for cfg in table_support(table, domain, q)}


def default_root(g: ClusterGraph, demand) -> str:
    """Node whose domain meets the demand the most; ties to the smallest
    domain, then the lexicographically first id."""
    demand = set(demand)
    return sorted(g.node_ids(),
                  key=lambda nid: (-len(set(g.nodes[nid].domain) & demand),
                                   len(g.nodes[nid].domain), nid))[0]


# -- shared plumbing -----------------------------------------------------------

def _check_preconditions(g: ClusterGraph, demand):
    report = check_exactness(g)
    if not report.exact:
        raise ScheduleError(f"graph is not exact for message passing: {report}")
    covered = set()
    for n in g.nodes.values():
        covered |= set(n.domain)
    missing = sorted(set(demand) - covered)
    if missing:
        raise NcspError("demanded message(s) appear in no node domain: " +
                        ", ".join(f"x{i}" for i in missing))


def _bfs_tree(g: ClusterGraph, root: str) -> dict[str, str | None]:
    parent: dict[str, str | None] = {root: None}
    queue = [root]
    while queue:
        u = queue.pop(0)
        for v in g.neighbors(u):
            if v not in parent:
                parent[v] = u
                queue.append(v)
    return parent


def _component_subgraphs(g: ClusterGraph, demand: set[int]):
    """Split a forest into its trees, pairing each with the demanded
    variables it carries.  Running intersection guarantees every variable
    lives in exactly one tree, so components decode independently."""
    seen: set[str] = set()
    out = []
    for start in g.node_ids():
        if start in seen:
            continue
        comp = set(_bfs_tree(g, start))
        seen |= comp
        covered = set()
        for nid in comp:
            covered |= set(g.nodes[nid].domain)
        local = demand & covered
        if not local:
            continue
        nodes = [n for n in g.nodes.values() if n.node_id in comp]
        edges = {e for e in g.edges if e <= comp}
        out.append((ClusterGraph(g.omega, g.alphabet, nodes, edges), local))
    return out


def _merge_component_results(parts: list[DecodeResult], method: str,
                             demand: set[int]) -> DecodeResult:
    values: dict[int, int] = {}
    cost = OpCounter()
    ops: list[dict] = []
    for r in parts:
        values.update(r.values)
        cost += r.cost
        ops.extend(r.operations)
    return DecodeResult(None, method, {i: values[i] for i in sorted(demand)},
                        cost, ops)


def _absorb_support(support: list[tuple[int, ...]], domain: tuple[int, ...],
                    decoded: dict[int, int], demand: set[int], where: str):
    """Decode every coordinate the support pins uniquely; a demanded
    coordinate with several values is a hard ambiguity."""
    if not support:
        raise InconsistentObservations(f"empty support at {where}")
    for p, v in enumerate(domain):
        vals = {cfg[p] for cfg in support}
        if len(vals) == 1:
            val = vals.pop()
            if v in decoded and decoded[v] != val:
                raise InconsistentObservations(
                    f"conflicting values for x{v} at {where}")
            decoded[v] = val
        elif v in demand and v not in decoded:
            raise AmbiguousDecode(
                f"x{v} is not unique at {where}: code not decodable "
                f"at this sink with this graph")


def _message_rows(store: MessageStore) -> list[dict]:
    rows = []
    for key in store.order:
        m = store.messages[key]
        rows.append({"op": "message", "src": m.src, "dst": m.dst,
                     "kind": m.kind, "and": m.cost.conjunctions,
                     "or": m.cost.disjunctions})
    return rows


# -- single-vertex schedule + traceback ---------------------------------------

def decode_sp_traceback(g: ClusterGraph, demand, root: str | None = None) -> DecodeResult:
    demand = set(demand)
    _check_preconditions(g, demand)
    if root is not None:
        g.node(root)
    parts = [_traceback_component(sub, local,
                                  root if root in sub.nodes else None)
             for sub, local in _component_subgraphs(g, demand)]
    return _merge_component_results(parts, SP_TRACEBACK, demand)


def _traceback_component(g: ClusterGraph, demand: set[int],
                         root: str | None) -> DecodeResult:
    root = root if root is not None else default_root(g, demand)
    store = run(g, SingleVertex(root))
    cost = store.total
    ops = _message_rows(store)
    q = g.alphabet.q
    decoded: dict[int, int] = {}

    sv, bits, c = compute_state(g, root, store.inbox(root, g.neighbors(root)))
    cost += c
    ops.append({"op": "state", "node": root, "and": c.conjunctions, "or": 0})
    _absorb_support(table_support(bits, sv, q), sv, decoded, demand, f"root {root}")

    parent = _bfs_tree(g, root)
    queue = [v for v in g.neighbors(root)]
    while queue and not demand <= decoded.keys():
        w = queue.pop(0)
        v = parent[w]
        a_vars = tuple(i for i in g.node(w).domain if i not in set(g.node(v).domain))
        b_vars = tuple(i for i in g.node(w).domain if i in set(g.node(v).domain))
        if any(i not in decoded for i in a_vars):
            if any(i not in decoded for i in b_vars):
                continue  # cannot restrict here; this branch stays unresolved
            lam_dom, lam_bits = store.partials[(w, v)]
            rbits, rdom = restrict_table(lam_bits, lam_dom,
                                         {i: decoded[i] for i in b_vars}, q)
            c = OpCounter(conjunctions=q ** len(a_vars))
            cost += c
            ops.append({"op": "traceback", "node": w,
                        "vars": ",".join(f"x{i}" for i in a_vars),
                        "and": c.conjunctions, "or": 0})
            _absorb_support(table_support(rbits, rdom, q), rdom, decoded,
                            demand, f"traceback at {w}")
        queue.extend(u for u in g.neighbors(w) if u != v)

    missing = sorted(demand - decoded.keys())
    if missing:
        raise AmbiguousDecode(
            "traceback left " + ", ".join(f"x{i}" for i in missing) +
            " undetermined: code not decodable at this sink with this graph")
    return DecodeResult(None, SP_TRACEBACK,
                        {i: decoded[i] for i in sorted(demand)}, cost, ops)


# -- bidirectional schedule ----------------------------------------------------

def _extraction_node(g: ClusterGraph, var: int) -> str:
    nid = variable_node_id(var)
    if nid in g.nodes and var in g.nodes[nid].domain:
        return nid
    holders = [n.node_id for n in g.nodes.values() if var in n.domain]
    return sorted(holders, key=lambda h: (len(g.nodes[h].domain), h))[0]


def _path_from_root(parent: dict[str, str | None], node: str) -> list[str]:
    path = []
    while node is not None:
        path.append(node)
        node = parent[node]
    return path[::-1]


def decode_sp_multivertex(g: ClusterGraph, demand, root: str | None = None) -> DecodeResult:
    demand = set(demand)
    _check_preconditions(g, demand)
    if root is not None:
        g.node(root)
    parts = [_multivertex_component(sub, local,
                                    root if root in sub.nodes else None)
             for sub, local in _component_subgraphs(g, demand)]
    return _merge_component_results(parts, SP_MULTIVERTEX, demand)


def _multivertex_component(g: ClusterGraph, demand: set[int],
                           root: str | None) -> DecodeResult:
    root = root if root is not None else default_root(g, demand)
    store = run(g, SingleVertex(root))
    cost = store.total
    ops = _message_rows(store)
    q = g.alphabet.q
    decoded: dict[int, int] = {}
    parent = _bfs_tree(g, root)

    targets: dict[str, list[int]] = {}
    for j in sorted(demand):
        targets.setdefault(_extraction_node(g, j), []).append(j)

    def send_reverse(v: str, w: str):
        nonlocal cost
        if (v, w) in store.messages:
            return
        inbox = store.inbox(v, g.neighbors(v), exclude=w)
        elim = [i for i in g.node(v).domain if i not in set(g.node(w).domain)]
        if elim and all(i in decoded for i in elim):
            msg = compute_slice_message(g, v, w, inbox, decoded)
            store.add(msg)
        else:
            msg, partial = compute_message(g, v, w, inbox)
            store.add(msg, partial)
        cost += msg.cost
        ops.append({"op": "message", "src": v, "dst": w, "kind": msg.kind,
                    "and": msg.cost.conjunctions, "or": msg.cost.disjunctions})

    def try_pin(j: int) -> bool:
        """Free support lookup: one materialized message, all other
        coordinates decoded, exactly one consistent value."""
        for key in store.order:
            m = store.messages[key]
            if j not in m.domain or j in decoded:
                continue
            others = [i for i in m.domain if i != j]
            if any(i not in decoded for i in others):
                continue
            rbits, rdom = restrict_table(m.table, m.domain,
                                         {i: decoded[i] for i in others}, q)
            vals = [cfg[0] for cfg in table_support(rbits, rdom, q)]
            if not vals:
                raise InconsistentObservations(
                    f"empty support pinning x{j} from {key[0]} -> {key[1]}")
            if len(vals) == 1:
                decoded[j] = vals[0]
                ops.append({"op": "pin", "var": f"x{j}",
                            "src": key[0], "dst": key[1], "and": 0, "or": 0})
                return True
        return False

    def extract_at(nid: str, wanted: list[int]):
        nonlocal cost
        for u in g.neighbors(nid):
            if (u, nid) not in store.messages:  # parent message, children came inward
                send_reverse(u, nid)
        sv, bits, c = compute_state(g, nid, store.inbox(nid, g.neighbors(nid)))
        cost += c
        ops.append({"op": "state", "node": nid, "and": c.conjunctions, "or": 0})
        for j in wanted:
            if j in decoded:
                continue
            marg = eliminate_table(bits, sv, (j,), q)
            oc = OpCounter()
            if len(sv) > 1:
                oc.disjunctions += q * (q ** (len(sv) - 1) - 1)
            cost += oc
            ops.append({"op": "marginalize", "node": nid, "var": f"x{j}",
                        "and": 0, "or": oc.disjunctions})
            _absorb_support(table_support(marg, (j,), q), (j,), decoded,
                            demand, f"state at {nid}")
        # remaining coordinates the state pins come free off its support
        _absorb_support(table_support(bits, sv, q), sv, decoded, demand,
                        f"state at {nid}")

    branches: dict[str, list[str]] = {}
    for nid in targets:
        if nid == root:
            continue
        path = _path_from_root(parent, nid)
        branches.setdefault(path[1], []).append(nid)

    priced_branch_done = False
    for child in sorted(branches):
        walk: list[str] = []
        for nid in branches[child]:
            for step in _path_from_root(parent, nid)[1:]:
                if step not in walk:
                    walk.append(step)
        for w in walk:
            send_reverse(parent[w], w)
            if w in targets:
                wanted = [j for j in targets[w] if j not in decoded]
                if not wanted:
                    continue
                if priced_branch_done:
                    wanted = [j for j in wanted if not try_pin(j)]
                if wanted:
                    extract_at(w, wanted)
        priced_branch_done = True

    # anything still open (root variables, failed pins) gets a full extraction
    for j in sorted(demand):
        if j in decoded:
            continue
        nid = _extraction_node(g, j)
        for step in _path_from_root(parent, nid)[1:]:
            send_reverse(parent[step], step)
        extract_at(nid, [j])

    return DecodeResult(None, SP_MULTIVERTEX,
                        {i: decoded[i] for i in sorted(demand)}, cost, ops)


def decode_sp(g: ClusterGraph, demand, root: str | None = None,
              traceback: bool = True) -> DecodeResult:
    """Sum-product decoding on an exact (acyclic, running-intersection)
    cluster graph; see the module docstring for the two schedules."""
    if traceback:
        return decode_sp_traceback(g, demand, root)
    return decode_sp_multivertex(g, demand, root)


# -- reference decoders --------------------------------------------------------

def decode_bruteforce(code: NetworkCode, sink: SinkSpec | str, obs: Observation,
                      budget: int = DEFAULT_BUDGET) -> DecodeResult:
    """Enumerate the whole tuple space, keep the observation-consistent
    tuples, and project onto the demand.  The oracle for everything else."""
    if isinstance(sink, str):
        sink = code.sink(sink)
    q, omega = code.alphabet.q, code.omega
    if q**omega > budget:
        raise NcspError(f"q^omega = {q**omega} exceeds budget {budget}")
    mask = support_mask(code, sink, obs)
    idx = np.nonzero(mask)[0]
    if idx.size == 0:
        raise InconsistentObservations(
            f"sink {sink.sink_id}: observation not in the code's image")
    digits = tuple_grid(omega, q)
    values = {}
    for j in sorted(sink.demand):
        vals = np.unique(digits[j - 1][idx])
        if vals.size > 1:
            raise AmbiguousDecode(f"x{j} is not unique at sink {sink.sink_id}")
        values[j] = int(vals[0])
    return DecodeResult(sink.sink_id, BRUTE_FORCE, values)


def decode_gaussian(code: NetworkCode, sink: SinkSpec | str,
                    obs: Observation) -> DecodeResult:
    """Row reduction with back substitution over the field, with pivot
    analysis so demanded coordinates resolve even when the full system is
    underdetermined."""
    if isinstance(sink, str):
        sink = code.sink(sink)
    a = code.alphabet
    if not a.is_field:
        raise NotLinearCode("not an LNC: alphabet is not a field")
    rows = []
    for e in sink.in_edges:
        m = code.edge_map(e)
        if not isinstance(m, Linear):
            raise NotLinearCode(f"not an LNC: edge {e} has a non-linear map")
        if e not in obs:
            raise NcspError(f"observation missing edge {e}")
        a.check(obs[e])
        rows.append(list(m.coefficients) + [obs[e]])
    omega = code.omega
    rref, pivots = _rref(rows, omega, a)
    for r in rref:
        if all(v == 0 for v in r[:omega]) and r[omega] != 0:
            raise InconsistentObservations(
                f"sink {sink.sink_id}: observation not in the code's image")
    free_cols = [c for c in range(omega) if c not in pivots]
    values = {}
    for j in sorted(sink.demand):
        col = j - 1
        if col not in pivots:
            raise Underdetermined(f"x{j} is underdetermined at sink {sink.sink_id}")
        row = rref[pivots[col]]
        if any(row[c] != 0 for c in free_cols):
            raise Underdetermined(f"x{j} is underdetermined at sink {sink.sink_id}")
        values[j] = row[omega]
    return DecodeResult(sink.sink_id, GAUSSIAN, values)


def _rref(rows: list[list[int]], ncols: int, a: Alphabet):
    """Reduced row echelon form in place; returns (rows, pivot col -> row)."""
    def sub_scaled(dst, src, factor):
        for k in range(len(dst)):
            dst[k] = a.add(dst[k], a.neg(a.mul(factor, src[k])))

    pivots: dict[int, int] = {}
    r = 0
    for col in range(ncols):
        sel = None
        for i in range(r, len(rows)):
            if rows[i][col] != 0:
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = a.inv(rows[r][col])
        rows[r] = [a.mul(inv, v) for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                sub_scaled(rows[i], rows[r], rows[i][col])
        pivots[col] = r
        r += 1
    return rows, pivots


# -- fast decodability ----------------------------------------------------------

def analyze_fast_decodability(g: ClusterGraph, omega: int | None = None,
                              demand=None, sink_id: str | None = None) -> FastDecodabilityReport:
    """Sufficient-condition check: acyclic graph with every local domain
    smaller than the message count decodes in O(q^m) < O(q^omega)."""
    omega = omega if omega is not None else g.omega
    full = demand is None or set(demand) == set(range(1, omega + 1))
    m = max((len(n.domain) for n in g.nodes.values()), default=0)
    acyclic = check_exactness(g).acyclic
    fast = acyclic and m < omega
    return FastDecodabilityReport(sink_id, acyclic, m, omega, fast,
                                  f"O(q^{m})", full)
