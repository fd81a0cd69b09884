"""Sum-product message passing over the Boolean semiring on acyclic graphs.

The message from ``v`` to ``w`` is the OR-elimination, over the variables
of ``v`` not shared with ``w``, of the AND of ``v``'s local kernel with
every inbound message except the one from ``w``.  A node's state is the
AND of its kernel with all inbound messages.

Operation accounting is algebraic, not operational: the counter prices the
semiring expressions being evaluated, independent of table layout or
short-circuiting.  The conventions are:

* a product of F non-trivial factors over the node domain costs
  ``(F-1) * q**|S_v|`` conjunctions (identically-1 kernels and messages
  contribute no factor; a single-factor product is free);
* OR-eliminating onto the shared domain costs ``q**|shared| *
  (q**|eliminated| - 1)`` disjunctions (m-ary OR counted as m-1 binary
  ORs per retained configuration);
* scanning a table for its support is free.

The pre-elimination product at each sender is cached as the node's partial
state, at no extra cost: it is an intermediate value of the message
computation.  The decode layer uses it for traceback.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ScheduleError
from .factorgraph import ClusterGraph, conjoin_tables, eliminate_table, restrict_table
from .transform import check_exactness


@dataclass
class OpCounter:
    conjunctions: int = 0
    disjunctions: int = 0

    def __add__(self, other: "OpCounter") -> "OpCounter":
        return OpCounter(self.conjunctions + other.conjunctions,
                         self.disjunctions + other.disjunctions)

    def __iadd__(self, other: "OpCounter") -> "OpCounter":
        self.conjunctions += other.conjunctions
        self.disjunctions += other.disjunctions
        return self

    def as_tuple(self) -> tuple[int, int]:
        return (self.conjunctions, self.disjunctions)

    def __str__(self):
        return f"{self.conjunctions} AND, {self.disjunctions} OR"


COMPUTED = "computed"
SLICE = "slice"


@dataclass(frozen=True)
class Message:
    src: str
    dst: str
    domain: tuple[int, ...]
    table: np.ndarray
    cost: OpCounter
    kind: str = COMPUTED


@dataclass(frozen=True)
class SingleVertex:
    root: str


@dataclass(frozen=True)
class MultiVertex:
    targets: frozenset[str]


Schedule = SingleVertex | MultiVertex


@dataclass
class MessageStore:
    messages: dict[tuple[str, str], Message] = field(default_factory=dict)
    partials: dict[tuple[str, str], tuple[tuple[int, ...], np.ndarray]] = field(default_factory=dict)
    order: list[tuple[str, str]] = field(default_factory=list)

    def add(self, msg: Message, partial=None):
        key = (msg.src, msg.dst)
        self.messages[key] = msg
        if partial is not None:
            self.partials[key] = partial
        self.order.append(key)

    def inbox(self, v: str, neighbors: list[str], exclude: str | None = None) -> dict[str, Message]:
        out = {}
        for u in neighbors:
            if u == exclude:
                continue
            m = self.messages.get((u, v))
            if m is None:
                raise ScheduleError(f"missing message {u} -> {v}")
            out[u] = m
        return out

    @property
    def total(self) -> OpCounter:
        acc = OpCounter()
        for key in self.order:
            acc += self.messages[key].cost
        return acc


def _product_factors(g: ClusterGraph, v: str, inbox: dict[str, Message]):
    """Tables entering the product at v, and the non-trivial factor count."""
    node = g.node(v)
    tables: list[tuple[np.ndarray, tuple[int, ...]]] = []
    count = 0
    if not node.kernel.is_trivial:
        count += 1
    tables.append((node.kernel.bits, node.kernel.domain))
    for u in sorted(inbox):
        m = inbox[u]
        if not bool(m.table.all()):
            count += 1
        tables.append((m.table, m.domain))
    return tables, count


def compute_message(g: ClusterGraph, v: str, w: str,
                    inbox: dict[str, Message]) -> tuple[Message, tuple]:
    """One directed message, plus the cached pre-elimination partial state.

    ``inbox`` must hold exactly one message from every neighbor of v other
    than w.
    """
    if not g.has_edge(v, w):
        raise ScheduleError(f"{v} and {w} are not adjacent")
    expected = [u for u in g.neighbors(v) if u != w]
    if sorted(inbox) != expected:
        raise ScheduleError(
            f"message {v} -> {w} needs inbox from {expected}, got {sorted(inbox)}")
    q = g.alphabet.q
    sv = g.node(v).domain
    out_domain = tuple(i for i in sv if i in set(g.node(w).domain))
    tables, factors = _product_factors(g, v, inbox)
    cost = OpCounter()
    if factors >= 2:
        cost.conjunctions += (factors - 1) * q ** len(sv)
    partial = conjoin_tables(tables, sv, q)
    eliminated = len(sv) - len(out_domain)
    if eliminated:
        cost.disjunctions += q ** len(out_domain) * (q**eliminated - 1)
    table = eliminate_table(partial, sv, out_domain, q)
    return Message(v, w, out_domain, table, cost), (sv, partial)


def compute_slice_message(g: ClusterGraph, v: str, w: str,
                          inbox: dict[str, Message], pins: dict[int, int]) -> Message:
    """Decision-feedback variant: every variable eliminated by the ordinary
    message is already decoded, so the message is the slice of the product
    at the decoded values -- an index lookup costing no semiring operations.
    Sound whenever the pinned values are the unique consistent ones."""
    q = g.alphabet.q
    sv = g.node(v).domain
    out_domain = tuple(i for i in sv if i in set(g.node(w).domain))
    cut = {i: pins[i] for i in sv if i not in out_domain}
    if len(cut) != len(sv) - len(out_domain):
        raise ScheduleError(f"slice message {v} -> {w}: eliminated variables not all pinned")
    tables, _ = _product_factors(g, v, inbox)
    sliced = []
    for bits, dom in tables:
        b, d = restrict_table(bits, dom, {i: x for i, x in cut.items() if i in dom}, q)
        sliced.append((b, d))
    table = conjoin_tables(sliced, out_domain, q)
    return Message(v, w, out_domain, table, OpCounter(), kind=SLICE)


def compute_state(g: ClusterGraph, v: str,
                  inbox: dict[str, Message]) -> tuple[tuple[int, ...], np.ndarray, OpCounter]:
    """State at v from a complete inbox: kernel AND all inbound messages."""
    expected = g.neighbors(v)
    if sorted(inbox) != expected:
        raise ScheduleError(f"state at {v} needs inbox from {expected}, got {sorted(inbox)}")
    q = g.alphabet.q
    sv = g.node(v).domain
    tables, factors = _product_factors(g, v, inbox)
    cost = OpCounter()
    if factors >= 2:
        cost.conjunctions += (factors - 1) * q ** len(sv)
    return sv, conjoin_tables(tables, sv, q), cost


def _orientations_toward(g: ClusterGraph, target: str) -> set[tuple[str, str]]:
    """Directed edges pointing along the tree toward ``target``."""
    parent: dict[str, str | None] = {target: None}
    queue = [target]
    out: set[tuple[str, str]] = set()
    while queue:
        u = queue.pop(0)
        for v in g.neighbors(u):
            if v not in parent:
                parent[v] = u
                out.add((v, u))
                queue.append(v)
    return out


def run(g: ClusterGraph, schedule: Schedule) -> MessageStore:
    """Compute every message the schedule needs, leaf-to-root (and back for
    multi-vertex targets), each exactly once, in a deterministic order.

    Refuses graphs that are cyclic or violate running intersection: the
    results would not be exact marginals there.
    """
    report = check_exactness(g)
    if not report.exact:
        raise ScheduleError(str(report))
    if isinstance(schedule, SingleVertex):
        needed = _orientations_toward(g, schedule.root)
    else:
        needed = set()
        for t in sorted(schedule.targets):
            needed |= _orientations_toward(g, t)
    store = MessageStore()
    pending = set(needed)
    while pending:
        # on a tree, every dependency of a needed message is itself needed,
        # so readiness is just "all inbound already computed"
        ready = [(v, w) for (v, w) in sorted(pending)
                 if all((u, v) in store.messages for u in g.neighbors(v) if u != w)]
        if not ready:
            raise ScheduleError("schedule deadlock (is the graph a tree?)")
        for (v, w) in ready:
            inbox = store.inbox(v, g.neighbors(v), exclude=w)
            msg, partial = compute_message(g, v, w, inbox)
            store.add(msg, partial)
            pending.discard((v, w))
    return store


# -- reporting ----------------------------------------------------------------

def report_rows(store: MessageStore) -> list[dict]:
    rows = []
    for key in store.order:
        m = store.messages[key]
        rows.append({
            "from": m.src,
            "to": m.dst,
            "domain": ",".join(f"x{i}" for i in m.domain),
            "and": m.cost.conjunctions,
            "or": m.cost.disjunctions,
            "kind": m.kind,
        })
    return rows


def format_report(store: MessageStore) -> str:
    lines = [f"{'from':>12} {'to':>12} {'domain':>12} {'AND':>8} {'OR':>8}"]
    for r in report_rows(store):
        lines.append(f"{r['from']:>12} {r['to']:>12} {r['domain']:>12} "
                     f"{r['and']:>8} {r['or']:>8}")
    t = store.total
    lines.append(f"{'total':>12} {'':>12} {'':>12} {t.conjunctions:>8} {t.disjunctions:>8}")
    return "\n".join(lines) + "\n"
