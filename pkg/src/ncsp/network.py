"""Network-code model (global description only) and transmission.

Only what a sink needs is modeled: the total message count, the alphabet,
the global encoding map of every declared edge, and per-sink demand and
incidence lists.  There is no topology graph and no local encoding.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import Alphabet
from .encoding import EncodingMap, eval_map
from .errors import AlphabetError, BudgetExceeded, NcspError

DEFAULT_BUDGET = 1 << 20

Observation = dict[str, int]  # edge_id -> received symbol


@dataclass(frozen=True)
class SinkSpec:
    sink_id: str
    demand: frozenset[int]
    in_edges: tuple[str, ...]

    def __post_init__(self):
        if not self.demand:
            raise NcspError(f"sink {self.sink_id}: empty demand")
        if len(self.in_edges) < len(self.demand):
            raise NcspError(
                f"sink {self.sink_id}: {len(self.in_edges)} incoming edges "
                f"cannot satisfy a demand of {len(self.demand)} messages")


@dataclass(frozen=True)
class NetworkCode:
    omega: int
    alphabet: Alphabet
    edges: tuple[tuple[str, EncodingMap], ...]
    sinks: tuple[SinkSpec, ...]

    _cache: dict = field(default_factory=dict, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.omega < 1:
            raise NcspError("omega must be at least 1")
        ids = [e for e, _ in self.edges]
        if len(set(ids)) != len(ids):
            raise NcspError("duplicate edge ids")
        known = set(ids)
        for s in self.sinks:
            for i in sorted(s.demand):
                if not 1 <= i <= self.omega:
                    raise NcspError(f"sink {s.sink_id}: demand x{i} outside 1..{self.omega}")
            for e in s.in_edges:
                if e not in known:
                    raise NcspError(f"sink {s.sink_id}: unknown edge {e!r}")

    def edge_map(self, edge_id: str) -> EncodingMap:
        for e, m in self.edges:
            if e == edge_id:
                return m
        raise KeyError(edge_id)

    def sink(self, sink_id: str) -> SinkSpec:
        for s in self.sinks:
            if s.sink_id == sink_id:
                return s
        raise KeyError(sink_id)

    # value of every source tuple under one edge map, indexed by the
    # mixed-radix tuple index (x1 least significant)
    def edge_value_grid(self, edge_id: str) -> np.ndarray:
        key = ("grid", edge_id)
        grid = self._cache.get(key)
        if grid is None:
            n = self.alphabet.q ** self.omega
            if n > DEFAULT_BUDGET:
                raise BudgetExceeded(f"q^omega = {n} exceeds {DEFAULT_BUDGET}")
            digits = tuple_grid(self.omega, self.alphabet.q)
            grid = np.asarray(eval_map(self.edge_map(edge_id), digits, self.alphabet))
            if grid.ndim == 0:  # constant map
                grid = np.full(n, int(grid), dtype=np.int64)
            self._cache[key] = grid
        return grid


def tuple_grid(omega: int, q: int) -> list[np.ndarray]:
    """Per-variable digit arrays of all q^omega tuples, x1 least significant."""
    idx = np.arange(q ** omega)
    return [(idx // q**i) % q for i in range(omega)]


def index_of_tuple(x: tuple[int, ...], q: int) -> int:
    acc = 0
    for i, xi in enumerate(x):
        acc += xi * q**i
    return acc


def tuple_of_index(idx: int, omega: int, q: int) -> tuple[int, ...]:
    out = []
    for _ in range(omega):
        out.append(idx % q)
        idx //= q
    return tuple(out)


def transmit(code: NetworkCode, x: tuple[int, ...], sink: SinkSpec | str) -> Observation:
    """Received data y_e on each incoming edge of the sink for source tuple x."""
    if isinstance(sink, str):
        sink = code.sink(sink)
    if len(x) != code.omega:
        raise AlphabetError(f"tuple length {len(x)} != omega {code.omega}")
    code.alphabet.check(*x)
    return {e: int(eval_map(code.edge_map(e), x, code.alphabet)) for e in sink.in_edges}


def support_mask(code: NetworkCode, sink: SinkSpec, obs: Observation) -> np.ndarray:
    """Boolean mask over all q^omega tuples consistent with the observation."""
    missing = [e for e in sink.in_edges if e not in obs]
    if missing:
        raise NcspError(f"observation missing edges {missing}")
    extra = [e for e in obs if e not in sink.in_edges]
    if extra:
        raise NcspError(f"observation covers unknown edges {extra}")
    mask = np.ones(code.alphabet.q ** code.omega, dtype=bool)
    for e in sink.in_edges:
        code.alphabet.check(obs[e])
        mask &= code.edge_value_grid(e) == obs[e]
    return mask


@dataclass(frozen=True)
class VerifyReport:
    sink_id: str
    feasible: bool
    tuples_checked: int
    counterexample: tuple[int, ...] | None = None

    def __str__(self):
        if self.feasible:
            return (f"sink {self.sink_id}: feasible "
                    f"({self.tuples_checked} source tuples uniquely recovered)")
        return (f"sink {self.sink_id}: infeasible, counterexample "
                f"x = {self.counterexample}")


def verify_code(code: NetworkCode, sink: SinkSpec | str,
                budget: int = DEFAULT_BUDGET) -> VerifyReport:
    """Exhaustively check that every source tuple decodes uniquely at the sink.

    Transmits each tuple and brute-force inverts the observation; reports the
    first tuple whose demanded coordinates are not uniquely recovered.
    """
    if isinstance(sink, str):
        sink = code.sink(sink)
    q, omega = code.alphabet.q, code.omega
    n = q**omega
    if n > budget:
        raise BudgetExceeded(
            f"q^omega = {n} exceeds the exhaustive-check budget {budget}")
    grids = [code.edge_value_grid(e) for e in sink.in_edges]
    wanted = sorted(sink.demand)
    digits = tuple_grid(omega, q)
    demand_cols = np.stack([digits[i - 1] for i in wanted], axis=1)
    for idx in range(n):
        mask = np.ones(n, dtype=bool)
        for g in grids:
            mask &= g == g[idx]
        rows = demand_cols[mask]
        if rows.shape[0] == 0 or np.any(rows != rows[0]):
            return VerifyReport(sink.sink_id, False, idx + 1,
                                tuple_of_index(idx, omega, q))
    return VerifyReport(sink.sink_id, True, n)
