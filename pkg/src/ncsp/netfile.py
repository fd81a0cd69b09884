"""Text formats: network description files and observation files.

Network files are line-oriented UTF-8:

    # comment
    alphabet gf 2        (or: alphabet z4)
    messages 2
    edge V1-T1 = x1
    edge V4-T1 = x1 + x2
    sink T1 demands x1 x2 receives V1-T1 V4-T1

Directives may appear in any order except that ``alphabet`` and
``messages`` must precede every ``edge`` and ``sink``.  Observation files
hold one ``<edge> = <symbol>`` line per incoming edge; symbols use the
canonical integer encoding for every alphabet.
"""

from __future__ import annotations

from .algebra import parse_alphabet
from .encoding import map_to_text, parse_map
from .errors import AlphabetError, NcspError, ParseError
from .network import NetworkCode, Observation, SinkSpec


def parse_network(text: str) -> NetworkCode:
    alphabet = None
    omega = None
    edges = []
    sinks = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        tokens = line.split()
        directive = tokens[0]
        if directive == "alphabet":
            if alphabet is not None:
                raise ParseError("duplicate alphabet directive", line=lineno)
            try:
                alphabet = parse_alphabet(" ".join(tokens[1:]))
            except AlphabetError as exc:
                raise ParseError(str(exc), line=lineno) from None
        elif directive == "messages":
            if omega is not None:
                raise ParseError("duplicate messages directive", line=lineno)
            if len(tokens) != 2 or not tokens[1].isdigit() or int(tokens[1]) < 1:
                raise ParseError("expected 'messages <count>'", line=lineno)
            omega = int(tokens[1])
        elif directive == "edge":
            if alphabet is None or omega is None:
                raise ParseError("edge before alphabet/messages", line=lineno)
            if "=" not in line:
                raise ParseError("expected 'edge <id> = <expr>'", line=lineno)
            head, expr_text = line.split("=", 1)
            head_tokens = head.split()
            if len(head_tokens) != 2:
                raise ParseError("expected 'edge <id> = <expr>'", line=lineno)
            edge_id = head_tokens[1]
            try:
                m = parse_map(expr_text, omega, alphabet)
            except ParseError as exc:
                offset = line.index("=") + 1
                col = offset + exc.col if exc.col is not None else None
                raise ParseError(exc.message, line=lineno, col=col) from None
            edges.append((edge_id, m))
        elif directive == "sink":
            if alphabet is None or omega is None:
                raise ParseError("sink before alphabet/messages", line=lineno)
            if len(tokens) < 2 or "demands" not in tokens or "receives" not in tokens:
                raise ParseError(
                    "expected 'sink <id> demands x<i>... receives <edge>...'",
                    line=lineno)
            d = tokens.index("demands")
            r = tokens.index("receives")
            if d != 2 or r <= d + 1 or r == len(tokens) - 1:
                raise ParseError(
                    "expected 'sink <id> demands x<i>... receives <edge>...'",
                    line=lineno)
            demand = set()
            for t in tokens[d + 1:r]:
                if not t.startswith("x") or not t[1:].isdigit():
                    raise ParseError(f"bad demand token {t!r}", line=lineno)
                demand.add(int(t[1:]))
            try:
                sinks.append(SinkSpec(tokens[1], frozenset(demand),
                                      tuple(tokens[r + 1:])))
            except NcspError as exc:
                raise ParseError(str(exc), line=lineno) from None
        else:
            raise ParseError(f"unknown directive {directive!r}", line=lineno)
    if alphabet is None:
        raise ParseError("missing alphabet directive")
    if omega is None:
        raise ParseError("missing messages directive")
    try:
        return NetworkCode(omega, alphabet, tuple(edges), tuple(sinks))
    except NcspError as exc:
        raise ParseError(str(exc)) from None


def format_network(code: NetworkCode) -> str:
    lines = [f"alphabet {code.alphabet.spec_string()}", f"messages {code.omega}"]
    for edge_id, m in code.edges:
        lines.append(f"edge {edge_id} = {map_to_text(m, code.alphabet)}")
    for s in code.sinks:
        demands = " ".join(f"x{i}" for i in sorted(s.demand))
        receives = " ".join(s.in_edges)
        lines.append(f"sink {s.sink_id} demands {demands} receives {receives}")
    return "\n".join(lines) + "\n"


def parse_observation(text: str) -> Observation:
    obs: Observation = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected '<edge> = <symbol>'", line=lineno)
        edge, value = (part.strip() for part in line.split("=", 1))
        if not edge or not value.isdigit():
            raise ParseError("expected '<edge> = <symbol>'", line=lineno)
        if edge in obs:
            raise ParseError(f"duplicate observation for edge {edge!r}", line=lineno)
        obs[edge] = int(value)
    return obs


def parse_inline_observation(text: str) -> Observation:
    """Comma-separated '<edge>=<symbol>' pairs as given on a command line."""
    obs: Observation = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ParseError(f"bad observation item {part!r}")
        edge, value = (p.strip() for p in part.split("=", 1))
        if not edge or not value.isdigit():
            raise ParseError(f"bad observation item {part!r}")
        if edge in obs:
            raise ParseError(f"duplicate observation for edge {edge!r}")
        obs[edge] = int(value)
    return obs


def format_observation(obs: Observation, order=None) -> str:
    keys = list(order) if order is not None else sorted(obs)
    return "\n".join(f"{e} = {obs[e]}" for e in keys) + "\n"
