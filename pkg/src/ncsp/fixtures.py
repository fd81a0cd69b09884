"""Built-in reference networks.

* ``butterfly``: the classical two-message multicast over GF(2); both
  sinks demand both messages and see {x_i, x1+x2}.
* ``combination-nadler``: five messages over GF(2) multicast to the 495
  sinks of the 12-choose-8 combination network.  The 12 source-side links
  carry the systematic Nadler encoder: f1..f5 are the messages themselves
  and f6..f12 are its seven non-linear redundancy functions, so the code
  has no binary linear counterpart.  Sinks are numbered T1..T495 by the
  lexicographic order of the 8-subsets of {1..12}; T495 receives f5..f12
  and ships with a transcript clustering its seven non-linear factors.
* ``n3-sink43``: five 2-bit-word messages, one sink demanding all five
  with six incoming edges built from Z4 addition and bit reversal; no
  linear solution exists over any field.  The transcript stretches x3
  around both six-cycles of the raw factor graph and deletes the two
  edges that close them, leaving an eleven-node chain whose largest local
  domain has three variables.
"""

from __future__ import annotations

from itertools import combinations

from .algebra import Alphabet
from .encoding import parse_map
from .errors import NcspError
from .netfile import format_network
from .network import NetworkCode, SinkSpec
from .transform import Stretch, Cluster, TransformStep, format_transcript

FIXTURE_IDS = ("butterfly", "combination-nadler", "n3-sink43")

# Redundancy functions of the systematic (12,32,5) encoder.  The quadratic
# parts follow a cyclic design on (x3,x4,x5): each of f9..f11 pairs x1 with
# the shift of the two message indices in its linear part.  Any other choice
# for f10's quadratic drops the minimum distance to 4 and breaks unique
# decodability at the 8-of-12 sinks.
NADLER_MAPS = {
    "f6": "x1 + x2 + x3 + (x1 + x5)*(x3 + x4)",
    "f7": "x1 + x2 + x4 + (x1 + x3)*(x4 + x5)",
    "f8": "x1 + x2 + x5 + (x1 + x4)*(x3 + x5)",
    "f9": "x2 + x3 + x4 + x1*x4 + x4*x5 + x5*x1",
    "f10": "x2 + x3 + x5 + x1*x3 + x3*x4 + x4*x1",
    "f11": "x2 + x4 + x5 + x1*x3 + x3*x5 + x5*x1",
    "f12": "x1 + x2 + x3 + x4 + x5 + x3*x4 + x4*x5 + x5*x3",
}


def make_butterfly() -> NetworkCode:
    a = Alphabet.gf(2)
    edges = tuple((e, parse_map(expr, 2, a)) for e, expr in (
        ("V1-T1", "x1"),
        ("V4-T1", "x1 + x2"),
        ("V2-T2", "x2"),
        ("V4-T2", "x1 + x2"),
    ))
    sinks = (
        SinkSpec("T1", frozenset({1, 2}), ("V1-T1", "V4-T1")),
        SinkSpec("T2", frozenset({1, 2}), ("V2-T2", "V4-T2")),
    )
    return NetworkCode(2, a, edges, sinks)


def nadler_sink_subset(index: int) -> tuple[int, ...]:
    """The index-th (1-based) 8-subset of {1..12} in lexicographic order."""
    subsets = list(combinations(range(1, 13), 8))
    if not 1 <= index <= len(subsets):
        raise NcspError(f"sink index {index} outside 1..{len(subsets)}")
    return subsets[index - 1]


def make_combination_nadler() -> NetworkCode:
    a = Alphabet.gf(2)
    edges = []
    for i in range(1, 6):
        edges.append((f"f{i}", parse_map(f"x{i}", 5, a)))
    for name, expr in NADLER_MAPS.items():
        edges.append((name, parse_map(expr, 5, a)))
    sinks = []
    for k, subset in enumerate(combinations(range(1, 13), 8), start=1):
        sinks.append(SinkSpec(f"T{k}", frozenset({1, 2, 3, 4, 5}),
                              tuple(f"f{i}" for i in subset)))
    return NetworkCode(5, a, tuple(edges), tuple(sinks))


def nadler_cluster_transcript(code: NetworkCode, sink_id: str) -> list[TransformStep]:
    """Cluster the sink's non-linear factor nodes into a single factor."""
    sink = code.sink(sink_id)
    nonlinear = [e for e in sink.in_edges if e in NADLER_MAPS]
    if len(nonlinear) < 2:
        return []
    return [Cluster(frozenset(nonlinear))]


def make_n3_sink43() -> NetworkCode:
    a = Alphabet.z4()
    edges = tuple((e, parse_map(expr, 5, a)) for e, expr in (
        ("e31", "x1 + x2"),
        ("e32", "x1 + x3"),
        ("e33", "x2 + x3"),
        ("e34", "t(x3) + x4"),
        ("e35", "t(x3) + x5"),
        ("e36", "x4 + x5"),
    ))
    sinks = (SinkSpec("43", frozenset({1, 2, 3, 4, 5}),
                      ("e31", "e32", "e33", "e34", "e35", "e36")),)
    return NetworkCode(5, a, edges, sinks)


def n3_stretch_transcript() -> list[TransformStep]:
    """Stretch x3 around both six-cycles, deleting the closing edges."""
    return [
        Stretch(3, ("x3", "e32", "x1", "e31", "x2", "e33"), ("x3-e33",)),
        Stretch(3, ("x3", "e34", "x4", "e36", "x5", "e35"), ("x3-e35",)),
    ]


def make_fixture(fixture_id: str) -> tuple[NetworkCode, list[TransformStep]]:
    """Network plus the transformation transcript the fixture ships with."""
    if fixture_id == "butterfly":
        return make_butterfly(), []
    if fixture_id == "combination-nadler":
        code = make_combination_nadler()
        return code, nadler_cluster_transcript(code, "T495")
    if fixture_id == "n3-sink43":
        return make_n3_sink43(), n3_stretch_transcript()
    raise NcspError(f"unknown fixture {fixture_id!r}; choose from {FIXTURE_IDS}")


def fixture_files(fixture_id: str) -> dict[str, str]:
    """File name -> content for a fixture (network file, maybe transcript)."""
    code, transcript = make_fixture(fixture_id)
    out = {f"{fixture_id}.net": format_network(code)}
    if transcript:
        out[f"{fixture_id}.tr"] = format_transcript(transcript)
    return out
