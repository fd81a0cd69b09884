"""Built-in fixtures: shape, feasibility, emitted files."""

import pytest

from ncsp.errors import NcspError
from ncsp.fixtures import (FIXTURE_IDS, fixture_files, make_fixture,
                           nadler_sink_subset)
from ncsp.netfile import parse_network
from ncsp.network import transmit, verify_code
from ncsp.transform import apply_transcript, check_exactness, parse_transcript
from ncsp.factorgraph import build_factor_graph


def test_fixture_ids_complete():
    assert set(FIXTURE_IDS) == {"butterfly", "combination-nadler", "n3-sink43"}
    with pytest.raises(NcspError):
        make_fixture("nope")


def test_butterfly_fixture_shape():
    code, transcript = make_fixture("butterfly")
    assert code.omega == 2 and len(code.sinks) == 2 and transcript == []
    for s in code.sinks:
        assert s.demand == frozenset({1, 2})
        assert verify_code(code, s.sink_id).feasible


def test_nadler_sink_enumeration_is_lexicographic():
    assert nadler_sink_subset(1) == (1, 2, 3, 4, 5, 6, 7, 8)
    assert nadler_sink_subset(495) == (5, 6, 7, 8, 9, 10, 11, 12)
    code, _ = make_fixture("combination-nadler")
    assert len(code.sinks) == 495
    assert code.sink("T495").in_edges == tuple(f"f{i}" for i in range(5, 13))
    # every sink sees a distinct 8-subset
    assert len({s.in_edges for s in code.sinks}) == 495


def test_nadler_code_has_min_distance_five():
    # distance of the 32-codeword book over the 12 edge maps; 5 is what
    # makes every 8-of-12 sink uniquely decodable
    from itertools import product
    code, _ = make_fixture("combination-nadler")
    words = []
    for x in product(range(2), repeat=5):
        from ncsp.encoding import eval_map
        words.append(tuple(eval_map(m, x, code.alphabet) for _, m in code.edges))
    dmin = 12
    for i in range(32):
        for j in range(i + 1, 32):
            dmin = min(dmin, sum(a != b for a, b in zip(words[i], words[j])))
    assert dmin == 5


def test_n3_fixture_files_replay():
    files = fixture_files("n3-sink43")
    assert set(files) == {"n3-sink43.net", "n3-sink43.tr"}
    code = parse_network(files["n3-sink43.net"])
    steps = parse_transcript(files["n3-sink43.tr"])
    obs = transmit(code, (0, 1, 2, 3, 0), "43")
    g = apply_transcript(build_factor_graph(code, "43", obs), steps)
    assert check_exactness(g).exact
    assert max(len(n.domain) for n in g.nodes.values()) == 3


def test_nadler_fixture_files_replay():
    files = fixture_files("combination-nadler")
    code = parse_network(files["combination-nadler.net"])
    steps = parse_transcript(files["combination-nadler.tr"])
    obs = transmit(code, (1, 1, 1, 1, 1), "T495")
    g = apply_transcript(build_factor_graph(code, "T495", obs), steps)
    assert check_exactness(g).exact


def test_butterfly_fixture_file_parses():
    files = fixture_files("butterfly")
    assert list(files) == ["butterfly.net"]
    code = parse_network(files["butterfly.net"])
    assert verify_code(code, "T1").feasible
    assert verify_code(code, "T2").feasible
