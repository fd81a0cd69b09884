"""Vector non-linear code over 2-bit words: stretching and traceback.

Five messages are 2-bit words combined with Z4 addition and the
bit-reversal t(.); the sink sees six coded edges and demands everything.
The raw factor graph has two six-cycles sharing x3.  Stretching x3 around
both cycles and deleting one closing edge per cycle yields an eleven-node
chain whose largest local domain has three variables, so decoding costs
O(q^3) instead of the brute-force O(q^5).

The demo prints the per-operation cost ledger for both schedules.  With
traceback, the root state at x3 is extracted once and the remaining
variables are read from cached partial states while walking back out:
180 AND / 120 OR at q=4.  The bidirectional schedule instead sends reverse
messages and extracts full states, totalling 224 AND / 144 OR.
"""

from ncsp import (build_factor_graph, check_exactness, decode_bruteforce,
                  decode_sp, find_cycles, transmit)
from ncsp.decode import analyze_fast_decodability
from ncsp.fixtures import make_n3_sink43, n3_stretch_transcript
from ncsp.transform import apply_transcript, format_transcript


def show_ops(result):
    for row in result.operations:
        if row["op"] == "message":
            label = f"message {row['src']} -> {row['dst']} ({row['kind']})"
        elif row["op"] == "pin":
            label = f"pin {row['var']} from {row['src']} -> {row['dst']}"
        else:
            label = f"{row['op']} at {row['node']}"
            if "var" in row:
                label += f" for {row['var']}"
        print(f"  {label:<42} AND {row['and']:>4}  OR {row['or']:>4}")
    print(f"  {'total':<42} AND {result.cost.conjunctions:>4}  "
          f"OR {result.cost.disjunctions:>4}")


def main():
    code = make_n3_sink43()
    x = (0, 0, 1, 0, 0)
    obs = transmit(code, x, "43")
    print(f"source tuple {x} -> observation {obs}")

    g = build_factor_graph(code, "43", obs)
    print("\nraw graph cycles:")
    for c in find_cycles(g):
        print("  " + " - ".join(c))

    steps = n3_stretch_transcript()
    print("\ntransformation transcript:")
    print(format_transcript(steps), end="")

    chain = apply_transcript(g, steps)
    print(f"\nchain exactness: {check_exactness(chain)}")
    print("chain domains:",
          {nid: chain.nodes[nid].domain for nid in chain.node_ids()})

    rep = analyze_fast_decodability(chain, 5, {1, 2, 3, 4, 5})
    print(f"max local domain {rep.max_domain} < omega {rep.omega}: fast "
          f"decodable, {rep.complexity_class}\n")

    with_tb = decode_sp(chain, {1, 2, 3, 4, 5}, root="x3", traceback=True)
    print(f"single-root schedule + traceback -> {with_tb.values}")
    show_ops(with_tb)

    without = decode_sp(chain, {1, 2, 3, 4, 5}, root="x3", traceback=False)
    print(f"\nbidirectional schedule -> {without.values}")
    show_ops(without)

    assert with_tb.values == without.values
    assert with_tb.values == decode_bruteforce(code, "43", obs).values
    saved_and = without.cost.conjunctions - with_tb.cost.conjunctions
    saved_or = without.cost.disjunctions - with_tb.cost.disjunctions
    print(f"\ntraceback saves {saved_and} AND and {saved_or} OR operations.")


if __name__ == "__main__":
    main()
