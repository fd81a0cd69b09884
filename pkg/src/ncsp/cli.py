"""Command-line frontend.

Subcommands: ``fixture`` (emit built-in networks), ``transmit`` (simulate
one source tuple at a sink), ``decode`` (sp / bf / ge methods) and
``analyze`` (cycles, exactness, fast decodability).

Exit codes: 0 success, 2 usage or parse error, 3 inconsistent
observations, 4 ambiguous decode, 5 method unsupported for the code.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .decode import (analyze_fast_decodability, decode_bruteforce,
                     decode_gaussian, decode_sp)
from .errors import (AmbiguousDecode, InconsistentObservations, NcspError,
                     NotLinearCode, ParseError, ScheduleError, Underdetermined,
                     UnsupportedOperation)
from .factorgraph import build_factor_graph
from .fixtures import FIXTURE_IDS, fixture_files
from .netfile import (format_observation, parse_inline_observation,
                      parse_network, parse_observation)
from .network import transmit
from .transform import apply_transcript, auto_acyclic, check_exactness, parse_transcript

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INCONSISTENT = 3
EXIT_AMBIGUOUS = 4
EXIT_UNSUPPORTED = 5


def _load_network(path: str):
    return parse_network(Path(path).read_text(encoding="utf-8"))


def _load_graph(code, sink, obs, args):
    g = build_factor_graph(code, sink, obs)
    steps = None
    if getattr(args, "transcript", None):
        steps = parse_transcript(Path(args.transcript).read_text(encoding="utf-8"))
        g = apply_transcript(g, steps)
    elif getattr(args, "auto", False):
        g, steps = auto_acyclic(g)
    return g, steps


def _parse_tuple(text: str, omega: int) -> tuple[int, ...]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != omega or not all(p.isdigit() for p in parts):
        raise ParseError(f"expected {omega} comma-separated symbols, got {text!r}")
    return tuple(int(p) for p in parts)


def cmd_fixture(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, content in fixture_files(args.id).items():
        path = out_dir / name
        path.write_text(content, encoding="utf-8")
        print(path)
    return EXIT_OK


def cmd_transmit(args) -> int:
    code = _load_network(args.network)
    sink = code.sink(args.sink)
    x = _parse_tuple(args.tuple, code.omega)
    obs = transmit(code, x, sink)
    text = format_observation(obs, order=sink.in_edges)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(args.out)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_decode(args) -> int:
    code = _load_network(args.network)
    sink = code.sink(args.sink)
    if args.obs is not None:
        obs = parse_inline_observation(args.obs)
    elif args.obs_file is not None:
        obs = parse_observation(Path(args.obs_file).read_text(encoding="utf-8"))
    else:
        raise ParseError("decode needs --obs or --obs-file")

    if args.method == "bf":
        result = decode_bruteforce(code, sink, obs)
    elif args.method == "ge":
        result = decode_gaussian(code, sink, obs)
    else:
        g, steps = _load_graph(code, sink, obs, args)
        result = decode_sp(g, sink.demand, root=args.root,
                           traceback=not args.no_traceback)
        result.sink_id = sink.sink_id
        result.transcript_used = steps

    if args.json:
        out = result.as_dict()
        if args.report == "ops" and result.operations:
            out["operations"] = result.operations
        print(json.dumps(out, sort_keys=True))
    else:
        sys.stdout.write(result.render())
        if args.report == "ops" and result.operations:
            for row in result.operations:
                fields = " ".join(f"{k}={v}" for k, v in row.items())
                print(fields)
    return EXIT_OK


def cmd_analyze(args) -> int:
    code = _load_network(args.network)
    sink = code.sink(args.sink)
    # kernels do not affect the structure; a zero observation suffices here
    obs = {e: 0 for e in sink.in_edges}
    raw = build_factor_graph(code, sink, obs)
    g, _ = _load_graph(code, sink, obs, args)
    report = check_exactness(g)
    fast = analyze_fast_decodability(g, code.omega, sink.demand, sink.sink_id)
    if args.json:
        print(json.dumps({
            "sink": sink.sink_id,
            "raw_cycles": ["-".join(c) for c in check_exactness(raw).cycles],
            "cycles": ["-".join(c) for c in report.cycles],
            "exact": report.exact,
            "acyclic": fast.acyclic,
            "max_domain": fast.max_domain,
            "omega": fast.omega,
            "fast_decodable": fast.fast_decodable,
            "complexity_class": fast.complexity_class,
            "full_demand": fast.full_demand,
        }, sort_keys=True))
    else:
        print(f"sink {sink.sink_id}")
        raw_report = check_exactness(raw)
        if raw_report.cycles:
            print(f"raw graph cycles ({len(raw_report.cycles)}):")
            for c in raw_report.cycles:
                print("  " + " - ".join(c))
        else:
            print("raw graph cycles: none")
        print(f"analyzed graph: {report}")
        sys.stdout.write(fast.render())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncsp",
        description="Decode network codes with sum-product message passing "
                    "over the Boolean semiring.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fixture", help="write a built-in network file")
    p.add_argument("id", choices=FIXTURE_IDS)
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_fixture)

    p = sub.add_parser("transmit", help="simulate one source tuple at a sink")
    p.add_argument("network")
    p.add_argument("sink")
    p.add_argument("tuple", help="comma-separated source symbols, x1 first")
    p.add_argument("--out", help="write the observation file here")
    p.set_defaults(func=cmd_transmit)

    p = sub.add_parser("decode", help="decode an observation at a sink")
    p.add_argument("network")
    p.add_argument("sink")
    p.add_argument("--obs", help="inline observation: edge=value,...")
    p.add_argument("--obs-file", help="observation file path")
    p.add_argument("--method", choices=("sp", "bf", "ge"), default="sp")
    p.add_argument("--no-traceback", action="store_true",
                   help="run the bidirectional schedule instead of traceback")
    p.add_argument("--root", help="root node id for the sp schedules")
    p.add_argument("--transcript", help="transformation transcript to apply")
    p.add_argument("--auto", action="store_true",
                   help="remove cycles automatically by clustering")
    p.add_argument("--report", choices=("ops",), help="also print per-operation costs")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("analyze", help="cycle structure and fast decodability")
    p.add_argument("network")
    p.add_argument("sink")
    p.add_argument("--transcript")
    p.add_argument("--auto", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InconsistentObservations,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (AmbiguousDecode, Underdetermined) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    except (NotLinearCode, UnsupportedOperation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (ParseError, ScheduleError, NcspError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
