"""Command-line entry points.

Exit codes: 0 on success, 2 when x and y turn out to be direct neighbours,
1 for everything else (usage errors included).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Sequence

from . import bench as bench_mod
from .cn_protocol import CnBreakdown, QuerySpec, brute_force_cn
from .errors import HaltedDirectNeighbour, LppError
from .graph import (BaConfig, ba_generate, dump_edge_list, k_sweep_experiment, read_edge_list,
                    utility_experiment)
from .group import PARAMS
from .leakage import LeakageQuery, curve_csv, log10_column, possibilities
from .service import ResponderServer, query
from .wire import connect

log = logging.getLogger("lpp")

EXIT_OK, EXIT_FAIL, EXIT_HALTED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FAIL, f"{self.prog}: error: {message}\n")


def _hostport(text: str) -> tuple[str, int]:
    host, sep, port = text.rpartition(":")
    if not sep or not port.isdigit():
        raise argparse.ArgumentTypeError(f"expected HOST:PORT, got {text!r}")
    return host or "127.0.0.1", int(port)


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _sizes(text: str) -> tuple[int, int, int, int]:
    values = _int_list(text)
    if len(values) != 4 or min(values) < 0:
        raise argparse.ArgumentTypeError("sizes are four non-negative counts: nx1,ny1,nx2,ny2")
    return tuple(values)  # type: ignore[return-value]


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _default_params() -> str:
    return os.environ.get("LPP_PARAMS", "toy")


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_serve(args) -> int:
    graph = read_edge_list(args.graph)
    server = ResponderServer(args.listen, graph, args.params, args.mode)
    host, port = server.server_address[:2]
    log.info("listening on %s:%d (params=%s, mode=%s)", host, port, args.params, args.mode or "any")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


def cmd_query(args) -> int:
    try:
        spec = QuerySpec(args.x, args.y, args.mode, args.params)
    except LppError as exc:
        raise UsageError(str(exc)) from None
    graph = read_edge_list(args.graph)
    with connect(*args.connect) as channel:
        result = query(spec, graph, channel)
    if isinstance(result, CnBreakdown):
        print(json.dumps(result.as_dict()) if args.json else str(result))
    else:
        print(json.dumps({"cn": result}) if args.json else f"cn={result}")
    return EXIT_OK


def cmd_gen(args) -> int:
    g = ba_generate(BaConfig(args.nodes, args.k, args.seed))
    _write(dump_edge_list(g), args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    if args.x == args.y:
        raise UsageError("x and y must differ")
    b = brute_force_cn(read_edge_list(args.graph1), read_edge_list(args.graph2), args.x, args.y)
    print(json.dumps(b.as_dict()) if args.json else str(b))
    return EXIT_OK


def cmd_leakage(args) -> int:
    if args.cardinality is not None:
        q = LeakageQuery(args.universe, args.cardinality)
        _write("cardinality,possibilities,log10\n"
               f"{q.cardinality},{possibilities(q)},{log10_column(q):.6f}\n", args.out)
    else:
        _write(curve_csv(args.universe, args.max_cardinality), args.out)
    return EXIT_OK


def cmd_utility(args) -> int:
    lines = ["seed,avg_graph1,avg_graph2,avg_union"]
    for row in utility_experiment(args.nodes, args.k, args.seeds):
        lines.append(f"{row.seed},{float(row.avg_graph1):.6f},{float(row.avg_graph2):.6f},"
                     f"{float(row.avg_union):.6f}")
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_ksweep(args) -> int:
    lines = ["k,avg_union,avg_graph2"]
    for row in k_sweep_experiment(args.nodes, args.k1, args.k_values, args.seeds):
        lines.append(f"{row.k},{row.avg_union:.6f},{row.avg_graph2:.6f}")
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    lines = [bench_mod.CSV_HEADER]
    for sizes in args.sizes or [bench_mod.REFERENCE_SIZES]:
        record = bench_mod.bench(sizes, args.params, args.reps, args.seed)
        lines.extend(record.csv_rows())
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lpp", description="Private common-neighbour link prediction.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    params = dict(choices=sorted(PARAMS), default=_default_params())

    p = sub.add_parser("serve", help="run a responder")
    p.add_argument("--graph", required=True)
    p.add_argument("--listen", type=_hostport, required=True, metavar="HOST:PORT")
    p.add_argument("--params", **params)
    p.add_argument("--mode", choices=["psi", "he"], help="accept only this mode (default: any)")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("query", help="run a querier against a responder")
    p.add_argument("--graph", required=True)
    p.add_argument("--connect", type=_hostport, required=True, metavar="HOST:PORT")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--mode", choices=["psi", "he"], default="psi")
    p.add_argument("--params", **params)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("gen", help="write a Barabási-Albert edge list")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="plaintext common neighbours over both graphs")
    p.add_argument("--graph1", required=True)
    p.add_argument("--graph2", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("leakage", help="configurations consistent with a leaked cardinality")
    p.add_argument("--universe", type=int, required=True)
    p.add_argument("--cardinality", type=int)
    p.add_argument("--max-cardinality", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_leakage)

    p = sub.add_parser("utility", aliases=["experiment-utility"],
                       help="avg common neighbours per graph and in the union")
    p.add_argument("--nodes", type=int, default=4039)
    p.add_argument("--k", type=int, default=22)
    p.add_argument("--seeds", type=_int_list, default=[0])
    p.add_argument("--out")
    p.set_defaults(func=cmd_utility)

    p = sub.add_parser("ksweep", aliases=["experiment-ksweep"],
                       help="vary graph 2's k and compare with the union")
    p.add_argument("--nodes", type=int, default=200)
    p.add_argument("--k1", type=int, default=22)
    p.add_argument("--k-values", type=_int_list, default=[2, 6, 10, 14, 18, 22])
    p.add_argument("--seeds", type=_int_list, default=list(range(10)))
    p.add_argument("--out")
    p.set_defaults(func=cmd_ksweep)

    p = sub.add_parser("bench", help="time the psi-mode protocol over loopback")
    p.add_argument("--sizes", type=_sizes, action="append", metavar="NX1,NY1,NX2,NY2",
                   help="repeatable; default is the reference sizes 120,48,114,47")
    p.add_argument("--params", **params)
    p.add_argument("--reps", type=_positive, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"lpp: error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except HaltedDirectNeighbour as exc:
        print(f"direct neighbours: {exc}", file=sys.stderr)
        return EXIT_HALTED
    except (LppError, OSError, ValueError) as exc:
        print(f"lpp: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
