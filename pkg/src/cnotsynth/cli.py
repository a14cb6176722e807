"""Command-line interface: synth / verify / bench / oracle / graph.

Exit codes: 0 success, 1 verification failure, 2 usage or input errors.
Every error is a single machine-parsable line on stderr.  All randomness
flows from --seed; when omitted, a seed is drawn from entropy and printed
so the run can be replayed.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
import time

from . import bench as bench_mod
from . import circuit as circ
from .gf2 import parse_matrix_text
from .gridsynth import GridLayout, synthesize_grid_depth
from .oracle import key_to_matrix, optimal_size_table
from .rowcol import synthesize_rowcol
from .sbe import SbeParams, choose_params, is_degenerate, synthesize_sbe
from .topology import (
    grid_graph,
    load_graph,
    preset_graph,
    validate_circuit,
    write_edge_list,
)


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _parse_int_list(text: str) -> list[int]:
    """Accept "4..11" ranges or comma-separated values."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",") if x]


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return value
    seed = secrets.randbits(32)
    print(f"seed {seed}")
    return seed


def _cmd_synth(args) -> int:
    m = parse_matrix_text(_read(args.matrix))
    t0 = time.perf_counter()
    stats = {"schema": 1, "algo": args.algo, "n": m.n}
    if args.algo == "grid-depth":
        if not args.grid:
            raise ValueError("grid-depth needs --grid m1xm2")
        dims = tuple(int(x) for x in args.grid.lower().split("x"))
        layout = GridLayout(dims, m.n)
        out = synthesize_grid_depth(m, layout)
        graph = grid_graph(*dims)
        stats["grid"] = list(dims)
        stats["ancillas"] = layout.ancillas
    else:
        if not args.graph:
            raise ValueError(f"{args.algo} needs --graph")
        graph = load_graph(args.graph)
        if args.algo == "rowcol":
            out = synthesize_rowcol(m, graph, strategy=args.strategy)
        elif args.algo == "sbe":
            params = None
            if args.k is not None:
                base = choose_params(graph)
                params = SbeParams(k=args.k, s=base.s)
            out = synthesize_sbe(m, graph, params=params)
            if is_degenerate(graph, params or choose_params(graph)):
                stats["algo"] = "sbe(rowcol-fallback)"
        else:
            raise ValueError(f"unknown algorithm {args.algo!r}")
    if not validate_circuit(graph, out):
        raise AssertionError("synthesized circuit violates the graph")
    stats["size"] = out.size
    stats["depth"] = circ.depth(out)
    stats["millis"] = round((time.perf_counter() - t0) * 1000.0, 3)
    _write(args.out, circ.format_circuit_text(out))
    if args.stats:
        _write(args.stats, json.dumps(stats, sort_keys=True) + "\n")
    return 0


def _cmd_verify(args) -> int:
    c = circ.parse_circuit_text(_read(args.circuit))
    m = parse_matrix_text(_read(args.matrix))
    data_wires = None
    if args.data_wires:
        data_wires = [int(x) for x in args.data_wires.split(",")]
    equivalent = circ.implements_matrix(c, m, data_wires)
    print("EQUIVALENT" if equivalent else "NOT-EQUIVALENT")
    ok = equivalent
    if args.graph:
        valid = validate_circuit(load_graph(args.graph), c)
        print("VALID" if valid else "INVALID")
        ok = ok and valid
    return 0 if ok else 1


def _cmd_graph(args) -> int:
    g = preset_graph(args.preset)
    _write(args.out, write_edge_list(g))
    return 0


def _cmd_bench(args) -> int:
    seed = _resolve_seed(args.seed)
    if args.mode == "size":
        graphs = [(name, load_graph(f"preset:{name}") if ":" not in name else load_graph(name)) for name in args.graphs.split(",")]
        records = bench_mod.run_size_experiment(
            graphs,
            _parse_int_list(args.sizes),
            args.samples,
            args.algos.split(","),
            seed,
        )
        header = [f"size experiment: samples={args.samples} seed={seed}"]
    else:
        sides = _parse_int_list(args.sides)
        records = bench_mod.run_depth_experiment(
            sides, args.samples, args.algos.split(","), seed
        )
        header = [f"depth experiment: samples={args.samples} seed={seed}"]
        for w in sides:
            layout = bench_mod.depth_layout_for(w * w)
            header.append(
                f"grid-depth layout for {w * w} inputs: "
                f"{layout.dims[0]}x{layout.dims[1]} "
                f"({layout.ancillas} ancillas)"
            )
    _write(args.csv, bench_mod.to_csv(records, header))
    return 0


def _cmd_oracle(args) -> int:
    g = load_graph(args.graph)
    table = optimal_size_table(g, args.n)
    lines = ["matrix_id,distance"]
    for key in sorted(table):
        lines.append(f"{key},{table[key]}")
    _write(args.csv, "\n".join(lines) + "\n")
    if args.csv and args.csv != "-":
        worst_key = max(table, key=lambda k: (table[k], k))
        print(
            f"{len(table)} matrices, max distance {table[worst_key]} "
            f"(e.g. {key_to_matrix(worst_key, args.n).to_lists()})"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cnotsynth",
        description="CNOT circuit synthesis under connectivity constraints",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize a circuit for a matrix")
    p.add_argument("--algo", required=True, choices=["rowcol", "sbe", "grid-depth"])
    p.add_argument("--graph", help="preset:<name> or an edge-list file")
    p.add_argument("--grid", help="m1xm2 layout for grid-depth")
    p.add_argument("--matrix", required=True)
    p.add_argument("--strategy", default="mindeg", choices=["mindeg", "bfsleaf"])
    p.add_argument("--k", type=int, help="SBE degree parameter override")
    p.add_argument("--out", default="-")
    p.add_argument("--stats", help="write run statistics as JSON")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("verify", help="check a circuit against a matrix")
    p.add_argument("--circuit", required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--graph")
    p.add_argument("--data-wires", help="comma list of wires carrying the data")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("graph", help="dump a preset graph as an edge list")
    p.add_argument("--preset", required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("bench", help="run the benchmark experiments")
    bench_sub = p.add_subparsers(dest="mode", required=True)
    ps = bench_sub.add_parser("size")
    ps.add_argument("--graphs", default="ibmq20,t20")
    ps.add_argument("--sizes", default="20,50,100,200,300,400,500,600,700,800")
    ps.add_argument("--samples", type=int, default=200)
    ps.add_argument("--algos", default="rowcol")
    ps.add_argument("--seed", type=int)
    ps.add_argument("--csv", default="-")
    ps.set_defaults(func=_cmd_bench)
    pd = bench_sub.add_parser("depth")
    pd.add_argument("--sides", default="4..11")
    pd.add_argument("--samples", type=int, default=200)
    pd.add_argument("--algos", default="grid-depth,rowcol")
    pd.add_argument("--seed", type=int)
    pd.add_argument("--csv", default="-")
    pd.set_defaults(func=_cmd_bench)

    p = sub.add_parser("oracle", help="exhaustive minimum-size table (n <= 4)")
    p.add_argument("--graph", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--csv", default="-")
    p.set_defaults(func=_cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AssertionError as exc:
        print(f"error: verification failed: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
