"""Command-line front end.

Usage::

    steinerenum stats     --input g.stp
    steinerenum simplify  --input g.stp [--output s.stp] [--map m.json]
    steinerenum seeds     --input g.stp [--seeds N] [--perturb X]
                          [--rng-seed S] [--seed-root R]
    steinerenum build     --input g.stp [--theta T | --theta-ratio R] ...
    steinerenum enumerate --input g.stp [--theta T | --theta-ratio R]
                          [--k K] [--cap C] [--output out.jsonl]
                          [--report r.json] [--dump-bdd b.txt]
                          [--no-seeds] [--no-simplify] [--exact] ...
    steinerenum count     --input g.stp [--no-simplify]
    steinerenum oracle    --input g.stp [--theta T]

Tree output is JSON lines, one tree per line, ascending cost::

    {"cost": 7, "edges": [[1, 2], [2, 3]]}

Costs are integers in the graph's scaled units (the scale is 1 unless
the input had decimal weights).  Summaries go to stderr; data to stdout
or --output.  Exit codes: 0 ok, 2 usage, 3 bad input, 4 no tree within
theta, 5 node cap exceeded, 6 output truncated at the sink cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .frontier import NodeCapExceeded, construct_bdd
from .graph import Graph, GraphError, SteinerTree, order_edges, parse_stp, simplify, write_stp
from .oracle import OracleError, brute_force_minimal_steiner
from .pipeline import RunConfig, RunResult, run
from .seeds import SeedConfig, select_seeds
from .traverse import count_trees, reduce_bdd

EXIT_OK = 0
EXIT_BAD_INPUT = 3
EXIT_INFEASIBLE = 4
EXIT_NODE_CAP = 5
EXIT_TRUNCATED = 6


def _load_graph(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_stp(fh.read())


def _tree_line(tree: SteinerTree, g: Graph) -> str:
    pairs = [[g.edges[i][0], g.edges[i][1]] for i in tree.sorted_edges()]
    return json.dumps({"cost": tree.cost, "edges": pairs}, separators=(", ", ": "))


def _emit_trees(trees, g: Graph, output: str | None):
    text = "".join(_tree_line(t, g) + "\n" for t in trees)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_report(path: str, g: Graph, res: RunResult):
    report = {
        "graph": {
            "v": res.graph_vertices,
            "e": res.graph_edges,
            "t": res.graph_terminals,
        },
        "preprocessed": {"v": res.pre_vertices, "e": res.pre_edges},
        "bdd": {"nodes": res.bdd_nodes, "nodes_reduced": res.bdd_nodes_reduced},
        "timing_ms": {
            "construct": res.timing_ms["construct"],
            "reduce": res.timing_ms["reduce"],
            "traverse": res.timing_ms["traverse"],
        },
        "trees": {
            "count": len(res.trees),
            "min_cost": res.trees[0].cost if res.trees else None,
            "avg_cost": (
                sum(t.cost for t in res.trees) / len(res.trees)
                if res.trees
                else None
            ),
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")


def _theta_args(p: argparse.ArgumentParser):
    group = p.add_mutually_exclusive_group()
    group.add_argument(
        "--theta",
        type=str,
        default=None,
        help="absolute cost bound (number, or 'inf' for unbounded)",
    )
    group.add_argument(
        "--theta-ratio",
        type=str,
        default=None,
        help="bound as a multiple of the cheapest seed tree (default 1.2)",
    )


def _seed_args(p: argparse.ArgumentParser):
    p.add_argument("--seeds", type=int, default=3, help="number of seed trees")
    p.add_argument(
        "--perturb",
        type=float,
        default=0.05,
        help="fraction of edges deleted per perturbed seed run",
    )
    p.add_argument("--rng-seed", type=int, default=0, help="perturbation RNG seed")
    p.add_argument(
        "--seed-root",
        type=str,
        default="min-degree",
        help="root terminal for seed trees: 'min-degree' or a vertex id",
    )


def _parse_theta(args) -> tuple[Fraction | float | None, Fraction | None]:
    theta = None
    ratio = None
    if args.theta is not None:
        theta = float("inf") if args.theta.lower() == "inf" else Fraction(args.theta)
    if getattr(args, "theta_ratio", None) is not None:
        ratio = Fraction(args.theta_ratio)
    return theta, ratio


def _parse_root(args) -> int | None:
    if args.seed_root == "min-degree":
        return None
    try:
        return int(args.seed_root)
    except ValueError:
        raise GraphError(f"--seed-root expects 'min-degree' or a vertex id, "
                         f"got {args.seed_root!r}")


def _build_config(args) -> RunConfig:
    theta, ratio = _parse_theta(args)
    exact = getattr(args, "exact", False)
    seed_trees = None
    if getattr(args, "seeds_from_file", None):
        seed_trees = _load_seed_file(args.seeds_from_file, _load_graph(args.input))
    return RunConfig(
        k=getattr(args, "k", 1000),
        theta=theta,
        theta_ratio=ratio,
        seeds=SeedConfig(
            num_seeds=args.seeds,
            perturb_fraction=args.perturb,
            rng_seed=args.rng_seed,
        ),
        seed_root=_parse_root(args),
        use_seeds=not (exact or getattr(args, "no_seeds", False)) and seed_trees is None,
        use_simplify=not (exact or getattr(args, "no_simplify", False)),
        cap=getattr(args, "cap", None),
        node_cap=args.node_cap,
        seed_trees=seed_trees,
    )


def _load_seed_file(path: str, g: Graph) -> tuple[frozenset[int], ...]:
    """Read externally supplied trees: JSONL of {"edges": [[u, v], ...]}.

    Endpoint pairs resolve to the smallest matching edge index; for
    parallel edges supply the intended index via {"edge_indices": [...]}.
    """
    lookup: dict[tuple[int, int], int] = {}
    for idx, (u, v, _) in enumerate(g.edges):
        key = (min(u, v), max(u, v))
        lookup.setdefault(key, idx)
    trees = []
    with open(path, "r", encoding="utf-8") as fh:
        for ln, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            if "edge_indices" in rec:
                idxs = [int(i) for i in rec["edge_indices"]]
                for i in idxs:
                    if not 0 <= i < len(g.edges):
                        raise GraphError(f"{path}:{ln}: edge index {i} out of range")
            else:
                idxs = []
                for u, v in rec["edges"]:
                    key = (min(u, v), max(u, v))
                    if key not in lookup:
                        raise GraphError(f"{path}:{ln}: no edge between {u} and {v}")
                    idxs.append(lookup[key])
            trees.append(frozenset(idxs))
    if not trees:
        raise GraphError(f"{path}: no trees found")
    return tuple(trees)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_stats(args) -> int:
    g = _load_graph(args.input)
    order = order_edges(g) if g.terminals else None
    info = {
        "vertices": g.vertex_count,
        "edges": len(g.edges),
        "terminals": len(g.terminals),
        "cost_scale": g.cost_scale,
        "min_weight": min((w for _, _, w in g.edges), default=None),
        "max_weight": max((w for _, _, w in g.edges), default=None),
        "frontier_width": order.frontier_width if order else None,
    }
    json.dump(info, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def _cmd_simplify(args) -> int:
    g = _load_graph(args.input)
    simplified, smap = simplify(g)
    text = write_stp(simplified)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.map:
        with open(args.map, "w", encoding="utf-8") as fh:
            json.dump(
                {
                    "replacements": [list(c) for c in smap.replacements],
                    "removed_loops": list(smap.removed_loops),
                },
                fh,
                indent=2,
            )
            fh.write("\n")
    print(
        f"simplify: {len(g.edges)} -> {len(simplified.edges)} edges",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_seeds(args) -> int:
    g = _load_graph(args.input)
    cfg = SeedConfig(
        num_seeds=args.seeds,
        perturb_fraction=args.perturb,
        rng_seed=args.rng_seed,
    )
    selection = select_seeds(g, cfg, _parse_root(args))
    _emit_trees(selection.seed_trees, g, args.output)
    print(
        f"seeds: {len(selection.seed_trees)} distinct tree(s) of "
        f"{selection.requested} requested; union has "
        f"{len(selection.edge_map)} edges",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_build(args) -> int:
    g = _load_graph(args.input)
    cfg = _build_config(args)
    res = run(g, cfg, want_dump=True)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(res.bdd_dump)
    else:
        sys.stdout.write(res.bdd_dump)
    print(
        f"build: {res.bdd_nodes} nodes constructed, "
        f"{res.bdd_nodes_reduced} after reduction",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_enumerate(args) -> int:
    g = _load_graph(args.input)
    cfg = _build_config(args)
    res = run(g, cfg, want_dump=args.dump_bdd is not None)
    _emit_trees(res.trees, g, args.output)
    if args.dump_bdd:
        with open(args.dump_bdd, "w", encoding="utf-8") as fh:
            fh.write(res.bdd_dump)
    if args.report:
        _write_report(args.report, g, res)
    theta_text = "unbounded" if res.theta is None else str(res.theta)
    print(
        f"enumerate: {len(res.trees)} tree(s) within theta={theta_text}; "
        f"bdd nodes {res.bdd_nodes} -> {res.bdd_nodes_reduced}; "
        f"peak entries {res.peak_entries}",
        file=sys.stderr,
    )
    if res.truncated:
        print("enumerate: sink cap reached, output truncated", file=sys.stderr)
        return EXIT_TRUNCATED
    if not res.trees:
        print("enumerate: no tree within the cost bound", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def _cmd_count(args) -> int:
    g = _load_graph(args.input)
    if len(g.terminals) < 2:
        raise GraphError("count needs at least two terminals")
    work = g
    if not args.no_simplify:
        work, _ = simplify(work)
    order = order_edges(work)
    bdd = construct_bdd(work, order, None, node_cap=args.node_cap)
    print(count_trees(reduce_bdd(bdd)))
    return EXIT_OK


def _cmd_oracle(args) -> int:
    g = _load_graph(args.input)
    theta, _ = _parse_theta(args)
    bound = None
    if theta is not None and theta != float("inf"):
        bound = int(theta * g.cost_scale)
    trees = brute_force_minimal_steiner(g, bound)
    _emit_trees(trees, g, args.output)
    print(f"oracle: {len(trees)} tree(s)", file=sys.stderr)
    return EXIT_OK


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steinerenum",
        description="Enumerate minimal Steiner trees within a cost bound.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", required=True, help="STP instance file")
        p.set_defaults(fn=fn)
        return p

    add("stats", _cmd_stats, "print instance statistics as JSON")

    p = add("simplify", _cmd_simplify, "write the simplified instance")
    p.add_argument("--output", default=None)
    p.add_argument("--map", default=None, help="write the expansion map as JSON")

    p = add("seeds", _cmd_seeds, "write seed trees as JSON lines")
    _seed_args(p)
    p.add_argument("--output", default=None)

    for name, fn, help_text in (
        ("build", _cmd_build, "construct, reduce and dump the diagram"),
        ("enumerate", _cmd_enumerate, "enumerate trees as JSON lines"),
    ):
        p = add(name, fn, help_text)
        _theta_args(p)
        _seed_args(p)
        p.add_argument("--no-seeds", action="store_true", help="search the full graph")
        p.add_argument("--no-simplify", action="store_true")
        p.add_argument(
            "--exact",
            action="store_true",
            help="disable both preprocessing stages",
        )
        p.add_argument("--node-cap", type=int, default=100_000_000)
        p.add_argument("--seeds-from-file", default=None, help="JSONL seed trees")
        p.add_argument("--output", default=None)
        if name == "enumerate":
            p.add_argument("--k", type=int, default=1000)
            p.add_argument("--cap", type=int, default=None)
            p.add_argument("--report", default=None, help="write a JSON run report")
            p.add_argument("--dump-bdd", default=None, help="also dump the diagram")

    p = add("count", _cmd_count, "print the exact tree count (unbounded)")
    p.add_argument("--no-simplify", action="store_true")
    p.add_argument("--node-cap", type=int, default=100_000_000)

    p = add("oracle", _cmd_oracle, "brute-force reference enumeration")
    p.add_argument("--theta", type=str, default=None)
    p.add_argument("--output", default=None)

    return parser


def main(argv=None) -> int:
    args = _make_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (GraphError, OracleError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except NodeCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NODE_CAP
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
