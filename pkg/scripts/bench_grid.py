#!/usr/bin/env python3
"""Benchmark construction and top-k traversal on grid instances.

Grids make good scaling probes: the frontier width is the smaller grid
dimension plus one, so diagram size grows linearly in the longer
dimension while the tree count explodes.

Example:
    python scripts/bench_grid.py --rows 4 --cols 4 6 8 --k 1000 10000
"""

import argparse
import random
import time

from steinerenum import (
    Graph,
    construct_bdd,
    count_trees,
    enumerate_trees,
    order_edges,
    reduce_bdd,
)


def grid(rows: int, cols: int, seed: int) -> Graph:
    rng = random.Random(seed)

    def vid(r, c):
        return r * cols + c + 1

    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1), rng.randint(1, 10)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c), rng.randint(1, 10)))
    corners = [vid(0, 0), vid(0, cols - 1), vid(rows - 1, 0), vid(rows - 1, cols - 1)]
    return Graph(rows * cols, tuple(edges), frozenset(corners))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=4)
    ap.add_argument("--cols", type=int, nargs="+", default=[4, 6, 8])
    ap.add_argument("--k", type=int, nargs="+", default=[1000, 10000])
    ap.add_argument("--weight-seed", type=int, default=7)
    args = ap.parse_args()

    header = (
        f"{'grid':>7} {'edges':>6} {'width':>6} {'nodes':>8} {'reduced':>8} "
        f"{'trees':>10} {'t_build':>9} {'t_reduce':>9}"
    )
    print(header)
    for cols in args.cols:
        g = grid(args.rows, cols, args.weight_seed)
        order = order_edges(g)
        t0 = time.perf_counter()
        bdd = construct_bdd(g, order)
        t1 = time.perf_counter()
        red = reduce_bdd(bdd)
        t2 = time.perf_counter()
        total = count_trees(red)
        print(
            f"{args.rows}x{cols:>5} {len(g.edges):>6} {order.frontier_width:>6} "
            f"{bdd.node_count:>8} {red.node_count:>8} {total:>10} "
            f"{1000 * (t1 - t0):>8.1f}ms {1000 * (t2 - t1):>8.1f}ms"
        )
        for k in args.k:
            t0 = time.perf_counter()
            res = enumerate_trees(red, k=k, cap=k)
            dt = time.perf_counter() - t0
            print(
                f"{'':>7} k={k:<8} {len(res.trees):>7} trees "
                f"peak={res.peak_entries:<8} {1000 * dt:>8.1f}ms"
            )


if __name__ == "__main__":
    main()
