"""Shared instance generators.

Everything here is deterministic given the caller's Random instance, so
test failures reproduce bit for bit.  Instances are deliberately tiny:
the brute-force oracle sweeps 2^|E| edge subsets.
"""

import random

import pytest

from steinerenum import Graph

_summary_lines: list[str] = []


def record_line(line: str):
    """Collect a per-criterion verdict for the terminal summary."""
    _summary_lines.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _summary_lines:
        terminalreporter.section("acceptance criteria")
        for line in _summary_lines:
            terminalreporter.write_line(line)


def random_connected_graph(
    rng: random.Random,
    max_vertices: int = 8,
    max_edges: int = 14,
    terminal_sizes=(2, 3, 4),
    weight_lo: int = 1,
    weight_hi: int = 10,
) -> Graph:
    """Random simple connected graph: spanning tree plus extra edges."""
    n = rng.randint(2, max_vertices)
    order = list(range(1, n + 1))
    rng.shuffle(order)
    edges = []
    present = set()
    for i in range(1, n):
        a, b = order[rng.randrange(i)], order[i]
        key = (min(a, b), max(a, b))
        present.add(key)
        edges.append((key[0], key[1], rng.randint(weight_lo, weight_hi)))
    room = min(max_edges, n * (n - 1) // 2) - len(edges)
    for _ in range(rng.randint(0, max(room, 0))):
        a, b = rng.sample(range(1, n + 1), 2)
        key = (min(a, b), max(a, b))
        if key in present:
            continue
        present.add(key)
        edges.append((key[0], key[1], rng.randint(weight_lo, weight_hi)))
    size = rng.choice([s for s in terminal_sizes if s <= n])
    terminals = frozenset(rng.sample(range(1, n + 1), size))
    return Graph(n, tuple(edges), terminals)


def subdivide_edge(g: Graph, edge_idx: int, rng: random.Random) -> Graph:
    """Split one edge with a fresh vertex, forcing a degree-2 non-terminal."""
    u, v, w = g.edges[edge_idx]
    nv = g.vertex_count + 1
    edges = list(g.edges)
    edges[edge_idx] = (u, nv, w)
    edges.append((nv, v, rng.randint(1, 10)))
    return Graph(nv, tuple(edges), g.terminals)


def grid_graph(rows: int, cols: int, terminals, weight_seed: int = 7) -> Graph:
    """Grid with pseudo-random weights; vertex (r, c) is r*cols + c + 1."""
    rng = random.Random(weight_seed)

    def vid(r, c):
        return r * cols + c + 1

    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1), rng.randint(1, 10)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c), rng.randint(1, 10)))
    return Graph(rows * cols, tuple(edges), frozenset(terminals))


@pytest.fixture
def triangle() -> Graph:
    """Terminals 1 and 3; best tree {e0, e1} cost 2, runner-up {e2} cost 3."""
    return Graph(3, ((1, 2, 1), (2, 3, 1), (1, 3, 3)), frozenset({1, 3}))


@pytest.fixture
def triangle_all_terminals() -> Graph:
    return Graph(3, ((1, 2, 1), (2, 3, 1), (1, 3, 3)), frozenset({1, 2, 3}))


@pytest.fixture
def square() -> Graph:
    """4-cycle, terminals at opposite corners; two path trees."""
    return Graph(
        4, ((1, 2, 1), (2, 3, 2), (3, 4, 1), (1, 4, 3)), frozenset({1, 3})
    )


TRIANGLE_STP = """\
33D32945 STP File, STP Format Version 1.0

SECTION Graph
Nodes 3
Edges 3
E 1 2 1
E 2 3 1
E 1 3 3
END

SECTION Terminals
Terminals 2
T 1
T 3
END

EOF
"""
