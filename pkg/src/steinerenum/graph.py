"""Problem instances and graph-level preprocessing.

This module owns the weighted multigraph type, the STP file format
(a SteinLib-compatible subset), deterministic edge ordering for the
layered search, and the lossless degree-2 simplification together with
the map needed to expand trees back onto the original edge set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from collections import deque
import math


class GraphError(ValueError):
    """Invalid graph data (range, weight, connectivity...)."""


class ParseError(GraphError):
    """Malformed STP input.

    Attributes:
        line: 1-based line number of the offending input line, or None
            for file-level problems.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class Graph:
    """Connected, undirected, integer-weighted multigraph with terminals.

    Vertices are 1-based ids in ``1..vertex_count``.  Edges keep their
    input order; that order is the canonical edge indexing used by every
    downstream structure (trees, orderings, simplification maps).
    Parallel edges are legal and stay distinct.  Self-loops are legal on
    input; simplification removes them.

    ``cost_scale`` records the fixed-point factor applied when decimal
    weights were scaled to integers (1 for integer inputs).  All cost
    arithmetic downstream is exact integer arithmetic in scaled units.
    """

    vertex_count: int
    edges: tuple[tuple[int, int, int], ...]
    terminals: frozenset[int]
    cost_scale: int = 1
    adjacency: tuple[tuple[int, ...], ...] = field(
        init=False, compare=False, repr=False
    )

    def __post_init__(self):
        if self.vertex_count < 1:
            raise GraphError("vertex_count must be positive")
        adj: list[list[int]] = [[] for _ in range(self.vertex_count + 1)]
        for idx, (u, v, w) in enumerate(self.edges):
            for z in (u, v):
                if not 1 <= z <= self.vertex_count:
                    raise GraphError(f"edge {idx}: endpoint {z} out of range")
            if w < 0:
                raise GraphError(f"edge {idx}: negative weight {w}")
            # a self-loop appears twice in its endpoint's list on purpose:
            # incidence counts treat loops as two edge-ends
            adj[u].append(idx)
            adj[v].append(idx)
        for t in self.terminals:
            if not 1 <= t <= self.vertex_count:
                raise GraphError(f"terminal {t} out of range")
        if self.cost_scale < 1:
            raise GraphError("cost_scale must be >= 1")
        object.__setattr__(self, "adjacency", tuple(tuple(a) for a in adj))
        self._check_connected()

    def _check_connected(self):
        """Terminals and all edge endpoints must share one component.

        Vertices without any incident edge are allowed (they arise when
        simplification contracts a vertex away or when a subgraph keeps
        the parent's vertex numbering) as long as they are not terminals.
        """
        active = {z for u, v, _ in self.edges for z in (u, v)}
        active |= self.terminals
        if not active:
            return
        start = min(active)
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for idx in self.adjacency[u]:
                eu, ev, _ = self.edges[idx]
                w = ev if eu == u else eu
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        missing = active - seen
        if missing:
            raise GraphError(
                f"graph is disconnected: vertex {min(missing)} unreachable"
            )

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def other_end(self, edge_idx: int, v: int) -> int:
        u, w, _ = self.edges[edge_idx]
        return w if u == v else u

    def tree_cost(self, edge_indices) -> int:
        return sum(self.edges[i][2] for i in edge_indices)


@dataclass(frozen=True)
class SteinerTree:
    """An edge subset forming a minimal Steiner tree, with its exact cost.

    Edge indices refer to whichever graph the tree was produced on;
    expansion maps translate between graphs.
    """

    edges: frozenset[int]
    cost: int

    def sorted_edges(self) -> tuple[int, ...]:
        return tuple(sorted(self.edges))


# ---------------------------------------------------------------------------
# STP parsing / writing


_MAGIC = "33D32945"


def parse_stp(text: str) -> Graph:
    """Parse the SteinLib STP subset into a Graph.

    Recognized structure: an optional magic first line, ``SECTION Graph``
    with ``Nodes``/``Edges`` declarations and ``E u v w`` lines,
    ``SECTION Terminals`` with ``Terminals``/``T v`` lines, arbitrary
    other sections (skipped), and a closing ``EOF``.  Keywords are
    case-insensitive.  Decimal weights are scaled to integers by the
    least common denominator; the factor lands in ``Graph.cost_scale``.
    """
    lines = text.splitlines()
    n_vertices: int | None = None
    n_edges_decl: int | None = None
    n_terms_decl: int | None = None
    raw_edges: list[tuple[int, int, Fraction, int]] = []  # u, v, w, line
    terminals: list[int] = []
    section: str | None = None
    saw_graph = False

    def bad(msg: str, ln: int):
        raise ParseError(msg, ln)

    for ln, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith(_MAGIC):
            continue
        tokens = line.split()
        head = tokens[0].lower()

        if section is None:
            if head == "section":
                if len(tokens) < 2:
                    bad("SECTION needs a name", ln)
                section = tokens[1].lower()
                if section == "graph":
                    saw_graph = True
            elif head == "eof":
                break
            else:
                bad(f"unexpected token {tokens[0]!r} outside any section", ln)
            continue

        if head == "end":
            section = None
            continue

        if section == "graph":
            if head == "nodes":
                try:
                    n_vertices = int(tokens[1])
                except (IndexError, ValueError):
                    bad("Nodes needs an integer count", ln)
            elif head == "edges":
                try:
                    n_edges_decl = int(tokens[1])
                except (IndexError, ValueError):
                    bad("Edges needs an integer count", ln)
            elif head == "e":
                if len(tokens) != 4:
                    bad("E line needs: E <u> <v> <weight>", ln)
                try:
                    u, v = int(tokens[1]), int(tokens[2])
                    w = Fraction(tokens[3])
                except ValueError:
                    bad("E line has a non-numeric field", ln)
                if w < 0:
                    bad(f"negative weight {tokens[3]}", ln)
                raw_edges.append((u, v, w, ln))
            else:
                bad(f"unknown keyword {tokens[0]!r} in Graph section", ln)
        elif section == "terminals":
            if head == "terminals":
                try:
                    n_terms_decl = int(tokens[1])
                except (IndexError, ValueError):
                    bad("Terminals needs an integer count", ln)
            elif head == "t":
                try:
                    terminals.append(int(tokens[1]))
                except (IndexError, ValueError):
                    bad("T line needs a vertex id", ln)
            else:
                # tolerate auxiliary keywords some instances carry
                # (RootP and friends) without interpreting them
                continue
        # other sections: skipped until END

    if not saw_graph:
        raise ParseError("no Graph section found")
    if n_vertices is None:
        raise ParseError("Graph section lacks a Nodes declaration")
    if n_edges_decl is not None and n_edges_decl != len(raw_edges):
        raise ParseError(
            f"Edges declares {n_edges_decl} but {len(raw_edges)} E lines found"
        )
    if n_terms_decl is not None and n_terms_decl != len(terminals):
        raise ParseError(
            f"Terminals declares {n_terms_decl} but {len(terminals)} T lines found"
        )

    scale = 1
    for _, _, w, _ in raw_edges:
        scale = scale * w.denominator // math.gcd(scale, w.denominator)
    edges = []
    for u, v, w, ln in raw_edges:
        if not (1 <= u <= n_vertices and 1 <= v <= n_vertices):
            bad(f"edge endpoint out of range 1..{n_vertices}", ln)
        edges.append((u, v, int(w * scale)))
    for t in terminals:
        if not 1 <= t <= n_vertices:
            raise ParseError(f"terminal {t} out of range 1..{n_vertices}")

    return Graph(
        vertex_count=n_vertices,
        edges=tuple(edges),
        terminals=frozenset(terminals),
        cost_scale=scale,
    )


def write_stp(g: Graph) -> str:
    """Render a Graph back to STP text (weights unscaled exactly)."""
    out = [f"{_MAGIC} STP File, STP Format Version 1.0", "", "SECTION Graph"]
    out.append(f"Nodes {g.vertex_count}")
    out.append(f"Edges {len(g.edges)}")
    for u, v, w in g.edges:
        val = Fraction(w, g.cost_scale)
        out.append(f"E {u} {v} {val.numerator if val.denominator == 1 else val}")
    out.append("END")
    out.append("")
    out.append("SECTION Terminals")
    out.append(f"Terminals {len(g.terminals)}")
    for t in sorted(g.terminals):
        out.append(f"T {t}")
    out.append("END")
    out.append("")
    out.append("EOF")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Edge ordering


@dataclass(frozen=True)
class EdgeOrder:
    """A processing order for the layered search.

    ``permutation[i-1]`` is the original edge index processed at step i.
    ``frontier_sets[i]`` is the frontier after step i: vertices incident
    to both processed and unprocessed edges.  ``frontier_sets[0]`` and
    ``frontier_sets[m]`` are empty for connected inputs.
    """

    permutation: tuple[int, ...]
    frontier_sets: tuple[frozenset[int], ...]
    frontier_width: int


def order_edges(g: Graph, start: int | None = None) -> EdgeOrder:
    """Breadth-first edge order from a start vertex.

    The default start is the terminal with the smallest degree (ties go
    to the smallest id); incident edges are visited smallest-neighbor
    first, then by edge index.  Keeping the traversal breadth-first from
    one terminal keeps the frontier narrow on mesh-like instances.
    """
    if start is None:
        if not g.terminals:
            raise GraphError("default ordering needs at least one terminal")
        start = min(g.terminals, key=lambda t: (g.degree(t), t))
    elif not 1 <= start <= g.vertex_count:
        raise GraphError(f"start vertex {start} out of range")

    seen_edge = [False] * len(g.edges)
    seen_vertex = [False] * (g.vertex_count + 1)
    seen_vertex[start] = True
    queue = deque([start])
    perm: list[int] = []
    while queue:
        u = queue.popleft()
        incident = sorted(
            set(g.adjacency[u]), key=lambda i: (g.other_end(i, u), i)
        )
        for idx in incident:
            if seen_edge[idx]:
                continue
            seen_edge[idx] = True
            perm.append(idx)
            w = g.other_end(idx, u)
            if not seen_vertex[w]:
                seen_vertex[w] = True
                queue.append(w)
    if len(perm) != len(g.edges):
        raise GraphError("edge order did not reach every edge; graph disconnected")

    first_pos: dict[int, int] = {}
    last_pos: dict[int, int] = {}
    for i, idx in enumerate(perm, 1):
        u, v, _ = g.edges[idx]
        for z in (u, v):
            first_pos.setdefault(z, i)
            last_pos[z] = i

    sets: list[frozenset[int]] = [frozenset()]
    live: set[int] = set()
    for i, idx in enumerate(perm, 1):
        u, v, _ = g.edges[idx]
        for z in (u, v):
            if first_pos[z] == i:
                live.add(z)
        for z in (u, v):
            if last_pos[z] == i:
                live.discard(z)
        sets.append(frozenset(live))
    width = max((len(s) for s in sets), default=0)
    return EdgeOrder(tuple(perm), tuple(sets), width)


# ---------------------------------------------------------------------------
# Lossless simplification


@dataclass(frozen=True)
class SimplificationMap:
    """Expansion data for trees found on a simplified graph.

    ``replacements[j]`` is the ordered list of original edge indices that
    simplified edge j stands for (a single index when the edge was left
    alone).  ``removed_loops`` lists original edges that vanished into
    self-loops; no minimal tree can use them.
    """

    replacements: tuple[tuple[int, ...], ...]
    removed_loops: tuple[int, ...]


def simplify(g: Graph) -> tuple[Graph, SimplificationMap]:
    """Contract degree-2 non-terminals and drop self-loops, to fixpoint.

    Contraction merges the two edges at a degree-2 non-terminal into one
    edge whose weight is the sum and whose expansion chain concatenates
    the originals.  Parallel edges produced this way are kept distinct;
    they stand for different original paths.  The transformation is
    lossless: minimal Steiner trees correspond one-to-one through
    ``expand_tree`` with equal cost.
    """
    # records: [u, v, cost, chain oriented u -> v]
    recs: list[list] = [[u, v, w, [i]] for i, (u, v, w) in enumerate(g.edges)]
    alive = [True] * len(recs)
    removed_loops: list[int] = []

    changed = True
    while changed:
        changed = False
        for ri, rec in enumerate(recs):
            if alive[ri] and rec[0] == rec[1]:
                alive[ri] = False
                removed_loops.extend(rec[3])
                changed = True
        incidence: dict[int, list[int]] = {}
        for ri, rec in enumerate(recs):
            if alive[ri]:
                incidence.setdefault(rec[0], []).append(ri)
                incidence.setdefault(rec[1], []).append(ri)
        for v in sorted(incidence):
            if v in g.terminals:
                continue
            inc = incidence[v]
            if len(inc) != 2 or inc[0] == inc[1]:
                continue
            ra, rb = recs[inc[0]], recs[inc[1]]
            # orient ra as (a -> v), rb as (v -> b)
            a_chain = ra[3] if ra[1] == v else list(reversed(ra[3]))
            a_end = ra[0] if ra[1] == v else ra[1]
            b_chain = rb[3] if rb[0] == v else list(reversed(rb[3]))
            b_end = rb[1] if rb[0] == v else rb[0]
            alive[inc[0]] = alive[inc[1]] = False
            recs.append([a_end, b_end, ra[2] + rb[2], a_chain + b_chain])
            alive.append(True)
            changed = True
            break  # incidence is stale now; rescan

    final = [recs[ri] for ri in range(len(recs)) if alive[ri]]
    for rec in final:
        if rec[0] > rec[1]:  # canonical orientation: small endpoint first
            rec[0], rec[1] = rec[1], rec[0]
            rec[3] = list(reversed(rec[3]))
    final.sort(key=lambda rec: min(rec[3]))
    new_edges = tuple((rec[0], rec[1], rec[2]) for rec in final)
    replacements = tuple(tuple(rec[3]) for rec in final)
    simplified = Graph(
        vertex_count=g.vertex_count,
        edges=new_edges,
        terminals=g.terminals,
        cost_scale=g.cost_scale,
    )
    return simplified, SimplificationMap(replacements, tuple(sorted(removed_loops)))


def expand_tree(tree: SteinerTree, smap: SimplificationMap) -> SteinerTree:
    """Translate a tree on the simplified graph back to original edges."""
    out: set[int] = set()
    for idx in tree.edges:
        if not 0 <= idx < len(smap.replacements):
            raise GraphError(f"edge index {idx} not covered by the map")
        out.update(smap.replacements[idx])
    return SteinerTree(frozenset(out), tree.cost)
