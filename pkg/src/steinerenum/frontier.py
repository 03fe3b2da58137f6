"""Layered decision-diagram construction by frontier-based search.

One edge is decided per level, in the order fixed by an EdgeOrder.  Each
node keeps just enough information about the frontier (the vertices that
still touch undecided edges) to classify every extension: component
membership of chosen edges, terminal counts and escape counts per
component, and per-vertex degrees.  Branches that can no longer complete
a minimal Steiner tree of cost <= theta go to the 0-sink; branches whose
chosen edges form exactly such a tree go to the 1-sink.  Nodes whose
futures are indistinguishable are merged, keeping the cheaper cost, so a
node's cost is a lower bound over its incoming paths; the exact filter
happens during traversal.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph, GraphError, EdgeOrder

ZERO = 0  # sink ids double as arc-target encoding and dump tokens
ONE = 1

DEFAULT_NODE_CAP = 100_000_000


class ConstructionError(RuntimeError):
    pass


class NodeCapExceeded(ConstructionError):
    """Raised when the node budget is exhausted; carries layer statistics."""

    def __init__(self, cap: int, level: int, layer_sizes: list[int]):
        super().__init__(
            f"node cap {cap} exceeded at level {level}; "
            f"layer sizes so far: {layer_sizes}"
        )
        self.cap = cap
        self.level = level
        self.layer_sizes = layer_sizes


class NodeInfo:
    """Mutable frontier summary attached to one node during construction.

    comp maps each frontier vertex to its component id (the smallest
    vertex id the component has absorbed).  deg counts chosen edges at
    each frontier vertex.  tcnt and upe are per-component: terminals
    connected so far, and undecided edge-ends touching the component's
    frontier vertices (an undecided edge inside one component counts
    twice, which keeps the merge arithmetic exact).
    """

    __slots__ = ("comp", "deg", "tcnt", "upe", "cost")

    def __init__(self, comp=None, deg=None, tcnt=None, upe=None, cost=0):
        self.comp: dict[int, int] = comp if comp is not None else {}
        self.deg: dict[int, int] = deg if deg is not None else {}
        self.tcnt: dict[int, int] = tcnt if tcnt is not None else {}
        self.upe: dict[int, int] = upe if upe is not None else {}
        self.cost: int = cost

    def copy(self) -> "NodeInfo":
        return NodeInfo(
            dict(self.comp), dict(self.deg), dict(self.tcnt), dict(self.upe), self.cost
        )


@dataclass(frozen=True)
class Bdd:
    """Layered diagram over an edge order.

    Node ids 0 and 1 are the sinks; real nodes start at 2.  ``lo``/``hi``
    give each node's arc targets, ``levels[i]`` lists the node ids whose
    decision variable is the i-th ordered edge (1-based; ``levels[0]`` is
    empty).  ``edge_order``/``edge_costs`` carry, per level, the original
    edge index and its cost, so traversal needs no extra context.
    ``node_cost`` holds the construction-time minimum path cost per node.
    ``root`` is 0 when no assignment survived construction or reduction.
    """

    level_count: int
    edge_order: tuple[int, ...]
    edge_costs: tuple[int, ...]
    root: int
    lo: tuple[int, ...]
    hi: tuple[int, ...]
    level_of: tuple[int, ...]
    levels: tuple[tuple[int, ...], ...]
    node_cost: tuple[int, ...]

    @property
    def node_count(self) -> int:
        return len(self.lo) - 2

    def layer_sizes(self) -> list[int]:
        return [len(lvl) for lvl in self.levels[1:]]

    def dump(self) -> str:
        """Text form: header then one ``id level lo hi`` line per node."""
        out = [f"bdd {self.node_count} {self.level_count}"]
        for lvl in self.levels[1:]:
            for nid in lvl:
                out.append(
                    f"{nid} {self.level_of[nid]} {self.lo[nid]} {self.hi[nid]}"
                )
        return "\n".join(out) + "\n"


class FrontierSearch:
    """Step logic shared by construction and the unit tests.

    Bound to one (graph, order, theta) triple; the per-level static data
    (entry/exit steps, incident undecided counts) is precomputed here.
    """

    def __init__(self, g: Graph, order: EdgeOrder, theta: int | None = None):
        if len(g.terminals) < 2:
            raise GraphError("enumeration needs at least two terminals")
        if theta is not None and theta < 0:
            raise GraphError("theta must be non-negative")
        if len(order.permutation) != len(g.edges):
            raise GraphError("edge order does not match the graph")
        self.graph = g
        self.order = order
        self.theta = theta
        self.terminals = g.terminals
        self.num_terminals = len(g.terminals)
        self.first_pos: dict[int, int] = {}
        self.last_pos: dict[int, int] = {}
        for i, idx in enumerate(order.permutation, 1):
            u, v, _ = g.edges[idx]
            for z in (u, v):
                self.first_pos.setdefault(z, i)
                self.last_pos[z] = i

    def step_edge(self, i: int) -> tuple[int, int, int]:
        return self.graph.edges[self.order.permutation[i - 1]]

    def materialize(self, info: NodeInfo, i: int) -> NodeInfo:
        """Copy ``info`` and add fresh entries for endpoints entering at step i.

        A vertex enters the frontier exactly when its first incident edge
        comes up, as a singleton component: its own id, degree 0, one
        terminal if it is one, and every incident edge still undecided.
        Vertices that enter and leave in the same step get an entry too,
        so the sink tests can treat all endpoints uniformly.
        """
        u, v, _ = self.step_edge(i)
        out = info.copy()
        for z in (u, v):
            if z not in out.comp:
                out.comp[z] = z
                out.deg[z] = 0
                out.tcnt[z] = 1 if z in self.terminals else 0
                out.upe[z] = len(self.graph.adjacency[z])
        return out

    # -- sink classification ------------------------------------------------

    def is_one_sink(self, info: NodeInfo, i: int, x: int) -> bool:
        """True iff taking edge i completes a minimal Steiner tree right now.

        Only an inclusion can complete a tree.  The chosen edges plus
        edge i must connect all terminals in one acyclic component, leave
        no non-terminal with degree 1, and leave no other component
        holding edges; earlier exits were already screened, so checking
        the live frontier suffices.  ``info`` must be materialized.
        """
        if x != 1:
            return False
        u, v, c = self.step_edge(i)
        if self.theta is not None and info.cost + c > self.theta:
            # node cost is the exact minimum over incoming paths, so not
            # even the cheapest history finishes within budget here
            return False
        cu, cv = info.comp[u], info.comp[v]
        if cu == cv:
            return False
        if info.tcnt[cu] + info.tcnt[cv] != self.num_terminals:
            return False
        terms = self.terminals
        deg = info.deg
        # the endpoints end at degree deg+1; degree 1 is a leaf
        if deg[u] == 0 and u not in terms:
            return False
        if deg[v] == 0 and v not in terms:
            return False
        for f, cf in info.comp.items():
            if f == u or f == v:
                continue
            d = deg[f]
            if cf == cu or cf == cv:
                if d == 1 and f not in terms:
                    return False
            elif d:
                return False
        return True

    def is_zero_sink(self, info: NodeInfo, i: int, x: int) -> bool:
        """True iff branch x of edge i can never reach a qualifying tree.

        ``info`` must be materialized.  Exclusion dies when it strands a
        terminal-bearing component (its last undecided edge-ends are this
        edge) or makes a leaving non-terminal a leaf.  Inclusion dies on
        a cycle, on a leaving non-terminal that would end as a leaf, when
        even the cheapest path cost would exceed theta, or when it seals
        off a component holding some but not all terminals.
        """
        u, v, _ = self.step_edge(i)
        cu, cv = info.comp[u], info.comp[v]
        if x == 0:
            if cu == cv:
                if info.tcnt[cu] > 0 and info.upe[cu] == 2:
                    return True
            else:
                if info.tcnt[cu] > 0 and info.upe[cu] == 1:
                    return True
                if info.tcnt[cv] > 0 and info.upe[cv] == 1:
                    return True
            for z in (u, v):
                if (
                    self.last_pos[z] == i
                    and info.deg[z] == 1
                    and z not in self.terminals
                ):
                    return True
            return False

        if cu == cv:
            return True
        cost_edge = self.step_edge(i)[2]
        if self.theta is not None and info.cost + cost_edge > self.theta:
            return True
        for z in (u, v):
            if self.last_pos[z] == i and info.deg[z] == 0 and z not in self.terminals:
                return True
        merged_u = info.upe[cu] + info.upe[cv] - 2
        merged_t = info.tcnt[cu] + info.tcnt[cv]
        if merged_u == 0 and 0 < merged_t < self.num_terminals:
            return True
        return False

    # -- node generation ----------------------------------------------------

    def generate(self, info: NodeInfo, i: int, x: int) -> NodeInfo:
        """Successor frontier state for branch x of edge i (materialized input).

        Exclusion releases one undecided edge-end per endpoint component.
        Inclusion merges the endpoint components under the smaller id,
        adds terminal counts, combines escape counts (minus the two ends
        of this edge), bumps endpoint degrees, and pays the edge cost.
        Endpoints whose last edge this was drop out, and component
        records with no frontier members left are discarded.
        """
        u, v, c = self.step_edge(i)
        out = info.copy()
        cu, cv = out.comp[u], out.comp[v]
        if x == 1:
            keep, gone = (cu, cv) if cu <= cv else (cv, cu)
            if keep != gone:
                for f, cf in out.comp.items():
                    if cf == gone:
                        out.comp[f] = keep
                out.tcnt[keep] += out.tcnt.pop(gone)
                out.upe[keep] += out.upe.pop(gone)
            out.upe[keep] -= 2
            out.deg[u] += 1
            out.deg[v] += 1
            out.cost += c
        else:
            if cu == cv:
                out.upe[cu] -= 2
            else:
                out.upe[cu] -= 1
                out.upe[cv] -= 1
        for z in (u, v):
            if z in out.comp and self.last_pos[z] == i:
                del out.comp[z]
                del out.deg[z]
        survivors = set(out.comp.values())
        for cid in list(out.tcnt):
            if cid not in survivors:
                del out.tcnt[cid]
                del out.upe[cid]
        return out

    @staticmethod
    def merge_key(info: NodeInfo) -> tuple:
        """Hashable signature deciding which same-level nodes merge.

        Two nodes merge when their frontier partitions agree, each
        matching component agrees on whether it holds any terminal, and
        every frontier vertex agrees on degree.  Exact terminal counts
        and costs are deliberately absent: counts are conserved across a
        level, so the completion test fires identically, and cost
        differences are resolved at traversal time.
        """
        rep: dict[int, int] = {}
        parts = []
        for f in sorted(info.comp):
            cf = info.comp[f]
            parts.append(
                (rep.setdefault(cf, f), info.tcnt[cf] > 0, info.deg[f])
            )
        return tuple(parts)


def construct_bdd(
    g: Graph,
    order: EdgeOrder,
    theta: int | None = None,
    *,
    node_cap: int = DEFAULT_NODE_CAP,
    merge_nodes: bool = True,
) -> Bdd:
    """Build the layered diagram whose 1-sink paths are exactly the
    minimal Steiner trees of cost <= theta (plus, possibly, cheaper-
    looking paths that the exact traversal filter later discards).

    Levels are processed once each; only the previous layer's frontier
    summaries stay in memory.  ``merge_nodes=False`` disables merging
    (exponential; debugging aid for equivalence checks on tiny inputs).
    """
    search = FrontierSearch(g, order, theta)
    m = len(order.permutation)
    if m == 0:
        raise GraphError("cannot build a diagram over zero edges")

    lo: list[int] = [-1, -1]
    hi: list[int] = [-1, -1]
    level_of: list[int] = [0, 0]
    node_cost: list[int] = [0, 0]
    levels: list[list[int]] = [[] for _ in range(m + 1)]

    root = 2
    lo.append(ZERO)
    hi.append(ZERO)
    level_of.append(1)
    node_cost.append(0)
    levels[1].append(root)

    current: list[tuple[int, NodeInfo]] = [(root, NodeInfo())]
    for i in range(1, m + 1):
        nxt: list[tuple[int, NodeInfo]] = []
        table: dict[tuple, tuple[int, NodeInfo]] = {}
        for nid, info in current:
            base = search.materialize(info, i)
            arcs = [ZERO, ZERO]
            for x in (0, 1):
                if search.is_one_sink(base, i, x):
                    arcs[x] = ONE
                    continue
                if search.is_zero_sink(base, i, x):
                    arcs[x] = ZERO
                    continue
                child = search.generate(base, i, x)
                if not child.comp:
                    # frontier emptied without completing: dead branch
                    # (can only happen at the last level on connected input)
                    arcs[x] = ZERO
                    continue
                key = FrontierSearch.merge_key(child)
                hit = table.get(key) if merge_nodes else None
                if hit is not None:
                    kept_id, kept = hit
                    if child.cost < kept.cost:
                        kept.cost = child.cost
                        node_cost[kept_id] = child.cost
                    arcs[x] = kept_id
                    continue
                new_id = len(lo)
                if new_id - 2 >= node_cap:
                    raise NodeCapExceeded(
                        node_cap, i, [len(lvl) for lvl in levels[1:]]
                    )
                lo.append(ZERO)
                hi.append(ZERO)
                level_of.append(i + 1)
                node_cost.append(child.cost)
                levels[i + 1].append(new_id)
                if merge_nodes:
                    table[key] = (new_id, child)
                nxt.append((new_id, child))
                arcs[x] = new_id
            lo[nid], hi[nid] = arcs
        current = nxt

    # any state surviving past the last level is impossible on connected
    # input; generate() already routed empty frontiers to the 0-sink
    assert not current, "non-sink state escaped the final level"

    return Bdd(
        level_count=m,
        edge_order=tuple(order.permutation),
        edge_costs=tuple(g.edges[idx][2] for idx in order.permutation),
        root=root,
        lo=tuple(lo),
        hi=tuple(hi),
        level_of=tuple(level_of),
        levels=tuple(tuple(lvl) for lvl in levels),
        node_cost=tuple(node_cost),
    )
