"""Two-edge-coloured graphs with complete E-components and their alternating
cycles.

An SR-graph is (V, E, F) with E and F disjoint simple edge sets such that
every component of (V, E) is a complete graph.  An SR-cycle is an even cycle
of length >= 4 whose edges alternate E, F, E, F, ...; the closing edge (an
even position) is an F-edge.

The cycle search is deterministic: anchors in ascending vertex order, the
anchor is the minimum vertex of the reported cycle, neighbours tried in
ascending order, and the first edge out of the anchor is the E-edge of the
first alternating position.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .errors import (
    DisjointnessViolation,
    HypothesisViolation,
    MalformedEdge,
    NonCompleteEComponent,
    NotMultipartite,
    SearchBudgetExceeded,
)

VertexId = Hashable
Edge = tuple[VertexId, VertexId]

DEFAULT_SEARCH_BUDGET = 10_000_000


def _vkey(v: VertexId) -> tuple:
    """Total order on vertex ids: ints first in numeric order, then strings."""
    if isinstance(v, bool) or not isinstance(v, int):
        return (1, str(v))
    return (0, v)


def _norm_edge(u: VertexId, v: VertexId) -> Edge:
    return (u, v) if _vkey(u) <= _vkey(v) else (v, u)


@dataclass(frozen=True)
class SRGraph:
    vertices: tuple
    e_edges: frozenset
    f_edges: frozenset

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}


@dataclass(frozen=True)
class SRCycle:
    vertex_sequence: tuple

    def __len__(self) -> int:
        return len(self.vertex_sequence)


@dataclass(frozen=True)
class GraphStats:
    c_g: int
    c_h: int
    i_g: tuple
    i_h: tuple
    cut_vertices: tuple


def validate(
    vertices: Iterable[VertexId],
    e_edges: Iterable[Sequence[VertexId]],
    f_edges: Iterable[Sequence[VertexId]],
) -> SRGraph:
    """Check the SR-graph invariants and return the canonical value."""
    vset = set(vertices)
    ordered = tuple(sorted(vset, key=_vkey))

    def norm(edges, name):
        out = set()
        for pair in edges:
            u, v = pair
            if u == v:
                raise MalformedEdge(f"{name}-edge ({u!r}, {v!r}) is a loop")
            if u not in vset or v not in vset:
                raise MalformedEdge(f"{name}-edge ({u!r}, {v!r}) has unknown endpoint")
            out.add(_norm_edge(u, v))
        return frozenset(out)

    e = norm(e_edges, "E")
    f = norm(f_edges, "F")
    shared = e & f
    if shared:
        raise DisjointnessViolation(f"edges in both E and F: {sorted(map(repr, shared))}")
    graph = SRGraph(ordered, e, f)
    for comp in _components(ordered, _adjacency(graph, "e")):
        comp_set = sorted(comp, key=_vkey)
        for i, u in enumerate(comp_set):
            for v in comp_set[i + 1 :]:
                if _norm_edge(u, v) not in e:
                    raise NonCompleteEComponent(
                        f"E-component {comp_set!r} misses edge ({u!r}, {v!r})"
                    )
    return graph


def _adjacency(g: SRGraph, kind: str) -> dict:
    edges = g.e_edges if kind == "e" else g.f_edges if kind == "f" else g.e_edges | g.f_edges
    adj: dict = {v: [] for v in g.vertices}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    for v in adj:
        adj[v].sort(key=_vkey)
    return adj


def _components(vertices: Iterable[VertexId], adj: dict) -> list[set]:
    seen: set = set()
    out = []
    for v in vertices:
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        seen.add(v)
        while stack:
            u = stack.pop()
            for t in adj[u]:
                if t not in seen:
                    seen.add(t)
                    comp.add(t)
                    stack.append(t)
        out.append(comp)
    return out


def stats(g: SRGraph) -> GraphStats:
    adj_e = _adjacency(g, "e")
    adj_f = _adjacency(g, "f")
    adj_u = _adjacency(g, "union")
    comps_e = _components(g.vertices, adj_e)
    comps_f = _components(g.vertices, adj_f)
    i_g = tuple(v for v in g.vertices if not adj_e[v])
    i_h = tuple(v for v in g.vertices if not adj_f[v])
    c_union = len(_components(g.vertices, adj_u))
    cut = []
    for v in g.vertices:
        rest = [u for u in g.vertices if u != v]
        adj_rest = {u: [t for t in adj_u[u] if t != v] for u in rest}
        if len(_components(rest, adj_rest)) > c_union:
            cut.append(v)
    return GraphStats(len(comps_e), len(comps_f), i_g, i_h, tuple(cut))


def find_sr_cycle(g: SRGraph, budget: int = DEFAULT_SEARCH_BUDGET) -> SRCycle | None:
    """First SR-cycle in deterministic search order, or None if none exists.

    Raises SearchBudgetExceeded when the node-expansion budget runs out,
    which is reported distinctly from a definite not-found.
    """
    n = g.n
    if n < 4:
        return None
    idx = g.index()
    adj = [[], []]  # adj[0] = E neighbours, adj[1] = F neighbours, by index
    adj[0] = [[] for _ in range(n)]
    adj[1] = [[] for _ in range(n)]
    for kind, edges in ((0, g.e_edges), (1, g.f_edges)):
        for u, v in edges:
            iu, iv = idx[u], idx[v]
            adj[kind][iu].append(iv)
            adj[kind][iv].append(iu)
    for kind in (0, 1):
        for lst in adj[kind]:
            lst.sort()

    expansions = 0
    path: list[int] = []

    def dfs(current: int, anchor: int, on_path: list[bool]) -> bool:
        nonlocal expansions
        depth = len(path)  # vertices on path; next edge number = depth (1-based)
        want = 0 if depth % 2 == 1 else 1  # odd positions are E-edges
        if want == 1 and depth >= 4 and anchor in adj[1][current]:
            return True  # closing F-edge back to the anchor
        for t in adj[want][current]:
            if t <= anchor or on_path[t]:
                continue
            expansions += 1
            if expansions > budget:
                raise SearchBudgetExceeded(
                    f"cycle search exceeded {budget} node expansions"
                )
            path.append(t)
            on_path[t] = True
            if dfs(t, anchor, on_path):
                return True
            on_path[t] = False
            path.pop()
        return False

    for anchor in range(n):
        on_path = [False] * n
        on_path[anchor] = True
        path.clear()
        path.append(anchor)
        if dfs(anchor, anchor, on_path):
            return SRCycle(tuple(g.vertices[i] for i in path))
    return None


def verify_cycle(g: SRGraph, cycle: SRCycle) -> bool:
    """Re-verify a certificate against the SRCycle invariants."""
    seq = cycle.vertex_sequence
    c = len(seq)
    if c < 4 or c % 2 == 1 or len(set(seq)) != c:
        return False
    vset = set(g.vertices)
    if any(v not in vset for v in seq):
        return False
    for i in range(c):
        u, v = seq[i], seq[(i + 1) % c]
        edge = _norm_edge(u, v)
        wanted = g.e_edges if (i + 1) % 2 == 1 else g.f_edges
        if edge not in wanted:
            return False
    return True


def complete_criterion(g: SRGraph) -> bool:
    """Component-count criterion, valid when both colour classes have complete
    components and the union graph is connected: a cycle exists iff
    c_g + c_h < |V| + 1."""
    adj_f = _adjacency(g, "f")
    for comp in _components(g.vertices, adj_f):
        comp_sorted = sorted(comp, key=_vkey)
        for i, u in enumerate(comp_sorted):
            for v in comp_sorted[i + 1 :]:
                if _norm_edge(u, v) not in g.f_edges:
                    raise HypothesisViolation(
                        f"F-component {comp_sorted!r} is not complete"
                    )
    adj_u = _adjacency(g, "union")
    if len(_components(g.vertices, adj_u)) != 1:
        raise HypothesisViolation("union graph is not connected")
    st = stats(g)
    return st.c_g + st.c_h < g.n + 1


def is_complete_multipartite(
    component: Iterable[VertexId], f_edges: Iterable[Sequence[VertexId]]
) -> tuple[int, ...]:
    """Partite-set sizes (ascending) if the induced F-graph is complete
    multipartite, else NotMultipartite.  Parts are the components of the
    complement graph; they must be independent and fully joined."""
    verts = sorted(set(component), key=_vkey)
    edges = {_norm_edge(u, v) for u, v in f_edges if u in set(verts) and v in set(verts)}
    comp_adj: dict = {v: [] for v in verts}
    for i, u in enumerate(verts):
        for v in verts[i + 1 :]:
            if _norm_edge(u, v) not in edges:
                comp_adj[u].append(v)
                comp_adj[v].append(u)
    parts = _components(verts, comp_adj)
    for part in parts:
        part_sorted = sorted(part, key=_vkey)
        for i, u in enumerate(part_sorted):
            for v in part_sorted[i + 1 :]:
                if _norm_edge(u, v) in edges:
                    raise NotMultipartite(
                        f"vertices {u!r}, {v!r} share a part but are adjacent"
                    )
    return tuple(sorted(len(p) for p in parts))


def multipartite_hypotheses(g: SRGraph) -> bool:
    """True iff every F-component is complete multipartite, the number of
    E-isolated vertices is at most the number of F-components, and each
    F-component is more than twice as large as its largest part.  When true,
    an SR-cycle is guaranteed."""
    adj_f = _adjacency(g, "f")
    comps = _components(g.vertices, adj_f)
    st = stats(g)
    if len(st.i_g) > len(comps):
        return False
    for comp in comps:
        try:
            sizes = is_complete_multipartite(comp, g.f_edges)
        except NotMultipartite:
            return False
        if len(comp) <= 2 * max(sizes):
            return False
    return True


def induced_subgraph(g: SRGraph, subset: Iterable[VertexId]) -> SRGraph:
    sub = set(subset)
    keep = lambda edges: frozenset(e for e in edges if e[0] in sub and e[1] in sub)
    return SRGraph(
        tuple(sorted(sub, key=_vkey)), keep(g.e_edges), keep(g.f_edges)
    )


def graph_to_json(g: SRGraph) -> str:
    return json.dumps(
        {
            "vertices": list(g.vertices),
            "e_edges": sorted([list(e) for e in g.e_edges]),
            "f_edges": sorted([list(e) for e in g.f_edges]),
        },
        sort_keys=True,
    )


def graph_from_json(text: str) -> SRGraph:
    data = json.loads(text)
    return validate(data["vertices"], data["e_edges"], data["f_edges"])


def cycle_certificate(g: SRGraph, budget: int = DEFAULT_SEARCH_BUDGET) -> dict:
    """Certificate object: either a cycle, or the no-cycle witness sets."""
    cycle = find_sr_cycle(g, budget)
    if cycle is not None:
        return {"sr_cycle": list(cycle.vertex_sequence)}
    st = stats(g)
    return {
        "sr_cycle": None,
        "witness": {
            "isolated_g": list(st.i_g),
            "isolated_h": list(st.i_h),
            "cut": list(st.cut_vertices),
        },
    }
