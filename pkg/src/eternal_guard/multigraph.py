"""Undirected multigraphs with stable vertex/edge identities.

Vertices are strings, edges are integer ids mapped to (u, v) endpoint pairs
(u == v for loops).  All surgeries return fresh graphs; surviving ids stay
unchanged so reduction traces can name the vertices and edges they matched.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from collections import deque
from typing import Iterable


class GraphError(ValueError):
    """Malformed input or a violated structural precondition."""


@dataclass(frozen=True)
class Multigraph:
    vertices: frozenset[str]
    edges: dict[int, tuple[str, str]]  # eid -> (u, v); u == v encodes a loop
    _adj: dict[str, list[tuple[str, int]]] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        adj: dict[str, list[tuple[str, int]]] = {v: [] for v in self.vertices}
        for eid, (u, v) in self.edges.items():
            if u not in self.vertices or v not in self.vertices:
                raise GraphError(f"edge {eid} references missing vertex: {(u, v)}")
            adj[u].append((v, eid))
            if u != v:
                adj[v].append((u, eid))
        for v in adj:
            adj[v].sort()
        object.__setattr__(self, "_adj", adj)

    # -- queries ---------------------------------------------------------

    def sorted_vertices(self) -> list[str]:
        return sorted(self.vertices)

    def neighbors(self, v: str) -> list[str]:
        """Distinct neighbors of v, sorted; a loop does not make v its own neighbor."""
        return sorted({u for u, _ in self._adj[v] if u != v})

    def degree(self, v: str) -> int:
        """Edge-incidence count; a loop contributes 2."""
        return len(self._adj[v]) + sum(1 for u, _ in self._adj[v] if u == v)

    def incident_edges(self, v: str) -> list[int]:
        return sorted({eid for _, eid in self._adj[v]})

    def edges_between(self, u: str, v: str) -> list[int]:
        return sorted({eid for w, eid in self._adj[u] if w == v})

    def has_edge(self, u: str, v: str) -> bool:
        return any(w == v for w, _ in self._adj[u])

    def loops_at(self, v: str) -> list[int]:
        return sorted({eid for w, eid in self._adj[v] if w == v})

    def all_loops(self) -> list[int]:
        return sorted(eid for eid, (u, v) in self.edges.items() if u == v)

    def leaves_of(self, v: str) -> list[str]:
        """Pendant (degree-1) neighbors of v, sorted."""
        return sorted(u for u in self.neighbors(v) if self.degree(u) == 1)

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        start = min(self.vertices)
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for u in self.neighbors(v):
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        return len(seen) == len(self.vertices)

    def bfs_distances(self, source: str) -> dict[str, int]:
        """Hop distances from source; loops are ignored."""
        dist = {source: 0}
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for u in self.neighbors(v):
                if u not in dist:
                    dist[u] = dist[v] + 1
                    queue.append(u)
        return dist

    def next_edge_id(self) -> int:
        return max(self.edges, default=-1) + 1

    # -- constructors ----------------------------------------------------

    @staticmethod
    def from_pairs(vertices: Iterable[str], pairs: Iterable[tuple[str, str]]) -> "Multigraph":
        edges = {i: (u, v) for i, (u, v) in enumerate(pairs)}
        return Multigraph(frozenset(vertices), edges)

    def with_changes(
        self,
        drop_vertices: Iterable[str] = (),
        drop_edges: Iterable[int] = (),
        add_vertices: Iterable[str] = (),
        add_edges: Iterable[tuple[str, str]] | dict[int, tuple[str, str]] = (),
    ) -> "Multigraph":
        """Apply a surgery; dropped vertices take their incident edges along."""
        dropped_v = set(drop_vertices)
        dropped_e = set(drop_edges)
        verts = (self.vertices - dropped_v) | set(add_vertices)
        edges = {
            eid: uv
            for eid, uv in self.edges.items()
            if eid not in dropped_e and uv[0] not in dropped_v and uv[1] not in dropped_v
        }
        if isinstance(add_edges, dict):
            for eid, uv in add_edges.items():
                if eid in edges:
                    raise GraphError(f"edge id {eid} already present")
                edges[eid] = uv
        else:
            nxt = max(list(edges) + list(self.edges), default=-1) + 1
            for uv in add_edges:
                edges[nxt] = uv
                nxt += 1
        return Multigraph(frozenset(verts), edges)


# -- parsing / serialization ----------------------------------------------


def parse_graph(text: str) -> Multigraph:
    """Parse an edge-list document: one ``u v`` pair per line, ``#`` comments.

    A line ``u u`` is a loop; repeated lines create parallel edges.  An
    isolated vertex may be given as a single token on its own line.
    """
    vertices: set[str] = set()
    pairs: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) == 1:
            vertices.add(tokens[0])
        elif len(tokens) == 2:
            u, v = tokens
            vertices.add(u)
            vertices.add(v)
            pairs.append((u, v))
        else:
            raise GraphError(f"line {lineno}: expected 'u v', got {raw!r}")
    if not vertices:
        raise GraphError("empty graph")
    g = Multigraph.from_pairs(vertices, pairs)
    if not g.is_connected():
        raise GraphError("graph is not connected")
    return g


def format_graph(g: Multigraph) -> str:
    """Canonical edge-list serialization (vertices and edges sorted)."""
    lines = []
    in_edges = {v for uv in g.edges.values() for v in uv}
    for v in g.sorted_vertices():
        if v not in in_edges:
            lines.append(v)
    for u, v in sorted(tuple(sorted(uv)) for uv in g.edges.values()):
        lines.append(f"{u} {v}")
    return "\n".join(lines) + "\n"


# -- biconnected blocks ----------------------------------------------------


@dataclass(frozen=True)
class Block:
    edge_ids: frozenset[int]
    vertices: frozenset[str]

    @property
    def is_cycle(self) -> bool:
        """Loops, parallel pairs and simple cycles all count as cycle blocks."""
        return len(self.edge_ids) >= 2 or len(self.vertices) == 1

    def key(self) -> tuple:
        return (min(self.vertices), sorted(self.vertices), sorted(self.edge_ids))


def biconnected_blocks(g: Multigraph) -> list[Block]:
    """Biconnected components (Hopcroft-Tarjan); loops become their own blocks."""
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 10000))
    blocks: list[Block] = []
    for v in g.sorted_vertices():
        for eid in g.loops_at(v):
            blocks.append(Block(frozenset([eid]), frozenset([v])))

    disc: dict[str, int] = {}
    low: dict[str, int] = {}
    counter = [0]
    estack: list[int] = []

    def emit(upto: int):
        comp = []
        while estack:
            e = estack.pop()
            comp.append(e)
            if e == upto:
                break
        verts = {x for e in comp for x in g.edges[e]}
        blocks.append(Block(frozenset(comp), frozenset(verts)))

    def dfs(v: str, parent_edge: int):
        disc[v] = low[v] = counter[0]
        counter[0] += 1
        for u, eid in sorted(g._adj[v]):
            if u == v or eid == parent_edge:
                continue
            if u not in disc:
                estack.append(eid)
                dfs(u, eid)
                low[v] = min(low[v], low[u])
                if low[u] >= disc[v]:
                    emit(eid)
            elif disc[u] < disc[v]:
                estack.append(eid)
                low[v] = min(low[v], disc[u])

    for root in g.sorted_vertices():
        if root not in disc:
            dfs(root, -1)
    return sorted(blocks, key=Block.key)


def articulation_vertices(g: Multigraph) -> set[str]:
    """Cut vertices = vertices lying in two or more blocks."""
    count: dict[str, int] = {}
    for b in biconnected_blocks(g):
        for v in b.vertices:
            count[v] = count.get(v, 0) + 1
    return {v for v, c in count.items() if c > 1}


def is_cactus(g: Multigraph) -> bool:
    """True iff g is connected and every edge lies on at most one cycle.

    Works on cactus multigraphs: a loop is a cycle of size 1, a parallel pair
    a cycle of size 2.  Every block must be a single edge or a simple cycle.
    """
    if not g.is_connected():
        return False
    for block in biconnected_blocks(g):
        if len(block.edge_ids) == 1:
            continue
        if len(block.edge_ids) != max(len(block.vertices), 2):
            return False
        count: dict[str, int] = {}
        for eid in block.edge_ids:
            u, v = g.edges[eid]
            count[u] = count.get(u, 0) + 1
            count[v] = count.get(v, 0) + 1
        if any(c != 2 for c in count.values()):
            return False
    return True


def cycle_order(g: Multigraph, block: Block) -> list[str]:
    """Vertices of a cycle block in traversal order.

    Starts at the block's smallest vertex and proceeds toward its smaller
    neighbor inside the block, so the orientation is deterministic.
    """
    if len(block.vertices) == 1:
        return [next(iter(block.vertices))]
    adj: dict[str, set[str]] = {v: set() for v in block.vertices}
    for eid in block.edge_ids:
        u, v = g.edges[eid]
        adj[u].add(v)
        adj[v].add(u)
    start = min(block.vertices)
    if len(block.vertices) == 2:
        other = next(iter(block.vertices - {start}))
        return [start, other]
    order = [start]
    prev = None
    cur = start
    while True:
        nxts = sorted(n for n in adj[cur] if n != prev)
        nxt = nxts[0]
        if nxt == start:
            break
        order.append(nxt)
        prev, cur = cur, nxt
    return order


# -- lower-bound surgeries -------------------------------------------------


def identify_vertices(g: Multigraph, u: str, v: str) -> Multigraph:
    """Remove u, redirecting its edges to v (may create loops/multiedges)."""
    if u == v:
        raise GraphError("identify requires two distinct vertices")
    edges = {}
    for eid, (a, b) in g.edges.items():
        a2 = v if a == u else a
        b2 = v if b == u else b
        edges[eid] = (a2, b2)
    return Multigraph(g.vertices - {u}, edges)


def clique_reduce(g: Multigraph, h: Iterable[str]) -> Multigraph:
    """Remove the induced connected subgraph H, joining its outside neighbors.

    New edges are simple: no edge is added where one already exists, and no
    parallel copies are created among the added ones.
    """
    hset = set(h)
    if not hset:
        raise GraphError("H must be non-empty")
    if not hset <= g.vertices:
        raise GraphError("H contains unknown vertices")
    # connectivity of g[H]
    start = min(hset)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in g.neighbors(x):
            if y in hset and y not in seen:
                seen.add(y)
                queue.append(y)
    if seen != hset:
        raise GraphError("H is not connected")
    boundary = sorted({y for x in hset for y in g.neighbors(x) if y not in hset})
    g2 = g.with_changes(drop_vertices=hset)
    new_pairs = []
    present = {tuple(sorted(uv)) for uv in g2.edges.values()}
    for i, a in enumerate(boundary):
        for b in boundary[i + 1 :]:
            if (a, b) not in present:
                new_pairs.append((a, b))
                present.add((a, b))
    return g2.with_changes(add_edges=new_pairs)


def ink_check(g: Multigraph, h: Iterable[str], seq: list[str]) -> int:
    """Verify an attack-sequence certificate forcing guards onto H.

    Checks d(u, v_i) > i for every vertex u outside H and d(v_j, v_i) > i - j
    for every j < i; returns len(seq) on success, raises on any violation.
    """
    hset = set(h)
    if not set(seq) <= hset:
        raise GraphError("sequence must lie inside H")
    outside = g.vertices - hset
    dist = {v: g.bfs_distances(v) for v in seq}
    for i, vi in enumerate(seq, start=1):
        for u in outside:
            if dist[vi].get(u, sys.maxsize) <= i:
                raise GraphError(f"ink condition failed: d({u},{vi}) <= {i}")
        for j, vj in enumerate(seq[: i - 1], start=1):
            if dist[vi].get(vj, sys.maxsize) <= i - j:
                raise GraphError(f"ink condition failed: d({vj},{vi}) <= {i - j}")
    return len(seq)
