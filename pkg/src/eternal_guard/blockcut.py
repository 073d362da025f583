"""Block-cut decomposition, leaf-component discovery and vertex coloring.

A leaf cycle is a cycle with at most one vertex (the connecting vertex) that
has a neighbor which is neither on the cycle nor a leaf.  Cycle vertices are
colored white/pink/red by their pendant-leaf count; the connecting vertex is
its own color.  A whole-graph cycle that carries leaves has no connecting
vertex; such cycles are anchored at the smallest red-or-pink vertex so the
same scan applies.
"""

from __future__ import annotations

from dataclasses import dataclass

from .multigraph import Block, GraphError, Multigraph, biconnected_blocks, cycle_order

WHITE = "white"
PINK = "pink"
RED = "red"
CONNECTING = "connecting"


@dataclass(frozen=True)
class BlockCutTree:
    blocks: list[Block]
    articulations: frozenset[str]
    # tree edges: (block index, articulation vertex)
    tree_edges: frozenset[tuple[int, str]]
    root_block: int

    def block_depths(self) -> dict[int, int]:
        """Depth of every block node from the root block (articulations skipped)."""
        adj_block: dict[int, set[str]] = {i: set() for i in range(len(self.blocks))}
        adj_art: dict[str, set[int]] = {}
        for bi, a in self.tree_edges:
            adj_block[bi].add(a)
            adj_art.setdefault(a, set()).add(bi)
        depth = {self.root_block: 0}
        frontier = [self.root_block]
        while frontier:
            nxt = []
            for bi in frontier:
                for a in adj_block[bi]:
                    for bj in adj_art.get(a, ()):
                        if bj not in depth:
                            depth[bj] = depth[bi] + 1
                            nxt.append(bj)
            frontier = nxt
        return depth

    def parent_articulation(self, bi: int) -> str | None:
        """The articulation linking block bi toward the root, if any."""
        if bi == self.root_block:
            return None
        depth = self.block_depths()
        adj_art: dict[str, set[int]] = {}
        for bj, a in self.tree_edges:
            adj_art.setdefault(a, set()).add(bj)
        for bj, a in self.tree_edges:
            if bj == bi:
                for bk in adj_art[a]:
                    if depth.get(bk, 10**9) < depth[bi]:
                        return a
        return None


def build_block_cut_tree(g: Multigraph) -> BlockCutTree:
    blocks = biconnected_blocks(g)
    count: dict[str, int] = {}
    for b in blocks:
        for v in b.vertices:
            count[v] = count.get(v, 0) + 1
    arts = frozenset(v for v, c in count.items() if c > 1)
    tree_edges = frozenset(
        (i, v) for i, b in enumerate(blocks) for v in b.vertices if v in arts
    )
    # deterministic root: the block containing the smallest vertex id,
    # smallest vertex tuple as tie-break
    root = min(range(len(blocks)), key=lambda i: blocks[i].key())
    return BlockCutTree(blocks, arts, tree_edges, root)


@dataclass(frozen=True)
class LeafComponent:
    kind: str  # "leaf_vertex" | "leaf_cycle" | "whole_cycle" | "whole_small"
    vertex: str | None = None  # the leaf, for leaf_vertex
    parent: str | None = None  # its parent, for leaf_vertex
    cycle: tuple[str, ...] = ()  # cycle vertices in traversal order
    connecting: str | None = None  # connecting vertex, if one exists


def _real_connecting(g: Multigraph, cycle_verts: frozenset[str], cand: str | None) -> str | None:
    """A connecting vertex must have a neighbor that is neither on the cycle
    nor a pendant leaf; a parent articulation whose outside attachments are
    all leaves anchors nothing."""
    if cand is None:
        return None
    outside = [
        w for w in g.neighbors(cand) if w not in cycle_verts and g.degree(w) > 1
    ]
    return cand if outside else None


def _cycle_with_connecting(g: Multigraph, block: Block, connecting: str | None) -> tuple[str, ...]:
    """Cycle order rotated to start at the connecting vertex (or anchor)."""
    order = cycle_order(g, block)
    anchor = connecting
    if anchor is None:
        # whole-graph cycle carrying leaves: anchor at the smallest vertex
        # that has any pendant leaf (red or pink position)
        with_leaves = sorted(v for v in order if g.leaves_of(v))
        anchor = with_leaves[0] if with_leaves else order[0]
    i = order.index(anchor)
    rotated = order[i:] + order[:i]
    # canonical orientation: proceed toward the smaller neighbor
    if len(rotated) > 2 and rotated[-1] < rotated[1]:
        rotated = [rotated[0]] + rotated[1:][::-1]
    return tuple(rotated)


def find_leaf_component(g: Multigraph) -> LeafComponent:
    """Locate a leaf component per the block-cut-tree case analysis.

    Deterministic: deepest block first, cycles preferred among the deepest,
    ties broken by smallest contained vertex.
    """
    if len(g.vertices) == 1:
        return LeafComponent("whole_small")
    if len(g.vertices) == 2 and not any(u == v for u, v in g.edges.values()):
        if len(g.edges) == 1:
            return LeafComponent("whole_small")
    tree = build_block_cut_tree(g)
    if len(tree.blocks) == 1:
        b = tree.blocks[0]
        if b.is_cycle:
            return LeafComponent("whole_cycle", cycle=_cycle_with_connecting(g, b, None))
        return LeafComponent("whole_small")
    depths = tree.block_depths()
    maxdepth = max(depths.values())
    deepest = [i for i, d in depths.items() if d == maxdepth]
    deep_cycles = [i for i in deepest if tree.blocks[i].is_cycle]
    if deep_cycles:
        # case A: a pendant cycle; its parent articulation is the connecting
        # vertex unless the cycle is the whole residue
        bi = min(deep_cycles, key=lambda i: tree.blocks[i].key())
        conn = _real_connecting(
            g, tree.blocks[bi].vertices, tree.parent_articulation(bi)
        )
        return LeafComponent(
            "leaf_cycle",
            cycle=_cycle_with_connecting(g, tree.blocks[bi], conn),
            connecting=conn,
        )
    # deepest blocks are pendant edges (leaves)
    bi = min(deepest, key=lambda i: tree.blocks[i].key())
    block = tree.blocks[bi]
    parent_art = tree.parent_articulation(bi)
    assert parent_art is not None
    leaf = next(iter(block.vertices - {parent_art}))
    # grandparent block: the parent articulation's block toward the root
    gp = None
    for j, b in enumerate(tree.blocks):
        if j != bi and parent_art in b.vertices and depths[j] < depths[bi]:
            gp = j
            break
    if gp is not None and tree.blocks[gp].is_cycle:
        # case C: the grandparent cycle is a leaf cycle
        conn = _real_connecting(
            g, tree.blocks[gp].vertices, tree.parent_articulation(gp)
        )
        return LeafComponent(
            "leaf_cycle",
            cycle=_cycle_with_connecting(g, tree.blocks[gp], conn),
            connecting=conn,
        )
    # case B: a tree leaf away from any leaf cycle
    return LeafComponent("leaf_vertex", vertex=leaf, parent=parent_art)


@dataclass(frozen=True)
class ColorLabeling:
    colors: dict[str, str]  # cycle vertex -> color
    leaf_sets: dict[str, tuple[str, ...]]  # cycle vertex -> its pendant leaves

    def sequence(self, cycle: tuple[str, ...]) -> tuple[str, ...]:
        """Leaf sequence starting and ending at the first cycle vertex."""
        return tuple(self.colors[v] for v in cycle) + (self.colors[cycle[0]],)


def color_leaf_cycle(g: Multigraph, comp: LeafComponent) -> ColorLabeling:
    """Color the vertices of a leaf cycle by pendant-leaf count.

    0 leaves -> white, 1 -> pink, >= 2 -> red; the connecting vertex gets its
    own color.  Raises if a second vertex has non-cycle non-leaf neighbors,
    which would mean the component is not a leaf cycle.
    """
    cyc = set(comp.cycle)
    colors: dict[str, str] = {}
    leaf_sets: dict[str, tuple[str, ...]] = {}
    stray = []
    for v in comp.cycle:
        leaves = tuple(g.leaves_of(v))
        leaf_sets[v] = leaves
        outside = [
            w for w in g.neighbors(v) if w not in cyc and g.degree(w) > 1
        ]
        if outside:
            stray.append(v)
        if v == comp.connecting:
            colors[v] = CONNECTING
        elif len(leaves) == 0:
            colors[v] = WHITE
        elif len(leaves) == 1:
            colors[v] = PINK
        else:
            colors[v] = RED
    expected_stray = {comp.connecting} if comp.connecting is not None else set()
    if not set(stray) <= expected_stray:
        raise GraphError(
            f"not a leaf cycle: vertices {sorted(set(stray) - expected_stray)} have outside attachments"
        )
    return ColorLabeling(colors, leaf_sets)
