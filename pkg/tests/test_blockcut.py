import pytest

from eternal_guard.blockcut import (
    CONNECTING,
    PINK,
    RED,
    WHITE,
    build_block_cut_tree,
    color_leaf_cycle,
    find_leaf_component,
)
from eternal_guard.multigraph import parse_graph


def g_from(text):
    return parse_graph(text)


class TestBlockCutTree:
    def test_tree_shape(self):
        g = g_from("a b\nb c\nc a\nc d\nd e")
        t = build_block_cut_tree(g)
        assert len(t.blocks) == 3
        assert t.articulations == {"c", "d"}

    def test_every_edge_in_one_block(self):
        g = g_from("a b\nb c\nc a\nc d\nd e\ne f\nf d\nd g")
        t = build_block_cut_tree(g)
        seen = sorted(e for b in t.blocks for e in b.edge_ids)
        assert seen == sorted(g.edges)


class TestLeafComponent:
    def test_star_leaf_vertex(self):
        g = g_from("c a\nc b\nc d")
        comp = find_leaf_component(g)
        assert comp.kind == "leaf_vertex"
        assert comp.parent == "c"

    def test_triangle_with_leaf_is_leaf_cycle(self):
        g = g_from("a b\nb c\nc a\na x")
        comp = find_leaf_component(g)
        # whole graph is one cycle plus a pendant leaf: a leaf cycle with no
        # connecting vertex, anchored at the pink vertex
        assert comp.kind == "leaf_cycle"
        assert comp.connecting is None
        assert comp.cycle[0] == "a"

    def test_bare_cycle_whole_graph(self):
        g = g_from("a b\nb c\nc d\nd e\ne f\nf a")
        comp = find_leaf_component(g)
        assert comp.kind == "whole_cycle"
        assert len(comp.cycle) == 6

    def test_single_edge_and_vertex(self):
        assert find_leaf_component(g_from("a b")).kind == "whole_small"
        assert find_leaf_component(g_from("a")).kind == "whole_small"

    def test_pendant_cycle_has_connecting(self):
        # path a-b-c then triangle c-d-e; cycle block is deepest
        g = g_from("a b\nb c\nc d\nd e\ne c")
        comp = find_leaf_component(g)
        assert comp.kind == "leaf_cycle"
        assert comp.connecting == "c"
        assert set(comp.cycle) == {"c", "d", "e"}

    def test_deep_tree_leaf(self):
        g = g_from("a b\nb c\nc a\na d\nd e")
        comp = find_leaf_component(g)
        # the pendant path hangs off the cycle; deepest block is edge d-e,
        # grandparent block is edge a-d, so e is a tree leaf
        assert comp.kind == "leaf_vertex"
        assert comp.vertex == "e"
        assert comp.parent == "d"


class TestColoring:
    REST = "a0 a1\na1 a2\na2 a0\na0 d\n"  # a root-side cycle so d truly connects

    def test_white_pink_red(self):
        # leaf cycle d-e-f-h with 0,1,2 leaves and connection at d
        g = g_from(
            self.REST + "d e\ne f\nf h\nh d\n" + "e p1\n" + "f r1\nf r2\n"
        )
        comp = find_leaf_component(g)
        assert comp.kind == "leaf_cycle" and comp.connecting == "d"
        col = color_leaf_cycle(g, comp)
        assert col.colors == {"d": CONNECTING, "e": PINK, "f": RED, "h": WHITE}
        seq = col.sequence(comp.cycle)
        assert seq[0] == CONNECTING and seq[-1] == CONNECTING

    def test_three_leaves_is_red(self):
        g = g_from(self.REST + "d e\ne f\nf d\ne x\ne y\ne z")
        comp = find_leaf_component(g)
        col = color_leaf_cycle(g, comp)
        assert col.colors["e"] == RED
        assert col.leaf_sets["e"] == ("x", "y", "z")

    def test_all_white_c4(self):
        g = g_from(self.REST + "d e\ne f\nf h\nh d")
        comp = find_leaf_component(g)
        col = color_leaf_cycle(g, comp)
        seq = col.sequence(comp.cycle)
        assert seq == (CONNECTING, WHITE, WHITE, WHITE, CONNECTING)
