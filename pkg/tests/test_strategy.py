import pytest

from eternal_guard.multigraph import Multigraph, parse_graph
from eternal_guard.strategy import (
    Strategy,
    StrategyError,
    compose,
    cut,
    dedup_complete,
    edge_states,
    expand,
    extend_leaves,
    gcpos,
    interface_equivalent,
    make_permanently_defended,
    make_strategy,
    prune_complete,
    renumber,
    respond,
    substrategy,
    symmetrize,
)


def fig3_strategy():
    """The 5-vertex example: V={a,b,c,u,v}, 3 states, triangle strategy graph."""
    g = parse_graph("a b\nb u\nu v\na c\nc u")
    return make_strategy(
        g,
        {
            "al": frozenset({"v", "a"}),
            "be": frozenset({"u", "b"}),
            "ga": frozenset({"u", "c"}),
        },
        {
            ("al", "be"): frozenset({("a", "b"), ("v", "u")}),
            ("al", "ga"): frozenset({("a", "c"), ("v", "u")}),
            ("be", "ga"): frozenset({("b", "u"), ("u", "c")}),
        },
    )


def base_edge():
    g = parse_graph("u v")
    return make_strategy(
        g,
        {"s0": frozenset({"u"}), "s1": frozenset({"v"})},
        {("s0", "s1"): frozenset({("u", "v")})},
    )


class TestValidate:
    def test_fig3_valid(self):
        assert fig3_strategy().validate() == []

    def test_non_edge_move_flagged(self):
        ds = fig3_strategy()
        bad_moves = dict(ds.moves)
        bad_moves[("al", "be")] = frozenset({("a", "u"), ("v", "b")})
        bad = Strategy(ds.graph, ds.states, ds.sedges, bad_moves).validate()
        assert any("not along an edge" in b or "converse" in b for b in bad)

    def test_interface_exemption(self):
        # partial piece of fig3 over {u, v} with interface {u}; u may be
        # unmatched in a transition
        ds = fig3_strategy()
        piece = substrategy(ds, {"u", "v"}, frozenset({"u"}))
        assert piece.validate() == []

    def test_unequal_guard_counts(self):
        g = parse_graph("a b")
        st = make_strategy(
            g,
            {"s0": frozenset({"a", "b"}), "s1": frozenset({"a"})},
            {("s0", "s1"): frozenset({("b", "a"), ("a", "b")})},
        )
        assert any("guard counts" in b or "arrival" in b for b in st.validate())


class TestDefending:
    def test_k3_single_state(self):
        g = parse_graph("a b\nb c\nc a")
        st = make_strategy(g, {"s0": frozenset({"a", "b", "c"})}, {})
        assert st.is_defending()

    def test_fig3_defending(self):
        assert fig3_strategy().is_defending()

    def test_middle_never_occupied(self):
        g = parse_graph("a b\nb c")
        st = make_strategy(
            g,
            {"s0": frozenset({"a"}), "s1": frozenset({"c"})},
            {("s0", "s1"): frozenset()},
        )
        assert not st.is_defending()


class TestSymmetrize:
    def test_converse_filled(self):
        ds = fig3_strategy()
        assert ds.moves[("be", "al")] == frozenset({("b", "a"), ("u", "v")})

    def test_stationary_self_converse(self):
        g = parse_graph("a b")
        st = make_strategy(
            g,
            {"x": frozenset({"a"}), "y": frozenset({"a"})},
            {("x", "y"): frozenset({("a", "a")})},
        )
        assert st.moves[("y", "x")] == frozenset({("a", "a")})


class TestCutCompose:
    def test_cut_along_u(self):
        ds = fig3_strategy()
        left, right = cut(ds, {"u"})
        assert left.interface == frozenset({"u"})
        assert left.validate() == [] and right.validate() == []
        sides = [left.graph.vertices - {"u"}, right.graph.vertices - {"u"}]
        assert frozenset({"v"}) in [frozenset(x) for x in sides]

    def test_roundtrip(self):
        ds = fig3_strategy()
        left, right = cut(ds, {"u"})
        back = compose(left, right)
        assert back.states == ds.states
        assert back.moves == ds.moves
        assert back.graph.vertices == ds.graph.vertices

    def test_cut_full_separator(self):
        ds = fig3_strategy()
        left, right = cut(ds, set(ds.graph.vertices))
        assert right.graph.vertices == ds.graph.vertices
        back = compose(left, right)
        assert back.states == ds.states

    def test_incompatible_graphs(self):
        ds = fig3_strategy()
        left, right = cut(ds, {"u"})
        other = base_edge()
        with pytest.raises(StrategyError):
            compose(left, other)


class TestInterfaceEquivalent:
    def test_reflexive(self):
        ds = fig3_strategy()
        piece, _ = cut(ds, {"u"})
        ok, k = interface_equivalent(piece, piece)
        assert ok and k == 0

    def test_different_interface_pattern(self):
        ds = fig3_strategy()
        piece, _ = cut(ds, {"u"})
        tweaked = Strategy(
            piece.graph,
            {s: (p | {"u"}) for s, p in piece.states.items()},
            piece.sedges,
            piece.moves,
            piece.interface,
        )
        ok, _ = interface_equivalent(piece, tweaked)
        assert not ok

    def test_expand_identity(self):
        ds = fig3_strategy()
        piece, _ = cut(ds, {"u"})
        back = expand(ds, piece, piece)
        assert back.states == ds.states and back.moves == ds.moves


class TestGcpos:
    def test_empty_subset_isomorphic(self):
        ds = fig3_strategy()
        prod = gcpos(ds, set(), ["x"])
        assert set(prod.strategy.states) == set(ds.states)
        assert prod.strategy.sedges == ds.sedges

    def test_full_subset_k2(self):
        ds = base_edge()
        prod = gcpos(ds, {"s0", "s1"}, ["p", "q"])
        st = prod.strategy
        assert len(st.states) == 4
        assert st.validate() == []
        # same-origin copies joined, cross-label different-origin pairs not
        assert frozenset(("s0|p", "s0|q")) in st.sedges
        assert frozenset(("s0|p", "s1|q")) not in st.sedges

    def test_lineage(self):
        ds = base_edge()
        prod = gcpos(ds, {"s1"}, ["p", "q"])
        assert prod.lineage["s1|p"] == ("s1", "p")
        assert prod.lineage["s0"] == ("s0", None)
        assert prod.classes["p"] == frozenset({"s1|p"})


class TestExtendLeaves:
    def test_star_from_single_vertex(self):
        g = parse_graph("u")
        base = make_strategy(g, {"s0": frozenset({"u"})}, {})
        out = extend_leaves(base, "u", ["l1", "l2"])
        assert out.validate() == []
        assert out.is_defending()
        assert out.guard_count() == 2
        assert all("u" in p for p in out.states.values())

    def test_one_leaf_on_edge(self):
        out = extend_leaves(base_edge(), "u", ["w"])
        assert out.validate() == []
        assert out.is_defending()
        assert out.guard_count() == 2

    def test_retroactive_addition(self):
        g = parse_graph("u")
        base = make_strategy(g, {"s0": frozenset({"u"})}, {})
        two = extend_leaves(base, "u", ["l1", "l2"])
        three = extend_leaves(
            Strategy(two.graph, two.states, two.sedges, two.moves), "u", ["l3"]
        )
        assert three.validate() == []
        assert three.is_defending()
        assert three.guard_count() == 3


class TestPermanentDefense:
    def test_no_red_unchanged(self):
        ds = fig3_strategy()
        out = make_permanently_defended(ds)
        assert out.states == ds.states

    def test_spider_transform(self):
        # star u with leaves v,w; strategy that parks both guards on leaves
        g = parse_graph("u v\nu w")
        st = make_strategy(
            g,
            {"x": frozenset({"v", "w"}), "y": frozenset({"u", "v"})},
            {("x", "y"): frozenset({("v", "v"), ("w", "u")})},
        )
        assert st.is_defending()
        out = make_permanently_defended(st)
        assert out.validate() == []
        assert out.is_defending()
        assert all("u" in p for p in out.states.values())
        assert out.guard_count() == st.guard_count()

    def test_already_permanent(self):
        g = parse_graph("u v\nu w")
        st = make_strategy(
            g,
            {"x": frozenset({"u", "v"}), "y": frozenset({"u", "w"})},
            {("x", "y"): frozenset({("v", "u"), ("u", "w")})},
        )
        out = make_permanently_defended(st)
        assert out.states == st.states


class TestEdgeStates:
    def test_base_edge(self):
        ds = base_edge()
        es = edge_states(ds, "u", "v")
        assert es.left == frozenset({"s0"})
        assert es.right == frozenset({"s1"})
        assert es.neutral == frozenset()

    def test_untraversed_edge(self):
        g = parse_graph("a b\nb c\nc a")
        st = make_strategy(
            g,
            {"s0": frozenset({"a", "b", "c"})},
            {},
        )
        es = edge_states(st, "a", "b")
        assert es.left == es.right == frozenset()
        assert es.neutral == frozenset({"s0"})

    def test_symmetry_identities(self):
        ds = fig3_strategy()
        for u, v in [("a", "b"), ("u", "v"), ("b", "u")]:
            ab = edge_states(ds, u, v)
            ba = edge_states(ds, v, u)
            assert ab.left == ba.right and ab.right == ba.left and ab.neutral == ba.neutral


class TestRespond:
    def test_stay_when_occupied(self):
        ds = fig3_strategy()
        nxt, moves = respond(ds, "al", "a")
        assert nxt == "al"
        assert all(a == b for a, b in moves)

    def test_smallest_neighbor(self):
        ds = fig3_strategy()
        nxt, _ = respond(ds, "al", "u")
        assert nxt == "be"  # 'be' before 'ga'

    def test_fuzz_never_fails(self):
        import random

        ds = fig3_strategy()
        rng = random.Random(0)
        cur = "al"
        verts = ds.graph.sorted_vertices()
        for _ in range(100):
            cur, _ = respond(ds, cur, rng.choice(verts))


class TestPrune:
    def complete_strategy(self):
        # 4-cycle, 2 guards, all six dominating pairs, complete graph
        g = parse_graph("a b\nb c\nc d\nd a")
        import itertools

        states = {}
        for i, pair in enumerate(itertools.combinations("abcd", 2)):
            states[f"s{i}"] = frozenset(pair)
        mv = {}
        ids = sorted(states)
        for x, y in itertools.combinations(ids, 2):
            # find any perfect matching between the two pairs
            (p1, p2), (q1, q2) = sorted(states[x]), sorted(states[y])
            options = [
                {(p1, q1), (p2, q2)},
                {(p1, q2), (p2, q1)},
            ]
            for opt in options:
                if all(a == b or g.has_edge(a, b) for a, b in opt):
                    mv[(x, y)] = frozenset(opt)
                    break
        return make_strategy(g, states, mv)

    def test_prune_bound(self):
        ds = self.complete_strategy()
        assert ds.is_complete()
        assert ds.is_defending()
        out = prune_complete(ds)
        assert len(out.states) <= len(ds.graph.vertices) - ds.guard_count() + 1
        assert out.is_defending()
        assert out.is_complete()

    def test_prune_requires_complete(self):
        # a 3-state path-shaped strategy graph is not complete
        g = parse_graph("a b\nb c")
        st = make_strategy(
            g,
            {
                "s0": frozenset({"a", "b"}),
                "s1": frozenset({"b", "c"}),
                "s2": frozenset({"a", "c"}),
            },
            {
                ("s0", "s1"): frozenset({("a", "b"), ("b", "c")}),
                ("s1", "s2"): frozenset({("b", "a"), ("c", "c")}),
            },
        )
        with pytest.raises(StrategyError):
            prune_complete(st)

    def test_dedup(self):
        ds = self.complete_strategy()
        ids = list(ds.states)
        rep = {**{s: s for s in ids}, **{f"{s}x": s for s in ids}}
        all_ids = ids + [f"{s}x" for s in ids]
        states = {s: ds.states[rep[s]] for s in all_ids}
        moves = {}
        for a in all_ids:
            for b in all_ids:
                if a >= b:
                    continue
                ra, rb = rep[a], rep[b]
                if ra == rb:
                    moves[(a, b)] = frozenset((v, v) for v in states[a])
                else:
                    moves[(a, b)] = ds.moves[(ra, rb)]
        doubled = make_strategy(ds.graph, states, moves)
        assert doubled.validate() == []
        out = dedup_complete(doubled)
        assert len(out.states) == len(ds.states)
        assert out.validate() == []


class TestJson:
    def test_roundtrip(self):
        ds = fig3_strategy()
        text = ds.to_json()
        back = Strategy.from_json(text)
        assert back.states == ds.states
        assert back.moves == ds.moves
        assert back.to_json() == text

    def test_renumber(self):
        ds = fig3_strategy()
        out, mapping = renumber(ds)
        assert sorted(out.states) == ["s0", "s1", "s2"]
        assert out.validate() == []
