import pytest

from eternal_guard.multigraph import Multigraph, parse_graph
from eternal_guard.oracle import (
    CapExceeded,
    GameMode,
    domination_number,
    exact_number,
    mutually_traversable,
    safe_configurations,
)


def g_from(text):
    return parse_graph(text)


def cycle(n):
    names = [f"v{i}" for i in range(n)]
    return Multigraph.from_pairs(names, [(names[i], names[(i + 1) % n]) for i in range(n)])


def path(n):
    names = [f"v{i}" for i in range(n)]
    return Multigraph.from_pairs(names, [(names[i], names[i + 1]) for i in range(n - 1)])


def star(leaves):
    names = ["c"] + [f"l{i}" for i in range(leaves)]
    return Multigraph.from_pairs(names, [("c", l) for l in names[1:]])


class TestTraversable:
    def test_identity(self):
        g = g_from("a b")
        assert mutually_traversable(g, ("a",), ("a",))

    def test_edge_move(self):
        g = g_from("a b")
        assert mutually_traversable(g, ("a",), ("b",))

    def test_egc_split_from_center(self):
        g = star(2)
        assert mutually_traversable(g, ("c", "c"), ("l0", "l1"), GameMode.EGC)

    def test_not_traversable(self):
        g = path(3)
        assert not mutually_traversable(g, ("v0",), ("v2",))

    def test_size_mismatch(self):
        g = g_from("a b")
        with pytest.raises(ValueError):
            mutually_traversable(g, ("a",), ("a", "b"))


class TestSafeSets:
    def test_k1_single_vertex(self):
        g = g_from("a")
        assert safe_configurations(g, 1) == {("a",)}

    def test_c3_one_guard(self):
        g = cycle(3)
        assert safe_configurations(g, 1) == {("v0",), ("v1",), ("v2",)}

    def test_p3_one_guard_empty(self):
        assert safe_configurations(path(3), 1) == set()

    def test_cap(self):
        with pytest.raises(CapExceeded):
            safe_configurations(cycle(8), 4, max_configs=10)


class TestExactNumbers:
    def test_single_edge(self):
        assert exact_number(g_from("a b")) == 1

    def test_c6(self):
        assert exact_number(cycle(6)) == 2

    def test_k13(self):
        assert exact_number(star(3)) == 2

    def test_p3(self):
        assert exact_number(path(3)) == 2

    def test_c4_modes_agree(self):
        g = cycle(4)
        assert exact_number(g, GameMode.EDN) == exact_number(g, GameMode.EGC) == 2

    def test_cycle_formula_small(self):
        for n in range(3, 9):
            assert exact_number(cycle(n)) == -(-n // 3)


class TestDomination:
    def test_complete(self):
        vs = ["a", "b", "c", "d"]
        g = Multigraph.from_pairs(vs, [(u, v) for i, u in enumerate(vs) for v in vs[i + 1 :]])
        assert domination_number(g) == 1

    def test_c6(self):
        assert domination_number(cycle(6)) == 2

    def test_p7(self):
        assert domination_number(path(7)) == 3


class TestSandwich:
    def test_obs2_on_small_graphs(self):
        import random

        rng = random.Random(7)
        for _ in range(15):
            n = rng.randint(2, 7)
            names = [f"v{i}" for i in range(n)]
            pairs = [(names[i], names[i + 1]) for i in range(n - 1)]
            for i in range(n):
                for j in range(i + 2, n):
                    if rng.random() < 0.3:
                        pairs.append((names[i], names[j]))
            g = Multigraph.from_pairs(names, pairs)
            gamma = domination_number(g)
            egc = exact_number(g, GameMode.EGC)
            edn = exact_number(g, GameMode.EDN)
            assert gamma <= egc <= edn <= 2 * gamma
