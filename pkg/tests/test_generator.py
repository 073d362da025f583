from eternal_guard.generator import random_cactus
from eternal_guard.multigraph import format_graph, is_cactus


class TestGenerator:
    def test_single_vertex(self):
        g = random_cactus(1, seed=0)
        assert len(g.vertices) == 1 and not g.edges

    def test_deterministic(self):
        a = format_graph(random_cactus(9, seed=42, leaf_bias=0.3))
        b = format_graph(random_cactus(9, seed=42, leaf_bias=0.3))
        assert a == b

    def test_always_cactus_and_connected(self):
        for seed in range(60):
            n = 1 + seed % 14
            g = random_cactus(n, seed=seed, leaf_bias=(seed % 5) / 5)
            assert len(g.vertices) == n
            assert g.is_connected()
            assert is_cactus(g)
