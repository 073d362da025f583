"""Random cactus generation for fuzzing: random block attachment."""

from __future__ import annotations

import random

from .multigraph import Multigraph


def random_cactus(n: int, seed: int = 0, leaf_bias: float = 0.5) -> Multigraph:
    """A connected cactus on exactly n vertices, deterministic per seed.

    Grows by attaching blocks to a random existing vertex: a pendant edge
    with probability ``leaf_bias``, otherwise a cycle of length 3-6 (capped
    by the remaining budget).
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = random.Random(seed)
    names = [f"v{i}" for i in range(n)]
    verts = [names[0]]
    pairs: list[tuple[str, str]] = []
    free = list(names[1:])
    while free:
        host = rng.choice(verts)
        if rng.random() < leaf_bias or len(free) < 2:
            leaf = free.pop(0)
            verts.append(leaf)
            pairs.append((host, leaf))
        else:
            size = rng.randint(3, 6)
            take = min(size - 1, len(free))
            ring = [host] + [free.pop(0) for _ in range(take)]
            verts.extend(ring[1:])
            for a, b in zip(ring, ring[1:]):
                pairs.append((a, b))
            pairs.append((ring[-1], ring[0]))
    return Multigraph.from_pairs(names, pairs)
