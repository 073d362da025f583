"""Exact game values on small graphs by greatest-fixpoint elimination.

A configuration is a sorted tuple of occupied vertices (a set in EDN mode,
a multiset in EGC mode).  The safe set for k guards is the largest set S of
configurations such that every member can answer every vertex attack inside
S; the game value is the least k with a non-empty safe set.
"""

from __future__ import annotations

import os
from enum import Enum
from itertools import combinations, combinations_with_replacement

from .multigraph import Multigraph


class GameMode(Enum):
    EDN = "edn"  # at most one guard per vertex
    EGC = "egc"  # multiple guards may share a vertex


class CapExceeded(RuntimeError):
    """The configured enumeration budget would be exceeded."""


DEFAULT_MAX_CONFIGS = 2_000_000
DEFAULT_MAX_MATCHING_CALLS = 10**9


def _max_configs(override: int | None) -> int:
    if override is not None:
        return override
    env = os.environ.get("ETERNAL_GUARD_MAX_CONFIGS")
    return int(env) if env else DEFAULT_MAX_CONFIGS


Configuration = tuple[str, ...]


def mutually_traversable(
    g: Multigraph, c1: Configuration, c2: Configuration, mode: GameMode = GameMode.EDN
) -> bool:
    """True iff a perfect matching pairs the guards of c1 to c2 along edges.

    Guards may stay in place; parallel edges collapse and loops change
    nothing.  Mode only affects which configurations are legal, not the
    matching itself.
    """
    if len(c1) != len(c2):
        raise ValueError("configurations must have equal size")
    n = len(c1)
    targets = list(c2)
    adj: list[list[int]] = []
    for u in c1:
        row = [j for j, v in enumerate(targets) if u == v or g.has_edge(u, v)]
        adj.append(row)
    # Kuhn's augmenting-path matching
    match_to: list[int | None] = [None] * n

    def try_augment(i: int, seen: list[bool]) -> bool:
        for j in adj[i]:
            if not seen[j]:
                seen[j] = True
                if match_to[j] is None or try_augment(match_to[j], seen):
                    match_to[j] = i
                    return True
        return False

    matched = 0
    for i in range(n):
        if try_augment(i, [False] * n):
            matched += 1
        else:
            return False
    return matched == n


def _enumerate_configs(g: Multigraph, k: int, mode: GameMode, cap: int) -> list[Configuration]:
    verts = g.sorted_vertices()
    if mode is GameMode.EDN:
        if k > len(verts):
            return []
        from math import comb

        total = comb(len(verts), k)
        if total > cap:
            raise CapExceeded(f"{total} configurations exceed cap {cap}")
        return [tuple(c) for c in combinations(verts, k)]
    from math import comb

    total = comb(len(verts) + k - 1, k)
    if total > cap:
        raise CapExceeded(f"{total} configurations exceed cap {cap}")
    return [tuple(c) for c in combinations_with_replacement(verts, k)]


def _is_dominating(g: Multigraph, config: Configuration) -> bool:
    covered = set()
    for v in set(config):
        covered.add(v)
        covered.update(g.neighbors(v))
    return covered == g.vertices


def safe_configurations(
    g: Multigraph, k: int, mode: GameMode = GameMode.EDN, max_configs: int | None = None
) -> set[Configuration]:
    """Greatest set of configurations that can defend forever with k guards.

    Iterated elimination: drop any configuration that cannot answer some
    attack within the surviving set, repeat to a fixpoint.  Non-dominating
    configurations are dropped up front (they lose in one round anyway).
    """
    if k < 1:
        raise ValueError("k must be positive")
    cap = _max_configs(max_configs)
    candidates = [c for c in _enumerate_configs(g, k, mode, cap) if _is_dominating(g, c)]
    alive: set[Configuration] = set(candidates)
    trav_cache: dict[tuple[Configuration, Configuration], bool] = {}

    def traversable(a: Configuration, b: Configuration) -> bool:
        key = (a, b) if a <= b else (b, a)
        hit = trav_cache.get(key)
        if hit is None:
            hit = mutually_traversable(g, key[0], key[1], mode)
            trav_cache[key] = hit
        return hit

    verts = g.sorted_vertices()
    changed = True
    while changed:
        changed = False
        for c in sorted(alive):
            ok = True
            for v in verts:
                if v in c:
                    continue
                if not any(
                    v in d and traversable(c, d) for d in alive
                ):
                    ok = False
                    break
            if not ok:
                alive.discard(c)
                changed = True
    return alive


def domination_number(g: Multigraph, max_configs: int | None = None) -> int:
    """Minimum dominating-set size by exhaustive search over subset sizes."""
    cap = _max_configs(max_configs)
    verts = g.sorted_vertices()
    from math import comb

    for k in range(1, len(verts) + 1):
        if comb(len(verts), k) > cap:
            raise CapExceeded(f"domination search exceeds cap at k={k}")
        for c in combinations(verts, k):
            if _is_dominating(g, c):
                return k
    raise AssertionError("unreachable: V dominates itself")


def exact_number(
    g: Multigraph, mode: GameMode = GameMode.EDN, max_configs: int | None = None
) -> int:
    """Least k whose safe set is non-empty; starts at the domination number."""
    gamma = domination_number(g, max_configs)
    upper = len(g.vertices)
    for k in range(gamma, upper + 1):
        if safe_configurations(g, k, mode, max_configs):
            return k
    # EGC can stack everything on one vertex only for K1; EDN of any
    # connected graph is at most n (all vertices occupied)
    raise AssertionError("no defending configuration up to n guards")
