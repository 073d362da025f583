"""Strategy synthesis: replay a reduction trace backwards into a certificate.

Every reduction kind has an expansion that rewrites the current strategy
into one for the pre-reduction graph, adding exactly the step's guard delta.
Each expansion asserts validity, defense, and the delta, so a mistake in the
intricate constructions surfaces as a loud failure instead of a wrong
certificate.
"""

from __future__ import annotations

from itertools import combinations

from .multigraph import Multigraph
from .reducer import ReductionKind, ReductionStep, ReductionTrace, unapply_step
from .strategy import (
    Move,
    Strategy,
    StrategyError,
    completed_moves,
    converse,
    dominates,
    edge_states,
    extend_leaves,
    gcpos,
    has_proper_edge_states,
    make_strategy,
    natural_key,
    renumber,
)


class SynthesisError(RuntimeError):
    """An expansion's invariants failed; carries the offending step."""


def _check(st: Strategy, ctx: str, defending: bool = True) -> Strategy:
    bad = st.validate()
    if bad:
        raise SynthesisError(f"{ctx}: invalid strategy: " + "; ".join(bad[:4]))
    if defending and not st.is_defending():
        raise SynthesisError(f"{ctx}: strategy is not defending")
    return st


# ---------------------------------------------------------------------------
# base strategies
# ---------------------------------------------------------------------------


def base_vertex_strategy(g: Multigraph) -> Strategy:
    (u,) = g.vertices
    return make_strategy(g, {"s0": frozenset({u})}, {})


def base_edge_strategy(g: Multigraph) -> Strategy:
    u, v = sorted(g.vertices)
    return make_strategy(
        g,
        {"s0": frozenset({u}), "s1": frozenset({v})},
        {("s0", "s1"): frozenset({(u, v)})},
    )


def _cycle_names(g: Multigraph) -> list[str]:
    from .multigraph import biconnected_blocks, cycle_order

    block = [b for b in biconnected_blocks(g) if b.is_cycle][0]
    return cycle_order(g, block)


def _greedy_matching(g: Multigraph, src: tuple[str, ...], dst: tuple[str, ...]):
    """Deterministic perfect matching between configurations, or None.

    Prefers keeping guards stationary, then the smallest adjacent target;
    backtracks if the greedy choice strands a later guard.
    """
    order = sorted(src)
    targets = sorted(dst)

    def options(v):
        opts = []
        if v in targets:
            opts.append(v)
        opts.extend(t for t in targets if t != v and g.has_edge(v, t))
        return opts

    used: set[str] = set()
    pick: dict[str, str] = {}

    def solve(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for t in options(v):
            if t in used:
                continue
            used.add(t)
            pick[v] = t
            if solve(i + 1):
                return True
            used.discard(t)
            del pick[v]
        return False

    if not solve(0):
        return None
    return frozenset(pick.items())


def base_cycle_strategy(g: Multigraph) -> Strategy:
    """A defending strategy on a bare cycle with ceil(n/3) guards.

    All cycle edges keep the traversability property: the three-phase
    rotation does it when 3 | n; otherwise the rotation family of the
    two-short-gap spread configuration does (n = 3m+2), and n = 3m+1 falls
    back to a verified search over dominating configurations.
    """
    order = _cycle_names(g)
    n = len(order)
    m = -(-n // 3)
    if n % 3 == 0:
        states = {}
        for k in range(3):
            states[f"s{k}"] = frozenset(order[(3 * i + k) % n] for i in range(m))
        mv = {}
        for a, b in combinations(range(3), 2):
            match = _greedy_matching(g, tuple(states[f"s{a}"]), tuple(states[f"s{b}"]))
            assert match is not None
            mv[(f"s{a}", f"s{b}")] = match
        return make_strategy(g, states, mv)
    if n % 3 == 2:
        # spread with two short gaps at the seam: rotations joined by +-1/+-2
        offsets = [0, 2] + [2 + 3 * j for j in range(1, m - 1)]
        shift_moves = {
            1: {o: o + 1 for o in offsets},
            2: {0: -1, 2: 2, **{o: o - 1 for o in offsets[2:]}},
        }
        return _rotation_strategy(g, order, offsets, shift_moves)
    if n > 4:
        # n = 3m+1: spread with gaps 2,2,3,...,3 joined by +-1/+-2/+-3
        offsets = [0, 2, 4] + [4 + 3 * j for j in range(1, m - 1)]
        shift_moves = {
            1: {o: o + 1 for o in offsets},
            2: {0: -1, 2: 2, 4: 4, **{o: o - 1 for o in offsets[3:]}},
            3: {0: 0, 2: 3, 4: 5, **{o: o for o in offsets[3:]}},
        }
        return _rotation_strategy(g, order, offsets, shift_moves)
    return _searched_cycle_strategy(g, order, m)


def _rotation_strategy(
    g: Multigraph, order: list[str], offsets: list[int], shift_moves: dict[int, dict[int, int]]
) -> Strategy:
    """Rotations of one configuration joined by fixed per-shift move tables."""
    n = len(order)
    states = {
        f"s{i}": frozenset(order[(o + i) % n] for o in offsets) for i in range(n)
    }
    mv = {}
    for i in range(n):
        for d, table in shift_moves.items():
            j = (i + d) % n
            moves = frozenset(
                (order[(src + i) % n], order[(dst + i) % n]) for src, dst in table.items()
            )
            mv[(f"s{i}", f"s{j}")] = moves
    st = make_strategy(g, states, mv)
    return st


def _searched_cycle_strategy(g: Multigraph, order: list[str], m: int) -> Strategy:
    """Duty-directed construction for the one short bare cycle (n = 4).

    A state is a dominating configuration plus a duty vector assigning each
    cycle edge one of left/right/neutral.  Two states are joined by every
    perfect matching whose crossings agree with both duty vectors, so the
    disjointness of edge-state classes holds by construction.  States whose
    neighborhoods cannot defend the cycle are dropped to a fixpoint, then
    the strategy is pruned greedily while all requirements keep holding.
    """
    n = len(order)
    idx = {v: i for i, v in enumerate(order)}
    configs = []
    for combo in combinations(range(n), m):
        cfg = tuple(order[i] for i in combo)
        covered = set()
        for i in combo:
            covered.update({i, (i + 1) % n, (i - 1) % n})
        if len(covered) == n:
            configs.append(cfg)
    configs.sort()

    def edge_dir(u: str, v: str) -> tuple[int, str]:
        i, j = idx[u], idx[v]
        if (i + 1) % n == j:
            return i, "L"
        assert (j + 1) % n == i
        return j, "R"

    def all_matchings(src, dst):
        src = sorted(src)
        out = []

        def rec(k, used, acc):
            if k == len(src):
                out.append(frozenset(acc))
                return
            v = src[k]
            for t in sorted(dst):
                if t in used or (t != v and not g.has_edge(v, t)):
                    continue
                rec(k + 1, used | {t}, acc + [(v, t)])

        rec(0, set(), [])
        return out

    from itertools import product

    duties = list(product("LRN", repeat=n))
    states = {}
    for ci, cfg in enumerate(configs):
        for di, duty in enumerate(duties):
            states[f"s{ci}d{di}"] = (frozenset(cfg), duty)

    match_cache = {}

    def consistent(sa, sb):
        cfg_a, da = states[sa]
        cfg_b, db = states[sb]
        key = (tuple(sorted(cfg_a)), tuple(sorted(cfg_b)))
        if key not in match_cache:
            match_cache[key] = all_matchings(tuple(cfg_a), tuple(cfg_b))
        for match in match_cache[key]:
            ok = True
            for u, v in match:
                if u == v:
                    continue
                e, side = edge_dir(u, v)
                want_a = "L" if side == "L" else "R"
                want_b = "R" if side == "L" else "L"
                if da[e] != want_a or db[e] != want_b:
                    ok = False
                    break
            if ok:
                return match
        return None

    alive = dict(states)
    pair_moves: dict[tuple[str, str], frozenset[Move]] = {}
    ids = sorted(alive, key=natural_key)
    for a, b in combinations(ids, 2):
        match = consistent(a, b)
        if match is not None:
            pair_moves[(a, b)] = match

    def build(keep: set[str]):
        mv = {k: v for k, v in pair_moves.items() if k[0] in keep and k[1] in keep}
        sts = {s: alive[s][0] for s in keep}
        return make_strategy(g, sts, mv)

    def requirements_hold(keep: set[str]) -> bool:
        st = build(keep)
        if not st.is_defending():
            return False
        return all(has_proper_edge_states(st, *g.edges[e], e) for e in g.edges)

    # fixpoint: drop states that cannot defend the whole cycle
    keep = set(ids)
    while True:
        nbr_cfg: dict[str, set[str]] = {s: set(alive[s][0]) for s in keep}
        for (a, b) in pair_moves:
            if a in keep and b in keep:
                nbr_cfg[a] |= alive[b][0]
                nbr_cfg[b] |= alive[a][0]
        drop = {s for s in keep if nbr_cfg[s] != g.vertices}
        if not drop:
            break
        keep -= drop
    if not keep or not requirements_hold(keep):
        raise SynthesisError(f"no proper {m}-guard strategy found for the bare {n}-cycle")
    # greedy prune, largest ids first, keeping every requirement
    for s in sorted(keep, key=natural_key, reverse=True):
        trial = keep - {s}
        if trial and requirements_hold(trial):
            keep = trial
    st = build(keep)
    _check(st, f"searched cycle strategy n={n}")
    return st


# ---------------------------------------------------------------------------
# shared expansion helpers
# ---------------------------------------------------------------------------


def ensure_hub_occupied(st: Strategy, u: str) -> Strategy:
    """Make u permanently occupied (u must carry >= 2 pendant leaves)."""
    from .strategy import _occupy_hub

    while any(u not in st.states[s] for s in st.states):
        st = _occupy_hub(st, u)
    return st


def normalize_swaps(st: Strategy, u: str, v: str) -> Strategy:
    """Replace guard exchanges across {u, v} by stationary moves."""
    moves = {}
    for key, mv in st.moves.items():
        if (u, v) in mv and (v, u) in mv:
            mv = (mv - {(u, v), (v, u)}) | {(u, u), (v, v)}
        moves[key] = mv
    return Strategy(st.graph, st.states, st.sedges, moves, st.interface, st.hints)


def solve_piece_moves(
    g: Multigraph,
    src: frozenset[str],
    dst: frozenset[str],
    iface: str | None,
    use_iface: str,
    forbidden: frozenset[frozenset] = frozenset(),
    forbidden_directed: frozenset[tuple[str, str]] = frozenset(),
) -> frozenset[Move] | None:
    """Perfect move cover between two piece patterns.

    ``use_iface`` is one of "no" (the interface vertex takes no piece move),
    "src", "dst", or "both".  Forbidden entries are vertex pairs whose edge
    must not be crossed (``forbidden_directed`` restricts one direction).
    Prefers stationary moves, then low-index targets.
    """
    sources = sorted(src - {iface})
    targets = set(dst - {iface})
    if use_iface in ("src", "both"):
        sources.append(iface)
    if use_iface in ("dst", "both"):
        targets.add(iface)

    def options(a: str) -> list[str]:
        opts = []
        if a in targets:
            opts.append(a)
        for b in sorted(targets):
            if (
                b != a
                and g.has_edge(a, b)
                and frozenset((a, b)) not in forbidden
                and (a, b) not in forbidden_directed
            ):
                opts.append(b)
        return opts

    pick: dict[str, str] = {}
    used: set[str] = set()

    def rec(i: int) -> bool:
        if i == len(sources):
            return len(used) == len(targets)
        a = sources[i]
        for b in options(a):
            if b in used:
                continue
            pick[a] = b
            used.add(b)
            if rec(i + 1):
                return True
            used.discard(b)
            del pick[a]
        return False

    if len(sources) != len(targets) or not rec(0):
        return None
    return frozenset(pick.items())


def classify_piece(st: Strategy, piece: tuple[str, ...]) -> dict[str, frozenset[str]]:
    return {s: st.states[s] & frozenset(piece) for s in st.states}


def split_by_classes(
    st: Strategy, groups: list[tuple[set[str], list[str]]]
) -> tuple[Strategy, dict[str, str]]:
    """Apply successive clique products; returns (strategy, state -> label).

    Each group is (states-to-split, labels); unsplit states map to ''.
    """
    label_of: dict[str, str] = {s: "" for s in st.states}
    for subset, labels in groups:
        prod = gcpos(st, set(subset), labels)
        st = prod.strategy
        new_label = {}
        for sid in st.states:
            origin, lab = prod.lineage[sid]
            new_label[sid] = lab if lab is not None else label_of[origin]
        label_of = new_label
    return st, label_of


def piece_u_mode(mv: frozenset[Move], u: str, inner: frozenset[str]) -> tuple[str, bool]:
    """How the interface vertex participates in a transition's piece moves.

    Returns (mode, had_stationary): mode per solve_piece_moves; stationary
    (u, u) is reported separately so the caller may spend it on a chain.
    """
    u_src = any(a == u and b in inner for a, b in mv)
    u_dst = any(b == u and a in inner for a, b in mv)
    stat = (u, u) in mv
    if u_src and u_dst:
        return "both", stat
    if u_src:
        return "src", stat
    if u_dst:
        return "dst", stat
    return "no", stat


def rebuild_piece(
    st: Strategy,
    pre_graph: Multigraph,
    step: ReductionStep,
    old_inner: frozenset[str],
    iface: str | None,
    pattern_of: dict[str, frozenset[str]],  # state -> new piece pattern
    forbidden_of: dict[str, frozenset[frozenset]],  # state -> forbidden pairs
    ctx: str,
) -> Strategy:
    """Replace the piece across every state/transition by solved move sets."""
    states = {}
    for s, occ in st.states.items():
        states[s] = (occ - old_inner) | pattern_of[s]
    moves = {}
    dropped_edges: set[frozenset[str]] = set()
    for e in sorted(st.sedges, key=lambda e: sorted(map(natural_key, e))):
        a, b = sorted(e, key=natural_key)
        mv = st.moves[(a, b)]
        kept = frozenset(
            (x, y)
            for x, y in mv
            if x not in old_inner and y not in old_inner and not (x == iface and y == iface)
        )
        mode, stat = piece_u_mode(mv, iface, old_inner) if iface else ("no", False)
        pa = pattern_of[a]
        pb = pattern_of[b]
        forbidden = forbidden_of.get(a, frozenset()) | forbidden_of.get(b, frozenset())
        solved = None
        tried = [mode] + (["both"] if mode == "no" and stat else [])
        for m in tried:
            solved = solve_piece_moves(pre_graph, pa, pb, iface, m, forbidden)
            if solved is not None:
                mode_used = m
                break
        if solved is None:
            # class duties make this pair untransitionable; drop the edge and
            # let the defense check below catch any real coverage loss
            dropped_edges.add(e)
            continue
        if iface is not None and mode_used == "no" and stat:
            solved = solved | {(iface, iface)}
        moves[(a, b)] = kept | solved
        moves[(b, a)] = converse(kept | solved)
    hints = {k: e for k, e in st.hints.items() if e in pre_graph.edges}
    out = Strategy(
        pre_graph, states, st.sedges - frozenset(dropped_edges), moves, st.interface, hints
    )
    return _check(out, ctx)


# ---------------------------------------------------------------------------
# per-reduction expansions
# ---------------------------------------------------------------------------


def expand_t1(st: Strategy, step: ReductionStep, pre: Multigraph) -> Strategy:
    """Dedicated-guard pair defense.

    The new guard oscillates between the pendant pair, one phase per side of
    a spanning-forest two-coloring of the strategy graph, so every state has
    an opposite-phase neighbor and the parent/leaf are always one transition
    away.  No states are added unless the strategy is a single state, where
    the plain two-state swing applies.
    """
    u, v = step.params["u"], step.params["v"]
    ids = st.state_ids()
    if len(ids) == 1 or step.params.get("anchor_parallel"):
        # a lone state cannot split phases, and a pair whose anchor sits on a
        # parallel edge must keep every guard combination for the collapse
        # machinery that follows; fall back to the two-sided product
        states = {}
        for s, occ in st.states.items():
            states[f"{s}|0"] = occ | {u}
            states[f"{s}|1"] = occ | {v}
        moves = {}
        extra = {
            ("0", "0"): (u, u),
            ("1", "1"): (v, v),
            ("0", "1"): (u, v),
            ("1", "0"): (v, u),
        }
        for i, x in enumerate(ids):
            for y in ids[i:]:
                if x == y:
                    base = frozenset((w, w) for w in st.states[x])
                elif frozenset((x, y)) in st.sedges:
                    base = st.moves[(x, y)]
                else:
                    continue
                for sa in ("0", "1"):
                    for sb in ("0", "1"):
                        if x == y and sa >= sb:
                            continue
                        moves[(f"{x}|{sa}", f"{y}|{sb}")] = base | {extra[(sa, sb)]}
        hints = {}
        for (a, b, p, q), e in st.hints.items():
            for sa in ("0", "1"):
                for sb in ("0", "1"):
                    if (f"{a}|{sa}", f"{b}|{sb}") in moves or (
                        f"{b}|{sb}",
                        f"{a}|{sa}",
                    ) in moves:
                        hints[(f"{a}|{sa}", f"{b}|{sb}", p, q)] = e
        return make_strategy(pre, states, moves, hints=hints)
    # two-color each component's spanning tree
    phase: dict[str, int] = {}
    for root in ids:
        if root in phase:
            continue
        phase[root] = 0
        queue = [root]
        while queue:
            x = queue.pop()
            for y in st.neighbors_of(x):
                if y not in phase:
                    phase[y] = 1 - phase[x]
                    queue.append(y)
    if 0 not in phase.values() or 1 not in phase.values():
        raise SynthesisError("t1 expansion: no usable phase split")
    add = {0: u, 1: v}
    states = {s: occ | {add[phase[s]]} for s, occ in st.states.items()}
    pair_move = {(0, 0): (u, u), (1, 1): (v, v), (0, 1): (u, v), (1, 0): (v, u)}
    moves = {
        (a, b): mv | {pair_move[(phase[a], phase[b])]} for (a, b), mv in st.moves.items()
    }
    out = Strategy(pre, states, st.sedges, moves, st.interface, st.hints)
    return _check(out, "t1 expansion")


def _subst_side(mv: frozenset[Move], side: str, old: str, new: str) -> frozenset[Move]:
    out = set()
    for a, b in mv:
        if side == "src" and a == old:
            a = new
        if side == "dst" and b == old:
            b = new
        out.add((a, b))
    return frozenset(out)


def expand_t2(st: Strategy, step: ReductionStep, pre: Multigraph) -> Strategy:
    """Clone a sibling leaf's defense for the re-added leaf."""
    u, v, w = step.params["u"], step.params["v"], step.params["sibling"]
    st = ensure_hub_occupied(st, u)
    anchor = set(st.occupied_states(w))
    prod = gcpos(st, anchor, ["keep", "swap"])
    ps = prod.strategy
    lab = {s: prod.lineage[s][1] for s in ps.states}
    states = {}
    for s, occ in ps.states.items():
        states[s] = occ if lab[s] != "swap" else (occ - {w}) | {v}
    moves = {}
    for (a, b), mv in ps.moves.items():
        la, lb = lab[a], lab[b]
        if la and lb and la != lb and prod.lineage[a][0] == prod.lineage[b][0]:
            da = w if la == "keep" else v
            db = w if lb == "keep" else v
            mv = completed_moves(states[a], states[b], {(da, u), (u, db)})
        else:
            if la == "swap":
                mv = _subst_side(mv, "src", w, v)
            if lb == "swap":
                mv = _subst_side(mv, "dst", w, v)
        moves[(a, b)] = mv
    out = Strategy(pre, states, ps.sedges, moves, ps.interface, ps.hints)
    return _check(out, "t2 expansion")


def expand_t3(st: Strategy, step: ReductionStep, pre: Multigraph) -> Strategy:
    u = step.params["u"]
    leaves = list(step.params["leaves"])
    edge_ids = {}
    for eid, (a, b) in step.removed_edges.items():
        leaf = b if a == u else a
        edge_ids[leaf] = eid
    return extend_leaves(st, u, leaves, edge_ids)


def expand_m1(st: Strategy, step: ReductionStep, pre: Multigraph) -> Strategy:
    """Loop gadget: three-way split of the loop vertex's states."""
    u = step.params["vertex"]
    eid = step.params["loop"]
    anchor = set(st.occupied_states(u))
    if not anchor:
        raise SynthesisError("m1 expansion: loop vertex never occupied")
    prod = gcpos(st, anchor, ["la", "lb", "lc"])
    ps = prod.strategy
    lab = {s: prod.lineage[s][1] for s in ps.states}
    hints = dict(ps.hints)
    for s in ps.states:
        origin, l = prod.lineage[s]
        if l == "la":
            partner = f"{origin}|lb"
            hints[(s, partner, u, u)] = eid
            hints[(partner, s, u, u)] = -eid - 1
    out = Strategy(pre, ps.states, ps.sedges, ps.moves, ps.interface, hints)
    return _check(out, "m1 expansion")


def _prune_lr_pairs(st: Strategy, u: str, v: str, eids: tuple[int, int]) -> Strategy | None:
    """Drop strategy edges joining L- and R-states without their own crossing.

    Such pairs cannot carry the guards a later edge replacement inserts; the
    result is returned only if it stays defending and both edges proper.
    """
    from .strategy import edge_states as _es

    drop: set[frozenset[str]] = set()
    for eid in eids:
        es = _es(st, u, v, eid)
        for e in st.sedges:
            a, b = tuple(e)
            pair_dirs = {(a, b), (b, a)}
            crossing = any(
                m in ((u, v), (v, u)) and st.hint_for(sa, sb, m[0], m[1]) == eid
                for (sa, sb) in pair_dirs
                for m in st.moves[(sa, sb)]
            )
            if crossing:
                continue
            if (a in es.left and b in es.right) or (a in es.right and b in es.left):
                drop.add(e)
    if not drop:
        return st
    out = Strategy(
        st.graph, st.states, st.sedges - frozenset(drop), st.moves, st.interface, st.hints
    )
    if out.validate() or not out.is_defending():
        return None
    if not all(has_proper_edge_states(out, u, v, e) for e in eids):
        return None
    return out


def _m2_machinery(
    st: Strategy, u: str, v: str, kept: int, new_eid: int, pre: Multigraph
) -> tuple[Strategy, dict[str, str]]:
    """Give a parallel pair proper per-edge states; returns (strategy, side map).

    The side map sends each state to "e1"/"e2" for the edge its v-guard is
    associated with (empty string when v is unoccupied).
    """
    st = normalize_swaps(st, u, v)
    l_nat: set[str] = set()
    r_nat: set[str] = set()
    for (a, b), mv in st.moves.items():
        if (u, v) in mv:
            l_nat.add(a)
        if (v, u) in mv:
            r_nat.add(a)
    if l_nat & r_nat:
        raise SynthesisError("m2 expansion: a state crosses the pair both ways")
    side: dict[str, str] = {}
    vset = set(st.occupied_states(v))
    if (l_nat or r_nat) and len(vset) == len(st.states):
        # v is permanently occupied: split the crossing transitions between
        # the two parallel edges instead of splitting states
        def crossing_pairs(stx: Strategy):
            return sorted(
                {
                    tuple(sorted((a, b), key=natural_key))
                    for (a, b), mv in stx.moves.items()
                    if (u, v) in mv or (v, u) in mv
                }
            )

        pairs = crossing_pairs(st)
        if len(pairs) == 1:
            # duplicate the lone crossing by splitting one endpoint state
            prod = gcpos(st, {pairs[0][0]}, ["x1", "x2"])
            st = prod.strategy
            pairs = crossing_pairs(st)
        if len(pairs) < 2:
            raise SynthesisError("m2 expansion: too few crossings to serve both edges")

        def assigned(stx: Strategy, assignment: dict[tuple[str, str], int]):
            hints = dict(stx.hints)
            for (a, b), use in assignment.items():
                for sa, sb in ((a, b), (b, a)):
                    for m in stx.moves[(sa, sb)]:
                        if m in ((u, v), (v, u)):
                            hints[(sa, sb, m[0], m[1])] = use
            return Strategy(pre, stx.states, stx.sedges, stx.moves, stx.interface, hints)

        for flip in (0, 1):
            assignment = {
                p: (kept if (i % 2 == flip) else new_eid) for i, p in enumerate(pairs)
            }
            out = assigned(st, assignment)
            if all(has_proper_edge_states(out, u, v, e) for e in (kept, new_eid)):
                pruned = _prune_lr_pairs(out, u, v, (kept, new_eid))
                if pruned is not None:
                    out = pruned
                return _check(out, "m2 expansion (assignment branch)"), side
        # alternation may starve the neutral classes: split a dominating set
        # of the strategy graph into one duty copy per parallel edge
        touched = {s for p in pairs for s in p}
        uncovered = set(st.states)
        dom: set[str] = set()
        while uncovered:
            best = None
            for s in sorted(st.states, key=natural_key):
                gain = len(uncovered & ({s} | set(st.neighbors_of(s))))
                score = (gain, s not in touched)
                if best is None or score > best[0]:
                    best = (score, s)
            dom.add(best[1])
            uncovered -= {best[1]} | set(st.neighbors_of(best[1]))
        prod = gcpos(st, dom, ["da", "db"])
        st2 = prod.strategy
        duty = {}
        for sid in st2.states:
            origin, lab = prod.lineage[sid]
            duty[sid] = lab
        pairs2 = crossing_pairs(st2)
        assignment = {}
        balance = 0
        for p in pairs2:
            labs = {duty[p[0]], duty[p[1]]} - {None}
            if "da" in labs:
                assignment[p] = new_eid  # da copies stay neutral on the kept edge
            elif "db" in labs:
                assignment[p] = kept
            else:
                assignment[p] = kept if balance % 2 == 0 else new_eid
                balance += 1
        out = assigned(st2, assignment)
        if all(has_proper_edge_states(out, u, v, e) for e in (kept, new_eid)):
            pruned = _prune_lr_pairs(out, u, v, (kept, new_eid))
            if pruned is not None:
                out = pruned
            return _check(out, "m2 expansion (duty-split branch)"), side
        raise SynthesisError("m2 expansion: no proper hint assignment found")
    if l_nat or r_nat:
        prod = gcpos(st, vset, ["mb", "mg"])
        ps = prod.strategy
        lab = {s: prod.lineage[s][1] for s in ps.states}
        hints = dict(ps.hints)
        for (a, b), mv in ps.moves.items():
            labs = {lab[a], lab[b]} - {None}
            if not labs:
                continue
            use = kept if labs <= {"mb"} else (new_eid if labs <= {"mg"} else None)
            if use is None:
                continue  # rungs are stationary, no crossings
            for m in mv:
                if m in ((u, v), (v, u)):
                    hints[(a, b, m[0], m[1])] = use
        for s in ps.states:
            side[s] = {None: "", "mb": "e1", "mg": "e2"}[lab[s]]
        out = Strategy(pre, ps.states, ps.sedges, ps.moves, ps.interface, hints)
        pruned = _prune_lr_pairs(out, u, v, (kept, new_eid))
        if pruned is not None:
            out = pruned
        return _check(out, "m2 expansion (crossing branch)"), side
    both = set(st.occupied_states(u)) & set(st.occupied_states(v))
    if not both:
        raise SynthesisError("m2 expansion: no crossings and no shared u,v state")
    prod = gcpos(st, both, ["mm", "mn", "mo", "mp"])
    ps = prod.strategy
    lab = {s: prod.lineage[s][1] for s in ps.states}
    moves = dict(ps.moves)
    hints = dict(ps.hints)
    for s in ps.state_ids():
        origin, l = prod.lineage[s]
        if l != "mm":
            continue
        n_id, o_id = f"{origin}|mn", f"{origin}|mo"
        swap = {(u, v), (v, u)}
        moves[(s, n_id)] = completed_moves(ps.states[s], ps.states[n_id], swap)
        moves[(n_id, s)] = converse(moves[(s, n_id)])
        hints[(s, n_id, u, v)] = kept
        hints[(s, n_id, v, u)] = new_eid
        hints[(n_id, s, v, u)] = kept
        hints[(n_id, s, u, v)] = new_eid
        moves[(n_id, o_id)] = completed_moves(ps.states[n_id], ps.states[o_id], swap)
        moves[(o_id, n_id)] = converse(moves[(n_id, o_id)])
        hints[(n_id, o_id, u, v)] = new_eid
        hints[(n_id, o_id, v, u)] = kept
        hints[(o_id, n_id, v, u)] = new_eid
        hints[(o_id, n_id, u, v)] = kept
    for s in ps.states:
        l = lab[s]
        occupied_v = v in ps.states[s]
        if not occupied_v:
            side[s] = ""
        elif l in ("mm", "mo", "mp"):
            side[s] = "e2"
        elif l == "mn":
            side[s] = "e1"
        else:
            side[s] = "e1"
    out = Strategy(pre, ps.states, ps.sedges, moves, ps.interface, hints)
    return _check(out, "m2 expansion (swap branch)"), side


def expand_m2(st: Strategy, step: ReductionStep, pre: Multigraph) -> Strategy:
    u, v = step.params["u"], step.params["v"]
    kept, dropped = step.params["kept"], step.params["dropped"]
    out, _ = _m2_machinery(st, u, v, kept, dropped, pre)
    for eid in (kept, dropped):
        if not has_proper_edge_states(out, u, v, eid):
            raise SynthesisError(f"m2 expansion: edge {eid} lacks proper states")
    return out


def _edge_crossers(st: Strategy, a: str, b: str, eid: int):
    """Per oriented state pair, the (a,b)-direction moves over one edge.

    Returns dict (sa, sb) -> set of moves among {(a,b),(b,a)} that use eid
    (hint-aware; for loops the hint sign encodes the direction).
    """
    g = st.graph
    parallel = len(g.edges_between(a, b) if a != b else g.loops_at(a)) > 1
    out: dict[tuple[str, str], set[Move]] = {}
    for (sa, sb), mv in st.moves.items():
        for m in mv:
            if m not in ((a, b), (b, a)) and not (a == b and m == (a, a)):
                continue
            if m[0] == m[1] and a != b:
                continue
            h = st.hint_for(sa, sb, m[0], m[1])
            if a == b:
                if h is None:
                    continue
                if h not in (eid, -eid - 1):
                    continue
            elif parallel:
                if h is None:
                    raise SynthesisError(f"unhinted move {m} over parallel pair {a},{b}")
                if h != eid:
                    continue
            out.setdefault((sa, sb), set()).add(m)
    return out


def expand_c1(st: Strategy, step: ReductionStep, pre: Multigraph) -> Strategy:
    """Insert a one-leaf vertex on an edge with proper states."""
    a, b = step.params["a"], step.params["b"]
    mid, leaf = step.params["mid"], step.params["leaf"]
    eid = step.params["new_edge"]
    if a == b:
        raise SynthesisError("c1 over a loop should have been a parallel pair")
    if not has_proper_edge_states(st, a, b, eid):
        raise SynthesisError(f"c1 expansion: edge ({a},{b}) lacks proper states")
    es = edge_states(st, a, b, eid)
    crossers = _edge_crossers(st, a, b, eid)
    states = {}
    for s, occ in st.states.items():
        add = mid if s in (es.left | es.right) else leaf
        states[s] = occ | {add}
    moves = {}
    for (sa, sb), mv in st.moves.items():
        mv = set(mv)
        for m in crossers.get((sa, sb), ()):
            mv.discard(m)
            if m == (a, b):
                mv |= {(a, mid), (mid, b)}
            else:
                mv |= {(b, mid), (mid, a)}
        xa = mid if sa in (es.left | es.right) else leaf
        xb = mid if sb in (es.left | es.right) else leaf
        srcs = {x for x, _ in mv}
        if xa not in srcs:
            if xa == xb:
                mv.add((xa, xa))
            else:
                mv.add((xa, xb) if xa == mid else (leaf, mid))
        moves[(sa, sb)] = frozenset(mv)
    hints = {k: e for k, e in st.hints.items() if e in pre.edges}
    out = Strategy(pre, states, st.sedges, moves, st.interface, hints)
    return _check(out, "c1 expansion")


def expand_c23(st: Strategy, step: ReductionStep, pre: Multigraph) -> Strategy:
    """Split a leaf-carrying vertex off its red neighbor (group defense)."""
    a, b = step.params["a"], step.params["b"]
    mid = step.params["mid"]
    mid_leaves = list(step.params["mid_leaves"])
    eid = step.params["new_edge"]
    st = ensure_hub_occupied(st, a)
    # temporarily hang the mid's leaves off the red hub, cloning siblings
    temp_edges = {}
    cur = st
    g_work = st.graph
    for t in mid_leaves:
        teid = g_work.next_edge_id()
        g_work = g_work.with_changes(add_vertices=[t], add_edges={teid: (a, t)})
        temp_edges[t] = teid
        sibling = min(x for x in g_work.leaves_of(a) if x != t)
        fake = ReductionStep(
            kind=ReductionKind.T2,
            matched=(a, t),
            removed_vertices=(t,),
            added_vertices=(),
            removed_edges={teid: (a, t)},
            added_edges={},
            k=0,
            params={"u": a, "v": t, "sibling": sibling},
        )
        cur = expand_t2(cur, fake, g_work)
    # re-route everything through the permanently occupied mid vertex
    crossers = _edge_crossers(cur, a, b, eid)
    states = {s: occ | {mid} for s, occ in cur.states.items()}
    moves = {}
    for (sa, sb), mv in cur.moves.items():
        mv = set(mv)
        relay: list[Move] = []
        for m in crossers.get((sa, sb), ()):
            mv.discard(m)
            relay.append(m)
        for t in mid_leaves:
            for m in [m for m in mv if t in m]:
                if m == (t, t):
                    continue
                mv.discard(m)
                relay.append(m)
        # rebuild relayed moves through mid: each item X->Y becomes
        # (X, mid), (mid, Y); a chained pair X->a->Y collapses around mid
        to_a = [m for m in relay if m[1] == a]
        from_a = [m for m in relay if m[0] == a]
        others = [m for m in relay if m[1] != a and m[0] != a]
        if others:
            raise SynthesisError(f"c2/c3 expansion: unexpected relay move {others}")
        if to_a and from_a:
            (x, _), (_, y) = to_a[0], from_a[0]
            mv |= {(x, mid), (mid, y), (a, a)}
        elif to_a:
            (x, _) = to_a[0]
            mv |= {(x, mid), (mid, a)}
        elif from_a:
            (_, y) = from_a[0]
            mv |= {(a, mid), (mid, y)}
        else:
            mv.add((mid, mid))
        moves[(sa, sb)] = frozenset(mv)
    hints = {k: e for k, e in cur.hints.items() if e in pre.edges}
    out = Strategy(pre, states, cur.sedges, moves, cur.interface, hints)
    return _check(out, "c2/c3 expansion")


def expand_c4(st: Strategy, step: ReductionStep, pre: Multigraph) -> Strategy:
    """Re-insert three whites on an edge, loop, or parallel pair."""
    a, b = step.params["a"], step.params["b"]
    c_v, u_v, d_v = step.params["mids"]
    eid = step.params["new_edge"]
    if not has_proper_edge_states(st, a, b, eid):
        raise SynthesisError(f"c4 expansion: edge ({a},{b}) lacks proper states")
    es = edge_states(st, a, b, eid)
    crossers = _edge_crossers(st, a, b, eid)
    add_of = {}
    for s in st.states:
        if s in es.left:
            add_of[s] = d_v
        elif s in es.right:
            add_of[s] = c_v
        else:
            add_of[s] = u_v
    states = {s: occ | {add_of[s]} for s, occ in st.states.items()}
    # re-derived transitions may chase guards through pendant edges but must
    # not disturb any other cycle edge's traversal classes: a crossing of a
    # distant cycle edge is allowed only when both endpoint states already
    # sit in the matching classes
    from .multigraph import biconnected_blocks

    piece_pairs = {
        frozenset(p) for p in ((a, c_v), (c_v, u_v), (u_v, d_v), (d_v, b))
    }
    protected_edges = []
    for blk in biconnected_blocks(st.graph):
        if not blk.is_cycle:
            continue
        for e2 in sorted(blk.edge_ids):
            pair = frozenset(st.graph.edges[e2])
            if pair not in piece_pairs and len(pair) == 2:
                protected_edges.append((e2, tuple(sorted(pair))))
    protected_classes = {}
    for e2, (x, y) in protected_edges:
        try:
            protected_classes[(x, y)] = edge_states(st, x, y, e2)
        except StrategyError:
            continue
    protected = frozenset(frozenset(p) for p in protected_classes)
    pair_moves = {
        (d_v, c_v): None,  # L -> R handled by the crossing rewrite
        (d_v, u_v): (d_v, u_v),
        (u_v, d_v): (u_v, d_v),
        (c_v, u_v): (c_v, u_v),
        (u_v, c_v): (u_v, c_v),
        (c_v, d_v): None,
    }
    moves = {}
    dropped: set[frozenset[str]] = set()
    for (sa, sb), mv in st.moves.items():
        mv = set(mv)
        crossed = False
        for m in crossers.get((sa, sb), ()):
            mv.discard(m)
            crossed = True
            if a == b:
                fwd = st.hint_for(sa, sb, a, a) == eid
                if fwd:
                    mv |= {(a, c_v), (d_v, a)}
                else:
                    mv |= {(a, d_v), (c_v, a)}
            elif m == (a, b):
                mv |= {(a, c_v), (d_v, b)}
            else:
                mv |= {(b, d_v), (c_v, a)}
        xa, xb = add_of[sa], add_of[sb]
        if not crossed:
            if xa == xb:
                mv.add((xa, xa))
            else:
                key = pair_moves.get((xa, xb))
                if key is None:
                    # an L/R pair whose transition never used the replaced
                    # edge: re-derive the whole move set around the inserted
                    # guards, else drop the edge (defense checked below)
                    lo, hi = sorted((sa, sb), key=natural_key)
                    own = frozenset({frozenset((a, b))}) if a != b else frozenset()
                    directed = set()
                    for (x, y), esx in protected_classes.items():
                        for p, q in ((x, y), (y, x)):
                            left = esx.left if (p, q) == (x, y) else esx.right
                            right = esx.right if (p, q) == (x, y) else esx.left
                            if not (lo in left and hi in right):
                                directed.add((p, q))
                    solved = solve_piece_moves(
                        pre, states[lo], states[hi], None, "no", own,
                        frozenset(directed),
                    )
                    if solved is None:
                        dropped.add(frozenset((sa, sb)))
                        continue
                    moves[(lo, hi)] = solved
                    moves[(hi, lo)] = converse(solved)
                    continue
                mv.add(key)
        moves[(sa, sb)] = frozenset(mv)
    hints = {k: e for k, e in st.hints.items() if e in pre.edges}
    out = Strategy(
        pre, states, st.sedges - frozenset(dropped), moves, st.interface, hints
    )
    return _check(out, "c4 expansion")


def expand_c5(st: Strategy, step: ReductionStep, pre: Multigraph) -> Strategy:
    mid = step.params["mid"]
    mid_leaves = list(step.params["mid_leaves"])
    inner = pre.with_changes(drop_vertices=mid_leaves)
    c4_step = ReductionStep(
        kind=ReductionKind.C4,
        matched=step.matched,
        removed_vertices=tuple(v for v in step.removed_vertices if v not in mid_leaves),
        added_vertices=step.added_vertices,
        removed_edges={
            e: uv for e, uv in step.removed_edges.items() if set(uv) <= set(step.matched)
        },
        added_edges=step.added_edges,
        k=1,
        params={
            "a": step.params["a"],
            "b": step.params["b"],
            "mids": tuple(x for x in step.matched[1:-1]),
            "new_edge": step.params["new_edge"],
        },
    )
    cur = expand_c4(st, c4_step, inner)
    edge_ids = {}
    for eid2, (x, y) in step.removed_edges.items():
        if x in mid_leaves:
            edge_ids[x] = eid2
        elif y in mid_leaves:
            edge_ids[y] = eid2
    return extend_leaves(cur, mid, mid_leaves, edge_ids)


def expand_r1(st: Strategy, step: ReductionStep, pre: Multigraph) -> Strategy:
    """Grow the pendant back into a two-white cycle via the pair machinery."""
    u, u1, u2 = step.params["cycle"]
    (v,) = step.params["new_leaves"]
    e1 = next(iter(step.added_edges))
    temp = max(max(st.graph.edges, default=0), max(pre.edges)) + 1
    mid_graph = st.graph.with_changes(add_edges={temp: (u, v)})
    doubled, side = _m2_machinery(st, u, v, e1, temp, mid_graph)
    pos = {}
    for s in doubled.states:
        pos[s] = {"e1": u1, "e2": u2, "": None}[side[s]]
    # the e1-side copy stands on u1, the e2-side on u2
    ids_u = {}
    for eid, (x, y) in step.removed_edges.items():
        ids_u[frozenset((x, y))] = eid
    states = {}
    for s, occ in doubled.states.items():
        occ = occ - {v}
        if pos[s]:
            occ = occ | {pos[s]}
        states[s] = occ
    moves = {}
    for (sa, sb), mv in doubled.moves.items():
        out = set()
        for a, b in mv:
            if (a, b) == (v, v):
                if pos[sa] == pos[sb]:
                    out.add((pos[sa], pos[sa]))
                else:
                    out.add((pos[sa], pos[sb]))
                continue
            if v in (a, b):
                h = doubled.hint_for(sa, sb, a, b)
                repl = u1 if h == e1 else u2
                out.add((repl if a == v else a, repl if b == v else b))
                continue
            out.add((a, b))
        moves[(sa, sb)] = frozenset(out)
    hints = {k: e for k, e in doubled.hints.items() if e in pre.edges}
    out = Strategy(pre, states, doubled.sedges, moves, doubled.interface, hints)
    return _check(out, "r1 expansion")


def expand_r2(st: Strategy, step: ReductionStep, pre: Multigraph) -> Strategy:
    u, u1, u2 = step.params["cycle"]
    leaves = list(step.params["leaf_sets"][u2])
    inner = pre.with_changes(drop_vertices=leaves)
    r1_step = ReductionStep(
        kind=ReductionKind.R1,
        matched=step.matched[:3],
        removed_vertices=(u1, u2),
        added_vertices=step.added_vertices,
        removed_edges={
            e: uv for e, uv in step.removed_edges.items() if set(uv) <= {u, u1, u2}
        },
        added_edges=step.added_edges,
        k=0,
        params={"cycle": (u, u1, u2), "new_leaves": step.params["new_leaves"]},
    )
    cur = expand_r1(st, r1_step, inner)
    edge_ids = {}
    for eid, (x, y) in step.removed_edges.items():
        if x in leaves:
            edge_ids[x] = eid
        elif y in leaves:
            edge_ids[y] = eid
    return extend_leaves(cur, u2, leaves, edge_ids)


def _constant_cycle_classes(
    st: Strategy, u: str, v_new: tuple[str, ...]
) -> dict[str, str]:
    """Shape of the replaced pendant piece per state: which new leaves are held."""
    shapes = {}
    for s, occ in st.states.items():
        held = tuple(sorted(set(v_new) & occ))
        shapes[s] = held
    return shapes


def expand_r345(st: Strategy, step: ReductionStep, pre: Multigraph) -> Strategy:
    """Common machinery for the red-ended constant leaf cycles.

    The reduced piece is the connecting vertex with two fresh leaves; its
    states split into per-leaf group classes plus interior-vertex holders,
    and transitions come from the generic piece solver with per-class
    forbidden edges keeping the required cycle edges proper.
    """
    kind = step.kind
    cyc = list(step.params["cycle"])
    u = cyc[0]
    leaf_sets = step.params["leaf_sets"]
    v1, v2 = step.params["new_leaves"]
    s_v1 = set(st.occupied_states(v1))
    s_v2 = set(st.occupied_states(v2))
    if s_v1 & s_v2:
        raise SynthesisError(f"{kind.value} expansion requires exclusive pendant states")
    if kind == ReductionKind.R3:
        _, u1, u2, u3 = cyc
        r_end = leaf_sets[u3]
        pats = {
            "A": frozenset({u1, u3}),
            "G1": frozenset({u2, u3}),
        }
        v1_labels = ["A"]
        v2_labels = [f"B{t}" for t in r_end] + ["G1"]
        pat_of_label = {"A": pats["A"], "G1": pats["G1"]}
        for t in r_end:
            pat_of_label[f"B{t}"] = frozenset({t, u3})
        delta_pat = frozenset({u3})
        forb = {
            "A": frozenset({frozenset((u2, u3))}),
            "G1": frozenset({frozenset((u, u1))}),
            "": frozenset(),
        }
        for t in r_end:
            forb[f"B{t}"] = frozenset({frozenset((u1, u2))})
        v1_side_labels, v2_side_labels = v1_labels, v2_labels
    elif kind == ReductionKind.R4:
        _, u1, u2, u3 = cyc
        r1_leaves, r3_leaves = leaf_sets[u1], leaf_sets[u3]
        core = frozenset({u1, u3})
        v1_side_labels = [f"A{t}" for t in r1_leaves] + ["G1"]
        v2_side_labels = [f"B{t}" for t in r3_leaves] + ["G2"]
        pat_of_label = {}
        for t in r1_leaves:
            pat_of_label[f"A{t}"] = core | {t}
        for t in r3_leaves:
            pat_of_label[f"B{t}"] = core | {t}
        pat_of_label["G1"] = core | {u2}
        pat_of_label["G2"] = core | {u2}
        delta_pat = core
        forb = {"G1": frozenset({frozenset((u, u3))}), "G2": frozenset({frozenset((u, u1))}), "": frozenset()}
        for t in r1_leaves:
            forb[f"A{t}"] = frozenset({frozenset((u2, u3))})
        for t in r3_leaves:
            forb[f"B{t}"] = frozenset({frozenset((u1, u2))})
    else:  # R5
        _, u1, u2, u3, u4 = cyc
        r1_leaves, r4_leaves = leaf_sets[u1], leaf_sets[u4]
        core = frozenset({u1, u4})
        v1_side_labels = [f"A{t}" for t in r1_leaves] + ["G1"]
        v2_side_labels = [f"B{t}" for t in r4_leaves] + ["G2"]
        pat_of_label = {}
        for t in r1_leaves:
            pat_of_label[f"A{t}"] = core | {t}
        for t in r4_leaves:
            pat_of_label[f"B{t}"] = core | {t}
        pat_of_label["G1"] = core | {u2}
        pat_of_label["G2"] = core | {u3}
        delta_pat = core
        forb = {
            "G1": frozenset({frozenset((u3, u4))}),
            "G2": frozenset({frozenset((u1, u2))}),
            "": frozenset(),
        }
        for t in r1_leaves:
            forb[f"A{t}"] = frozenset({frozenset((u2, u3))})
        for t in r4_leaves:
            forb[f"B{t}"] = frozenset({frozenset((u2, u3))})
    split, label_of = split_by_classes(
        st, [(s_v1, v1_side_labels), (s_v2, v2_side_labels)]
    )
    pattern_of = {}
    forbidden_of = {}
    for s in split.states:
        lab = label_of[s]
        pattern_of[s] = pat_of_label.get(lab, delta_pat)
        forbidden_of[s] = forb.get(lab, frozenset())
    return rebuild_piece(
        split,
        pre,
        step,
        frozenset({v1, v2}),
        u,
        pattern_of,
        forbidden_of,
        f"{kind.value} expansion",
    )


def expand_c6(st: Strategy, step: ReductionStep, pre: Multigraph) -> Strategy:
    """Rebuild an alternating red/white cycle from its pendant remainder.

    The guard patterns follow the red-parity construction: reds stay
    permanently occupied, the whites of one parity class plus the connecting
    vertex form the two всюду states, and each red's leaf group gets one
    state per leaf.  Transitions are solved move covers; each leaf-group
    state is forbidden from crossing the cycle edges flanking its red at
    distance one, which is what keeps every cycle edge's classes proper.
    """
    cyc = list(step.params["cycle"])
    u1 = cyc[0]
    n = len(cyc)
    leaf_sets = step.params["leaf_sets"]
    case = step.params["case"]
    new_leaves = step.params["new_leaves"]

    def V(j: int) -> str:
        return cyc[(j - 1) % n]

    reds = [V(j) for j in range(2, n + 1, 2)]
    wh1 = frozenset(V(j) for j in range(5, n, 4))  # whites at 1 mod 4
    wh3 = frozenset(V(j) for j in range(3, n, 4))  # whites at 3 mod 4

    def w_set(pos: int) -> frozenset[str]:
        if pos % 4 == 0:
            return frozenset(V(j) for j in range(5, pos, 4)) | frozenset(
                V(j) for j in range(pos + 3, n, 4) if (j % 4) == 3
            )
        return frozenset(V(j) for j in range(3, pos, 4) if (j % 4) == 3) | frozenset(
            V(j) for j in range(pos + 3, n, 4) if (j % 4) == 1
        )

    base = frozenset(reds)
    red_positions = list(range(2, n + 1, 2))
    pat: dict[str, frozenset[str]] = {}
    forb: dict[str, frozenset[frozenset]] = {}
    for pos in red_positions:
        for t in leaf_sets[V(pos)]:
            lab = f"b{pos}|{t}"
            extra = {u1} if (case == "pink" and pos % 4 == 0) or case == "red" else set()
            pat[lab] = base | {t} | w_set(pos) | frozenset(extra)
            # a leaf-group state never traverses the cycle edges flanking its
            # red at distance one, except next to the connecting vertex where
            # the two all-white-pattern states take over the duty
            duties = {
                frozenset((V(pos + 1), V(pos + 2))),
                frozenset((V(pos - 2), V(pos - 1))),
            }
            forb[lab] = frozenset(d for d in duties if u1 not in d)
    if case == "pink":
        (v,) = new_leaves
        pat["a1"] = base | wh3 | {u1}
        pat["a2"] = base | wh1 | {u1}
        forb["a1"] = frozenset({frozenset((V(1), V(2)))})
        forb["a2"] = frozenset({frozenset((V(n), V(1)))})
        u1_side = set(st.occupied_states(u1))
        v_side = set(st.occupied_states(v))
        if u1_side & v_side or (u1_side | v_side) != set(st.states):
            raise SynthesisError(
                "c6 expansion requires the pendant piece to hold exactly one "
                "of the connecting vertex and its leaf in every state"
            )
        groups = [
            (u1_side, ["a1", "a2"] + [l for l in pat if l.startswith("b") and int(l[1:].split("|")[0]) % 4 == 0]),
            (v_side, [l for l in pat if l.startswith("b") and int(l[1:].split("|")[0]) % 4 == 2]),
        ]
        old_inner = frozenset({v})
    else:
        v1, v2 = new_leaves
        pat["a1"] = base | wh3 | {u1}
        pat["a2"] = base | wh1 | {u1}
        forb["a1"] = frozenset({frozenset((V(1), V(2)))})
        forb["a2"] = frozenset({frozenset((V(n), V(1)))})
        s1 = set(st.occupied_states(v1))
        s2 = set(st.occupied_states(v2))
        if s1 & s2:
            raise SynthesisError("c6 expansion requires exclusive leaf-group states")
        if any(u1 not in st.states[s] for s in st.states):
            raise SynthesisError("c6 red case requires the connecting vertex occupied throughout")
        groups = [
            (s1, [l for l in pat if l.startswith("b") and int(l[1:].split("|")[0]) % 4 == 0]),
            (s2, ["a1"] + [l for l in pat if l.startswith("b") and int(l[1:].split("|")[0]) % 4 == 2]),
        ]
        old_inner = frozenset({v1, v2})
    split, label_of = split_by_classes(st, groups)
    pattern_of = {}
    forbidden_of = {}
    for s in split.states:
        lab = label_of[s]
        if not lab:
            if case == "pink":
                raise SynthesisError("c6 pink case: unsplit state neither side")
            lab = "a2"
        pattern_of[s] = pat[lab]
        forbidden_of[s] = forb.get(lab, frozenset())
    return rebuild_piece(
        split, pre, step, old_inner, u1, pattern_of, forbidden_of, "c6 expansion"
    )


def expand_r6(st: Strategy, step: ReductionStep, pre: Multigraph) -> Strategy:
    """The two-red triangle: pair machinery plus one leaf group per red."""
    u, u1, u2 = step.params["cycle"]
    leaf_sets = step.params["leaf_sets"]
    all_leaves = [t for x in (u1, u2) for t in leaf_sets[x]]
    inner = pre.with_changes(drop_vertices=all_leaves)
    r1_step = ReductionStep(
        kind=ReductionKind.R1,
        matched=step.matched[:3],
        removed_vertices=(u1, u2),
        added_vertices=step.added_vertices,
        removed_edges={
            e: uv for e, uv in step.removed_edges.items() if set(uv) <= {u, u1, u2}
        },
        added_edges=step.added_edges,
        k=0,
        params={"cycle": (u, u1, u2), "new_leaves": step.params["new_leaves"]},
    )
    cur = expand_r1(st, r1_step, inner)
    for hub in (u1, u2):
        leaves = list(leaf_sets[hub])
        edge_ids = {}
        for eid, (x, y) in step.removed_edges.items():
            if x in leaves:
                edge_ids[x] = eid
            elif y in leaves:
                edge_ids[y] = eid
        inner = inner.with_changes(
            add_vertices=leaves, add_edges={edge_ids[t]: (hub, t) for t in leaves}
        )
        cur = extend_leaves(cur, hub, leaves, edge_ids)
    return cur


EXPANDERS = {
    ReductionKind.T1: expand_t1,
    ReductionKind.T2: expand_t2,
    ReductionKind.T3: expand_t3,
    ReductionKind.M1: expand_m1,
    ReductionKind.M2: expand_m2,
    ReductionKind.C1: expand_c1,
    ReductionKind.C2: expand_c23,
    ReductionKind.C3: expand_c23,
    ReductionKind.C4: expand_c4,
    ReductionKind.C5: expand_c5,
    ReductionKind.C6: expand_c6,
    ReductionKind.R1: expand_r1,
    ReductionKind.R2: expand_r2,
    ReductionKind.R3: expand_r345,
    ReductionKind.R4: expand_r345,
    ReductionKind.R5: expand_r345,
    ReductionKind.R6: expand_r6,
}


def base_strategy(trace: ReductionTrace) -> Strategy:
    g = trace.base_graph
    if trace.base_kind == "vertex":
        return base_vertex_strategy(g)
    if trace.base_kind == "edge":
        return base_edge_strategy(g)
    return base_cycle_strategy(g)


def synthesize(trace: ReductionTrace, g: Multigraph) -> Strategy:
    """Reverse replay: base strategy, then one expansion per step.

    Asserts after every expansion: structural validity, defense, and the
    exact guard delta recorded in the step (the equivalence-constant check).
    """
    from .reducer import apply_step

    graphs = [g]
    cur = g
    for step in trace.steps:
        cur = apply_step(cur, step)
        graphs.append(cur)
    st = base_strategy(trace)
    _check(st, "base strategy")
    for i in reversed(range(len(trace.steps))):
        step = trace.steps[i]
        pre = graphs[i]
        before = st.guard_count()
        st = EXPANDERS[step.kind](st, step, pre)
        bad = st.validate()
        if bad:
            raise SynthesisError(f"step {i} ({step.kind.value}): " + "; ".join(bad[:4]))
        if not st.is_defending():
            raise SynthesisError(f"step {i} ({step.kind.value}): not defending")
        delta = st.guard_count() - before
        if delta != step.k:
            raise SynthesisError(
                f"step {i} ({step.kind.value}): guard delta {delta} != ledger {step.k}"
            )
        got = {e: tuple(sorted(uv)) for e, uv in st.graph.edges.items()}
        want = {e: tuple(sorted(uv)) for e, uv in pre.edges.items()}
        if got != want or st.graph.vertices != pre.vertices:
            raise SynthesisError(f"step {i} ({step.kind.value}): graph mismatch")
        st, _ = renumber(st)
    return st
