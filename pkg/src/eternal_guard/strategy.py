"""Labelled defending strategies and the combinators that transform them.

A (partial) labelled strategy maps states to guard sets over a game graph
and every strategy-graph edge to explicit move sets in both orientations.
Guards are anonymous: a transition is a set of (from, to) vertex pairs that
covers every non-interface guard on both sides exactly once.

Moves along parallel edges or loops are disambiguated by *hints*: an entry
``(state_a, state_b, u, v) -> edge_id`` says that move uses that edge.  An
unhinted ``(v, v)`` move is a stationary guard, never a loop traversal.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace

from .multigraph import Multigraph, biconnected_blocks, cycle_order

Move = tuple[str, str]


class StrategyError(ValueError):
    """A strategy operation's precondition or invariant failed."""


def converse(moves: frozenset[Move]) -> frozenset[Move]:
    return frozenset((b, a) for a, b in moves)


@dataclass(frozen=True)
class Strategy:
    """Partial labelled strategy; a full one has an empty interface."""

    graph: Multigraph
    states: dict[str, frozenset[str]]  # state id -> occupied vertices
    sedges: frozenset[frozenset[str]]  # unordered strategy-graph edges
    moves: dict[tuple[str, str], frozenset[Move]]  # both orientations
    interface: frozenset[str] = frozenset()
    hints: dict[tuple[str, str, str, str], int] = field(default_factory=dict)

    # -- basics ----------------------------------------------------------

    def state_ids(self) -> list[str]:
        return sorted(self.states, key=natural_key)

    def neighbors_of(self, sid: str) -> list[str]:
        cache = getattr(self, "_nbr_cache", None)
        if cache is None:
            cache = {s: set() for s in self.states}
            for e in self.sedges:
                a, b = tuple(e)
                cache[a].add(b)
                cache[b].add(a)
            cache = {s: sorted(v, key=natural_key) for s, v in cache.items()}
            object.__setattr__(self, "_nbr_cache", cache)
        return cache[sid]

    def guard_count(self) -> int:
        sizes = {len(p) for p in self.states.values()}
        if len(sizes) != 1:
            raise StrategyError(f"non-uniform guard counts: {sorted(sizes)}")
        return sizes.pop()

    def is_complete(self) -> bool:
        n = len(self.states)
        return len(self.sedges) == n * (n - 1) // 2

    def occupied_states(self, v: str) -> list[str]:
        return sorted((s for s, p in self.states.items() if v in p), key=natural_key)

    def hint_for(self, sa: str, sb: str, u: str, v: str) -> int | None:
        return self.hints.get((sa, sb, u, v))

    # -- validation ------------------------------------------------------

    def validate(self) -> list[str]:
        """Every invariant, or a list of violations with coordinates."""
        bad: list[str] = []
        g = self.graph
        for sid, occ in self.states.items():
            for v in occ:
                if v not in g.vertices:
                    bad.append(f"state {sid}: unknown vertex {v}")
        for e in self.sedges:
            if len(e) != 2:
                bad.append(f"strategy edge {sorted(e)} is a self-loop")
                continue
            a, b = sorted(e, key=natural_key)
            for sa, sb in ((a, b), (b, a)):
                if (sa, sb) not in self.moves:
                    bad.append(f"missing transition {sa}->{sb}")
        for (sa, sb), mv in self.moves.items():
            if frozenset((sa, sb)) not in self.sedges:
                bad.append(f"transition {sa}->{sb} without a strategy edge")
                continue
            if self.moves.get((sb, sa)) is not None and converse(mv) != self.moves[(sb, sa)]:
                bad.append(f"transition {sa}->{sb} is not the converse of {sb}->{sa}")
            pa, pb = self.states[sa], self.states[sb]
            src_count: dict[str, int] = {}
            dst_count: dict[str, int] = {}
            for u, v in mv:
                if u not in pa:
                    bad.append(f"{sa}->{sb}: move ({u},{v}) source not occupied")
                if v not in pb:
                    bad.append(f"{sa}->{sb}: move ({u},{v}) target not occupied")
                if u != v and not g.has_edge(u, v):
                    bad.append(f"{sa}->{sb}: move ({u},{v}) is not along an edge")
                src_count[u] = src_count.get(u, 0) + 1
                dst_count[v] = dst_count.get(v, 0) + 1
            for u in pa:
                c = src_count.get(u, 0)
                if u in self.interface:
                    if c > 1:
                        bad.append(f"{sa}->{sb}: interface guard {u} moved {c} times")
                elif c != 1:
                    bad.append(f"{sa}->{sb}: guard {u} has {c} moves, expected 1")
            for v in pb:
                c = dst_count.get(v, 0)
                if v in self.interface:
                    if c > 1:
                        bad.append(f"{sa}->{sb}: interface guard {v} arrived {c} times")
                elif c != 1:
                    bad.append(f"{sa}->{sb}: guard {v} has {c} arrivals, expected 1")
            for u, c in src_count.items():
                if u not in pa:
                    bad.append(f"{sa}->{sb}: stray source {u}")
            for v, c in dst_count.items():
                if v not in pb:
                    bad.append(f"{sa}->{sb}: stray target {v}")
        if not self.interface:
            sizes = {len(p) for p in self.states.values()}
            if len(sizes) > 1:
                bad.append(f"guard counts differ across states: {sorted(sizes)}")
        for (sa, sb, u, v), eid in self.hints.items():
            real = eid if eid >= 0 else -eid - 1  # loops encode direction by sign
            if real not in g.edges:
                bad.append(f"hint {(sa, sb, u, v)} names missing edge {real}")
            elif set(g.edges[real]) != {u, v}:
                bad.append(f"hint {(sa, sb, u, v)} names edge {real} with other endpoints")
        return bad

    def is_defending(self) -> bool:
        """Every vertex is occupied or one transition away, from every state."""
        nbrs: dict[str, set[str]] = {s: set() for s in self.states}
        for e in self.sedges:
            a, b = tuple(e)
            nbrs[a].add(b)
            nbrs[b].add(a)
        for sid, occ in self.states.items():
            reach = set(occ)
            for o in nbrs[sid]:
                reach |= self.states[o]
            if reach != self.graph.vertices:
                return False
        return True

    # -- serialization ---------------------------------------------------

    def to_json(self) -> str:
        verts = self.graph.sorted_vertices()
        edges = sorted(tuple(sorted(uv)) for uv in self.graph.edges.values())
        states = {s: sorted(p) for s, p in self.states.items()}
        sedges = sorted(
            (sorted(e, key=natural_key) for e in self.sedges),
            key=lambda p: (natural_key(p[0]), natural_key(p[1])),
        )
        transitions = {}
        for a, b in sedges:
            transitions[f"{a}->{b}"] = sorted(self.moves[(a, b)])
        doc = {
            "graph": {"vertices": verts, "edges": [list(e) for e in edges]},
            "states": states,
            "strategy_edges": [list(e) for e in sedges],
            "transitions": {k: [list(m) for m in v] for k, v in transitions.items()},
            "complete": self.is_complete(),
        }
        return json.dumps(doc, sort_keys=True, indent=1)

    @staticmethod
    def from_json(text: str) -> "Strategy":
        doc = json.loads(text)
        g = Multigraph.from_pairs(
            doc["graph"]["vertices"], [tuple(e) for e in doc["graph"]["edges"]]
        )
        states = {s: frozenset(p) for s, p in doc["states"].items()}
        sedges = frozenset(frozenset(e) for e in doc["strategy_edges"])
        moves: dict[tuple[str, str], frozenset[Move]] = {}
        for key, mv in doc["transitions"].items():
            a, b = key.split("->")
            mset = frozenset((m[0], m[1]) for m in mv)
            moves[(a, b)] = mset
            moves[(b, a)] = converse(mset)
        st = Strategy(g, states, sedges, moves)
        bad = st.validate()
        if bad:
            raise StrategyError("; ".join(bad[:5]))
        return st


def natural_key(s: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", s)]


# -- construction helpers ---------------------------------------------------


def make_strategy(
    graph: Multigraph,
    states: dict[str, frozenset[str]],
    oriented_moves: dict[tuple[str, str], frozenset[Move]],
    interface: frozenset[str] = frozenset(),
    hints: dict[tuple[str, str, str, str], int] | None = None,
) -> Strategy:
    """Build a symmetric strategy from one orientation per edge."""
    moves: dict[tuple[str, str], frozenset[Move]] = {}
    sedges = set()
    for (a, b), mv in oriented_moves.items():
        sedges.add(frozenset((a, b)))
        moves[(a, b)] = frozenset(mv)
        moves.setdefault((b, a), converse(frozenset(mv)))
    full_hints = dict(hints or {})
    for (sa, sb, u, v), eid in list(full_hints.items()):
        full_hints.setdefault((sb, sa, v, u), eid)
    return Strategy(graph, dict(states), frozenset(sedges), moves, interface, full_hints)


def symmetrize(ds: Strategy) -> Strategy:
    """Fill in the converse orientation of every transition."""
    moves = dict(ds.moves)
    for e in ds.sedges:
        a, b = tuple(e)
        if (a, b) in moves and (b, a) not in moves:
            moves[(b, a)] = converse(moves[(a, b)])
        elif (b, a) in moves and (a, b) not in moves:
            moves[(a, b)] = converse(moves[(b, a)])
    return replace(ds, moves=moves)


def completed_moves(pa: frozenset[str], pb: frozenset[str], partial: set[Move]) -> frozenset[Move]:
    """Add stationary moves for guards untouched by the given moves."""
    srcs = {u for u, _ in partial}
    dsts = {v for _, v in partial}
    out = set(partial)
    for v in pa & pb:
        if v not in srcs and v not in dsts:
            out.add((v, v))
    return frozenset(out)


# -- edge states and properties ---------------------------------------------


@dataclass(frozen=True)
class EdgeStates:
    left: frozenset[str]  # states with an outgoing (u, v) move
    right: frozenset[str]  # states with an outgoing (v, u) move
    neutral: frozenset[str]


def edge_states(ds: Strategy, u: str, v: str, eid: int | None = None) -> EdgeStates:
    """Partition the states by whether they traverse (u, v), per parallel edge.

    With parallel edges (or a loop) the hint table decides which physical
    edge a move uses; then only moves hinted onto ``eid`` count.  For a loop,
    only hinted (u, u) moves are traversals at all.
    """
    g = ds.graph
    eids = g.edges_between(u, v) if u != v else g.loops_at(u)
    if eid is None:
        if len(eids) != 1:
            raise StrategyError(f"edge ({u},{v}) is ambiguous; pass an edge id")
        eid = eids[0]
    ambiguous = len(eids) > 1 or u == v
    left, right = set(), set()
    for (sa, sb), mv in ds.moves.items():
        for a, b in mv:
            if (a, b) == (u, v) or (a, b) == (v, u):
                if u == v:
                    # loops: the hint's sign carries the traversal direction
                    h = ds.hint_for(sa, sb, a, b)
                    if h == eid:
                        left.add(sa)
                    elif h == -eid - 1:
                        right.add(sa)
                    continue
                if ambiguous:
                    h = ds.hint_for(sa, sb, a, b)
                    if h is None:
                        raise StrategyError(
                            f"unhinted move ({a},{b}) in {sa}->{sb} over parallel edges"
                        )
                    if h != eid:
                        continue
                if (a, b) == (u, v):
                    left.add(sa)
                if (a, b) == (v, u):
                    right.add(sa)
    neutral = frozenset(ds.states) - left - right
    return EdgeStates(frozenset(left), frozenset(right), neutral)


def dominates(ds: Strategy, state_set: frozenset[str]) -> bool:
    if not state_set:
        return False
    nbrs: dict[str, set[str]] = {s: {s} for s in ds.states}
    for e in ds.sedges:
        a, b = tuple(e)
        nbrs[a].add(b)
        nbrs[b].add(a)
    return all(state_set & nbrs[s] for s in ds.states)


def has_proper_edge_states(ds: Strategy, u: str, v: str, eid: int | None = None) -> bool:
    es = edge_states(ds, u, v, eid)
    return (
        bool(es.left)
        and bool(es.right)
        and bool(es.neutral)
        and not (es.left & es.right)
        and dominates(ds, es.left)
        and dominates(ds, es.right)
        and dominates(ds, es.neutral)
    )


WHITE_LIKE = "white"


def required_property_edges(g: Multigraph) -> list[tuple[int, str]]:
    """Cycle edges that a proper certificate must keep traversable.

    Returns (edge id, reason) pairs: edges incident to a white or connecting
    cycle vertex, plus all edges of a (c,r,r,c) leaf cycle, minus the
    connecting-red edges of (c,w,w,r,c)- and (c,r,w,w,r,c)-shaped leaf
    cycles.
    """
    out: list[tuple[int, str]] = []
    for block in biconnected_blocks(g):
        if not block.is_cycle or len(block.vertices) < 3:
            continue
        order = cycle_order(g, block)
        cyc = set(order)
        cat: dict[str, str] = {}
        for x in order:
            outside = [w for w in g.neighbors(x) if w not in cyc and g.degree(w) > 1]
            if outside:
                cat[x] = "connecting"
            else:
                n = len(g.leaves_of(x))
                cat[x] = "white" if n == 0 else ("pink" if n == 1 else "red")
        pattern = [cat[x] for x in order]
        conn_count = pattern.count("connecting")
        shape = None
        if conn_count == 1:
            i = pattern.index("connecting")
            rot = pattern[i:] + pattern[:i]
            for cand in (rot, [rot[0]] + rot[1:][::-1]):
                body = tuple(cand[1:])
                if body == ("red", "red"):
                    shape = "crrc"
                elif body in (("white", "white", "red"), ("red", "white", "white")):
                    shape = "cwwrc"
                elif body == ("red", "white", "white", "red"):
                    shape = "crwwrc"
        edge_of = {}
        for i, x in enumerate(order):
            y = order[(i + 1) % len(order)]
            eids = g.edges_between(x, y)
            edge_of[(x, y)] = eids[0]
        for i, x in enumerate(order):
            y = order[(i + 1) % len(order)]
            eid = edge_of[(x, y)]
            need = cat[x] in ("white", "connecting") or cat[y] in ("white", "connecting")
            reason = f"incident to {cat[x]}/{cat[y]}"
            if shape == "crrc":
                need = True
                reason = "leaf cycle (c,r,r,c)"
            elif shape in ("cwwrc", "crwwrc"):
                if {cat[x], cat[y]} == {"connecting", "red"}:
                    need = False
            if need:
                out.append((eid, reason))
    return out


def check_proper(
    ds: Strategy, exempt: frozenset[int] = frozenset()
) -> list[tuple[int, str, bool]]:
    """Property check per required cycle edge; (edge id, reason, ok) triples.

    ``exempt`` lists edges a reduction trace marked as connecting-red edges
    of the two rwwr-shaped leaf cycles, which the theory excludes.
    """
    report = []
    for eid, reason in required_property_edges(ds.graph):
        if eid in exempt:
            continue
        u, v = ds.graph.edges[eid]
        ok = has_proper_edge_states(ds, u, v, eid)
        report.append((eid, reason, ok))
    return report


# -- play ---------------------------------------------------------------------


def respond(ds: Strategy, current: str, attacked: str) -> tuple[str, frozenset[Move]]:
    """Defender's reply: stay if covered, else smallest neighbor state covering."""
    if attacked not in ds.graph.vertices:
        raise StrategyError(f"unknown vertex {attacked}")
    occ = ds.states[current]
    if attacked in occ:
        return current, frozenset((v, v) for v in occ)
    for nxt in ds.neighbors_of(current):
        if attacked in ds.states[nxt]:
            return nxt, ds.moves[(current, nxt)]
    raise StrategyError(f"no response to attack on {attacked} from {current}")


# -- cut / compose / interface equivalence ------------------------------------


def induced_subgraph(g: Multigraph, verts: set[str]) -> Multigraph:
    edges = {eid: uv for eid, uv in g.edges.items() if uv[0] in verts and uv[1] in verts}
    return Multigraph(frozenset(verts), edges)


def substrategy(ds: Strategy, verts: set[str], interface: frozenset[str]) -> Strategy:
    sub = induced_subgraph(ds.graph, verts)
    states = {s: p & sub.vertices for s, p in ds.states.items()}
    moves = {
        k: frozenset((a, b) for a, b in mv if a in sub.vertices and b in sub.vertices)
        for k, mv in ds.moves.items()
    }
    hints = {
        k: eid for k, eid in ds.hints.items() if eid in sub.edges
    }
    return Strategy(sub, states, ds.sedges, moves, interface, hints)


def cut(ds: Strategy, separator: set[str]) -> tuple[Strategy, Strategy]:
    """Split along a separator into two compatible partial strategies."""
    rest = ds.graph.vertices - separator
    comps: list[set[str]] = []
    seen: set[str] = set()
    for v in sorted(rest):
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for y in ds.graph.neighbors(x):
                if y in rest and y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        comps.append(comp)
    if not comps:
        a_side: set[str] = set()
        c_side: set[str] = set()
    else:
        a_side = comps[0]
        c_side = set().union(*comps[1:]) if len(comps) > 1 else set()
    r = frozenset(separator)
    return (
        substrategy(ds, a_side | separator, r),
        substrategy(ds, c_side | separator, r),
    )


def compose(p1: Strategy, p2: Strategy) -> Strategy:
    """Glue two compatible partial strategies into a full labelled strategy."""
    overlap = p1.graph.vertices & p2.graph.vertices
    if p1.interface != p2.interface or frozenset(overlap) != p1.interface:
        raise StrategyError("compose: graphs must overlap exactly in the interface")
    if set(p1.states) != set(p2.states) or p1.sedges != p2.sedges:
        raise StrategyError("compose: strategy graphs differ")
    edges = dict(p1.graph.edges)
    for eid, uv in p2.graph.edges.items():
        if eid in edges and set(edges[eid]) != set(uv):
            raise StrategyError(f"compose: edge id {eid} conflicts")
        edges[eid] = uv
    g = Multigraph(p1.graph.vertices | p2.graph.vertices, edges)
    states = {s: p1.states[s] | p2.states[s] for s in p1.states}
    moves = {}
    for key in set(p1.moves) | set(p2.moves):
        moves[key] = p1.moves.get(key, frozenset()) | p2.moves.get(key, frozenset())
    hints = {**p1.hints, **p2.hints}
    out = Strategy(g, states, p1.sedges, moves, frozenset(), hints)
    bad = out.validate()
    if bad:
        raise StrategyError("compose produced an invalid strategy: " + "; ".join(bad[:3]))
    return out


def interface_equivalent(p1: Strategy, p2: Strategy) -> tuple[bool, int | None]:
    """Check interchangeability across a shared interface; return (ok, K).

    The move clause is interpreted as coverage: for every oriented state pair
    and interface vertex, both strategies must agree on whether some move
    leaves it and whether some move enters it.  K is the uniform guard-count
    difference; a non-constant difference is an error, never a result.
    """
    if p1.interface != p2.interface:
        return False, None
    if set(p1.states) != set(p2.states) or p1.sedges != p2.sedges:
        return False, None
    r = p1.interface
    for s in p1.states:
        if p1.states[s] & r != p2.states[s] & r:
            return False, None
    for e in p1.sedges:
        a, b = tuple(e)
        for key in ((a, b), (b, a)):
            m1 = p1.moves.get(key, frozenset())
            m2 = p2.moves.get(key, frozenset())
            for u in r:
                if (any(x == u for x, _ in m1) != any(x == u for x, _ in m2)) or (
                    any(y == u for _, y in m1) != any(y == u for _, y in m2)
                ):
                    return False, None
    deltas = {len(p2.states[s]) - len(p1.states[s]) for s in p1.states}
    if len(deltas) != 1:
        raise StrategyError(f"interface-equivalent pair with non-constant K: {sorted(deltas)}")
    return True, deltas.pop()


def expand(ds: Strategy, piece: Strategy, replacement: Strategy) -> Strategy:
    """Swap an interface-equivalent replacement into a full strategy.

    The piece must be a substrategy of ds; everything it claims (interior
    vertices, its edges, its moves) is removed and the replacement composed
    onto what remains.
    """
    ok, _ = interface_equivalent(piece, replacement)
    if not ok:
        raise StrategyError("expand: replacement is not interface equivalent to the piece")
    inner = piece.graph.vertices - piece.interface
    rest_verts = ds.graph.vertices - inner
    rest_edges = {
        eid: uv
        for eid, uv in ds.graph.edges.items()
        if uv[0] in rest_verts and uv[1] in rest_verts and eid not in piece.graph.edges
    }
    rest_g = Multigraph(frozenset(rest_verts), rest_edges)
    rest_states = {s: p - inner for s, p in ds.states.items()}
    rest_moves = {}
    for k, mv in ds.moves.items():
        claimed = piece.moves.get(k, frozenset())
        rest_moves[k] = frozenset(
            m for m in mv if m[0] in rest_verts and m[1] in rest_verts and m not in claimed
        )
    rest_hints = {k: e for k, e in ds.hints.items() if e in rest_edges}
    rest = Strategy(rest_g, rest_states, ds.sedges, rest_moves, piece.interface, rest_hints)
    return compose(rest, replacement)


# -- graph Cartesian product over a subset ------------------------------------


@dataclass(frozen=True)
class ProductResult:
    strategy: Strategy
    lineage: dict[str, tuple[str, str | None]]  # new id -> (origin, label or None)
    classes: dict[str, frozenset[str]]  # label -> new ids created with it


def gcpos(ds: Strategy, subset: set[str], labels: list[str]) -> ProductResult:
    """Cartesian product of the strategy graph with a clique over a subset.

    States in ``subset`` split into one copy per label (K_n vertices); other
    states survive as singletons.  Copies inherit their origin's guard set;
    same-origin copies are joined by all-stationary transitions; Def-37 edges
    copy the origin transition.  The caller rewires guards afterwards.
    """
    if not set(subset) <= set(ds.states):
        raise StrategyError("subset references unknown states")
    if len(set(labels)) != len(labels) or not labels:
        raise StrategyError("labels must be non-empty and distinct")
    new_states: dict[str, frozenset[str]] = {}
    lineage: dict[str, tuple[str, str | None]] = {}
    classes: dict[str, set[str]] = {lab: set() for lab in labels}
    name_of: dict[tuple[str, str | None], str] = {}
    for s in ds.state_ids():
        if s in subset:
            for lab in labels:
                nid = f"{s}|{lab}"
                new_states[nid] = ds.states[s]
                lineage[nid] = (s, lab)
                classes[lab].add(nid)
                name_of[(s, lab)] = nid
        else:
            new_states[s] = ds.states[s]
            lineage[s] = (s, None)
            name_of[(s, None)] = s

    def copies(s: str) -> list[tuple[str, str | None]]:
        if s in subset:
            return [(name_of[(s, lab)], lab) for lab in labels]
        return [(s, None)]

    moves: dict[tuple[str, str], frozenset[Move]] = {}
    sedges: set[frozenset[str]] = set()
    hints: dict[tuple[str, str, str, str], int] = {}
    for e in ds.sedges:
        x, y = tuple(e)
        for nx, lx in copies(x):
            for ny, ly in copies(y):
                # Def-37 edge: labels equal, or either side unsplit
                if lx is not None and ly is not None and lx != ly:
                    continue
                sedges.add(frozenset((nx, ny)))
                moves[(nx, ny)] = ds.moves[(x, y)]
                moves[(ny, nx)] = ds.moves[(y, x)]
                for (sa, sb, u, v), eid in ds.hints.items():
                    if (sa, sb) == (x, y):
                        hints[(nx, ny, u, v)] = eid
                    elif (sa, sb) == (y, x):
                        hints[(ny, nx, u, v)] = eid
    # K-edges between same-origin copies: all guards stationary
    for s in sorted(subset):
        for i, li in enumerate(labels):
            for lj in labels[i + 1 :]:
                a, b = name_of[(s, li)], name_of[(s, lj)]
                sedges.add(frozenset((a, b)))
                stat = frozenset((v, v) for v in ds.states[s])
                moves[(a, b)] = stat
                moves[(b, a)] = stat
    out = Strategy(ds.graph, new_states, frozenset(sedges), moves, ds.interface, hints)
    return ProductResult(out, lineage, {k: frozenset(v) for k, v in classes.items()})


def renumber(ds: Strategy) -> tuple[Strategy, dict[str, str]]:
    """Relabel states canonically as s0..sN (natural order of old ids)."""
    mapping = {old: f"s{i}" for i, old in enumerate(ds.state_ids())}
    states = {mapping[s]: p for s, p in ds.states.items()}
    sedges = frozenset(frozenset(mapping[x] for x in e) for e in ds.sedges)
    moves = {(mapping[a], mapping[b]): mv for (a, b), mv in ds.moves.items()}
    hints = {(mapping[a], mapping[b], u, v): e for (a, b, u, v), e in ds.hints.items()}
    return Strategy(ds.graph, states, sedges, moves, ds.interface, hints), mapping


# -- strategy transforms -------------------------------------------------------


def extend_leaves(
    ds: Strategy, u: str, leaves: list[str], edge_ids: dict[str, int] | None = None
) -> Strategy:
    """Attach new pendant leaves to u, defended by one extra guard.

    The states occupying u split into one class per leaf; the new guard sits
    on that leaf there and on u itself everywhere else, so u ends up
    permanently occupied.  ``edge_ids`` fixes the ids of the new edges.
    """
    anchor = ds.occupied_states(u)
    if not anchor:
        raise StrategyError(f"extend_leaves: {u} is never occupied")
    if not leaves:
        raise StrategyError("extend_leaves: no leaves given")
    if edge_ids:
        g2 = ds.graph.with_changes(
            add_vertices=leaves, add_edges={edge_ids[leaf]: (u, leaf) for leaf in leaves}
        )
    else:
        g2 = ds.graph.with_changes(
            add_vertices=leaves, add_edges=[(u, leaf) for leaf in leaves]
        )
    prod = gcpos(ds, set(anchor), leaves)
    st = prod.strategy
    leaf_of = {sid: prod.lineage[sid][1] for sid in st.states}
    states = {
        sid: occ | {leaf_of[sid] if leaf_of[sid] is not None else u}
        for sid, occ in st.states.items()
    }
    moves: dict[tuple[str, str], frozenset[Move]] = {}
    for (a, b), mv in st.moves.items():
        la, lb = leaf_of[a], leaf_of[b]
        mv = set(mv)
        if la is not None and lb is not None:
            if la == lb:
                extra = {(la, la)}
            else:
                # same-origin clique edge: the base is all-stationary, so the
                # extra guard slides leaf -> u while u's guard takes the next
                mv.discard((u, u))
                extra = {(la, u), (u, lb)}
        elif la is not None:
            # the extra guard returns home; ds moved u's old guard out itself
            extra = {(la, u)}
        elif lb is not None:
            extra = {(u, lb)}
        else:
            extra = {(u, u)}
        moves[(a, b)] = frozenset(mv | extra)
    out = Strategy(g2, states, st.sedges, moves, st.interface, st.hints)
    bad = out.validate()
    if bad:
        raise StrategyError("extend_leaves broke validity: " + "; ".join(bad[:3]))
    return out


def make_permanently_defended(ds: Strategy) -> Strategy:
    """Keep every vertex with >= 2 pendant leaves occupied in all states.

    Same guard count; states parking a guard on such a leaf while the hub is
    empty are split per the always-present-guard construction.
    """
    out = ds
    for u in sorted(out.graph.vertices):
        leaves = out.graph.leaves_of(u)
        if len(leaves) < 2:
            continue
        while True:
            missing = [s for s in out.state_ids() if u not in out.states[s]]
            if not missing:
                break
            out = _occupy_hub(out, u)
    return out


def _occupy_hub(ds: Strategy, u: str) -> Strategy:
    leaves = ds.graph.leaves_of(u)
    missing = set(ds.state_ids()) - set(ds.occupied_states(u))
    # every missing state must occupy all leaves of u (they are only
    # defensible from u or themselves)
    for s in missing:
        uncovered = [l for l in leaves if l not in ds.states[s]]
        if uncovered:
            raise StrategyError(
                f"state {s} leaves hub {u} and leaf {uncovered[0]} both empty"
            )
    v, w = leaves[0], leaves[1]
    prod = gcpos(ds, missing, [v, w])
    st = prod.strategy
    kind = {sid: prod.lineage[sid][1] for sid in st.states}  # None | v | w
    dropped = {v: w, w: v}  # the copy keeping leaf L releases the other onto u
    states = {}
    for sid, occ in st.states.items():
        lab = kind[sid]
        states[sid] = occ if lab is None else (occ | {u}) - {dropped[lab]}
    moves = {}
    for (a, b), mv in st.moves.items():
        ka, kb = kind[a], kind[b]
        if ka is not None and kb is not None and ka != kb:
            # the two copies of one origin: slide the guard leaf -> u -> leaf
            mv = completed_moves(states[a], states[b], {(ka, u), (u, kb)})
        else:
            out_mv = set()
            for x, y in mv:
                if ka is not None and x == dropped[ka]:
                    x = u
                if kb is not None and y == dropped[kb]:
                    y = u
                out_mv.add((x, y))
            mv = frozenset(out_mv)
        moves[(a, b)] = frozenset(mv)
    out = Strategy(ds.graph, states, st.sedges, moves, st.interface, st.hints)
    bad = out.validate()
    if bad:
        raise StrategyError("always-present-guard transform failed: " + "; ".join(bad[:3]))
    return out


def dedup_complete(ds: Strategy) -> Strategy:
    """Merge states with identical guard sets; sound only on complete graphs."""
    if not ds.is_complete():
        return ds
    rep: dict[frozenset[str], str] = {}
    mapping = {}
    for s in ds.state_ids():
        occ = ds.states[s]
        if occ in rep:
            mapping[s] = rep[occ]
        else:
            rep[occ] = s
            mapping[s] = s
    if len(rep) == len(ds.states):
        return ds
    kept = set(rep.values())
    states = {s: ds.states[s] for s in kept}
    sedges = set()
    moves = {}
    for e in sorted(ds.sedges, key=lambda e: sorted(map(natural_key, e))):
        a, b = sorted(e, key=natural_key)
        a2, b2 = mapping[a], mapping[b]
        if a2 != b2 and frozenset((a2, b2)) not in sedges:
            sedges.add(frozenset((a2, b2)))
            moves[(a2, b2)] = ds.moves[(a, b)]
            moves[(b2, a2)] = ds.moves[(b, a)]
    hints = {}
    for (a, b, u, v), e in ds.hints.items():
        if (mapping[a], mapping[b]) in moves and ds.hints[(a, b, u, v)] == e:
            hints[(mapping[a], mapping[b], u, v)] = e
    return Strategy(ds.graph, states, frozenset(sedges), moves, ds.interface, hints)


def prune_complete(ds: Strategy) -> Strategy:
    """Shrink a complete defending strategy to <= |V| - k + 1 states."""
    if not ds.is_complete():
        raise StrategyError("prune_complete requires a complete strategy graph")
    ids = ds.state_ids()
    anchor = ids[0]
    chosen = {anchor}
    covered = set(ds.states[anchor])
    for v in ds.graph.sorted_vertices():
        if v in covered:
            continue
        s = ds.occupied_states(v)[0]
        chosen.add(s)
        covered |= set(ds.states[s])
    states = {s: ds.states[s] for s in chosen}
    sedges = frozenset(e for e in ds.sedges if e <= chosen)
    moves = {k: mv for k, mv in ds.moves.items() if k[0] in chosen and k[1] in chosen}
    hints = {k: e for k, e in ds.hints.items() if k[0] in chosen and k[1] in chosen}
    return Strategy(ds.graph, states, sedges, moves, ds.interface, hints)
