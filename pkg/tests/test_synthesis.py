import random

import pytest

from eternal_guard.generator import random_cactus
from eternal_guard.multigraph import Multigraph, parse_graph
from eternal_guard.oracle import exact_number
from eternal_guard.reducer import ReductionKind, solve_number, synthesize, trace_exemptions
from eternal_guard.strategy import (
    check_proper,
    has_proper_edge_states,
    respond,
)
from eternal_guard.synthesis import SynthesisError, base_cycle_strategy


def certify(text_or_graph):
    g = parse_graph(text_or_graph) if isinstance(text_or_graph, str) else text_or_graph
    num, trace = solve_number(g)
    st = synthesize(trace, g)
    assert st.validate() == []
    assert st.is_defending()
    assert st.guard_count() == num
    failures = [t for t in check_proper(st, trace_exemptions(trace)) if not t[2]]
    assert not failures, failures
    return g, num, trace, st


def rw_cycle(n_cyc, closed=True):
    lines = []
    for i in range(1, n_cyc + 1):
        lines.append(f"u{i:02d} u{i % n_cyc + 1:02d}")
    for i in range(2, n_cyc + 1, 2):
        lines.append(f"u{i:02d} L{i:02d}a\nu{i:02d} L{i:02d}b")
    if not closed:
        lines.append("a1 a2\na2 u01")
    return "\n".join(lines)


class TestBaseCycles:
    @pytest.mark.parametrize("n", range(3, 13))
    def test_proper_everywhere(self, n):
        names = [f"v{i}" for i in range(n)]
        g = Multigraph.from_pairs(names, [(names[i], names[(i + 1) % n]) for i in range(n)])
        st = base_cycle_strategy(g)
        assert st.guard_count() == -(-n // 3)
        assert st.validate() == []
        assert st.is_defending()
        for eid, (u, v) in g.edges.items():
            assert has_proper_edge_states(st, u, v, eid), (n, u, v)


class TestTreeCertificates:
    def test_paths(self):
        for n in range(2, 9):
            text = "\n".join(f"v{i} v{i+1}" for i in range(n - 1))
            certify(text)

    def test_stars_and_spiders(self):
        certify("c a\nc b\nc d\nc e\nc f")
        certify("a t\na u\nu b\nu c")
        certify("r a\nr b\na c\na d\nb e\nb f")


class TestCycleCertificates:
    def test_pendant_cycles(self):
        certify("a b\nb c\nc x\nx y\ny z\nz c")
        certify("a b\nb c\nc x\nx y\ny z\nz w\nw c")

    def test_constant_cases(self):
        # every terminal leaf-cycle shape behind a two-edge stem
        stems = "a b\nb u\n"
        bodies = {
            "r1": "u x\nx y\ny u",
            "r2": "u x\nx y\ny u\ny p\ny q",
            "r6": "u x\nx y\ny u\nx p\nx q\ny r\ny s",
            "r3": "u x\nx y\ny z\nz u\nz p\nz q",
            "r4": "u x\nx y\ny z\nz u\nx p\nx q\nz r\nz s",
            "r5": "u x\nx y\ny z\nz w\nw u\nx p\nx q\nw r\nw s",
        }
        for kind, body in bodies.items():
            g, num, trace, st = certify(stems + body)
            assert any(s.kind.value == kind for s in trace.steps), (
                kind,
                [s.kind.value for s in trace.steps],
            )
            assert num == exact_number(g)

    @pytest.mark.parametrize("n_cyc", [6, 8, 10, 12])
    def test_rw_cycles(self, n_cyc):
        g, num, trace, st = certify(rw_cycle(n_cyc))
        c6 = [s for s in trace.steps if s.kind == ReductionKind.C6]
        assert c6
        kk = c6[0].params["kk"]
        if c6[0].params["case"] == "pink":
            assert c6[0].k == 3 * kk + 1
        else:
            assert c6[0].k == 3 * kk - 1

    def test_rw6_closed_delta_matches_oracle(self):
        g, num, trace, st = certify(rw_cycle(6))
        c6 = [s for s in trace.steps if s.kind == ReductionKind.C6]
        assert c6[0].k == 4
        assert num == exact_number(g)

    def test_rw_with_connecting_rest(self):
        certify(rw_cycle(6, closed=False))
        certify(rw_cycle(8, closed=False))


class TestGuardDeltas:
    def test_every_step_delta_is_asserted(self):
        # the driver raises if a step's guard delta diverges from its ledger;
        # run a mixed instance through to exercise the assertion path
        g = parse_graph(
            "a b\nb c\nc a\nc d\nd e\ne f\nf d\nd g\ng h\nh i\ni g\nh x\nh y"
        )
        certify(g)

    def test_attack_fuzz(self):
        for seed in (3, 5):
            g = random_cactus(11, seed=seed, leaf_bias=0.35)
            _, _, _, st = certify(g)
            rng = random.Random(seed)
            cur = sorted(st.states)[0]
            verts = st.graph.sorted_vertices()
            for _ in range(1000):
                cur, _ = respond(st, cur, rng.choice(verts))


class TestSynthesisGuards:
    def test_graph_mismatch_detected(self):
        g = parse_graph("a b\nb c\nc a\na x")
        num, trace = solve_number(g)
        other = parse_graph("a b")
        with pytest.raises((SynthesisError, KeyError, ValueError)):
            synthesize(trace, other)
