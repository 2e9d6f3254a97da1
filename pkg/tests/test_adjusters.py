import pytest

from tkforge.adjusters import (
    Adjuster,
    adjuster_length,
    adjuster_problems,
    build_simple_adjuster,
    chain_adjusters,
    perimeter,
)
from tkforge.errors import PipelineFailure
from tkforge.generators import random_regular
from tkforge.graph import Graph
from tkforge.profile import S0
from tkforge.units import Unit


def toy(lengths):
    """Cores 0 and 1 with one path per length; units hang off both cores."""
    paths, nxt = [], 100
    for L in lengths:
        inner = tuple(range(nxt, nxt + L - 1))
        nxt += L - 1
        paths.append((0,) + inner + (1,))
    f1 = Unit(0, ((0, 10),), ((10, (11,)),))
    f2 = Unit(1, ((1, 20),), ((20, (21,)),))
    a_set = frozenset(v for p in paths for v in p[1:-1])
    return Adjuster(0, 1, f1, f2, 1.0, a_set, tuple(paths))


def toy_graph(adj):
    edges = {(p[i], p[i + 1]) for p in adj.paths for i in range(len(p) - 1)}
    edges |= {(0, 10), (10, 11), (1, 20), (20, 21)}
    return Graph(max(max(e) for e in edges) + 1, sorted(edges))


class TestBasics:
    def test_length(self):
        adj = toy([6, 8])
        assert adjuster_length(adj) == 8 and adj.k == 1 and adj.base_length == 6

    def test_single_path(self):
        adj = toy([5])
        assert adjuster_length(adj) == 5 == adj.base_length and adj.k == 0

    def test_perimeter_is_disjoint_union(self):
        adj = toy([6, 8])
        assert len(perimeter(adj)) == len(adj.a_set) + len(adj.f1.interior) + len(adj.f2.interior) == 16

    def test_validator(self):
        adj = toy([6, 8])
        g = toy_graph(adj)
        assert adjuster_problems(g, adj) == []
        assert adjuster_problems(g, adj, avoid={100}) == ["perimeter meets the avoid set"]
        bad = toy([6, 10])
        assert any("step-2" in p for p in adjuster_problems(toy_graph(bad), bad))


@pytest.fixture(scope="module")
def rr4096():
    return random_regular(4096, 16, seed=0)


class TestSimple:
    def test_validates(self, rr4096):
        avoid = set(range(50))
        adj = build_simple_adjuster(rr4096, avoid, S0)
        assert adjuster_problems(rr4096, adj, avoid) == []
        assert adj.k == 1 and adj.length <= S0.adjuster_cap + 2
        assert len(adj.a_set) <= 2 * adj.length

    def test_deterministic(self, rr4096):
        assert build_simple_adjuster(rr4096, (), S0) == build_simple_adjuster(rr4096, (), S0)

    def test_no_room(self, rr4096):
        with pytest.raises(PipelineFailure) as exc:
            build_simple_adjuster(rr4096, range(10, 4096), S0)
        assert exc.value.reason == "unit building failed"


class TestChain:
    def test_immediate_stop(self, rr4096):
        single = build_simple_adjuster(rr4096, (), S0)
        L = single.length
        out = chain_adjusters(rr4096, (), S0, window=(L, L + 10))
        assert out.paths == single.paths and out.k == 1
        assert out.f1.size == out.f2.size == S0.chain_spokes

    def test_overshoot(self, rr4096):
        L = build_simple_adjuster(rr4096, (), S0).length
        with pytest.raises(PipelineFailure, match="overshoot"):
            chain_adjusters(rr4096, (), S0, window=(1, L - 1))

    @pytest.mark.slow
    def test_full_window(self):
        g = random_regular(8192, 16, seed=1)
        trace = []
        out = chain_adjusters(g, (), S0, trace=trace)
        assert adjuster_problems(g, out) == []
        assert S0.chain_lo <= out.length <= S0.chain_hi and out.k >= S0.k_floor
        assert out.lengths == list(range(out.length - 2 * out.k, out.length + 1, 2))
        # trace holds the running chain at even positions, fresh pieces between
        running = [a.length for a in trace[::2]]
        steps = [b - a for a, b in zip(running, running[1:])]
        assert steps and all(1 <= s <= S0.chain_step for s in steps)

    def test_requested_k(self, rr4096):
        out = chain_adjusters(rr4096, (), S0, window=(100, 200), k=3)
        assert out.k == 3 and adjuster_problems(rr4096, out) == []
