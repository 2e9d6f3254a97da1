import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import bfs_distance, is_ab_path
from tkforge.connector import (
    ConnectRequest,
    LengthBound,
    connect,
    connect_many_disjoint,
    equal_length_subfamily,
)
from tkforge.errors import InputError, PipelineFailure
from tkforge.expander import CERTIFIED_EXHAUSTIVE, ExpanderParams, certify_robust
from tkforge.generators import complete_bipartite, cycle, gnp, hypercube, path_graph, random_regular


def req(a, b, avoid=(), cap=None):
    return ConnectRequest(frozenset(a), frozenset(b), frozenset(avoid), cap)


class TestLengthBound:
    # frozen from a 50-digit evaluation of ceil((100/eps1) ln^3(15n/(eps2 d)))
    @pytest.mark.parametrize(
        "n, d, value", [(8192, 16, 117618337), (1024, 10, 71604658), (100, 50, 12579935)]
    )
    def test_values(self, n, d, value):
        bound = LengthBound(n, d, 0.001, 0.2)
        assert bound.value == value
        assert bound.default_cap == value + 2
        assert bound.m0 == pytest.approx(value * 2 / 5)

    def test_degenerate_ratio_still_positive(self):
        assert LengthBound(1, 100, 0.001, 0.2).value == 1


class TestConnect:
    def test_adjacent(self):
        assert connect(path_graph(2), req({0}, {1}, cap=1)) == (0, 1)

    def test_cycle_detour(self):
        assert connect(cycle(8), req({0}, {4}, {1})) == (0, 7, 6, 5, 4)

    def test_length_exceeded_vs_disconnected(self):
        with pytest.raises(PipelineFailure) as exc:
            connect(cycle(8), req({0}, {4}, {1}, cap=3))
        assert exc.value.reason == "length-exceeded" and exc.value.details["shortest"] == 4
        with pytest.raises(PipelineFailure) as exc:
            connect(cycle(8), req({0}, {4}, {1, 7}))
        assert exc.value.reason == "disconnected"

    @pytest.mark.parametrize(
        "a, b, avoid, cap, x",
        [(set(), {1}, (), None, 1), ({0}, {0}, (), None, 1), ({0}, {2}, {0}, None, 1), ({0}, {2}, (), 0, 1), ({0}, {2}, (), None, 2)],
    )
    def test_request_validation(self, a, b, avoid, cap, x):
        with pytest.raises(InputError):
            connect(cycle(6), ConnectRequest(frozenset(a), frozenset(b), frozenset(avoid), cap, x))

    def test_no_other_vertices_of_a_or_b(self):
        g = path_graph(5)
        # the shortest route from {0, 2} to {4} starts at 2, never passing 0's side
        assert connect(g, req({0, 2}, {3, 4})) == (2, 3)

    @settings(max_examples=150, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_matches_independent_bfs(self, seed):
        rng = random.Random(seed)
        g = hypercube(6) if rng.random() < 0.5 else gnp(64, 0.08, seed)
        n = g.vertex_count
        verts = rng.sample(range(n), rng.randint(2, 20))
        cut1 = rng.randint(1, len(verts) - 1)
        cut2 = rng.randint(cut1, len(verts))
        a, b, avoid = set(verts[:cut1]), set(verts[cut1:cut2]) or {verts[-1]}, set(verts[cut2:])
        avoid -= b
        expected = bfs_distance(g, a, b, avoid)
        try:
            path = connect(g, req(a, b, avoid))
        except PipelineFailure as exc:
            assert exc.reason == "disconnected" and expected is None
            return
        assert len(path) - 1 == expected
        assert is_ab_path(g, path, a, b, avoid)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(10, 18), st.integers(0, 2**32 - 1))
    def test_certified_expanders_connect_within_bound(self, n, seed):
        g = gnp(n, 0.5, seed)
        d = g.average_degree()
        if d == 0:
            return
        params = ExpanderParams(0.001, 0.2, d)
        if certify_robust(g, params).status != CERTIFIED_EXHAUSTIVE:
            return
        rng = random.Random(seed)
        a, b = rng.sample(range(n), 2)
        bound = LengthBound(n, d, 0.001, 0.2)
        # the admissible avoid budget eps1 x / (4 ln^2(15n/(eps2 d))) is below 1 here
        path = connect(g, req({a}, {b}, cap=bound.value))
        assert len(path) - 1 <= bound.value


class TestFamilies:
    def test_perfect_matching(self):
        g = complete_bipartite(6, 6)
        fam = connect_many_disjoint(g, {0, 1, 2}, {6, 7, 8}, (), 3)
        assert fam.complete and all(len(p) == 2 for p in fam.paths)

    def test_singletons_give_one_path(self):
        fam = connect_many_disjoint(cycle(8), {0}, {4}, (), 2)
        assert len(fam.paths) == 1 and fam.shortfall == 1 and not fam.complete

    def test_random_regular_family_is_disjoint(self):
        g = random_regular(400, 8, seed=5)
        rng = random.Random(5)
        verts = rng.sample(range(400), 80)
        a, b = set(verts[:40]), set(verts[40:])
        fam = connect_many_disjoint(g, a, b, (), 10)
        assert fam.complete
        seen = set()
        for p in fam.paths:
            assert is_ab_path(g, p, a, b, set())
            assert seen.isdisjoint(p)
            seen.update(p)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 8))
    def test_family_pairwise_disjoint(self, seed, count):
        g = gnp(60, 0.1, seed)
        rng = random.Random(seed)
        verts = rng.sample(range(60), 30)
        a, b, avoid = set(verts[:10]), set(verts[10:20]), set(verts[20:])
        fam = connect_many_disjoint(g, a, b, avoid, count, length_cap=6)
        seen = set()
        for p in fam.paths:
            assert is_ab_path(g, p, a, b, avoid) and len(p) - 1 <= 6
            assert seen.isdisjoint(p)
            seen.update(p)
        assert len(fam.paths) + fam.shortfall == count


class TestEqualLength:
    def paths_of(self, lengths):
        return [tuple(range(i * 100, i * 100 + L + 1)) for i, L in enumerate(lengths)]

    def test_majority(self):
        out = equal_length_subfamily(self.paths_of([3, 3, 5]), 2)
        assert [len(p) - 1 for p in out] == [3, 3]

    def test_too_small(self):
        with pytest.raises(PipelineFailure):
            equal_length_subfamily(self.paths_of([3, 5]), 2)

    def test_tie_goes_shorter(self):
        out = equal_length_subfamily(self.paths_of([4, 4, 6, 6]), 2)
        assert [len(p) - 1 for p in out] == [4, 4]

    def test_empty(self):
        with pytest.raises(PipelineFailure, match="empty family"):
            equal_length_subfamily([], 1)
