import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import embedding_check, random_certificate
from tkforge.certificate import SubdivisionCertificate, Verdict, parse, serialize, verify
from tkforge.errors import InputError, ParseError
from tkforge.generators import complete, complete_bipartite, cycle, gnp
from tkforge.graph import Graph

K4_PATHS = [(a, b) for a in range(4) for b in range(a + 1, 4)]


def k4_cert():
    return SubdivisionCertificate.build(range(4), 0, K4_PATHS)


def c6_cert():
    paths = [(0, 1, 2), (2, 3, 4), (4, 5, 0)]
    return SubdivisionCertificate.build([0, 2, 4], 1, paths)


class TestVerify:
    def test_k4_is_tk4_0(self):
        assert verify(complete(4), k4_cert())

    def test_c6_is_tk3_1(self):
        assert verify(cycle(6), c6_cert())

    def test_detour_rejected_as_unequal(self):
        # C_7 with cores 0, 2, 4: the 4 -> 0 arc has three edges
        g = cycle(7)
        cert = SubdivisionCertificate(3, (0, 2, 4), 1, {(0, 2): (0, 1, 2), (2, 4): (2, 3, 4), (0, 4): (0, 6, 5, 4)})
        v = verify(g, cert)
        assert not v and v.reason == "unequal path length" and v.where == (0, 4)

    @pytest.mark.parametrize(
        "cert, reason",
        [
            (SubdivisionCertificate(3, (0, 1), 0, {}), "core count differs from t"),
            (SubdivisionCertificate(2, (0, 0), 0, {(0, 0): (0, 0)}), "repeated core"),
            (SubdivisionCertificate(2, (0, 1), -1, {}), "negative ell"),
            (SubdivisionCertificate(2, (0, 9), 0, {(0, 9): (0, 9)}), "vertex out of range"),
            (SubdivisionCertificate(2, (0, 1), 0, {(0, 2): (0, 2)}), "path for a non-core pair"),
            (SubdivisionCertificate(2, (0, 1), 0, {(0, 1): (0, 1), (1, 0): (1, 0)}), "duplicate pair"),
            (SubdivisionCertificate(2, (0, 1), 0, {}), "missing path"),
            (SubdivisionCertificate(2, (0, 1), 0, {(0, 1): (0, 2)}), "endpoints differ from pair"),
            (SubdivisionCertificate(2, (0, 1), 1, {(0, 1): (0, 0, 1)}), "repeated vertex on path"),
        ],
    )
    def test_rejection_reasons(self, cert, reason):
        v = verify(complete(4), cert)
        assert not v and v.reason == reason

    def test_missing_edge(self):
        g = Graph(3, [(0, 1)])
        v = verify(g, SubdivisionCertificate.build([0, 2], 1, [(0, 1, 2)]))
        assert v.reason == "missing edge" and v.where == (1, 2)

    def test_core_as_internal_vertex(self):
        g = complete(4)
        cert = SubdivisionCertificate(3, (0, 1, 2), 1, {(0, 1): (0, 2, 1), (0, 2): (0, 3, 2), (1, 2): (1, 3, 2)})
        assert verify(g, cert).reason == "core used as internal vertex"

    def test_shared_internal_vertex(self):
        g = complete(5)
        cert = SubdivisionCertificate(3, (0, 1, 2), 1, {(0, 1): (0, 3, 1), (0, 2): (0, 3, 2), (1, 2): (1, 4, 2)})
        assert verify(g, cert).reason == "paths not internally disjoint"

    def test_verdict_text(self):
        assert str(Verdict(True)) == "accept"
        assert str(Verdict(False, "missing edge", (1, 2))) == "reject(missing edge, (1, 2))"

    @settings(max_examples=300, deadline=None)
    @given(st.integers(3, 8), st.integers(0, 2**32 - 1))
    def test_agrees_with_embedding_checker(self, n, seed):
        rng = random.Random(seed)
        g = gnp(n, rng.choice([0.4, 0.7, 1.0]), seed=seed)
        cert = random_certificate(g, rng)
        assert bool(verify(g, cert)) == embedding_check(g, cert)


class TestBuild:
    def test_normalises_orientation_and_order(self):
        cert = SubdivisionCertificate.build([4, 0, 2], 1, [(2, 1, 0), (4, 3, 2), (0, 5, 4)])
        assert cert.cores == (0, 2, 4)
        assert list(cert.paths) == [(0, 2), (0, 4), (2, 4)]
        assert cert.paths[(0, 2)] == (0, 1, 2)
        assert cert.edge_length == 2

    def test_duplicate_pair_rejected(self):
        with pytest.raises(InputError):
            SubdivisionCertificate.build([0, 1], 0, [(0, 1), (1, 0)])


class TestTextFormat:
    def test_round_trip_k4(self):
        cert = k4_cert()
        assert parse(serialize(cert)) == cert

    def test_serialized_layout(self):
        text = serialize(c6_cert())
        assert text.splitlines()[:2] == ["tk 3 1", "core 0"]
        assert "path 0 2 : 0 1 2" in text

    def test_missing_paths(self):
        text = "tk 3 1\ncore 0\ncore 2\ncore 4\npath 0 2 : 0 1 2\npath 2 4 : 2 3 4\n"
        with pytest.raises(ParseError, match="missing paths"):
            parse(text)

    def test_endpoints_not_cores(self):
        with pytest.raises(ParseError, match="not two distinct cores"):
            parse("tk 2 0\ncore 0\ncore 1\npath 0 5 : 0 5\n")

    @pytest.mark.parametrize(
        "text, fragment",
        [
            ("", "empty certificate"),
            ("tk 2\n", "expected header"),
            ("tk 2 0\ncore 0\ncore 0\n", "duplicate core"),
            ("tk 2 0\ncore 0\ncore 1\npath 0 1 : 0 2 1\n", "differs from ell"),
            ("tk 2 0\ncore 0\ncore 1\npath 0 1 : 1 1\n", "does not join"),
            ("tk 2 0\ncore 0\n", "expected 2 core lines"),
            ("tk 2 0\ncore 0\ncore 1\nedge 0 1\n", "unknown line type"),
        ],
    )
    def test_parse_errors(self, text, fragment):
        with pytest.raises(ParseError, match=fragment):
            parse(text)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(2, 6), st.integers(2, 6))
    def test_round_trip_bipartite_subdivisions(self, a, b):
        # K_{a,b} with cores on one side: every pair joined through a distinct far-side vertex
        t = min(a, 3)
        if b < t * (t - 1) // 2:
            return
        g = complete_bipartite(a, b)
        pairs = [(i, j) for i in range(t) for j in range(i + 1, t)]
        paths = [(i, a + k, j) for k, (i, j) in enumerate(pairs)]
        cert = SubdivisionCertificate.build(range(t), 1, paths)
        assert verify(g, cert)
        assert parse(serialize(cert)) == cert
