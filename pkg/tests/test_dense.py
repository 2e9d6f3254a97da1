import math

import numpy as np
import pytest

from tkforge.certificate import verify
from tkforge.dense import AsymmetricInstance, _attempt, cap_u, find_onesub_asymmetric, find_onesub_dense, make_instance
from tkforge.errors import InputError, PipelineFailure
from tkforge.generators import complete, complete_bipartite, gnp, random_regular


def inst(u, w, d):
    return AsymmetricInstance(tuple(range(w, w + u)), tuple(range(w)), d)


def assert_onesub(g, cert):
    assert verify(g, cert) and cert.ell == 1
    connectors = [p[1] for p in cert.paths.values()]
    assert len(set(connectors)) == len(connectors)


class TestCap:
    def test_unchanged_below_limit(self):
        assert cap_u(inst(100, 10, 5)) == inst(100, 10, 5)

    def test_capped(self):
        out = cap_u(inst(2000, 10, 50))
        assert len(out.u_side) == 1600 and out.capped and out.ell == 25

    def test_exact_boundary(self):
        assert not cap_u(inst(1600, 10, 50)).capped

    def test_formulae(self):
        i = inst(25600, 40, 40)  # sqrt|U| = 160 = 4|W|
        assert i.p == pytest.approx(1.0) and i.ell == 20


@pytest.fixture(scope="module")
def big():
    return complete_bipartite(40, 25600)


class TestAsymmetric:
    @pytest.mark.slow
    def test_tk20(self, big):
        cert = find_onesub_asymmetric(big, make_instance(big, range(40, 25640), range(40)), seed=0)
        assert cert.t == 20
        assert_onesub(big, cert)

    @pytest.mark.slow
    def test_deterministic(self, big):
        i = make_instance(big, range(40, 25640), range(40))
        assert find_onesub_asymmetric(big, i, seed=3) == find_onesub_asymmetric(big, i, seed=3)

    def test_order_floor(self):
        g = complete_bipartite(10, 400)
        with pytest.raises(InputError, match="below"):
            find_onesub_asymmetric(g, make_instance(g, range(10, 410), range(10)), min_degree=1)

    def test_degree_floor(self):
        g = complete_bipartite(10, 400)
        with pytest.raises(InputError, match="d >= 40"):
            find_onesub_asymmetric(g, make_instance(g, range(10, 410), range(10)))

    def test_empty_sample_fails_that_retry(self):
        g = complete_bipartite(1, 100)
        i = AsymmetricInstance((0,), tuple(range(1, 101)), 1)  # p = 1/400
        cert, why = _attempt(g, i, np.random.default_rng([0, 0]))
        assert cert is None and why == "W' empty"

    def test_retries_exhausted_tree(self):
        g = complete_bipartite(1, 100)
        i = AsymmetricInstance((0,), tuple(range(1, 101)), 1)
        with pytest.raises(PipelineFailure) as exc:
            find_onesub_asymmetric(g, i, max_retries=3, min_order=0, min_degree=0)
        assert exc.value.reason == "retries exhausted" and len(exc.value.causes) == 3

    def test_instance_validation(self):
        g = complete_bipartite(3, 3)
        with pytest.raises(InputError):
            make_instance(g, [0, 1], [1, 2])
        with pytest.raises(InputError):
            make_instance(g, [0], [3], d=2)


class TestDense:
    def test_too_sparse(self):
        with pytest.raises(PipelineFailure, match="too sparse for dense case"):
            find_onesub_dense(random_regular(100, 10, seed=0))

    @pytest.mark.slow
    def test_clique_3000(self):
        g = complete(3000)
        # every split of K_n has d = |W|, so ell = ceil(sqrt(|U|)/8) <= ceil(sqrt(2907)/8)
        derived = math.ceil(math.sqrt(3000 - 3000 // 32) / 8)
        assert derived == 7
        with pytest.raises(PipelineFailure) as exc:
            find_onesub_dense(g)
        assert exc.value.details["derived_ell"] == derived
        cert = find_onesub_dense(g, min_order=derived)
        assert cert.t == derived
        assert_onesub(g, cert)

    @pytest.mark.slow
    def test_gnp_4000(self):
        g = gnp(4000, 0.5, seed=1)
        with pytest.raises(PipelineFailure) as exc:
            find_onesub_dense(g)
        derived = exc.value.details["derived_ell"]
        cert = find_onesub_dense(g, min_order=derived)
        assert cert.t >= derived
        assert_onesub(g, cert)
