"""Randomised 1-subdivisions from dense asymmetric bipartite configurations.

Given disjoint U, W with every u in U having >= d neighbours in W, sample
W' by keeping each w with probability p = sqrt|U| / (4|W|), keep the
u with >= pd/2 neighbours in W', and grow a maximal set I of W'-pairs
with distinct common neighbours ("connectors") in U'. Any unused u then
sees a set A = N(u) n W' all of whose pairs lie in I, and A together
with the connectors is a TK_|A|^(1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from itertools import combinations

import numpy as np

from .certificate import SubdivisionCertificate, verify
from .errors import InputError, PipelineFailure
from .graph import Graph, bipartition, check_vertices

MIN_ORDER = 20
MIN_DEGREE = 40


@dataclass(frozen=True)
class AsymmetricInstance:
    u_side: tuple[int, ...]
    w_side: tuple[int, ...]
    d: int
    capped: bool = False
    ell_override: int | None = None

    @property
    def p(self) -> float:
        return math.sqrt(len(self.u_side)) / (4 * len(self.w_side))

    @property
    def ell(self) -> int:
        if self.ell_override is not None:
            return self.ell_override
        return math.ceil(self.d * math.sqrt(len(self.u_side)) / (8 * len(self.w_side)))


def make_instance(g: Graph, u_side, w_side, d: int | None = None) -> AsymmetricInstance:
    """Validate U, W against ``g``; ``d`` defaults to the least U -> W degree."""
    u = check_vertices(g, u_side, "u_side")
    w = check_vertices(g, w_side, "w_side")
    if not u or not w:
        raise InputError("U and W must be nonempty")
    if u & w:
        raise InputError("U and W must be disjoint")
    least = min(len(g.neighbor_set(v) & w) for v in u)
    if d is None:
        d = least
    elif least < d:
        raise InputError(f"some vertex of U has only {least} < d={d} neighbours in W")
    return AsymmetricInstance(tuple(sorted(u)), tuple(sorted(w)), int(d))


def cap_u(inst: AsymmetricInstance) -> AsymmetricInstance:
    """Shrink U to its 16|W|^2 lowest ids when larger; then ell = ceil(d/2)."""
    limit = 16 * len(inst.w_side) ** 2
    if len(inst.u_side) <= limit:
        return inst
    return replace(inst, u_side=inst.u_side[:limit], capped=True, ell_override=math.ceil(inst.d / 2))


def _attempt(g: Graph, inst: AsymmetricInstance, rng: np.random.Generator):
    """One sampling round: a certificate, or the name of the filter that failed."""
    u_side, w_side, p, ell = inst.u_side, inst.w_side, inst.p, inst.ell
    keep = rng.random(len(w_side)) < p
    w_prime = [w for w, k in zip(w_side, keep) if k]
    if len(w_prime) > 2 * p * len(w_side):
        return None, "|W'| > 2p|W|"
    if not w_prime:
        return None, "W' empty"
    n = g.vertex_count
    indptr, indices = g.csr()
    in_wp = np.zeros(n, dtype=bool)
    in_wp[w_prime] = True
    hits = np.zeros(n, dtype=np.int64)
    rows = np.repeat(np.arange(n), np.diff(indptr))
    np.add.at(hits, rows[in_wp[indices]], 1)
    u_arr = np.asarray(u_side, dtype=np.int64)
    u_prime = u_arr[hits[u_arr] >= p * inst.d / 2]
    if len(u_prime) < len(u_side) / 4:
        return None, "|U'| < |U|/4"

    available = np.zeros(n, dtype=bool)
    available[u_prime] = True
    nbrs = {w: indices[indptr[w] : indptr[w + 1]] for w in w_prime}
    connector: dict[tuple[int, int], int] = {}
    # lexicographic pairs, each taking its lowest-id unused common neighbour in U'
    for x, y in combinations(w_prime, 2):
        common = np.intersect1d(nbrs[x], nbrs[y], assume_unique=True)
        common = common[available[common]]
        if len(common):
            v = int(common[0])
            available[v] = False
            connector[(x, y)] = v
    spare = u_prime[available[u_prime]]
    if not len(spare):
        return None, "no unused vertex in U'"
    a = sorted(g.neighbor_set(int(spare[0])) & frozenset(w_prime))
    if len(a) < ell:
        return None, "|A| < ell"
    cores = a[:ell]
    paths = []
    for pair in combinations(cores, 2):
        if pair not in connector:
            return None, "pair of A missing from I"
        paths.append((pair[0], connector[pair], pair[1]))
    return SubdivisionCertificate.build(cores, 1, paths), None


def find_onesub_asymmetric(
    g: Graph,
    inst: AsymmetricInstance,
    seed: int = 0,
    max_retries: int = 20,
    min_order: int = MIN_ORDER,
    min_degree: int = MIN_DEGREE,
) -> SubdivisionCertificate:
    """A verified TK_ell^(1) found by independent seeded retries (first success wins)."""
    inst = cap_u(inst)
    if inst.d < min_degree:
        raise InputError(f"need d >= {min_degree}, got {inst.d}")
    if inst.ell < min_order:
        raise InputError(f"derived ell={inst.ell} is below {min_order}")
    diagnostics = []
    for retry in range(max_retries):
        rng = np.random.default_rng([seed, retry])
        cert, why = _attempt(g, inst, rng)
        if cert is not None:
            verdict = verify(g, cert)
            if not verdict:
                raise AssertionError(f"internal error: dense certificate rejected: {verdict}")
            return cert
        diagnostics.append(f"retry {retry}: {why}")
    raise PipelineFailure(
        "onesub", "retries exhausted", ell=inst.ell, retries=max_retries,
        causes=[PipelineFailure(f"retry {i}", d.split(": ", 1)[1]) for i, d in enumerate(diagnostics)],
    )


def _candidate_instances(g: Graph):
    """(U, W) splits of a dense graph, in preference order."""
    n = g.vertex_count
    alpha = g.average_degree() / n if n else 0.0
    deg = g.degrees()
    high = [v for v in range(n) if deg[v] >= alpha * n / 2]
    low = [v for v in range(n) if deg[v] < alpha * n / 2]
    if high and low:
        wl = frozenset(low)
        if min(len(g.neighbor_set(u) & wl) for u in high) >= alpha * n / 4:
            yield "degree split", high, low
    colour = bipartition(g)
    if colour is not None:
        left = [v for v in range(n) if colour[v] == 0]
        right = [v for v in range(n) if colour[v] == 1]
        if left and right:
            yield "bipartition", max(left, right, key=len), min(left, right, key=len)
    # W small relative to U raises sqrt|U|/|W|; take the lowest ids as W
    for frac in (8, 16, 32):
        wsize = max(1, n // frac)
        yield f"low-id split 1/{frac}", list(range(wsize, n)), list(range(wsize))


def find_onesub_dense(
    g: Graph,
    seed: int = 0,
    max_retries: int = 20,
    min_order: int = MIN_ORDER,
) -> SubdivisionCertificate:
    """1-subdivision in a dense graph via the asymmetric construction.

    Several (U, W) splits are derived and the one with the largest
    guaranteed order is attempted; the achieved order is what the
    certificate reports.
    """
    n = g.vertex_count
    if n == 0 or g.average_degree() < 8 * min_order:
        raise PipelineFailure("dense", "too sparse for dense case", average_degree=round(g.average_degree(), 3))
    best = None
    for label, u_side, w_side in _candidate_instances(g):
        wset = frozenset(w_side)
        d = min(len(g.neighbor_set(u) & wset) for u in u_side)
        if d < MIN_DEGREE:
            continue
        inst = cap_u(AsymmetricInstance(tuple(u_side), tuple(w_side), d))
        if best is None or inst.ell > best[1].ell:
            best = (label, inst)
    if best is None or best[1].ell < min_order:
        ell = best[1].ell if best else 0
        raise PipelineFailure("dense", "too sparse for dense case", derived_ell=ell, min_order=min_order)
    label, inst = best
    try:
        return find_onesub_asymmetric(g, inst, seed, max_retries, min_order)
    except PipelineFailure as exc:
        raise PipelineFailure("dense", f"{label} failed", causes=[exc]) from None
