"""Exact-length core-to-core paths and the balanced subdivision builder.

An exact-length path runs core -> own spoke -> connector -> adjuster
unit -> one adjuster path -> adjuster unit -> connector -> spoke -> core.
Everything but the adjuster path is fixed once the two connectors are
chosen, and the adjuster offers every length in a step-2 progression, so
the target is hit exactly when the residual has the right parity and lies
within the progression.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .adjusters import EarlyOneSubdivision, chain_adjusters
from .certificate import SubdivisionCertificate, verify
from .connector import bfs_tree_paths
from .errors import InputError, PipelineFailure
from .graph import Graph, bipartition, check_vertices, is_path
from .units import Unit, assemble_unit

MODES = ("auto", "dense", "expander")


def _rev(p):
    return tuple(reversed(p))


def _sorted_paths(found: dict) -> list[tuple[int, ...]]:
    return sorted(found.values(), key=lambda p: (len(p), p))


def exact_length_path(
    g: Graph,
    avoid: Iterable[int],
    f1: Unit,
    f2: Unit,
    target_len: int,
    profile,
    chain_avoid: Iterable[int] = (),
) -> tuple[int, ...]:
    """A core-to-core path of exactly ``target_len`` edges in G - avoid.

    ``chain_avoid`` is excluded from the adjuster construction only; the
    retry logic uses it to steer a second attempt elsewhere.
    """
    avoid = check_vertices(g, avoid, "avoid")
    v1, v2 = f1.core, f2.core
    if v1 in avoid or v2 in avoid:
        raise InputError("cores must lie outside avoid")
    if f1.interior & f2.interior:
        raise InputError("unit interiors must be disjoint")
    colour = bipartition(g)
    if colour is not None and (colour[v1] == colour[v2]) != (target_len % 2 == 0):
        raise PipelineFailure("exact path", "parity", target=target_len, same_side=colour[v1] == colour[v2])
    eroded = len((f1.interior | f2.interior) & avoid)
    if eroded > profile.erosion_budget:
        raise PipelineFailure("exact path", "erosion", eroded=eroded, budget=profile.erosion_budget)

    w_prime = set(avoid) | f1.interior | f2.interior
    held = w_prime | f1.vertices | f2.vertices | set(chain_avoid)
    try:
        chain = chain_adjusters(g, held, profile)
    except PipelineFailure as exc:
        raise PipelineFailure("exact path", "adjuster chain failed", causes=[exc]) from None
    e1, e2 = chain.f1, chain.f2
    lengths = set(chain.lengths)
    adj = g.adjacency

    w2 = w_prime | chain.perimeter
    x1 = set(f1.usable_leaves(avoid)) - w2
    if not x1:
        raise PipelineFailure("exact path", "no usable leaf", unit=v1)
    q1_options = _sorted_paths(
        bfs_tree_paths(adj, x1, set(e1.boundary), w2 | f2.vertices, profile.connect_cap)
    )[: profile.q_candidates]
    if not q1_options:
        raise PipelineFailure("exact path", "connect failed", side=1, cap=profile.connect_cap)
    parity_ok = False
    for q1 in q1_options:
        r1 = f1.leaf_route(q1[0])
        s1 = e1.leaf_route(q1[-1])
        head = r1 + q1[1:] + _rev(s1)[1:]  # v1 ... w1
        used = set(head)
        x2 = set(f2.usable_leaves(avoid)) - w2 - used
        if not x2:
            continue
        tails = bfs_tree_paths(
            adj, x2, set(e2.boundary) - used, w2 | used | e1.vertices | f1.vertices, profile.connect_cap
        )
        for q2 in _sorted_paths(tails):
            r2 = f2.leaf_route(q2[0])
            s2 = e2.leaf_route(q2[-1])
            tail = s2 + _rev(q2)[1:] + _rev(r2)[1:]  # w2 ... v2
            residual = target_len - (len(head) - 1) - (len(tail) - 1)
            if (residual - chain.base_length) % 2:
                continue
            parity_ok = True
            if residual in lengths:
                path = head + chain.path_of_length(residual)[1:] + tail[1:]
                if not is_path(g, path) or set(path) & avoid:
                    raise AssertionError("internal error: exact-length path is malformed")
                return path
    span = f"{chain.base_length}..{chain.length}"
    raise PipelineFailure("exact path", "span" if parity_ok else "parity", target=target_len, lengths=span)


# -- balanced subdivision ----------------------------------------------------

def build_units(g: Graph, count: int, profile, avoid: Iterable[int] = ()) -> list[Unit]:
    used = set(check_vertices(g, avoid, "avoid"))
    shape = profile.unit_shape()
    units = []
    for r in range(count):
        try:
            unit = assemble_unit(g, used, shape, profile)
        except PipelineFailure as exc:
            raise PipelineFailure("balanced", "unit seeding failed", causes=[exc], index=r) from None
        units.append(unit)
        used |= unit.vertices
    return units


def _same_side(g: Graph, units: list[Unit], t: int) -> list[Unit]:
    colour = bipartition(g)
    if colour is None:
        return units[:t]
    sides = {0: [], 1: []}
    for u in units:
        sides[colour[u.core]].append(u)
    best = max((0, 1), key=lambda c: (len(sides[c]), c == colour[units[0].core]))
    return sides[best][:t]


def _steer(g: Graph, seed: int, pair: tuple, attempt: int, frac: float = 0.02) -> frozenset:
    if attempt == 0:
        return frozenset()
    rng = np.random.default_rng([seed, pair[0], pair[1], attempt])
    return frozenset(np.flatnonzero(rng.random(g.vertex_count) < frac).tolist())


def build_balanced_subdivision(g: Graph, profile, seed: int = 0, retries: int | None = None) -> SubdivisionCertificate:
    """TK_t^(ell) with t = profile.target_t and ell = profile.target_ell."""
    if not profile.runnable:
        raise PipelineFailure("balanced", "profile not runnable", profile=profile.name)
    t = profile.target_t
    retries = profile.retries if retries is None else retries
    units = _same_side(g, build_units(g, 2 * t, profile), t)
    if len(units) < t:
        raise PipelineFailure("balanced", "too few same-side units", have=len(units), need=t)
    target = profile.path_length
    paths: dict[tuple[int, int], tuple[int, ...]] = {}
    for i, j in combinations(range(t), 2):
        fi, fj = units[i], units[j]
        ends = {fi.core, fj.core}
        w = {v for p in paths.values() for v in p} - ends
        for q, other in enumerate(units):
            if q not in (i, j):
                w |= other.vertices
        for unit in (fi, fj):
            eroded = len(unit.interior & w)
            if eroded > profile.unit_erosion:
                raise PipelineFailure("balanced", "unit erosion", core=unit.core, eroded=eroded)
        failures = []
        for attempt in range(retries + 1):
            try:
                path = exact_length_path(
                    g, w, fi, fj, target, profile, chain_avoid=_steer(g, seed, (i, j), attempt) - ends
                )
                break
            except PipelineFailure as exc:
                failures.append(PipelineFailure(f"attempt {attempt}", exc.reason, causes=exc.causes, **exc.details))
        else:
            exc = PipelineFailure(
                "balanced", "pair failed", causes=failures, pair=f"({fi.core},{fj.core})", done=len(paths)
            )
            exc.partial = dict(paths)
            raise exc
        inner = set(path[1:-1])
        assert not inner & w and not inner & ends, "ledger discipline violated"
        paths[(fi.core, fj.core)] = path
    cert = SubdivisionCertificate.build([u.core for u in units], profile.target_ell, paths.values())
    verdict = verify(g, cert)
    if not verdict:
        raise AssertionError(f"internal error: balanced certificate rejected: {verdict}")
    return cert


# -- dispatcher --------------------------------------------------------------

@dataclass(frozen=True)
class FindResult:
    cert: SubdivisionCertificate
    branch: str  # "dense", "balanced" or "early"


def find_subdivision(g: Graph, profile, mode: str = "auto", seed: int = 0, retries: int | None = None) -> FindResult:
    """Dispatch on regime and return the certificate with the branch that made it."""
    from .dense import find_onesub_dense
    from .expander import ExpanderParams, extract_expander

    if mode not in MODES:
        raise InputError(f"unknown mode {mode!r}")
    n = g.vertex_count
    d = g.average_degree()
    if n == 0 or d == 0:
        raise PipelineFailure("find", "empty graph")
    small = n < profile.K * d

    def infeasible():
        return PipelineFailure("find", "profile infeasible: n < K·d", n=n, K=f"{profile.K:g}", d=f"{d:g}")

    if not profile.runnable:
        if small:
            raise infeasible()
        raise PipelineFailure("find", "profile infeasible: not runnable", profile=profile.name)

    def dense():
        cert = find_onesub_dense(g, seed=seed, min_order=profile.dense_min_order)
        return FindResult(cert, "dense")

    def balanced(h: Graph, lift):
        if small:
            raise infeasible()
        try:
            cert = build_balanced_subdivision(h, profile, seed, retries)
        except EarlyOneSubdivision as early:
            return FindResult(_lift(g, early.cert, lift), "early")
        return FindResult(_lift(g, cert, lift), "balanced")

    if mode == "dense":
        return dense()
    if mode == "expander":
        return balanced(g, None)
    failures = []
    try:
        ext = extract_expander(g, d, ExpanderParams(profile.eps1, profile.eps2, d), seed=seed)
    except PipelineFailure as exc:
        raise PipelineFailure("find", "extraction failed", causes=[exc]) from None
    h = ext.graph
    if h.vertex_count and h.average_degree() >= profile.dense_threshold * h.vertex_count:
        try:
            return dense()
        except PipelineFailure as exc:
            failures.append(exc)
    elif d < math.log(n) ** profile.sparse_exponent:
        raise PipelineFailure("find", "sparse regime: external result, out of scope", d=f"{d:g}", n=n)
    else:
        try:
            return balanced(h, ext.remap)
        except PipelineFailure as exc:
            failures.append(exc)
    raise PipelineFailure("find", "all branches failed", causes=failures)


def _lift(g: Graph, cert: SubdivisionCertificate, remap) -> SubdivisionCertificate:
    if remap is not None:
        cert = SubdivisionCertificate.build(
            [remap.to_old(v) for v in cert.cores],
            cert.ell,
            [tuple(remap.to_old(v) for v in p) for p in cert.paths.values()],
        )
    verdict = verify(g, cert)
    if not verdict:
        raise AssertionError(f"internal error: lifted certificate rejected: {verdict}")
    return cert
