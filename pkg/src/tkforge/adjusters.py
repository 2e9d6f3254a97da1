"""Adjusters: two units plus core-to-core paths whose lengths step by 2.

A simple adjuster has two paths of lengths L and L + 2. Chaining glues a
fresh simple adjuster onto the end of an existing one through a short
connecting path, so the family of available lengths grows by one step per
round while the total length grows by a bounded amount.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .connector import _greedy_family, bfs_connect, equal_length_subfamily
from .errors import InputError, PipelineFailure
from .graph import Graph, check_vertices, is_path
from .units import Unit, assemble_unit, unit_problems


class EarlyOneSubdivision(Exception):
    """Raised when an adjuster step stumbles on a 1-subdivision instead."""

    def __init__(self, cert):
        self.cert = cert
        super().__init__(f"found TK_{cert.t}^(1)")


@dataclass(frozen=True)
class Adjuster:
    v1: int
    v2: int
    f1: Unit
    f2: Unit
    z: float
    a_set: frozenset
    paths: tuple[tuple[int, ...], ...]  # ascending length

    @property
    def lengths(self) -> list[int]:
        return [len(p) - 1 for p in self.paths]

    @property
    def length(self) -> int:
        return max(self.lengths)

    @property
    def base_length(self) -> int:
        return min(self.lengths)

    @property
    def k(self) -> int:
        return len(self.paths) - 1

    @property
    def perimeter(self) -> frozenset:
        return self.a_set | self.f1.interior | self.f2.interior

    def path_of_length(self, length: int) -> tuple[int, ...] | None:
        for p in self.paths:
            if len(p) - 1 == length:
                return p
        return None

    def describe(self) -> str:
        lines = [
            f"adjuster v1={self.v1} v2={self.v2} z={self.z:g} |A|={len(self.a_set)} "
            f"lengths={self.lengths}",
            self.f1.describe(),
            self.f2.describe(),
        ]
        lines.extend("  path " + " ".join(map(str, p)) for p in self.paths)
        return "\n".join(lines)


def adjuster_length(adj: Adjuster) -> int:
    return adj.length


def perimeter(adj: Adjuster) -> frozenset:
    return adj.perimeter


def _make(v1, v2, f1: Unit, f2: Unit, paths, spoke_unit: int) -> Adjuster:
    paths = tuple(sorted(paths, key=len))
    a_set = frozenset(v for p in paths for v in p[1:-1])
    z = min(f1.size, f2.size) / max(spoke_unit, 1)
    return Adjuster(v1, v2, f1, f2, z, a_set, paths)


def adjuster_problems(g: Graph, adj: Adjuster, avoid: Iterable[int] = ()) -> list[str]:
    """Every violated adjuster invariant, as text; empty means valid."""
    out = []
    if not adj.paths:
        return ["no paths"]
    lengths = adj.lengths
    base = min(lengths)
    if lengths != [base + 2 * i for i in range(len(lengths))]:
        out.append(f"lengths {lengths} are not a step-2 progression")
    allowed = adj.a_set | {adj.v1, adj.v2}
    for p in adj.paths:
        if not is_path(g, p):
            out.append(f"path {p[:4]}... is not a path of g")
        if p[0] != adj.v1 or p[-1] != adj.v2:
            out.append("path endpoints differ from the cores")
        if not set(p) <= allowed:
            out.append("path leaves A")
    if len(adj.a_set) > 2 * adj.length:
        out.append(f"|A|={len(adj.a_set)} exceeds 2*length={2 * adj.length}")
    if adj.a_set & (adj.f1.vertices | adj.f2.vertices):
        out.append("A meets a unit")
    if adj.f1.interior & adj.f2.interior:
        out.append("unit interiors intersect")
    if adj.f1.core != adj.v1 or adj.f2.core != adj.v2:
        out.append("unit cores differ from v1, v2")
    for tag, unit in (("f1", adj.f1), ("f2", adj.f2)):
        out.extend(f"{tag}: {p}" for p in unit_problems(g, unit))
    avoid = set(avoid)
    if avoid & adj.perimeter:
        out.append("perimeter meets the avoid set")
    if avoid & (adj.f1.vertices | adj.f2.vertices):
        out.append("a unit meets the avoid set")
    return out


def _drop_spokes(unit: Unit, indices: set[int], target: int) -> Unit:
    """Remove ``indices``; if fewer than two went, drop the lowest spare too."""
    drop = set(indices)
    if len(drop) < 2:
        spare = [i for i in range(unit.size) if i not in drop]
        if spare:
            drop.add(spare[0])
    kept = [i for i in range(unit.size) if i not in drop][:target]
    return unit.keep(kept)


def _rev(p):
    return tuple(reversed(p))


# -- simple adjusters --------------------------------------------------------

def build_simple_adjuster(g: Graph, avoid: Iterable[int], profile) -> Adjuster:
    """Two v1,v2-paths of lengths L and L + 2, with |A| <= 2(L + 2)."""
    avoid = check_vertices(g, avoid, "avoid")
    shape = profile.unit_shape(profile.adjuster_spokes)
    try:
        f1 = assemble_unit(g, avoid, shape, profile)
        f2 = assemble_unit(g, avoid | f1.vertices, shape, profile)
    except PipelineFailure as exc:
        raise PipelineFailure("simple adjuster", "unit building failed", causes=[exc]) from None

    adj = g.adjacency
    w_prime = set(avoid) | f1.interior | f2.interior
    family = _greedy_family(
        adj, set(f1.boundary), set(f2.boundary), set(w_prime), profile.family_count, profile.family_cap
    )
    try:
        paths = equal_length_subfamily(family.paths, profile.family_min)
    except PipelineFailure as exc:
        raise PipelineFailure(
            "simple adjuster", "family harvest failed", causes=[exc], found=len(family.paths)
        ) from None
    by_start = {p[0]: p for p in paths}
    target = 3 * profile.spoke_unit

    result = _case_one(g, avoid, f1, f2, w_prime, by_start, target, profile)
    if result is None:
        result = _case_two(g, avoid, f1, f2, w_prime, by_start, target, profile)
    if result.length > profile.adjuster_cap:
        raise PipelineFailure("simple adjuster", "too long", length=result.length, cap=profile.adjuster_cap)
    problems = adjuster_problems(g, result, avoid)
    if problems:
        raise AssertionError(f"internal error: simple adjuster invalid: {problems}")
    return result


def _case_one(g, avoid, f1: Unit, f2: Unit, w_prime, by_start, target, profile):
    """A vertex w outside everything with two neighbours w1, w2 in B."""
    b = set(by_start)
    forbidden = w_prime | f1.vertices | f2.vertices
    counts: dict[int, list[int]] = {}
    for v in sorted(b):
        for w in g.neighbors(v):
            if w not in forbidden:
                counts.setdefault(w, []).append(v)
    leaf1 = f1.leaf_index()
    leaf2 = f2.leaf_index()
    for w in sorted(counts):
        nb = counts[w]
        if len(nb) < 2:
            continue
        for i in range(len(nb)):
            for j in range(i + 1, len(nb)):
                w1, w2 = nb[i], nb[j]
                p1, p2 = by_start[w1], by_start[w2]
                if w in p2:
                    w1, w2, p1, p2 = w2, w1, p2, p1
                q1 = f1.leaf_route(w1)
                r1 = f2.leaf_route(p1[-1])
                r2 = f2.leaf_route(p2[-1])
                short = q1[:-1] + p1 + _rev(r1)[1:]
                long = q1 + (w,) + p2 + _rev(r2)[1:]
                if not (is_path(g, short) and is_path(g, long)):
                    continue
                f1p = _drop_spokes(f1, {leaf1[w1], leaf1[w2]}, target)
                f2p = _drop_spokes(f2, {leaf2[p1[-1]], leaf2[p2[-1]]}, target)
                result = _make(f1.core, f2.core, f1p, f2p, (short, long), profile.spoke_unit)
                if result.a_set & (f1p.vertices | f2p.vertices):
                    continue
                return result
    return None


def _case_two(g, avoid, f1: Unit, f2: Unit, w_prime, by_start, target, profile):
    """Route through a spare unit F3 and the detour w1 - x - w2 via a star centre."""
    d = g.average_degree()
    b = sorted(by_start)
    b0 = [v for v in b if sum(1 for w in g.neighbors(v) if w in w_prime) >= d / 2]
    b_set = set(b) - set(b0)
    # every interior vertex of F1 must see 0 or >= 2 of B'
    changed = True
    while changed:
        changed = False
        for x in sorted(f1.interior):
            hits = [v for v in g.neighbors(x) if v in b_set]
            if len(hits) == 1:
                b_set.discard(hits[0])
                changed = True
    if len(b_set) < 2:
        _try_onesub(g, b0, w_prime)
        raise PipelineFailure("simple adjuster", "both cases exhausted", stage="B' filter", left=len(b_set))

    w2prime = set(w_prime)
    for v in b_set:
        w2prime.update(by_start[v])
    blocked = w2prime | f2.vertices
    c = {u for v in b_set for u in g.neighbors(v) if u not in blocked}
    if not c:
        raise PipelineFailure("simple adjuster", "both cases exhausted", stage="empty C")
    family_vertices = {v for p in by_start.values() for v in p}
    try:
        f3 = assemble_unit(
            g,
            set(avoid) | f1.vertices | f2.vertices | family_vertices | c,
            profile.unit_shape(profile.adjuster_spokes),
            profile,
        )
    except PipelineFailure as exc:
        raise PipelineFailure("simple adjuster", "spare unit failed", causes=[exc]) from None
    adj = g.adjacency
    p = bfs_connect(adj, c, set(f3.boundary), blocked | f3.interior | f1.boundary - b_set, profile.family_cap)
    if p is None:
        raise PipelineFailure("simple adjuster", "both cases exhausted", stage="connect C to F3")
    u = p[0]
    star_of = {leaf: centre for centre, leaves in f1.stars for leaf in leaves}
    leaf2 = f2.leaf_index()
    for w1 in sorted(v for v in g.neighbors(u) if v in b_set):
        x = star_of[w1]
        for w2 in sorted(v for v in g.neighbors(x) if v in b_set and v != w1):
            pw1, pw2 = by_start[w1], by_start[w2]
            q3 = f3.leaf_route(p[-1])
            r4 = f2.leaf_route(pw1[-1])
            r5 = f2.leaf_route(pw2[-1])
            head = q3 + _rev(p)[1:]
            short = head + pw1 + _rev(r4)[1:]
            long = head + (w1, x) + pw2 + _rev(r5)[1:]
            if not (is_path(g, short) and is_path(g, long)):
                continue
            a_star = set(short[1:-1]) | set(long[1:-1])
            f3p = f3.trim(a_star)
            f3p = f3p.keep(range(min(target, f3p.size)))
            f2p = _drop_spokes(f2, {leaf2[pw1[-1]], leaf2[pw2[-1]]}, target)
            if f3p.size < 1 or f2p.size < 1:
                continue
            return _make(f3.core, f2.core, f3p, f2p, (short, long), profile.spoke_unit)
    raise PipelineFailure("simple adjuster", "both cases exhausted", stage="no detour")


def _try_onesub(g, b0, w_prime):
    """The dense alternative: B0 against W' may hold a 1-subdivision."""
    if not b0:
        return
    from .dense import find_onesub_asymmetric, make_instance

    try:
        inst = make_instance(g, b0, set(w_prime) - set(b0))
        cert = find_onesub_asymmetric(g, inst, seed=0, max_retries=5)
    except (InputError, PipelineFailure):
        return
    raise EarlyOneSubdivision(cert)


# -- chaining ----------------------------------------------------------------

def _compose(old: Adjuster, q: tuple[int, ...], new: Adjuster) -> list[tuple[int, ...]]:
    """old_a + Q + new_b over a + b = j, giving k1 + k2 + 1 lengths step 2."""
    k1, k2 = old.k, new.k
    out = []
    for j in range(k1 + k2 + 1):
        a = min(j, k1)
        out.append(old.paths[a] + q[1:] + new.paths[j - a][1:])
    return out


def chain_adjusters(
    g: Graph,
    avoid: Iterable[int],
    profile,
    window: tuple[int, int] | None = None,
    k: int | None = None,
    trace: list | None = None,
) -> Adjuster:
    """Grow an adjuster until its length first enters ``window``.

    Each round builds a fresh simple adjuster outside the current
    perimeter and both current units, then joins the current v2-side unit
    to the new v1-side unit. On success the ``k + 1`` longest paths are
    kept and both units are trimmed to the chain spoke count.
    """
    avoid = check_vertices(g, avoid, "avoid")
    lo, hi = window if window is not None else (profile.chain_lo, profile.chain_hi)
    if hi < lo:
        raise InputError("empty window")
    adj = g.adjacency
    try:
        cur = build_simple_adjuster(g, avoid, profile)
    except PipelineFailure as exc:
        raise PipelineFailure("chain", "first simple adjuster failed", causes=[exc]) from None
    if trace is not None:
        trace.append(cur)
    rounds = 0
    while cur.length < lo:
        rounds += 1
        held = set(avoid) | cur.perimeter | cur.f1.vertices | cur.f2.vertices
        try:
            new = build_simple_adjuster(g, held, profile)
        except PipelineFailure as exc:
            raise PipelineFailure("chain", "simple adjuster failed", causes=[exc], round=rounds) from None
        if trace is not None:
            trace.append(new)
        blocked = (held | new.perimeter | new.f2.vertices) - set(cur.f2.boundary) - set(new.f1.boundary)
        blocked |= cur.f2.interior | new.f1.interior
        link = bfs_connect(adj, set(cur.f2.boundary), set(new.f1.boundary), blocked, profile.connect_cap)
        if link is None:
            raise PipelineFailure("chain", "connect failed", round=rounds, cap=profile.connect_cap)
        q = cur.f2.leaf_route(link[0]) + link[1:] + _rev(new.f1.leaf_route(link[-1]))[1:]
        paths = _compose(cur, q, new)
        f1 = cur.f1
        f2 = new.f2
        nxt = _make(cur.v1, new.v2, f1, f2, paths, profile.spoke_unit)
        f1, f2 = f1.trim(nxt.a_set), f2.trim(nxt.a_set)
        nxt = _make(cur.v1, new.v2, f1, f2, paths, profile.spoke_unit)
        step = nxt.length - cur.length
        if not 1 <= step <= profile.chain_step:
            raise PipelineFailure("chain", "step outside increment bound", step=step, bound=profile.chain_step)
        cur = nxt
        if trace is not None:
            trace.append(cur)
    if cur.length > hi:
        raise PipelineFailure("chain", "overshoot", length=cur.length, window=f"[{lo},{hi}]")
    paths = cur.paths if k is None else cur.paths[-(k + 1):]
    if k is not None and len(cur.paths) < k + 1:
        raise PipelineFailure("chain", "too few paths", have=len(cur.paths), want=k + 1)
    spokes = profile.chain_spokes
    if cur.f1.size < spokes or cur.f2.size < spokes:
        raise PipelineFailure("chain", "units trimmed below z floor", f1=cur.f1.size, f2=cur.f2.size)
    f1 = cur.f1.keep(range(spokes))
    f2 = cur.f2.keep(range(spokes))
    out = _make(cur.v1, cur.v2, f1, f2, paths, profile.spoke_unit)
    problems = adjuster_problems(g, out, avoid)
    if problems:
        raise AssertionError(f"internal error: chained adjuster invalid: {problems}")
    return out
