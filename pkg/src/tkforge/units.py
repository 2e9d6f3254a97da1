"""Units: a core with equal-length spokes, each ending at a disjoint star.

Units are grown from a disjoint star forest. Large phase-1 stars act as
candidate cores ("hubs") and medium phase-2 stars as candidate spoke ends.
Short leaf-to-leaf paths join the two pools one at a time, each attributed
to its (hub, partner) pair, until some hub has enough partners with an
equal-length class of paths. That hub, its spokes, and the partner stars
minus the path vertices form the unit.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .connector import bfs_connect, equal_length_subfamily
from .errors import InputError, PipelineFailure
from .graph import Graph, check_vertices, is_path


@dataclass(frozen=True)
class UnitShape:
    h0: int
    h1: int
    ell_bound: int

    def __post_init__(self):
        if min(self.h0, self.h1, self.ell_bound) < 1:
            raise InputError("unit shape entries must be positive")


@dataclass(frozen=True)
class Unit:
    """``spokes[i]`` runs from ``core`` to the centre of ``stars[i]``."""

    core: int
    spokes: tuple[tuple[int, ...], ...]
    stars: tuple[tuple[int, tuple[int, ...]], ...]

    @property
    def spoke_length(self) -> int:
        return len(self.spokes[0]) - 1 if self.spokes else 0

    @property
    def interior(self) -> frozenset:
        out = {self.core}
        for s in self.spokes:
            out.update(s)
        return frozenset(out)

    @property
    def boundary(self) -> frozenset:
        return frozenset(leaf for _, leaves in self.stars for leaf in leaves)

    @property
    def vertices(self) -> frozenset:
        return self.interior | self.boundary

    @property
    def size(self) -> int:
        return len(self.spokes)

    def leaf_index(self) -> dict[int, int]:
        return {leaf: i for i, (_, leaves) in enumerate(self.stars) for leaf in leaves}

    def leaf_route(self, leaf: int) -> tuple[int, ...]:
        """Path from the core through the owning spoke to ``leaf``."""
        for spoke, (_, leaves) in zip(self.spokes, self.stars):
            if leaf in leaves:
                return spoke + (leaf,)
        raise InputError(f"{leaf} is not a leaf of the unit at {self.core}")

    def keep(self, indices: Iterable[int]) -> "Unit":
        idx = sorted(set(indices))
        return Unit(self.core, tuple(self.spokes[i] for i in idx), tuple(self.stars[i] for i in idx))

    def trim(self, hit: Iterable[int]) -> "Unit":
        """Drop every spoke whose path or star meets ``hit`` (the core excepted)."""
        hit = set(hit) - {self.core}
        return self.keep(
            i
            for i, (spoke, (_, leaves)) in enumerate(zip(self.spokes, self.stars))
            if hit.isdisjoint(spoke) and hit.isdisjoint(leaves)
        )

    def usable_leaves(self, blocked: Iterable[int]) -> list[int]:
        """Leaves whose route from the core avoids ``blocked`` (the core excepted)."""
        blocked = set(blocked) - {self.core}
        out = []
        for spoke, (_, leaves) in zip(self.spokes, self.stars):
            if blocked.isdisjoint(spoke):
                out.extend(v for v in leaves if v not in blocked)
        return sorted(out)

    def describe(self) -> str:
        lines = [f"unit core={self.core} spokes={self.size} s={self.spoke_length}"]
        for spoke, (centre, leaves) in zip(self.spokes, self.stars):
            lines.append(f"  spoke {' '.join(map(str, spoke))} | leaves {' '.join(map(str, leaves))}")
        return "\n".join(lines)


def unit_problems(
    g: Graph, unit: Unit, shape: UnitShape | None = None, avoid: Iterable[int] = ()
) -> list[str]:
    """Every violated unit invariant, as text; empty means valid."""
    out = []
    if not unit.spokes:
        return ["no spokes"]
    if len(unit.spokes) != len(unit.stars):
        out.append("spoke and star counts differ")
    lengths = {len(s) - 1 for s in unit.spokes}
    if len(lengths) != 1:
        out.append(f"unequal spoke lengths {sorted(lengths)}")
    s = unit.spoke_length
    if s < 1:
        out.append("spoke of length 0")
    seen_internal: set[int] = set()
    for spoke, (centre, leaves) in zip(unit.spokes, unit.stars):
        if spoke[0] != unit.core:
            out.append(f"spoke {spoke} does not start at the core")
        if spoke[-1] != centre:
            out.append(f"spoke {spoke} does not end at its star centre {centre}")
        if not is_path(g, spoke):
            out.append(f"spoke {spoke} is not a path of g")
        rest = set(spoke[1:])
        if rest & seen_internal:
            out.append("spokes share vertices other than the core")
        seen_internal |= rest
        for leaf in leaves:
            if not g.has_edge(centre, leaf):
                out.append(f"leaf {leaf} not adjacent to centre {centre}")
    boundary = [v for _, leaves in unit.stars for v in leaves]
    if len(boundary) != len(set(boundary)):
        out.append("stars overlap")
    if set(boundary) & unit.interior:
        out.append("star leaves meet spoke vertices")
    if shape is not None:
        if s >= shape.ell_bound:
            out.append(f"spoke length {s} >= bound {shape.ell_bound}")
        if len(unit.spokes) != shape.h0:
            out.append(f"{len(unit.spokes)} spokes, shape wants {shape.h0}")
        if any(len(leaves) != shape.h1 for _, leaves in unit.stars):
            out.append(f"star size differs from {shape.h1}")
        if len(unit.interior) > shape.h0 * shape.ell_bound + 1:
            out.append("interior larger than h0 * ell_bound + 1")
    if unit.vertices & set(avoid):
        out.append("unit meets the avoid set")
    return out


# -- star harvesting -------------------------------------------------------

class _DegreeState:
    """Degrees in G - removed, updated as stars are harvested."""

    def __init__(self, g: Graph, avoid: frozenset):
        n = g.vertex_count
        indptr, indices = g.csr()
        self.adj = g.adjacency
        self.alive = np.ones(n, dtype=bool)
        if avoid:
            self.alive[list(avoid)] = False
        rows = np.repeat(np.arange(n), np.diff(indptr))
        deg = np.bincount(rows[self.alive[indices]], minlength=n).astype(np.int64)
        deg[~self.alive] = -1
        self.deg = deg

    def remove(self, vs: Iterable[int]) -> None:
        alive, deg, adj = self.alive, self.deg, self.adj
        for v in vs:
            if alive[v]:
                alive[v] = False
                deg[v] = -1
                for w in adj[v]:
                    if alive[w]:
                        deg[w] -= 1

    def harvest(self, leaf_count: int, floor: int | None = None):
        """Next star; with ``floor`` the size shrinks to what is available, down to ``floor``."""
        if not len(self.deg):
            return None
        centre = int(np.argmax(self.deg))  # argmax breaks ties by lowest id
        if floor is not None:
            leaf_count = max(floor, min(leaf_count, int(self.deg[centre])))
        if self.deg[centre] < leaf_count:
            return None
        alive = self.alive
        leaves = tuple(w for w in self.adj[centre] if alive[w])[:leaf_count]
        self.remove((centre,) + leaves)
        return centre, leaves


def harvest_star(g: Graph, avoid: Iterable[int], leaf_count: int) -> tuple[int, tuple[int, ...]]:
    """Max-degree vertex of G - avoid with its ``leaf_count`` lowest-id neighbours."""
    if leaf_count < 1:
        raise InputError("leaf_count must be positive")
    avoid = check_vertices(g, avoid, "avoid")
    star = _DegreeState(g, avoid).harvest(leaf_count)
    if star is None:
        raise PipelineFailure("harvest", "no vertex of large enough degree", leaf_count=leaf_count)
    return star


@dataclass(frozen=True)
class StarForest:
    stars: tuple[tuple[int, tuple[int, ...]], ...]
    phases: tuple[int, ...]

    def phase(self, k: int) -> list[tuple[int, tuple[int, ...]]]:
        return [s for s, p in zip(self.stars, self.phases) if p == k]

    @property
    def vertices(self) -> frozenset:
        return frozenset(v for c, leaves in self.stars for v in (c,) + leaves)


def build_star_forest(
    g: Graph,
    avoid: Iterable[int],
    phase1: tuple[int, int],
    phase2: tuple[int, int],
    adaptive: bool = False,
) -> StarForest:
    """``phase1[0]`` stars of ``phase1[1]`` leaves, then the same for phase 2.

    With ``adaptive`` a phase-1 star takes as many leaves as its centre has
    left, capped at ``phase1[1]`` and never below ``phase2[1]``.
    """
    if phase1[1] < phase2[1]:
        raise InputError("phase-1 leaf count must be at least the phase-2 leaf count")
    avoid = check_vertices(g, avoid, "avoid")
    state = _DegreeState(g, avoid)
    stars, phases = [], []
    for tag, (count, leaf_count) in ((1, phase1), (2, phase2)):
        floor = phase2[1] if adaptive and tag == 1 else None
        for i in range(count):
            star = state.harvest(leaf_count, floor)
            if star is None:
                raise PipelineFailure(
                    "star forest", "harvest failed", phase=tag, index=i, leaf_count=leaf_count
                )
            stars.append(star)
            phases.append(tag)
    return StarForest(tuple(stars), tuple(phases))


# -- unit assembly ---------------------------------------------------------

def assemble_unit(g: Graph, avoid: Iterable[int], shape: UnitShape, profile) -> Unit:
    """One unit of ``shape`` in G - avoid, grown from a fresh star forest."""
    avoid = check_vertices(g, avoid, "avoid")
    forest = build_star_forest(
        g,
        avoid,
        (profile.phase1_count, max(profile.phase1_leaves, 1)),
        (profile.phase2_count, max(profile.phase2_leaves, 1)),
        adaptive=True,
    )
    hubs = forest.phase(1)
    partners = forest.phase(2)
    # a spoke is centre_i, a, ..., b, centre_j, so the leaf path has <= s - 2 edges
    cap = min(profile.unit_path_cap, shape.ell_bound - 3)
    if cap < 1:
        raise InputError("ell_bound too small for leaf-to-leaf spokes")

    adj = g.adjacency
    source_owner = {leaf: i for i, (_, leaves) in enumerate(hubs) for leaf in leaves}
    target_owner = {leaf: j for j, (_, leaves) in enumerate(partners) for leaf in leaves}
    blocked = set(avoid)
    blocked.update(c for c, _ in forest.stars)
    found: list[list[tuple[int, tuple[int, ...]]]] = [[] for _ in hubs]
    best = 0
    sources = set(source_owner)
    targets = set(target_owner)
    while sources and targets:
        path = bfs_connect(adj, sources, targets, blocked, cap)
        if path is None:
            break
        i, j = source_owner[path[0]], target_owner[path[-1]]
        spoke = (hubs[i][0],) + path + (partners[j][0],)
        found[i].append((j, spoke))
        sources.discard(path[0])
        blocked.update(path)
        # the partner is now paired: its leaves are protected from later paths
        leaves_j = partners[j][1]
        targets.difference_update(leaves_j)
        blocked.update(leaves_j)
        best = max(best, len(found[i]))
        if len(found[i]) < max(profile.hub_threshold, shape.h0):
            continue
        try:
            chosen = equal_length_subfamily([s for _, s in found[i]], shape.h0)
        except PipelineFailure:
            continue
        return _emit(hubs[i][0], found[i], chosen, partners, shape)
    raise PipelineFailure("unit", "pool exhausted before a hub emerged", max_hub=best, needed=shape.h0)


def _emit(core, attached, chosen, partners, shape: UnitShape) -> Unit:
    chosen = set(chosen)
    picked = [(j, s) for j, s in attached if s in chosen][: shape.h0]
    used = {v for _, s in attached for v in s}
    spokes, stars = [], []
    for j, spoke in picked:
        centre, leaves = partners[j]
        kept = tuple(sorted(v for v in leaves if v not in used))[: shape.h1]
        if len(kept) < shape.h1:
            raise PipelineFailure("unit", "star trimmed below h1", centre=centre, left=len(kept))
        spokes.append(spoke)
        stars.append((centre, kept))
    return Unit(core, tuple(spokes), tuple(stars))


def validate_units_disjoint(units: Sequence[Unit]) -> bool:
    seen: set[int] = set()
    for u in units:
        if seen & u.interior:
            return False
        seen |= u.interior
    return True
