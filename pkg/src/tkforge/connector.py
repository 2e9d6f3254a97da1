"""Short A,B-paths avoiding a vertex set, and greedy disjoint families of them.

An A,B-path has one endpoint in A, the other in B and no other vertex in
A or B. Multi-source BFS from all of A in G - W finds a shortest one: A
vertices all sit at level 0, so no path can re-enter A, and B vertices
are never expanded, so the first B vertex reached ends a valid path.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import InputError, PipelineFailure
from .graph import Graph, check_vertices


@dataclass(frozen=True)
class LengthBound:
    """ceil((100/eps1) * ln^3(15n / (eps2 d))), the expander path-length bound."""

    n: int
    d: float
    eps1: float
    eps2: float

    @property
    def value(self) -> int:
        ratio = 15.0 * self.n / (self.eps2 * self.d)
        if ratio <= 1.0:
            return 1
        return max(1, math.ceil((100.0 / self.eps1) * math.log(ratio) ** 3))

    @property
    def default_cap(self) -> int:
        return self.value + 2

    @property
    def m0(self) -> float:
        return self.value * 2 / 5


@dataclass(frozen=True)
class ConnectRequest:
    a: frozenset
    b: frozenset
    avoid: frozenset = frozenset()
    length_cap: int | None = None
    x_floor: int = 1

    def validated(self, g: Graph) -> "ConnectRequest":
        a = check_vertices(g, self.a, "a")
        b = check_vertices(g, self.b, "b")
        avoid = check_vertices(g, self.avoid, "avoid")
        if not a or not b:
            raise InputError("a and b must be nonempty")
        if a & b:
            raise InputError("a and b must be disjoint")
        if avoid & (a | b):
            raise InputError("avoid must be disjoint from a and b")
        if self.x_floor < 1 or len(a) < self.x_floor or len(b) < self.x_floor:
            raise InputError(f"|a| and |b| must be at least x_floor={self.x_floor}")
        if self.length_cap is not None and self.length_cap < 1:
            raise InputError("length_cap must be positive")
        return ConnectRequest(a, b, avoid, self.length_cap, self.x_floor)


def _trace(parent, v):
    out = [v]
    while True:
        v = parent[v]
        if v is None:
            break
        out.append(v)
    out.reverse()
    return tuple(out)


def bfs_connect(adj, a, b, blocked, cap=None):
    """Unchecked core: shortest A,B-path in G - blocked of length <= cap, else None.

    ``a``, ``b`` and ``blocked`` are sets; the caller guarantees a is
    disjoint from b and blocked. Ties go to the earliest-queued vertex,
    which makes the result deterministic.
    """
    parent = dict.fromkeys(sorted(a))
    frontier = list(parent)
    depth = 0
    while frontier and (cap is None or depth < cap):
        depth += 1
        nxt = []
        for v in frontier:
            for w in adj[v]:
                if w in parent or w in blocked:
                    continue
                parent[w] = v
                if w in b:
                    return _trace(parent, w)
                nxt.append(w)
        frontier = nxt
    return None


def bfs_tree_paths(adj, a, b, blocked, cap):
    """Shortest A,B-path to *every* reachable b within ``cap``, keyed by endpoint.

    B vertices are leaves of the search, so each returned path is itself a
    valid A,B-path.
    """
    parent = dict.fromkeys(sorted(a))
    frontier = list(parent)
    found = {}
    for _ in range(cap):
        nxt = []
        for v in frontier:
            for w in adj[v]:
                if w in parent or w in blocked:
                    continue
                parent[w] = v
                if w in b:
                    found[w] = _trace(parent, w)
                else:
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    return found


def connect(g: Graph, req: ConnectRequest) -> tuple[int, ...]:
    """Shortest A,B-path in G - avoid, capped at ``req.length_cap`` edges."""
    req = req.validated(g)
    adj = g.adjacency
    path = bfs_connect(adj, req.a, req.b, req.avoid, req.length_cap)
    if path is not None:
        return path
    if req.length_cap is not None:
        longer = bfs_connect(adj, req.a, req.b, req.avoid, None)
        if longer is not None:
            raise PipelineFailure(
                "connect", "length-exceeded", cap=req.length_cap, shortest=len(longer) - 1
            )
    raise PipelineFailure("connect", "disconnected")


class Family(NamedTuple):
    paths: list
    shortfall: int

    @property
    def complete(self) -> bool:
        return self.shortfall == 0


def connect_many_disjoint(
    g: Graph,
    a: Iterable[int],
    b: Iterable[int],
    avoid: Iterable[int],
    count: int,
    length_cap: int | None = None,
) -> Family:
    """Up to ``count`` pairwise vertex-disjoint A,B-paths, found greedily."""
    if count < 1:
        raise InputError("count must be positive")
    req = ConnectRequest(frozenset(a), frozenset(b), frozenset(avoid), length_cap).validated(g)
    return _greedy_family(g.adjacency, set(req.a), set(req.b), set(req.avoid), count, length_cap)


def _greedy_family(adj, a, b, blocked, count, cap):
    """Unchecked greedy core; mutates its set arguments."""
    paths = []
    while len(paths) < count and a and b:
        path = bfs_connect(adj, a, b, blocked, cap)
        if path is None:
            break
        paths.append(path)
        a.discard(path[0])
        b.discard(path[-1])
        blocked.update(path)
    return Family(paths, count - len(paths))


def equal_length_subfamily(paths: Sequence[tuple], minimum: int) -> list:
    """Largest class of equal-length paths; ties go to the shorter length."""
    if not paths:
        raise PipelineFailure("equal-length", "empty family", minimum=minimum)
    counts = Counter(len(p) - 1 for p in paths)
    length = min(counts, key=lambda L: (-counts[L], L))
    if counts[length] < minimum:
        raise PipelineFailure(
            "equal-length", "class too small", best=counts[length], length=length, minimum=minimum
        )
    return [p for p in paths if len(p) - 1 == length]
