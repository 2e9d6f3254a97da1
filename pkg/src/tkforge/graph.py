"""Undirected simple graphs on dense 0-based ids, plus elementary set operations.

A :class:`Graph` is immutable. Operations that drop vertices return a new
graph together with a :class:`Remap`, so structures found in a subgraph can
be lifted back to the ids of the graph they were cut from.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InputError

Path = tuple  # ordered tuple of distinct vertex ids


class Graph:
    """Simple undirected graph with sorted adjacency tuples."""

    __slots__ = ("_adj", "_sets", "_m", "_csr")

    def __init__(self, vertex_count: int, edges: Iterable[tuple[int, int]] = ()):
        if vertex_count < 0:
            raise InputError("vertex_count must be nonnegative")
        nbrs: list[set[int]] = [set() for _ in range(vertex_count)]
        for u, v in edges:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise InputError(f"edge ({u}, {v}) out of range for {vertex_count} vertices")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self._init(tuple(tuple(sorted(s)) for s in nbrs))

    @classmethod
    def from_adjacency(cls, adjacency: Sequence[Sequence[int]]) -> "Graph":
        """Build from per-vertex neighbour lists, checking symmetry."""
        g = cls.__new__(cls)
        adj = tuple(tuple(sorted(set(row))) for row in adjacency)
        n = len(adj)
        for v, row in enumerate(adj):
            for w in row:
                if not 0 <= w < n or w == v:
                    raise InputError(f"bad neighbour {w} of vertex {v}")
        g._init(adj)
        for v, row in enumerate(adj):
            for w in row:
                if v not in g._sets_for(w):
                    raise InputError(f"adjacency not symmetric at ({v}, {w})")
        return g

    def _init(self, adj: tuple[tuple[int, ...], ...]) -> None:
        self._adj = adj
        self._sets = None
        self._m = sum(len(row) for row in adj) // 2
        self._csr = None

    def _sets_for(self, v: int) -> frozenset:
        if self._sets is None:
            self._sets = [frozenset(row) for row in self._adj]
        return self._sets[v]

    # -- basic queries -------------------------------------------------
    @property
    def vertex_count(self) -> int:
        return len(self._adj)

    def __len__(self) -> int:
        return len(self._adj)

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        return self._adj

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def neighbor_set(self, v: int) -> frozenset:
        return self._sets_for(v)

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < len(self._adj) and v in self._sets_for(u)

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> list[int]:
        return [len(row) for row in self._adj]

    @property
    def edge_count(self) -> int:
        return self._m

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, row in enumerate(self._adj):
            for v in row:
                if u < v:
                    yield (u, v)

    def average_degree(self) -> float:
        n = len(self._adj)
        return 2.0 * self._m / n if n else 0.0

    def min_degree(self) -> int:
        return min((len(r) for r in self._adj), default=0)

    def max_degree(self) -> int:
        return max((len(r) for r in self._adj), default=0)

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, indices) arrays, built once and cached."""
        if self._csr is None:
            lengths = np.fromiter((len(r) for r in self._adj), dtype=np.int64, count=len(self._adj))
            indptr = np.zeros(len(self._adj) + 1, dtype=np.int64)
            np.cumsum(lengths, out=indptr[1:])
            indices = np.fromiter(
                (w for row in self._adj for w in row), dtype=np.int64, count=int(indptr[-1])
            )
            self._csr = (indptr, indices)
        return self._csr

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __hash__(self) -> int:
        return hash(self._adj)

    def __repr__(self) -> str:
        return f"Graph(n={self.vertex_count}, m={self.edge_count})"


@dataclass(frozen=True)
class Remap:
    """Id translation between a subgraph (new ids) and its parent (old ids)."""

    new_to_old: tuple[int, ...]

    @property
    def old_to_new(self) -> dict[int, int]:
        return {old: new for new, old in enumerate(self.new_to_old)}

    @classmethod
    def identity(cls, n: int) -> "Remap":
        return cls(tuple(range(n)))

    def to_old(self, v: int) -> int:
        return self.new_to_old[v]

    def lift(self, vertices: Iterable[int]) -> tuple[int, ...]:
        return tuple(self.new_to_old[v] for v in vertices)

    def compose(self, inner: "Remap") -> "Remap":
        """Remap from ``inner``'s new ids straight to this remap's old ids."""
        return Remap(tuple(self.new_to_old[v] for v in inner.new_to_old))


def check_vertices(g: Graph, vertices: Iterable[int], name: str = "vertex set") -> frozenset:
    """Return ``vertices`` as a frozenset, raising if any id is out of range."""
    s = frozenset(vertices)
    n = g.vertex_count
    for v in s:
        if not isinstance(v, (int, np.integer)) or not 0 <= v < n:
            raise InputError(f"{name}: vertex {v} out of range for {n} vertices")
    return s


def external_neighborhood(g: Graph, a: Iterable[int], restrict_to: Iterable[int] | None = None) -> frozenset:
    """N_G(A), intersected with ``restrict_to`` when given."""
    a = check_vertices(g, a, "a")
    adj = g.adjacency
    out = {w for v in a for w in adj[v] if w not in a}
    if restrict_to is not None:
        out &= check_vertices(g, restrict_to, "restrict_to")
    return frozenset(out)


def ball(g: Graph, a: Iterable[int], radius: int, avoid: Iterable[int] = ()) -> frozenset:
    """Vertices within distance ``radius`` of ``a`` in ``g - avoid``."""
    a = check_vertices(g, a, "a")
    avoid = check_vertices(g, avoid, "avoid")
    if radius < 0:
        raise InputError("radius must be nonnegative")
    if a & avoid:
        raise InputError("a must be disjoint from avoid")
    adj = g.adjacency
    seen = set(a)
    frontier = list(a)
    for _ in range(radius):
        nxt = []
        for v in frontier:
            for w in adj[v]:
                if w not in seen and w not in avoid:
                    seen.add(w)
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    return frozenset(seen)


def induced_subgraph(g: Graph, keep: Iterable[int]) -> tuple[Graph, Remap]:
    """G[keep] with ids re-densified in increasing order of the kept ids."""
    keep_sorted = tuple(sorted(check_vertices(g, keep, "keep")))
    new_id = {old: new for new, old in enumerate(keep_sorted)}
    adj = g.adjacency
    rows = [tuple(new_id[w] for w in adj[old] if w in new_id) for old in keep_sorted]
    sub = Graph.__new__(Graph)
    sub._init(tuple(rows))
    return sub, Remap(keep_sorted)


def delete_vertices(g: Graph, a: Iterable[int]) -> tuple[Graph, Remap]:
    """G - A, returned with the id remapping into ``g``."""
    a = check_vertices(g, a, "a")
    return induced_subgraph(g, (v for v in range(g.vertex_count) if v not in a))


def delete_edges(g: Graph, removed: Iterable[tuple[int, int]]) -> Graph:
    """G \\ F; vertex ids are preserved."""
    mask = set()
    for u, v in removed:
        if not g.has_edge(u, v):
            raise InputError(f"({u}, {v}) is not an edge")
        mask.add((min(u, v), max(u, v)))
    return Graph(g.vertex_count, (e for e in g.edges() if e not in mask))


def bipartition(g: Graph) -> list[int] | None:
    """A proper 2-colouring (lowest id of each component gets colour 0), or None."""
    n = g.vertex_count
    colour = [-1] * n
    adj = g.adjacency
    for s in range(n):
        if colour[s] >= 0:
            continue
        colour[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if colour[w] < 0:
                    colour[w] = 1 - colour[v]
                    queue.append(w)
                elif colour[w] == colour[v]:
                    return None
    return colour


def is_bipartite(g: Graph) -> bool:
    return bipartition(g) is not None


def components(g: Graph) -> list[tuple[int, ...]]:
    """Connected components as sorted tuples, ordered by smallest member."""
    n = g.vertex_count
    seen = [False] * n
    adj = g.adjacency
    out = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        stack = [s]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    stack.append(w)
        out.append(tuple(sorted(comp)))
    return out


def path_length(path: Sequence[int]) -> int:
    return len(path) - 1


def is_path(g: Graph, path: Sequence[int]) -> bool:
    """True if ``path`` is a nonempty sequence of distinct, consecutively adjacent vertices."""
    if not path or len(set(path)) != len(path):
        return False
    n = g.vertex_count
    if any(not 0 <= v < n for v in path):
        return False
    return all(g.has_edge(path[i], path[i + 1]) for i in range(len(path) - 1))
