"""Exhaustive search for the smallest balanced subdivision on tiny graphs."""
from __future__ import annotations

from itertools import combinations
from typing import NamedTuple, Optional

from .certificate import SubdivisionCertificate
from .errors import InputError
from .graph import Graph


class OracleResult(NamedTuple):
    found: bool
    ell: Optional[int] = None
    cert: Optional[SubdivisionCertificate] = None


def _paths_of_length(adj, a, b, edges, blocked):
    """All simple a->b paths with exactly ``edges`` edges avoiding ``blocked``."""
    stack = [a]
    on_path = {a}

    def rec(v, remaining):
        if remaining == 1:
            if b in adj[v]:
                yield tuple(stack) + (b,)
            return
        for w in adj[v]:
            if w == b or w in on_path or w in blocked:
                continue
            stack.append(w)
            on_path.add(w)
            yield from rec(w, remaining - 1)
            stack.pop()
            on_path.discard(w)

    yield from rec(a, edges)


def _search(adj, cores, ell):
    pairs = list(combinations(cores, 2))
    core_set = set(cores)
    used: set[int] = set()
    chosen: list[tuple[int, ...]] = []

    def rec(i):
        if i == len(pairs):
            return True
        a, b = pairs[i]
        blocked = used | (core_set - {a, b})
        for path in _paths_of_length(adj, a, b, ell + 1, blocked):
            inner = path[1:-1]
            used.update(inner)
            chosen.append(path)
            if rec(i + 1):
                return True
            chosen.pop()
            used.difference_update(inner)
        return False

    return list(chosen) if rec(0) else None


def brute_force_max_balanced(g: Graph, t: int, n_max: int = 12) -> OracleResult:
    """Smallest ``ell >= 0`` such that ``g`` contains TK_t^(ell), or not-found.

    ``ell`` ranges over every value that fits in ``g``:
    ``t + C(t, 2) * ell <= |g|``. Core sets are tried in lexicographic
    order; paths per pair are enumerated by DFS in neighbour order.
    """
    n = g.vertex_count
    if n > n_max:
        raise InputError(f"oracle guard: {n} vertices exceeds n_max={n_max}")
    if t < 1:
        raise InputError("t must be positive")
    if t > n:
        return OracleResult(False)
    adj = g.adjacency
    npairs = t * (t - 1) // 2
    max_ell = 0 if npairs == 0 else (n - t) // npairs
    # each core starts t-1 internally disjoint paths, so needs t-1 distinct neighbours
    eligible = [v for v in range(n) if len(adj[v]) >= t - 1]
    for ell in range(max_ell + 1):
        for cores in combinations(eligible, t):
            paths = _search(adj, cores, ell)
            if paths is not None:
                return OracleResult(True, ell, SubdivisionCertificate.build(cores, ell, paths))
    return OracleResult(False)
