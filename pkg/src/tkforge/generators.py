"""Deterministic graph generators.

Random kinds take an explicit integer seed; nothing reads global RNG state.
"""
from __future__ import annotations

import random
from collections import defaultdict

import numpy as np

from .errors import InputError
from .graph import Graph


def complete(n: int) -> Graph:
    if n < 0:
        raise InputError("n must be nonnegative")
    return Graph(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def complete_bipartite(a: int, b: int) -> Graph:
    """K_{a,b}: left side 0..a-1, right side a..a+b-1."""
    if a < 0 or b < 0:
        raise InputError("side sizes must be nonnegative")
    return Graph(a + b, ((u, a + v) for u in range(a) for v in range(b)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise InputError("a cycle needs at least 3 vertices")
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    if n < 1:
        raise InputError("a path needs at least 1 vertex")
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def hypercube(dim: int) -> Graph:
    if dim < 0:
        raise InputError("dimension must be nonnegative")
    n = 1 << dim
    return Graph(n, ((v, v ^ (1 << b)) for v in range(n) for b in range(dim) if v < v ^ (1 << b)))


def gnp(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p) from a PCG64 stream seeded with ``seed``."""
    if n < 0 or not 0.0 <= p <= 1.0:
        raise InputError("need n >= 0 and 0 <= p <= 1")
    rng = np.random.default_rng(seed)
    edges = []
    for u in range(n - 1):
        hits = np.nonzero(rng.random(n - u - 1) < p)[0]
        edges.extend((u, u + 1 + int(j)) for j in hits)
    return Graph(n, edges)


def random_regular(n: int, d: int, seed: int) -> Graph:
    """Uniform-ish random d-regular graph by stub pairing with repair rounds."""
    if (n * d) % 2:
        raise InputError("n * d must be even")
    if not 0 <= d < n:
        raise InputError("need 0 <= d < n")
    rng = random.Random(seed)
    if d == 0:
        return Graph(n)

    def suitable(edges, potential):
        if not potential:
            return True
        nodes = sorted(potential)
        for i, s1 in enumerate(nodes):
            for s2 in nodes[:i]:
                if (s2, s1) not in edges:
                    return True
        return False

    def attempt():
        edges = set()
        stubs = [v for v in range(n) for _ in range(d)]
        while stubs:
            potential = defaultdict(int)
            rng.shuffle(stubs)
            it = iter(stubs)
            for s1, s2 in zip(it, it):
                if s1 > s2:
                    s1, s2 = s2, s1
                if s1 != s2 and (s1, s2) not in edges:
                    edges.add((s1, s2))
                else:
                    potential[s1] += 1
                    potential[s2] += 1
            if not suitable(edges, potential):
                return None
            stubs = [v for v in sorted(potential) for _ in range(potential[v])]
        return edges

    edges = attempt()
    while edges is None:
        edges = attempt()
    return Graph(n, sorted(edges))


GENERATORS = {
    "complete": (complete, ("n",)),
    "complete_bipartite": (complete_bipartite, ("a", "b")),
    "gnp": (gnp, ("n", "p", "seed")),
    "random_regular": (random_regular, ("n", "d", "seed")),
    "hypercube": (hypercube, ("dim",)),
    "cycle": (cycle, ("n",)),
    "path": (path_graph, ("n",)),
}

RANDOM_KINDS = frozenset({"gnp", "random_regular"})


def generate(kind: str, **params) -> Graph:
    """Dispatch to a named generator; random kinds require ``seed``."""
    try:
        fn, names = GENERATORS[kind]
    except KeyError:
        raise InputError(f"unknown generator {kind!r}; choose from {sorted(GENERATORS)}") from None
    if kind in RANDOM_KINDS and params.get("seed") is None:
        raise InputError(f"generator {kind!r} requires a seed")
    missing = [k for k in names if k not in params]
    extra = [k for k in params if k not in names]
    if missing or extra:
        raise InputError(f"generator {kind!r} takes {names}; missing {missing}, unexpected {extra}")
    return fn(**{k: params[k] for k in names})
