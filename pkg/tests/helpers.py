"""Independent reference checkers shared by the test modules.

These deliberately avoid the package's own algorithms: they go through
networkx or restate a definition directly, so agreement with tkforge is
evidence rather than tautology.
"""
from __future__ import annotations

from itertools import combinations

import networkx as nx
from networkx.algorithms import isomorphism

from tkforge.graph import Graph


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.vertex_count))
    h.add_edges_from(g.edges())
    return h


def subdivided_clique(t: int, ell: int) -> nx.Graph:
    """TK_t^(ell) with nodes ("c", i) and ("p", i, j, k), k = 1..ell."""
    h = nx.Graph()
    h.add_nodes_from(("c", i) for i in range(t))
    for i, j in combinations(range(t), 2):
        chain = [("c", i)] + [("p", i, j, k) for k in range(1, ell + 1)] + [("c", j)]
        nx.add_path(h, chain)
    return h


def embedding_check(g: Graph, cert) -> bool:
    """Does ``cert`` spell out an injective, edge-preserving map of TK_t^(ell) into g?"""
    t, ell, cores = cert.t, cert.ell, list(cert.cores)
    if t < 1 or ell < 0 or len(cores) != t:
        return False
    gx = to_nx(g)
    keys = list(cert.paths)
    wanted = {frozenset((cores[i], cores[j])) for i, j in combinations(range(t), 2)}
    if len(wanted) != t * (t - 1) // 2:
        return False
    if any(frozenset(k) not in wanted or len(set(k)) != 2 for k in keys):
        return False
    phi = {}
    for i, c in enumerate(cores):
        phi[("c", i)] = c
    for i, j in combinations(range(t), 2):
        hits = [k for k in keys if frozenset(k) == {cores[i], cores[j]}]
        if len(hits) != 1:
            return False
        path = list(cert.paths[hits[0]])
        if path and path[0] == cores[j]:
            path.reverse()
        if len(path) != ell + 2 or path[0] != cores[i] or path[-1] != cores[j]:
            return False
        for k in range(1, ell + 1):
            phi[("p", i, j, k)] = path[k]
    image = list(phi.values())
    if len(set(image)) != len(image) or any(v not in gx for v in image):
        return False
    return all(gx.has_edge(phi[a], phi[b]) for a, b in subdivided_clique(t, ell).edges())


def contains_tk(g: Graph, t: int, ell: int) -> bool:
    """Existence of TK_t^(ell) as a (not necessarily induced) subgraph."""
    matcher = isomorphism.GraphMatcher(to_nx(g), subdivided_clique(t, ell))
    return matcher.subgraph_is_monomorphic()


def bfs_distance(g: Graph, a, b, avoid) -> int | None:
    """Shortest A,B-distance in G - avoid via networkx and a virtual source."""
    h = to_nx(g)
    h.remove_nodes_from(avoid)
    src = ("src",)
    h.add_node(src)
    h.add_edges_from((src, v) for v in a)
    lengths = nx.single_source_shortest_path_length(h, src)
    best = [lengths[v] - 1 for v in b if v in lengths]
    return min(best) if best else None


def is_ab_path(g: Graph, path, a, b, avoid) -> bool:
    """Definition of an A,B-path in G - avoid: ends in A and B, nothing else from A or B."""
    if len(path) < 1 or len(set(path)) != len(path):
        return False
    if path[0] not in a or path[-1] not in b:
        return False
    inner = path[1:-1]
    if any(v in a or v in b for v in inner):
        return False
    if any(v in avoid for v in path):
        return False
    gx = to_nx(g)
    return all(gx.has_edge(u, v) for u, v in zip(path, path[1:]))


def random_certificate(g: Graph, rng):
    """A certificate that is plausible often and genuine sometimes.

    Paths are random walks of the right length between random cores, so
    most clauses get exercised: repeated vertices, missing edges, shared
    internal vertices, wrong lengths and stray pairs all show up.
    """
    from tkforge.certificate import SubdivisionCertificate

    n = g.vertex_count
    t = rng.randint(1, min(4, n))
    ell = rng.randint(0, 2)
    cores = rng.sample(range(n), t)
    if rng.random() < 0.1:
        cores[-1] = cores[0]  # repeated core
    paths = {}
    for a, b in combinations(cores, 2):
        if rng.random() < 0.05:
            continue  # missing path
        walk = [a]
        for _ in range(ell):
            nbrs = g.neighbors(walk[-1])
            walk.append(rng.choice(nbrs) if nbrs and rng.random() < 0.9 else rng.randrange(n))
        walk.append(b)
        if rng.random() < 0.05:
            walk.insert(1, rng.randrange(n))  # wrong length
        if rng.random() < 0.5:
            walk.reverse()
        paths[(a, b) if rng.random() < 0.7 else (b, a)] = tuple(walk)
    if cores and rng.random() < 0.03:
        paths[(cores[0], (cores[0] + 1) % n)] = (cores[0], (cores[0] + 1) % n)
    return SubdivisionCertificate(t, tuple(cores), ell, paths)
