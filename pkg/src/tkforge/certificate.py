"""Balanced-subdivision certificates: data model, verifier and text format.

A certificate for TK_t^(ell) names ``t`` core vertices and one path per
unordered core pair. ``ell`` counts *internal* vertices of each path, so
every path has ``ell + 1`` edges. The verifier here is the trust anchor:
everything the pipeline emits is re-checked by :func:`verify`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, NamedTuple

from .errors import InputError, ParseError
from .graph import Graph


Pair = tuple  # (min core, max core)


@dataclass(frozen=True)
class SubdivisionCertificate:
    t: int
    cores: tuple[int, ...]
    ell: int
    paths: Mapping[Pair, tuple[int, ...]] = field(default_factory=dict)

    @classmethod
    def build(cls, cores, ell: int, paths) -> "SubdivisionCertificate":
        """Normalise: sorted cores, pair keys (lo, hi), each path oriented lo -> hi."""
        cores = tuple(sorted(cores))
        norm = {}
        for path in paths.values() if isinstance(paths, Mapping) else paths:
            path = tuple(int(v) for v in path)
            if len(path) < 2:
                raise InputError("a branch path needs two endpoints")
            if path[0] > path[-1]:
                path = path[::-1]
            key = (path[0], path[-1])
            if key in norm:
                raise InputError(f"duplicate path for pair {key}")
            norm[key] = path
        return cls(len(cores), cores, ell, dict(sorted(norm.items())))

    @property
    def pairs(self) -> list[Pair]:
        return list(combinations(self.cores, 2))

    @property
    def edge_length(self) -> int:
        return self.ell + 1

    def vertices(self) -> frozenset:
        out = set(self.cores)
        for p in self.paths.values():
            out.update(p)
        return frozenset(out)


class Verdict(NamedTuple):
    accepted: bool
    reason: str = ""
    where: object = None

    def __bool__(self) -> bool:
        return self.accepted

    def __str__(self) -> str:
        if self.accepted:
            return "accept"
        return f"reject({self.reason}, {self.where})" if self.where is not None else f"reject({self.reason})"


def _reject(reason: str, where=None) -> Verdict:
    return Verdict(False, reason, where)


def verify(g: Graph, cert: SubdivisionCertificate) -> Verdict:
    """Check ``cert`` against ``g``; the first violated clause is reported."""
    cores = tuple(cert.cores)
    if cert.t < 1 or len(cores) != cert.t:
        return _reject("core count differs from t")
    if len(set(cores)) != len(cores):
        return _reject("repeated core")
    if cert.ell < 0:
        return _reject("negative ell")
    n = g.vertex_count
    for c in cores:
        if not 0 <= c < n:
            return _reject("vertex out of range", c)
    core_set = set(cores)
    expected = {(min(a, b), max(a, b)) for a, b in combinations(cores, 2)}
    keys = set()
    for key, path in cert.paths.items():
        a, b = min(key), max(key)
        if (a, b) not in expected:
            return _reject("path for a non-core pair", key)
        if (a, b) in keys:
            return _reject("duplicate pair", key)
        keys.add((a, b))
    missing = sorted(expected - keys)
    if missing:
        return _reject("missing path", missing[0])

    owner: dict[int, Pair] = {}
    for key in sorted(keys):
        path = cert.paths.get(key)
        if path is None:
            path = cert.paths[(key[1], key[0])]
        if {path[0], path[-1]} != set(key) or len(path) < 2:
            return _reject("endpoints differ from pair", key)
        if len(path) - 1 != cert.ell + 1:
            return _reject("unequal path length", key)
        if len(set(path)) != len(path):
            return _reject("repeated vertex on path", key)
        for v in path:
            if not 0 <= v < n:
                return _reject("vertex out of range", v)
        for u, v in zip(path, path[1:]):
            if not g.has_edge(u, v):
                return _reject("missing edge", (u, v))
        for v in path[1:-1]:
            if v in core_set:
                return _reject("core used as internal vertex", v)
            if v in owner:
                return _reject("paths not internally disjoint", (owner[v], key))
            owner[v] = key
    return Verdict(True)


# -- text format ---------------------------------------------------------

def serialize(cert: SubdivisionCertificate) -> str:
    lines = [f"tk {cert.t} {cert.ell}"]
    lines.extend(f"core {c}" for c in cert.cores)
    for (a, b), path in sorted(cert.paths.items()):
        lines.append(f"path {a} {b} : " + " ".join(map(str, path)))
    return "\n".join(lines) + "\n"


def _ints(tokens, lineno):
    try:
        return [int(x) for x in tokens]
    except ValueError:
        raise ParseError("non-integer token", lineno) from None


def parse(text: str) -> SubdivisionCertificate:
    """Parse the line format written by :func:`serialize`.

    Structural checks that need no graph happen here: counts, endpoint
    matching, core distinctness and per-path length.
    """
    header = None
    cores: list[int] = []
    paths: dict[Pair, tuple[int, ...]] = {}
    last = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        last = lineno
        parts = line.split()
        kind = parts[0]
        if header is None:
            if kind != "tk" or len(parts) != 3:
                raise ParseError("expected header 'tk t ell'", lineno)
            t, ell = _ints(parts[1:], lineno)
            if t < 1 or ell < 0:
                raise ParseError("need t >= 1 and ell >= 0", lineno)
            header = (t, ell)
        elif kind == "core":
            if len(parts) != 2:
                raise ParseError("expected 'core v'", lineno)
            if paths:
                raise ParseError("core line after path lines", lineno)
            (v,) = _ints(parts[1:], lineno)
            if v < 0:
                raise ParseError("negative vertex id", lineno)
            if v in cores:
                raise ParseError(f"duplicate core {v}", lineno)
            cores.append(v)
        elif kind == "path":
            if len(parts) < 5 or parts[3] != ":":
                raise ParseError("expected 'path u v : v0 ... vk'", lineno)
            a, b = _ints(parts[1:3], lineno)
            seq = tuple(_ints(parts[4:], lineno))
            if a not in cores or b not in cores or a == b:
                raise ParseError(f"path endpoints {a} {b} are not two distinct cores", lineno)
            if {seq[0], seq[-1]} != {a, b} or len(seq) < 2:
                raise ParseError("path sequence does not join its pair", lineno)
            if len(seq) - 1 != header[1] + 1:
                raise ParseError("path length differs from ell + 1", lineno)
            key = (min(a, b), max(a, b))
            if key in paths:
                raise ParseError(f"duplicate path for pair {key}", lineno)
            paths[key] = seq if seq[0] == key[0] else seq[::-1]
        else:
            raise ParseError(f"unknown line type {kind!r}", lineno)
    if header is None:
        raise ParseError("empty certificate")
    t, ell = header
    if len(cores) != t:
        raise ParseError(f"expected {t} core lines, found {len(cores)}", last)
    if len(paths) != t * (t - 1) // 2:
        raise ParseError("missing paths", last)
    return SubdivisionCertificate.build(cores, ell, paths)
