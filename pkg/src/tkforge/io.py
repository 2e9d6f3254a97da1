"""Edge-list and DIMACS text formats."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError
from .graph import Graph


@dataclass(frozen=True)
class ParseStats:
    lines: int
    edges: int
    duplicates: int


def parse_edge_list_stats(text: str) -> tuple[Graph, ParseStats]:
    """Parse ``u v`` lines; ``#`` comments and blank lines are skipped.

    Duplicate edges (in either orientation) collapse silently and are
    counted in the returned stats.
    """
    seen: set[tuple[int, int]] = set()
    duplicates = 0
    max_id = -1
    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {raw.strip()!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer vertex in {raw.strip()!r}", lineno) from None
        if u < 0 or v < 0:
            raise ParseError("vertex ids must be nonnegative", lineno)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", lineno)
        e = (min(u, v), max(u, v))
        if e in seen:
            duplicates += 1
            continue
        seen.add(e)
        max_id = max(max_id, e[1])
    g = Graph(max_id + 1, seen)
    return g, ParseStats(len(lines), len(seen), duplicates)


def parse_edge_list(text: str) -> Graph:
    return parse_edge_list_stats(text)[0]


def serialize_edge_list(g: Graph) -> str:
    """Canonical form: one ``u v`` per line with u < v, lexicographically sorted."""
    return "".join(f"{u} {v}\n" for u, v in g.edges())


def canonical_edge_text(text: str) -> str:
    return serialize_edge_list(parse_edge_list(text))


def parse_dimacs(text: str) -> Graph:
    """DIMACS ``.col`` style: ``p edge n m`` header then 1-indexed ``e u v`` lines."""
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if len(parts) < 3:
                raise ParseError("malformed problem line", lineno)
            try:
                n = int(parts[2])
            except ValueError:
                raise ParseError("non-integer vertex count", lineno) from None
        elif parts[0] == "e":
            if n is None:
                raise ParseError("edge before 'p' line", lineno)
            if len(parts) != 3:
                raise ParseError(f"expected 'e u v', got {raw.strip()!r}", lineno)
            try:
                u, v = int(parts[1]) - 1, int(parts[2]) - 1
            except ValueError:
                raise ParseError("non-integer vertex", lineno) from None
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"vertex out of range 1..{n}", lineno)
            if u == v:
                raise ParseError(f"self-loop at vertex {u + 1}", lineno)
            edges.append((u, v))
        else:
            raise ParseError(f"unknown line type {parts[0]!r}", lineno)
    if n is None:
        raise ParseError("missing 'p edge n m' line")
    return Graph(n, edges)


def read_graph(path: str) -> Graph:
    """Read an edge-list file; ``.col``/``.dimacs`` suffixes use the DIMACS reader."""
    with open(path) as fh:
        text = fh.read()
    if path.endswith((".col", ".dimacs")):
        return parse_dimacs(text)
    return parse_edge_list(text)
