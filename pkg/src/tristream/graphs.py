"""Simple undirected graphs: edge-list ingestion, exact triangle statistics.

The exact counts computed here are the ground truth every estimator in the
package is measured against.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .errors import ParseError, ValidationError

_U64_MAX = (1 << 64) - 1


def canonical_edge(u: int, v: int) -> tuple[int, int]:
    """Unordered pair as (min, max)."""
    return (u, v) if u < v else (v, u)


@dataclass
class EdgeStream:
    """Ordered sequence of undirected edges; the only input an estimator sees.

    `dropped` counts self-loops and duplicates discarded by a permissive parse.
    """

    edges: list[tuple[int, int]]
    dropped: int = 0

    def __iter__(self):
        return iter(self.edges)

    def __len__(self):
        return len(self.edges)


def load_edge_list(text, strict: bool = True) -> EdgeStream:
    """Parse edge-list text: one `u v` pair per line, '#' comments and blanks skipped.

    Strict mode rejects self-loops and duplicate unordered pairs; permissive
    mode drops them and reports the count in EdgeStream.dropped.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    dropped = 0
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"line {line_no}: expected two integers, got {line!r}", line_no)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"line {line_no}: expected two integers, got {line!r}", line_no) from None
        if not (0 <= u <= _U64_MAX and 0 <= v <= _U64_MAX):
            raise ParseError(f"line {line_no}: vertex id out of unsigned 64-bit range", line_no)
        if u == v:
            if strict:
                raise ValidationError(f"line {line_no}: self-loop {u}", line_no)
            dropped += 1
            continue
        edge = canonical_edge(u, v)
        if edge in seen:
            if strict:
                raise ValidationError(f"line {line_no}: duplicate edge {edge[0]} {edge[1]}", line_no)
            dropped += 1
            continue
        seen.add(edge)
        edges.append(edge)
    return EdgeStream(edges, dropped)


def to_edge_list_text(edges) -> str:
    """Serialize edges in the same text format load_edge_list reads."""
    return "".join(f"{u} {v}\n" for u, v in edges)


class Graph:
    """Fully materialized simple undirected graph.

    Only vertices incident to an edge exist; an edge list cannot express
    isolated vertices. Treat instances as immutable once built.
    """

    __slots__ = ("_adj", "_m")

    def __init__(self, adjacency: dict[int, set[int]], m: int):
        self._adj = adjacency
        self._m = m

    @classmethod
    def from_edges(cls, edges) -> "Graph":
        adj: dict[int, set[int]] = defaultdict(set)
        m = 0
        for u, v in edges:
            if u == v:
                raise ValidationError(f"self-loop {u}")
            if v in adj[u]:
                raise ValidationError(f"duplicate edge {min(u, v)} {max(u, v)}")
            adj[u].add(v)
            adj[v].add(u)
            m += 1
        return cls(dict(adj), m)

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def m(self) -> int:
        return self._m

    def vertices(self) -> list[int]:
        return sorted(self._adj)

    def neighbors(self, v: int) -> set[int]:
        return self._adj.get(v, set())

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, ())

    def edge_list(self) -> list[tuple[int, int]]:
        """All edges, canonical and sorted."""
        return sorted((u, v) for u, nbrs in self._adj.items() for v in nbrs if u < v)


def materialize(stream) -> Graph:
    """Build the graph of a strict stream; duplicate edges are a validation error."""
    return Graph.from_edges(stream)


@dataclass(frozen=True)
class GraphStats:
    """Exact graph statistics: triangle count, the per-edge and per-vertex
    maxima of triangle overlap, and the maximum degree."""

    n: int
    m: int
    triangles: int
    delta_e: int
    delta_v: int
    max_degree: int

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "T": self.triangles,
            "delta_E": self.delta_e,
            "delta_V": self.delta_v,
            "d": self.max_degree,
        }


def exact_triangle_count(g: Graph) -> int:
    """Exact triangle count by neighbor intersection over edges.

    Each triangle is seen once per edge, hence the division by 3. Cost is
    sum over edges of the smaller endpoint degree.
    """
    total = 0
    for u, v in g.edge_list():
        total += len(g.neighbors(u) & g.neighbors(v))
    return total // 3


def graph_stats(g: Graph) -> GraphStats:
    """All exact statistics in one pass over the edges.

    The common-neighborhood of edge (u, v) lists that edge's triangles
    directly; crediting each common neighbor w once tallies triangles per
    vertex, because every triangle has exactly one edge opposite each corner.
    """
    per_vertex: dict[int, int] = defaultdict(int)
    delta_e = 0
    total = 0
    for u, v in g.edge_list():
        common = g.neighbors(u) & g.neighbors(v)
        count = len(common)
        total += count
        if count > delta_e:
            delta_e = count
        for w in common:
            per_vertex[w] += 1
    delta_v = max(per_vertex.values(), default=0)
    max_degree = max((len(g.neighbors(v)) for v in g.vertices()), default=0)
    return GraphStats(
        n=g.n,
        m=g.m,
        triangles=total // 3,
        delta_e=delta_e,
        delta_v=delta_v,
        max_degree=max_degree,
    )


def triangle_list(g: Graph) -> list[tuple[int, int, int]]:
    """All triangles as sorted vertex triples (a < b < c), each exactly once."""
    triangles = []
    for a in g.vertices():
        nbrs_a = g.neighbors(a)
        for b in sorted(nbrs_a):
            if b <= a:
                continue
            for c in sorted(nbrs_a & g.neighbors(b)):
                if c > b:
                    triangles.append((a, b, c))
    return triangles
