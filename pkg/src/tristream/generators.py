"""Synthetic graph families that pin the triangle-overlap statistics.

Each family fixes (T, delta_E, delta_V) independently of edge count:

  book(k)        k triangles all sharing one edge        (k, k, k)
  friendship(k)  k triangles all sharing one vertex      (k, 1, k)
  disjoint(t)    t vertex-disjoint triangles             (t, 1, 1)

These are the shapes on which the accuracy of a sampling estimator hinges;
together they stress each term of the estimator variance bound. A pad of
extra triangle-free edges (a star on fresh vertices) scales the stream
length m without touching any triangle statistic.
"""

from __future__ import annotations

import random

from .errors import ParameterError
from .graphs import EdgeStream, Graph
from .hashing import mix_seed


def _check_count(name: str, value: int, minimum: int = 1) -> int:
    if not isinstance(value, int) or value < minimum:
        raise ParameterError(f"{name} must be an integer >= {minimum}, got {value}")
    return value


def _pad_star(edges: list[tuple[int, int]], first_free_id: int, pad: int) -> None:
    """Append a star with `pad` edges on fresh vertices; triangle-free and
    disjoint from the core, so it changes m and nothing else."""
    if pad == 0:
        return
    hub = first_free_id
    for i in range(pad):
        edges.append((hub, hub + 1 + i))


def gen_book(k: int, pad: int = 0) -> Graph:
    """Spine edge (0, 1) plus k pages: vertices 2..k+1 adjacent to both ends."""
    _check_count("k", k)
    _check_count("pad", pad, minimum=0)
    edges = [(0, 1)]
    for page in range(2, k + 2):
        edges.append((0, page))
        edges.append((1, page))
    _pad_star(edges, k + 2, pad)
    return Graph.from_edges(edges)


def gen_friendship(k: int, pad: int = 0) -> Graph:
    """Center 0 plus k disjoint pairs (2i+1, 2i+2), each closed into a triangle."""
    _check_count("k", k)
    _check_count("pad", pad, minimum=0)
    edges = []
    for i in range(k):
        a, b = 2 * i + 1, 2 * i + 2
        edges.append((0, a))
        edges.append((0, b))
        edges.append((a, b))
    _pad_star(edges, 2 * k + 1, pad)
    return Graph.from_edges(edges)


def gen_disjoint(t: int, pad: int = 0) -> Graph:
    """t vertex-disjoint triangles on vertices 3i, 3i+1, 3i+2."""
    _check_count("t", t)
    _check_count("pad", pad, minimum=0)
    edges = []
    for i in range(t):
        a, b, c = 3 * i, 3 * i + 1, 3 * i + 2
        edges.extend([(a, b), (a, c), (b, c)])
    _pad_star(edges, 3 * t, pad)
    return Graph.from_edges(edges)


def gen_complete(n: int) -> Graph:
    """Complete graph on vertices 0..n-1."""
    _check_count("n", n, minimum=3)
    return Graph.from_edges((u, v) for u in range(n) for v in range(u + 1, n))


def _unrank_pair(index: int, n: int) -> tuple[int, int]:
    # pairs (i, j), i < j < n in lexicographic order
    lo, hi = 0, n - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid * (2 * n - mid - 1) // 2 <= index:
            lo = mid
        else:
            hi = mid - 1
    i = lo
    j = i + 1 + (index - i * (2 * n - i - 1) // 2)
    return i, j


def gen_er(n: int, m: int, seed: int = 0) -> Graph:
    """Uniform random simple graph with exactly m edges on vertex ids < n.

    Sampled without replacement, so m is exact. Vertices left without any
    edge do not appear in the graph (edge lists cannot express them).
    """
    _check_count("n", n, minimum=3)
    _check_count("m", m, minimum=0)
    total = n * (n - 1) // 2
    if m > total:
        raise ParameterError(f"m={m} exceeds the {total} possible edges on n={n} vertices")
    rng = random.Random(seed)
    indices = rng.sample(range(total), m)
    return Graph.from_edges(_unrank_pair(r, n) for r in sorted(indices))


def claimed_triangle_stats(family: str, size: int) -> tuple[int, int, int] | None:
    """Analytic (T, delta_E, delta_V) a family guarantees, or None if random."""
    if family == "book":
        return size, size, size
    if family == "friendship":
        return size, 1, size
    if family == "disjoint":
        return size, 1, 1
    if family == "complete":
        n = size
        return n * (n - 1) * (n - 2) // 6, n - 2, (n - 1) * (n - 2) // 2
    if family == "er":
        return None
    raise ParameterError(f"unknown family {family!r}")


ORDER_POLICIES = ("given", "random", "reverse")


def order_stream(source, policy: str = "given", seed: int = 0) -> EdgeStream:
    """Arrange edges into a stream: 'given' keeps the base order, 'reverse'
    flips it, 'random' applies a seeded uniform shuffle.

    For a Graph the base order is the canonical sorted edge list; for an
    EdgeStream (or any edge sequence) it is the order as supplied.
    """
    if isinstance(source, Graph):
        base = source.edge_list()
    elif isinstance(source, EdgeStream):
        base = list(source.edges)
    else:
        base = list(source)
    if policy == "given":
        edges = base
    elif policy == "reverse":
        edges = base[::-1]
    elif policy == "random":
        edges = base[:]
        random.Random(mix_seed(seed, 0)).shuffle(edges)
    else:
        raise ParameterError(f"unknown order policy {policy!r}; expected one of {ORDER_POLICIES}")
    return EdgeStream(edges)
