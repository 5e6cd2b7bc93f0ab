"""One-pass triangle count estimators for insertion-only edge streams.

The combined estimator samples vertices with probability p (a pairwise
independent hash) and edges with probability q (a four-wise independent
hash). An arriving edge is stored iff the edge hash accepts it and at
least one endpoint is vertex-sampled. Before storing, the arriving edge
(w, v) is checked as a closing edge: every stored common neighbor of w
and v that is itself vertex-sampled increments the counter. A triangle is
therefore counted with probability exactly p * q^2, and
counter / (p * q^2) is an unbiased estimate of the triangle count.

The two degenerate parameterizations are exposed as named baselines:
q = 1 stores all edges at sampled vertices (vertex sampling), p = 1 stores
a q-fraction of edges and closes wedges for free (wedge sampling). Two
further baselines from the literature are included for comparison: uniform
edge sampling with T' * q^-3 rescaling, and monochromatic-edge retention
under a random vertex coloring with T' * k^2 rescaling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError
from .graphs import exact_triangle_count, materialize
from .hashing import (
    MERSENNE61,
    make_color_hash,
    make_edge_sampler,
    make_vertex_sampler,
    mix_seed,
)

# Sub-seed roles, shared with the batched engine so both derive identical hashes.
ROLE_VERTEX = 0
ROLE_EDGE = 1


@dataclass(frozen=True)
class EstimateReport:
    """Final output of one estimator run.

    `estimate` is exactly `counter / (p * q**2)`. For baselines that do not
    natively have two probabilities, p and q hold the effective scaling pair:
    wedge (1, q), vertex (p, 1), colorful (1, 1/k), uniform edge sampling
    (q, q) so that the q^-3 rescaling fits the same formula.
    """

    estimate: float
    counter: int
    p: float
    q: float
    stored_max: int
    edges_seen: int
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "counter": self.counter,
            "p": self.p,
            "q": self.q,
            "stored_max": self.stored_max,
            "edges_seen": self.edges_seen,
            "seed": self.seed,
        }


def _check_prob(name: str, value) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ParameterError(f"{name} must be a number, got {value!r}") from None
    if not 0.0 < value <= 1.0 or math.isnan(value):
        raise ParameterError(f"{name} must be in (0, 1], got {value}")
    return value


class OptEstimator:
    """Streaming vertex+edge sampling estimator.

    State is the stored-edge adjacency S, an integer hit counter, and the
    high-water mark of |S|. Edges are never evicted, so the mark equals the
    final size; it is tracked explicitly anyway for the space accounting
    report. Instances are single-threaded; run distinct seeds concurrently
    instead of sharing one.
    """

    algo = "opt"

    def __init__(self, p, q, seed: int = 0, *, prime: int = MERSENNE61,
                 vertex_sampler=None, edge_sampler=None):
        self.p = _check_prob("p", p)
        self.q = _check_prob("q", q)
        self.seed = seed
        self.vertex_sampler = vertex_sampler or make_vertex_sampler(
            mix_seed(seed, ROLE_VERTEX), p, prime)
        self.edge_sampler = edge_sampler or make_edge_sampler(
            mix_seed(seed, ROLE_EDGE), q, prime)
        self.stored: dict[int, set[int]] = {}
        self.counter = 0
        self.stored_now = 0
        self.stored_max = 0
        self.edges_seen = 0

    def process(self, w: int, v: int) -> None:
        """Handle one arriving edge: count closed wedges, then maybe store it.

        Counting strictly precedes insertion, so an edge never closes a
        wedge with itself and a two-edge prefix never counts.
        """
        self.edges_seen += 1
        stored_w = self.stored.get(w)
        stored_v = self.stored.get(v)
        if stored_w and stored_v:
            if len(stored_w) > len(stored_v):
                stored_w, stored_v = stored_v, stored_w
            sampled = self.vertex_sampler.sample
            for u in stored_w:
                if u in stored_v and sampled(u):
                    self.counter += 1
        if self.edge_sampler.sample(w, v) and (
                self.vertex_sampler.sample(w) or self.vertex_sampler.sample(v)):
            nbrs = self.stored.setdefault(w, set())
            if v not in nbrs:
                nbrs.add(v)
                self.stored.setdefault(v, set()).add(w)
                self.stored_now += 1
                if self.stored_now > self.stored_max:
                    self.stored_max = self.stored_now

    def process_stream(self, edges) -> None:
        for u, v in edges:
            self.process(u, v)

    def finalize(self) -> EstimateReport:
        return EstimateReport(
            estimate=self.counter / (self.p * self.q * self.q),
            counter=self.counter,
            p=self.p,
            q=self.q,
            stored_max=self.stored_max,
            edges_seen=self.edges_seen,
            seed=self.seed,
        )


def wedge_estimator(q, seed: int = 0, *, prime: int = MERSENNE61) -> OptEstimator:
    """Edge-sampling special case: every vertex sampled, edges kept with prob q."""
    est = OptEstimator(1.0, q, seed, prime=prime)
    est.algo = "wedge"
    return est


def vertex_estimator(p, seed: int = 0, *, prime: int = MERSENNE61) -> OptEstimator:
    """Vertex-sampling special case: all edges at sampled vertices are stored."""
    est = OptEstimator(p, 1.0, seed, prime=prime)
    est.algo = "vertex"
    return est


class TkmfEstimator:
    """Uniform edge sampling baseline.

    Keeps each arriving edge independently with probability q (four-wise
    hash, so runs are replayable), then counts the triangles T' of the
    retained subgraph at finalize and rescales by q^-3.
    """

    algo = "tkmf"

    def __init__(self, q, seed: int = 0, *, prime: int = MERSENNE61, edge_sampler=None):
        self.q = _check_prob("q", q)
        self.seed = seed
        self.edge_sampler = edge_sampler or make_edge_sampler(
            mix_seed(seed, ROLE_EDGE), q, prime)
        self.retained: list[tuple[int, int]] = []
        self.edges_seen = 0

    def process(self, u: int, v: int) -> None:
        self.edges_seen += 1
        if self.edge_sampler.sample(u, v):
            self.retained.append((u, v))

    def process_stream(self, edges) -> None:
        for u, v in edges:
            self.process(u, v)

    def finalize(self) -> EstimateReport:
        retained_triangles = exact_triangle_count(materialize(self.retained))
        return EstimateReport(
            estimate=retained_triangles / (self.q * self.q * self.q),
            counter=retained_triangles,
            p=self.q,
            q=self.q,
            stored_max=len(self.retained),
            edges_seen=self.edges_seen,
            seed=self.seed,
        )


class ColorfulEstimator:
    """Monochromatic-edge baseline.

    Colors vertices into [k] by hashing and keeps edges whose endpoints
    share a color. A triangle survives iff all three corners collide,
    probability 1/k^2, so the retained count is rescaled by k^2. The mod-k
    color has bias at most k/prime per vertex; negligible for any sane k.
    """

    algo = "colorful"

    def __init__(self, k: int, seed: int = 0, *, prime: int = MERSENNE61, color_hash=None):
        if not isinstance(k, int) or k < 1:
            raise ParameterError(f"color count k must be an integer >= 1, got {k}")
        self.k = k
        self.seed = seed
        self._hash = color_hash or make_color_hash(mix_seed(seed, ROLE_VERTEX), prime)
        self._prime = prime
        self.retained: list[tuple[int, int]] = []
        self.edges_seen = 0

    def color(self, v: int) -> int:
        return self._hash.value(v % self._prime) % self.k

    def process(self, u: int, v: int) -> None:
        self.edges_seen += 1
        if self.color(u) == self.color(v):
            self.retained.append((u, v))

    def process_stream(self, edges) -> None:
        for u, v in edges:
            self.process(u, v)

    def finalize(self) -> EstimateReport:
        retained_triangles = exact_triangle_count(materialize(self.retained))
        q = 1.0 / self.k
        return EstimateReport(
            estimate=retained_triangles / (1.0 * q * q),
            counter=retained_triangles,
            p=1.0,
            q=q,
            stored_max=len(self.retained),
            edges_seen=self.edges_seen,
            seed=self.seed,
        )


def select_params(t_lower: int, delta_e_upper: int, delta_v_upper: int) -> tuple[float, float]:
    """Sampling probabilities from a lower bound on the triangle count and
    upper bounds on the per-edge / per-vertex triangle overlaps.

    p = delta_v / T targets heavy vertices; q = max(delta_e / delta_v,
    1 / sqrt(delta_v)) targets heavy edges while keeping p * q^2 >= 1/T.
    Bounds that are inconsistent (ratios above 1) clamp to valid
    probabilities rather than erroring, since they still define a runnable
    estimator, just without the variance guarantee.
    """
    for name, value in (("t_lower", t_lower), ("delta_e_upper", delta_e_upper),
                        ("delta_v_upper", delta_v_upper)):
        if not isinstance(value, int) or value < 1:
            raise ParameterError(f"{name} must be an integer >= 1, got {value}")
    p = min(1.0, delta_v_upper / t_lower)
    q = min(1.0, max(delta_e_upper / delta_v_upper, 1.0 / math.sqrt(delta_v_upper)))
    return p, q


def variance_bound(triangles, delta_e, delta_v, p, q) -> float:
    """Analytic upper bound on the variance of the combined estimator.

    Three terms: the estimator's own second moment, pairs of triangles
    sharing an edge, and pairs sharing only a vertex. With select_params
    probabilities each term is at most T^2, so the bound is at most 3 T^2.
    """
    if triangles < 0 or delta_e < 0 or delta_v < 0:
        raise ParameterError("counts must be nonnegative")
    p = _check_prob("p", p)
    q = _check_prob("q", q)
    return (
        triangles / (p * q * q)
        + triangles * delta_e / (p * q)
        + triangles * delta_v / p
    )
