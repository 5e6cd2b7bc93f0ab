"""Seeded k-wise independent Bernoulli samplers over a prime field.

A random degree-(k-1) polynomial over Z_prime gives a k-wise independent
hash family (Carter-Wegman). Thresholding the hash value turns it into a
Bernoulli sampler: a key is accepted iff its hash value is at most
floor(prob * prime), i.e. with probability (floor(prob * prime) + 1) / prime.
For the production prime 2^61 - 1 the gap to the requested probability is
below 2^-60, far under statistical noise; tests that need exact marginals
use a small prime and enumerate the whole family.

The leading polynomial coefficient is drawn nonzero so the polynomial has
full degree. This skews joint acceptance frequencies of distinct keys away
from perfect independence by at most 2/prime.

All randomness is expanded from a 64-bit seed with splitmix64, so a
(seed, prob, key) triple fully determines every sampling decision.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParameterError

MERSENNE61 = (1 << 61) - 1

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _scramble64(x: int) -> int:
    """splitmix64 output mixing of a 64-bit value."""
    x &= _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


class SplitMix64:
    """Deterministic 64-bit value stream; the seed-expansion PRNG."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return _scramble64(self._state)


def mix_seed(seed: int, index: int) -> int:
    """Derive sub-seed `index` of `seed`.

    Equals the index-th output of SplitMix64(seed), without advancing any
    shared state, so independently derived sub-seeds never collide with
    sequential draws in surprising ways.
    """
    return _scramble64((seed + (index + 1) * _GOLDEN) & _MASK64)


def _draw_field_element(stream: SplitMix64, prime: int, nonzero: bool = False) -> int:
    # Rejection sampling keeps the draw exactly uniform on [0, prime).
    limit = (1 << 64) - ((1 << 64) % prime)
    while True:
        z = stream.next()
        if z >= limit:
            continue
        value = z % prime
        if nonzero and value == 0:
            continue
        return value


def _threshold(prob, prime: int) -> int:
    """floor(prob * prime), computed exactly (no float rounding)."""
    try:
        frac = Fraction(prob)
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"probability must be a number, got {prob!r}") from exc
    if not 0 < frac <= 1:
        raise ParameterError(f"probability must be in (0, 1], got {prob}")
    return int(frac * prime)


def pack_edge_key(u: int, v: int, prime: int = MERSENNE61) -> int:
    """Field key of an undirected edge: min * 2^32 + max, reduced mod prime."""
    if u > v:
        u, v = v, u
    return (u * (1 << 32) + v) % prime


class PolynomialHash:
    """Random polynomial over Z_prime, coefficients highest degree first.

    The leading coefficient must be nonzero: a degree-(k-1) polynomial is
    what carries the k-wise independence of the family.
    """

    __slots__ = ("coefficients", "prime")

    def __init__(self, coefficients, prime: int = MERSENNE61):
        coefficients = tuple(int(c) for c in coefficients)
        if not coefficients:
            raise ParameterError("polynomial needs at least one coefficient")
        if coefficients[0] == 0:
            raise ParameterError("leading polynomial coefficient must be nonzero")
        if any(not 0 <= c < prime for c in coefficients):
            raise ParameterError("coefficients must lie in [0, prime)")
        self.coefficients = coefficients
        self.prime = prime

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def value(self, key: int) -> int:
        acc = 0
        for c in self.coefficients:
            acc = (acc * key + c) % self.prime
        return acc


class BernoulliHash(PolynomialHash):
    """Polynomial hash thresholded into a {0,1} sampler."""

    __slots__ = ("prob", "threshold")

    def __init__(self, coefficients, prob, prime: int = MERSENNE61):
        super().__init__(coefficients, prime)
        self.prob = prob
        self.threshold = _threshold(prob, prime)

    def accepts(self, key: int) -> bool:
        return self.value(key) <= self.threshold


class VertexSampler(BernoulliHash):
    """Pairwise independent vertex sampler (degree-1 polynomial)."""

    __slots__ = ()

    def sample(self, v: int) -> bool:
        return self.accepts(v % self.prime)


class EdgeSampler(BernoulliHash):
    """Four-wise independent edge sampler (degree-3 polynomial).

    Evaluated on the canonical packed key of the unordered endpoint pair,
    so sample(u, v) == sample(v, u).
    """

    __slots__ = ()

    def sample(self, u: int, v: int) -> bool:
        return self.accepts(pack_edge_key(u, v, self.prime))


def make_vertex_sampler(seed: int, p, prime: int = MERSENNE61) -> VertexSampler:
    """Vertex sampler accepting each key with probability p, derived from seed."""
    _threshold(p, prime)  # fail fast on a bad probability before drawing
    stream = SplitMix64(seed)
    a = _draw_field_element(stream, prime, nonzero=True)
    b = _draw_field_element(stream, prime)
    return VertexSampler((a, b), p, prime)


def make_edge_sampler(seed: int, q, prime: int = MERSENNE61) -> EdgeSampler:
    """Edge sampler accepting each edge with probability q, derived from seed."""
    _threshold(q, prime)
    stream = SplitMix64(seed)
    leading = _draw_field_element(stream, prime, nonzero=True)
    rest = [_draw_field_element(stream, prime) for _ in range(3)]
    return EdgeSampler((leading, *rest), q, prime)


def make_color_hash(seed: int, prime: int = MERSENNE61) -> PolynomialHash:
    """Degree-3 polynomial hash used to color vertices.

    Degree 3 (four-wise independence) so that the three corners of any
    triangle hash jointly uniformly; a pairwise family would correlate
    corner colors for ids in arithmetic progression.
    """
    stream = SplitMix64(seed)
    leading = _draw_field_element(stream, prime, nonzero=True)
    rest = [_draw_field_element(stream, prime) for _ in range(3)]
    return PolynomialHash((leading, *rest), prime)
