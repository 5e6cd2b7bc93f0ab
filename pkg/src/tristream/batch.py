"""Vectorized execution of many independently seeded estimator copies.

Monte-Carlo verification and median-of-means amplification both run the
same stream under thousands of seeds. Doing that with one Python estimator
object per seed is orders of magnitude too slow, so this module evaluates
the hash decisions for all copies at once with a compiled kernel and then
replays the stream once, touching per-copy state only at wedge-closing
events.

The restructuring is exact, not approximate: sampling decisions do not
depend on stream history, a copy's stored-edge set is determined by its
hash bits, and a wedge (u,w),(u,v) closed by an arriving
edge contributes to copy c iff copy c's vertex hash accepts u and its
edge hash accepts both uw and uv. Every function here is
bit-identical to looping over the scalar estimators with the same seeds,
and the test suite asserts that equivalence.

Only the production prime 2^61 - 1 is supported; the kernels hardcode its
Mersenne reduction. Kernels are compiled with numba when available and
fall back to a slower numpy path otherwise (or when TRISTREAM_FORCE_NUMPY
is set).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ValidationError
from .estimators import ROLE_EDGE, ROLE_VERTEX, _check_prob
from .graphs import canonical_edge, materialize, triangle_list
from .hashing import MERSENNE61, _GOLDEN, _threshold, pack_edge_key

_U64 = np.uint64
_P = _U64(MERSENNE61)
_M32 = _U64((1 << 32) - 1)
_M29 = _U64((1 << 29) - 1)
_MASK64 = (1 << 64) - 1

_POPCOUNT = np.unpackbits(np.arange(256, dtype=np.uint8)[:, None], axis=1).sum(axis=1).astype(np.int64)


# ---------------------------------------------------------------------------
# seed expansion, vectorized lane-for-lane against hashing.SplitMix64


def _scramble_vec(x: np.ndarray) -> np.ndarray:
    x = (x ^ (x >> _U64(30))) * _U64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> _U64(27))) * _U64(0x94D049BB133111EB)
    return x ^ (x >> _U64(31))


def mix_seed_vec(seeds: np.ndarray, index: int) -> np.ndarray:
    """Vector form of hashing.mix_seed over an array of seeds."""
    step = _U64(((index + 1) * _GOLDEN) & _MASK64)
    return _scramble_vec(seeds + step)


def derive_seed_sequence(master_seed: int, count: int) -> np.ndarray:
    """[mix_seed(master_seed, i) for i in range(count)] as a uint64 array."""
    steps = np.arange(1, count + 1, dtype=np.uint64) * _U64(_GOLDEN)
    return _scramble_vec(_U64(master_seed & _MASK64) + steps)


def _draw_field_vec(state: np.ndarray, prime: int, nonzero: bool = False) -> np.ndarray:
    """One uniform field element per lane, advancing each lane's stream.

    Lanes that hit the rejection region redraw individually, so every lane
    reproduces exactly the scalar rejection-sampling sequence.
    """
    out = np.zeros(state.shape, dtype=np.uint64)
    pending = np.arange(state.shape[0])
    limit = _U64((1 << 64) - ((1 << 64) % prime))
    prime_u = _U64(prime)
    while pending.size:
        s = state[pending] + _U64(_GOLDEN)
        state[pending] = s
        z = _scramble_vec(s)
        val = z % prime_u
        ok = z < limit
        if nonzero:
            ok &= val != _U64(0)
        out[pending[ok]] = val[ok]
        pending = pending[~ok]
    return out


def derive_coefficients(seeds: np.ndarray, degree: int, prime: int = MERSENNE61) -> np.ndarray:
    """Per-seed polynomial coefficients, shape (degree+1, n_seeds), highest first."""
    state = seeds.astype(np.uint64).copy()
    rows = [_draw_field_vec(state, prime, nonzero=True)]
    for _ in range(degree):
        rows.append(_draw_field_vec(state, prime))
    return np.stack(rows)


# ---------------------------------------------------------------------------
# kernels: evaluate one polynomial per copy at many keys


def _key_parts(keys, prime: int, powers: int):
    """32-bit split of key powers x^1..x^powers mod prime, as uint64 arrays."""
    parts = []
    for d in range(1, powers + 1):
        xs = [pow(k, d, prime) for k in keys]
        arr = np.array(xs, dtype=np.uint64)
        parts.append(arr & _M32)
        parts.append(arr >> _U64(32))
    return parts


def _use_numba() -> bool:
    return not os.environ.get("TRISTREAM_FORCE_NUMPY")


_kernels = None


def _get_kernels():
    """Compile (or load from cache) the numba kernels; None if unavailable."""
    global _kernels
    if _kernels is not None:
        return _kernels or None
    if not _use_numba():
        _kernels = False
        return None
    try:
        import warnings

        from numba import NumbaWarning, njit, prange

        # the TBB-version notice is pure noise on stderr; numba falls back
        # to another threading layer by itself
        warnings.filterwarnings("ignore", message="The TBB threading layer requires",
                                category=NumbaWarning)
    except ImportError:
        _kernels = False
        return None

    @njit(inline="always")
    def mulmod(a, x_lo, x_hi):
        # (a * x) mod 2^61-1, partially reduced below 2^61 + 4
        a_lo = a & _U64(0xFFFFFFFF)
        a_hi = a >> _U64(32)
        lo = a_lo * x_lo
        mid = a_lo * x_hi + a_hi * x_lo
        hi = a_hi * x_hi
        r = (
            (lo & _P)
            + (lo >> _U64(61))
            + ((mid & _M29) << _U64(32))
            + (mid >> _U64(29))
            + (hi << _U64(3))
        )
        return (r & _P) + (r >> _U64(61))

    @njit(inline="always")
    def reduce_full(v):
        v = (v & _P) + (v >> _U64(61))
        v = (v & _P) + (v >> _U64(61))
        if v >= _P:
            v -= _P
        return v

    @njit(parallel=True, cache=True)
    def bits3(c3, c2, c1, c0, x1l, x1h, x2l, x2h, x3l, x3h, thr, out):
        n_keys = x1l.shape[0]
        for ci in prange(c3.shape[0]):
            a3, a2, a1, a0 = c3[ci], c2[ci], c1[ci], c0[ci]
            byte = np.uint8(0)
            fill = 0
            col = 0
            for e in range(n_keys):
                v = mulmod(a3, x3l[e], x3h[e]) + mulmod(a2, x2l[e], x2h[e]) + mulmod(a1, x1l[e], x1h[e]) + a0
                v = reduce_full(v)
                byte = (byte << np.uint8(1)) | np.uint8(v <= thr)
                fill += 1
                if fill == 8:
                    out[ci, col] = byte
                    col += 1
                    fill = 0
                    byte = np.uint8(0)
            if fill > 0:
                out[ci, col] = byte << np.uint8(8 - fill)

    @njit(parallel=True, cache=True)
    def bits1(c1, c0, x1l, x1h, thr, out):
        n_keys = x1l.shape[0]
        for ci in prange(c1.shape[0]):
            a1, a0 = c1[ci], c0[ci]
            byte = np.uint8(0)
            fill = 0
            col = 0
            for e in range(n_keys):
                v = reduce_full(mulmod(a1, x1l[e], x1h[e]) + a0)
                byte = (byte << np.uint8(1)) | np.uint8(v <= thr)
                fill += 1
                if fill == 8:
                    out[ci, col] = byte
                    col += 1
                    fill = 0
                    byte = np.uint8(0)
            if fill > 0:
                out[ci, col] = byte << np.uint8(8 - fill)

    @njit(parallel=True, cache=True)
    def values3(c3, c2, c1, c0, x1l, x1h, x2l, x2h, x3l, x3h, out):
        n_keys = x1l.shape[0]
        for ci in prange(c3.shape[0]):
            a3, a2, a1, a0 = c3[ci], c2[ci], c1[ci], c0[ci]
            for e in range(n_keys):
                v = mulmod(a3, x3l[e], x3h[e]) + mulmod(a2, x2l[e], x2h[e]) + mulmod(a1, x1l[e], x1h[e]) + a0
                out[ci, e] = reduce_full(v)

    _kernels = (bits3, bits1, values3)
    return _kernels


def _mulmod_vec(c: np.ndarray, s_lo: np.uint64, s_hi: np.uint64) -> np.ndarray:
    c_lo = c & _M32
    c_hi = c >> _U64(32)
    lo = c_lo * s_lo
    mid = c_lo * s_hi + c_hi * s_lo
    hi = c_hi * s_hi
    r = (
        (lo & _P)
        + (lo >> _U64(61))
        + ((mid & _M29) << _U64(32))
        + (mid >> _U64(29))
        + (hi << _U64(3))
    )
    return (r & _P) + (r >> _U64(61))


def _reduce_full_vec(v: np.ndarray) -> np.ndarray:
    v = (v & _P) + (v >> _U64(61))
    v = (v & _P) + (v >> _U64(61))
    return np.where(v >= _P, v - _P, v)


def _values_numpy(coeffs: np.ndarray, parts: list) -> list:
    """Yield the value vector over copies for each key (numpy fallback)."""
    n_keys = parts[0].shape[0]
    degree = coeffs.shape[0] - 1
    for e in range(n_keys):
        v = coeffs[-1].copy()
        for d in range(1, degree + 1):
            v = v + _mulmod_vec(coeffs[degree - d], parts[2 * (d - 1)][e], parts[2 * (d - 1) + 1][e])
        yield _reduce_full_vec(v)


def _bits_packed(coeffs: np.ndarray, keys, threshold: int, prime: int) -> np.ndarray:
    """Acceptance bits for every (copy, key), packed per copy row."""
    n_copies = coeffs.shape[1]
    n_keys = len(keys)
    n_bytes = (n_keys + 7) // 8
    out = np.zeros((n_copies, n_bytes), dtype=np.uint8)
    if n_keys == 0:
        return out
    degree = coeffs.shape[0] - 1
    parts = _key_parts(keys, prime, degree)
    kernels = _get_kernels()
    if kernels is not None:
        bits3, bits1, _ = kernels
        if degree == 3:
            bits3(coeffs[0], coeffs[1], coeffs[2], coeffs[3], *parts, _U64(threshold), out)
        elif degree == 1:
            bits1(coeffs[0], coeffs[1], *parts, _U64(threshold), out)
        else:
            raise ParameterError(f"unsupported polynomial degree {degree}")
        return out
    thr = _U64(threshold)
    chunk = np.zeros((n_copies, 8), dtype=bool)
    col = 0
    fill = 0
    for v in _values_numpy(coeffs, parts):
        chunk[:, fill] = v <= thr
        fill += 1
        if fill == 8:
            out[:, col] = np.packbits(chunk, axis=1)[:, 0]
            col += 1
            fill = 0
            chunk[:] = False
    if fill > 0:
        out[:, col] = np.packbits(chunk, axis=1)[:, 0]
    return out


def _values_matrix(coeffs: np.ndarray, keys, prime: int) -> np.ndarray:
    """Raw hash values for every (copy, key); used by the coloring baseline."""
    n_copies = coeffs.shape[1]
    n_keys = len(keys)
    out = np.zeros((n_copies, n_keys), dtype=np.uint64)
    if n_keys == 0:
        return out
    parts = _key_parts(keys, prime, 3)
    kernels = _get_kernels()
    if kernels is not None:
        _, _, values3 = kernels
        values3(coeffs[0], coeffs[1], coeffs[2], coeffs[3], *parts, out)
        return out
    for e, v in enumerate(_values_numpy(coeffs, parts)):
        out[:, e] = v
    return out


# ---------------------------------------------------------------------------
# batched runs


@dataclass
class BatchResult:
    """Per-copy outcomes of one batched run; index i belongs to seeds[i]."""

    counters: np.ndarray
    stored_max: np.ndarray
    estimates: np.ndarray
    p: float
    q: float
    seeds: np.ndarray


def _always(threshold: int, prime: int) -> bool:
    # value <= threshold for every field element
    return threshold >= prime - 1


def _ones_packed(n_copies: int, n_keys: int) -> np.ndarray:
    out = np.full((n_copies, (n_keys + 7) // 8), 0xFF, dtype=np.uint8)
    tail = n_keys % 8
    if tail and out.shape[1]:
        out[:, -1] = (0xFF << (8 - tail)) & 0xFF
    return out


def _bit_column(packed: np.ndarray, row: int) -> np.ndarray:
    return (packed[:, row >> 3] >> np.uint8(7 - (row & 7))) & np.uint8(1)


def _popcount_rows(packed: np.ndarray) -> np.ndarray:
    return _POPCOUNT[packed].sum(axis=1)


def _index_stream(edges):
    """Canonical edges with stream positions, vertex rows, and packed keys."""
    canon = []
    edge_row: dict[tuple[int, int], int] = {}
    vertex_row: dict[int, int] = {}
    for u, v in edges:
        if u == v:
            raise ValidationError(f"self-loop {u} in batched stream")
        e = canonical_edge(u, v)
        if e in edge_row:
            raise ValidationError(f"duplicate edge {e[0]} {e[1]} in batched stream")
        edge_row[e] = len(canon)
        canon.append(e)
        for x in e:
            if x not in vertex_row:
                vertex_row[x] = len(vertex_row)
    return canon, edge_row, vertex_row


def _prepare(seeds, p, q, prime):
    if prime != MERSENNE61:
        raise ParameterError("batched runs support only the production prime 2^61-1")
    seeds_arr = np.asarray(list(seeds), dtype=np.uint64)
    if seeds_arr.ndim != 1 or seeds_arr.size == 0:
        raise ParameterError("seeds must be a non-empty 1-d sequence")
    return seeds_arr, _check_prob("p", p), _check_prob("q", q)


def run_opt_batch(edges, p, q, seeds, *, prime: int = MERSENNE61) -> BatchResult:
    """Run the combined estimator under every seed in one stream replay.

    Equivalent to [OptEstimator(p, q, s).process_stream(edges) for s in seeds]
    but several thousand times faster for large seed counts.
    """
    seeds_arr, p, q = _prepare(seeds, p, q, prime)
    edges = list(edges)
    canon, edge_row, vertex_row = _index_stream(edges)
    n_copies = seeds_arr.size
    n_edges = len(canon)

    vertex_thr = _threshold(p, prime)
    edge_thr = _threshold(q, prime)
    all_vertices_on = _always(vertex_thr, prime)
    all_edges_on = _always(edge_thr, prime)

    if all_edges_on:
        edge_bits = _ones_packed(n_copies, n_edges)
    else:
        edge_coeffs = derive_coefficients(mix_seed_vec(seeds_arr, ROLE_EDGE), 3, prime)
        edge_bits = _bits_packed(edge_coeffs, [pack_edge_key(u, v, prime) for u, v in canon], edge_thr, prime)

    vertex_bits = None
    if not all_vertices_on:
        vertex_coeffs = derive_coefficients(mix_seed_vec(seeds_arr, ROLE_VERTEX), 1, prime)
        vertex_bits = _bits_packed(vertex_coeffs, [x % prime for x in vertex_row], vertex_thr, prime)

    counters = np.zeros(n_copies, dtype=np.int64)
    prefix: dict[int, set[int]] = {}
    for u, v in canon:
        seen_u = prefix.get(u)
        seen_v = prefix.get(v)
        if seen_u and seen_v:
            if len(seen_u) > len(seen_v):
                seen_u, seen_v = seen_v, seen_u
            for w in seen_u:
                if w in seen_v:
                    hit = _bit_column(edge_bits, edge_row[canonical_edge(w, u)])
                    hit = hit & _bit_column(edge_bits, edge_row[canonical_edge(w, v)])
                    if vertex_bits is not None:
                        hit = hit & _bit_column(vertex_bits, vertex_row[w])
                    counters += hit
        prefix.setdefault(u, set()).add(v)
        prefix.setdefault(v, set()).add(u)

    # Stored edges only accumulate (no evictions), so the high-water mark is
    # the final count: edges with g = 1 and an f-sampled endpoint.
    if all_vertices_on:
        stored = np.full(n_copies, n_edges, dtype=np.int64) if all_edges_on else _popcount_rows(edge_bits)
    else:
        stored = np.zeros(n_copies, dtype=np.int64)
        for t, (u, v) in enumerate(canon):
            kept = _bit_column(vertex_bits, vertex_row[u]) | _bit_column(vertex_bits, vertex_row[v])
            if not all_edges_on:
                kept = kept & _bit_column(edge_bits, t)
            stored += kept

    estimates = counters / (p * q * q)
    return BatchResult(counters, stored, estimates, p, q, seeds_arr)


def run_tkmf_batch(edges, q, seeds, *, prime: int = MERSENNE61) -> BatchResult:
    """Uniform edge-sampling baseline under every seed.

    Retained-subgraph triangles are exactly the triangles of the full graph
    whose three edges were all retained, so the finalize-time oracle count
    vectorizes into one AND per (triangle, copy).
    """
    seeds_arr, _, q = _prepare(seeds, 1.0, q, prime)
    edges = list(edges)
    canon, edge_row, _ = _index_stream(edges)
    n_copies = seeds_arr.size

    edge_thr = _threshold(q, prime)
    if _always(edge_thr, prime):
        edge_bits = _ones_packed(n_copies, len(canon))
    else:
        edge_coeffs = derive_coefficients(mix_seed_vec(seeds_arr, ROLE_EDGE), 3, prime)
        edge_bits = _bits_packed(edge_coeffs, [pack_edge_key(u, v, prime) for u, v in canon], edge_thr, prime)

    counters = np.zeros(n_copies, dtype=np.int64)
    for a, b, c in triangle_list(materialize(canon)):
        hit = _bit_column(edge_bits, edge_row[(a, b)])
        hit = hit & _bit_column(edge_bits, edge_row[(a, c)])
        hit = hit & _bit_column(edge_bits, edge_row[(b, c)])
        counters += hit

    stored = _popcount_rows(edge_bits)
    estimates = counters / (q * q * q)
    return BatchResult(counters, stored, estimates, q, q, seeds_arr)


def run_colorful_batch(edges, k, seeds, *, prime: int = MERSENNE61) -> BatchResult:
    """Monochromatic-edge baseline under every seed."""
    if not isinstance(k, int) or k < 1:
        raise ParameterError(f"color count k must be an integer >= 1, got {k}")
    seeds_arr = np.asarray(list(seeds), dtype=np.uint64)
    if seeds_arr.ndim != 1 or seeds_arr.size == 0:
        raise ParameterError("seeds must be a non-empty 1-d sequence")
    if prime != MERSENNE61:
        raise ParameterError("batched runs support only the production prime 2^61-1")
    edges = list(edges)
    canon, _, vertex_row = _index_stream(edges)

    coeffs = derive_coefficients(mix_seed_vec(seeds_arr, ROLE_VERTEX), 3, prime)
    values = _values_matrix(coeffs, [x % prime for x in vertex_row], prime)
    colors = values % _U64(k)

    counters = np.zeros(seeds_arr.size, dtype=np.int64)
    for a, b, c in triangle_list(materialize(canon)):
        mono = (colors[:, vertex_row[a]] == colors[:, vertex_row[b]]) & (
            colors[:, vertex_row[a]] == colors[:, vertex_row[c]]
        )
        counters += mono

    stored = np.zeros(seeds_arr.size, dtype=np.int64)
    for u, v in canon:
        stored += colors[:, vertex_row[u]] == colors[:, vertex_row[v]]

    q = 1.0 / k
    estimates = counters / (1.0 * q * q)
    return BatchResult(counters, stored, estimates, 1.0, q, seeds_arr)
