"""Repeated-trial benchmark runs and their machine-readable records.

One bench run executes N independently seeded trials of an estimator over
a fixed stream (via the batched engine, so trial i is bit-identical to a
scalar estimator seeded with mix_seed(algo_seed, i)), emits one CSV row
per trial, and summarizes empirical mean, sample variance and mean stored
space per algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .batch import (
    BatchResult,
    derive_seed_sequence,
    run_colorful_batch,
    run_opt_batch,
    run_tkmf_batch,
)
from .errors import ParameterError
from .estimators import variance_bound
from .hashing import mix_seed

CSV_HEADER = "algo,trial,seed,p,q,estimate,exact_T,rel_error,stored_max,elapsed_ms"

#: flag each algorithm needs beyond the stream: p, q, or the color count k
ALGO_PARAMS = {
    "opt": ("p", "q"),
    "wedge": ("q",),
    "vertex": ("p",),
    "tkmf": ("q",),
    "colorful": ("k",),
}

# sub-seed indices separating per-algorithm trial seed spaces
ALGO_SEED_ROLE = {"opt": 10, "wedge": 11, "vertex": 12, "tkmf": 13, "colorful": 14}


@dataclass(frozen=True)
class BenchRecord:
    """One trial outcome; rel_error is |estimate - exact_T| / exact_T when
    the exact count is known and positive, otherwise empty."""

    algo: str
    trial: int
    seed: int
    p: float
    q: float
    estimate: float
    exact_t: int | None
    rel_error: float | None
    stored_max: int
    elapsed_ms: float

    def to_csv_row(self) -> str:
        exact = "" if self.exact_t is None else str(self.exact_t)
        rel = "" if self.rel_error is None else repr(self.rel_error)
        return ",".join(
            [
                self.algo,
                str(self.trial),
                str(self.seed),
                repr(self.p),
                repr(self.q),
                repr(self.estimate),
                exact,
                rel,
                str(self.stored_max),
                repr(self.elapsed_ms),
            ]
        )


def records_to_csv(records) -> str:
    return CSV_HEADER + "\n" + "".join(r.to_csv_row() + "\n" for r in records)


def sample_mean(values) -> float:
    values = np.asarray(values, dtype=np.float64)
    return float(values.sum() / values.size)


def sample_variance(values) -> float:
    """Unbiased (ddof=1) sample variance; 0.0 for fewer than two values."""
    values = np.asarray(values, dtype=np.float64)
    if values.size < 2:
        return 0.0
    d = values - values.sum() / values.size
    return float((d * d).sum() / (values.size - 1))


def variance_standard_error(values) -> float:
    """Standard error of the sample variance, from the fourth central moment."""
    values = np.asarray(values, dtype=np.float64)
    n = values.size
    if n < 2:
        return 0.0
    d = values - values.sum() / n
    m4 = float((d ** 4).sum() / n)
    s2 = float((d * d).sum() / (n - 1))
    var_of_var = (m4 - s2 * s2 * (n - 3) / (n - 1)) / n
    return float(np.sqrt(max(var_of_var, 0.0)))


def run_algo_batch(edges, algo: str, params: dict, seeds) -> BatchResult:
    """Dispatch one batched run of `algo` with its resolved parameters."""
    if algo == "opt":
        return run_opt_batch(edges, params["p"], params["q"], seeds)
    if algo == "wedge":
        return run_opt_batch(edges, 1.0, params["q"], seeds)
    if algo == "vertex":
        return run_opt_batch(edges, params["p"], 1.0, seeds)
    if algo == "tkmf":
        return run_tkmf_batch(edges, params["q"], seeds)
    if algo == "colorful":
        return run_colorful_batch(edges, params["k"], seeds)
    raise ParameterError(f"unknown algorithm {algo!r}; expected one of {sorted(ALGO_PARAMS)}")


def resolve_params(algo: str, p=None, q=None, k=None) -> dict:
    """Pick out the flags `algo` needs, erroring on missing ones."""
    if algo not in ALGO_PARAMS:
        raise ParameterError(f"unknown algorithm {algo!r}; expected one of {sorted(ALGO_PARAMS)}")
    supplied = {"p": p, "q": q, "k": k}
    params = {}
    for name in ALGO_PARAMS[algo]:
        if supplied[name] is None:
            raise ParameterError(f"algorithm {algo!r} requires --{name}")
        params[name] = supplied[name]
    return params


def bench_records(edges, algo: str, params: dict, trials: int, master_seed: int,
                  exact_t: int | None, elapsed_ms_per_trial: float = 0.0):
    """Run `trials` seeded trials and return (records, batch_result).

    Trial seeds are mix_seed(mix_seed(master_seed, algo_role), trial), so
    different algorithms never share sampler randomness.
    """
    if not isinstance(trials, int) or trials < 1:
        raise ParameterError(f"trials must be an integer >= 1, got {trials}")
    algo_seed = mix_seed(master_seed, ALGO_SEED_ROLE[algo])
    seeds = derive_seed_sequence(algo_seed, trials)
    result = run_algo_batch(edges, algo, params, seeds)
    records = []
    for i in range(trials):
        estimate = float(result.estimates[i])
        rel = None
        if exact_t is not None and exact_t > 0:
            rel = abs(estimate - exact_t) / exact_t
        records.append(
            BenchRecord(
                algo=algo,
                trial=i,
                seed=int(seeds[i]),
                p=result.p,
                q=result.q,
                estimate=estimate,
                exact_t=exact_t,
                rel_error=rel,
                stored_max=int(result.stored_max[i]),
                elapsed_ms=elapsed_ms_per_trial,
            )
        )
    return records, result


def summarize(records, stats=None) -> dict:
    """Per-algorithm summary of a record list: empirical mean, sample
    variance, mean stored space, and the analytic variance bound where the
    estimator admits one (needs exact graph statistics)."""
    by_algo: dict[str, list[BenchRecord]] = {}
    for rec in records:
        by_algo.setdefault(rec.algo, []).append(rec)
    out = {}
    for algo, recs in by_algo.items():
        estimates = [r.estimate for r in recs]
        entry = {
            "p": recs[0].p,
            "q": recs[0].q,
            "trials": len(recs),
            "mean": sample_mean(estimates),
            "variance": sample_variance(estimates),
            "mean_stored_max": sample_mean([r.stored_max for r in recs]),
        }
        bound = None
        if stats is not None and algo in ("opt", "wedge", "vertex") and stats.triangles > 0:
            bound = variance_bound(stats.triangles, stats.delta_e, stats.delta_v,
                                   recs[0].p, recs[0].q)
        entry["variance_bound"] = bound
        out[algo] = entry
    return out
