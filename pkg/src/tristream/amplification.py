"""Accuracy and confidence amplification by mean-of-copies and median-of-means.

A single estimator run has variance up to 3 T^2 under well-chosen sampling
probabilities. Averaging R = ceil(36 / eps^2) independent copies brings the
variance down to eps^2 T^2 / 12, so by Chebyshev each group mean misses by
more than eps*T with probability at most 1/12. Taking the median of K odd
groups then drives the failure probability below delta once
K >= 12 * ln(1/delta) (Chernoff on the number of bad groups).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .batch import run_opt_batch
from .errors import ParameterError
from .hashing import MERSENNE61, mix_seed


@dataclass(frozen=True)
class ReplicationPlan:
    """How many estimator copies to run: K groups of R copies each.

    num_means must be odd so the median is a realized group mean.
    """

    copies_per_mean: int
    num_means: int
    eps: float
    delta: float

    def __post_init__(self):
        if self.copies_per_mean < 1:
            raise ParameterError(f"copies_per_mean must be >= 1, got {self.copies_per_mean}")
        if self.num_means < 1 or self.num_means % 2 == 0:
            raise ParameterError(f"num_means must be odd and >= 1, got {self.num_means}")

    @property
    def total_copies(self) -> int:
        return self.copies_per_mean * self.num_means


def replication_plan(eps: float, delta: float) -> ReplicationPlan:
    """R = ceil(36 / eps^2) copies per mean, K = smallest odd >= 12 ln(1/delta) means.

    eps = 1 is allowed as the degenerate +-T accuracy target (R = 36).
    """
    if not 0.0 < eps <= 1.0 or math.isnan(eps):
        raise ParameterError(f"eps must be in (0, 1], got {eps}")
    if not 0.0 < delta < 1.0 or math.isnan(delta):
        raise ParameterError(f"delta must be in (0, 1), got {delta}")
    copies = math.ceil(36.0 / (eps * eps))
    means = max(1, math.ceil(12.0 * math.log(1.0 / delta)))
    if means % 2 == 0:
        means += 1
    return ReplicationPlan(copies, means, eps, delta)


@dataclass(frozen=True)
class MedianOfMeansResult:
    estimate: float
    group_means: tuple[float, ...]
    total_stored_max: int
    plan: ReplicationPlan
    p: float
    q: float
    master_seed: int

    def to_json_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "p": self.p,
            "q": self.q,
            "eps": self.plan.eps,
            "delta": self.plan.delta,
            "copies_per_mean": self.plan.copies_per_mean,
            "num_means": self.plan.num_means,
            "total_stored_max": self.total_stored_max,
            "seed": self.master_seed,
        }


def median_of_means(stream, p, q, plan: ReplicationPlan, master_seed: int = 0,
                    *, prime: int = MERSENNE61) -> MedianOfMeansResult:
    """Run R*K estimator copies over one pass of the stream.

    Copy i is seeded with mix_seed(master_seed, i); consecutive groups of R
    copies are averaged and the middle of the K sorted group means is the
    final estimate. The stream iterable is consumed exactly once (it is
    buffered so every copy sees the same arrivals).

    total_stored_max sums the per-copy stored-edge high-water marks, making
    the space cost of the amplification directly visible.
    """
    seeds = [mix_seed(master_seed, i) for i in range(plan.total_copies)]
    result = run_opt_batch(list(stream), p, q, seeds, prime=prime)
    grouped = result.estimates.reshape(plan.num_means, plan.copies_per_mean)
    means = grouped.sum(axis=1) / plan.copies_per_mean
    estimate = float(np.sort(means)[plan.num_means // 2])
    return MedianOfMeansResult(
        estimate=estimate,
        group_means=tuple(float(x) for x in means),
        total_stored_max=int(result.stored_max.sum()),
        plan=plan,
        p=result.p,
        q=result.q,
        master_seed=master_seed,
    )
