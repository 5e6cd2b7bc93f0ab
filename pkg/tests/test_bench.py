import csv
import io

import numpy as np
import pytest

from tristream.bench import (
    CSV_HEADER,
    bench_records,
    records_to_csv,
    resolve_params,
    sample_mean,
    sample_variance,
    summarize,
    variance_standard_error,
)
from tristream.errors import ParameterError
from tristream.generators import gen_friendship
from tristream.graphs import graph_stats


def test_resolve_params():
    assert resolve_params("opt", p=0.5, q=0.25) == {"p": 0.5, "q": 0.25}
    assert resolve_params("colorful", k=3) == {"k": 3}
    with pytest.raises(ParameterError):
        resolve_params("opt", p=0.5)  # q missing
    with pytest.raises(ParameterError):
        resolve_params("nope", p=1, q=1)


def test_sample_stats_match_numpy():
    rng = np.random.default_rng(1)
    values = rng.normal(5, 2, size=500)
    assert sample_mean(values) == pytest.approx(np.mean(values))
    assert sample_variance(values) == pytest.approx(np.var(values, ddof=1))
    assert sample_variance([3.0]) == 0.0
    assert variance_standard_error([3.0]) == 0.0


def test_variance_standard_error_scale():
    # for N(0, s^2): Var(sample variance) = 2 s^4 / (n-1)
    rng = np.random.default_rng(2)
    values = rng.normal(0, 3.0, size=20_000)
    se = variance_standard_error(values)
    want = np.sqrt(2 * 9.0 ** 2 / (len(values) - 1))
    assert se == pytest.approx(want, rel=0.15)


class TestBenchRecords:
    def setup_method(self):
        self.graph = gen_friendship(8)
        self.edges = self.graph.edge_list()
        self.stats = graph_stats(self.graph)

    def test_deterministic_and_ordered(self):
        a, _ = bench_records(self.edges, "opt", {"p": 0.5, "q": 0.5}, 50, 3, 8)
        b, _ = bench_records(self.edges, "opt", {"p": 0.5, "q": 0.5}, 50, 3, 8)
        assert a == b
        assert [r.trial for r in a] == list(range(50))

    def test_rel_error_definition(self):
        records, _ = bench_records(self.edges, "opt", {"p": 0.5, "q": 0.5}, 10, 3, 8)
        for r in records:
            assert r.rel_error == abs(r.estimate - 8) / 8
        records, _ = bench_records(self.edges, "opt", {"p": 0.5, "q": 0.5}, 10, 3, None)
        assert all(r.rel_error is None and r.exact_t is None for r in records)

    def test_exact_mode_zero_variance(self):
        records, _ = bench_records(self.edges, "opt", {"p": 1.0, "q": 1.0}, 20, 0, 8)
        summary = summarize(records, self.stats)["opt"]
        assert summary["mean"] == 8.0
        assert summary["variance"] == 0.0

    def test_single_trial_summary_is_the_estimate(self):
        records, _ = bench_records(self.edges, "tkmf", {"q": 0.5}, 1, 5, 8)
        summary = summarize(records)["tkmf"]
        assert summary["mean"] == records[0].estimate
        assert summary["variance"] == 0.0

    def test_summary_recomputable_from_csv(self):
        records, _ = bench_records(self.edges, "opt", {"p": 0.5, "q": 0.5}, 200, 9, 8)
        text = records_to_csv(records)
        assert text.splitlines()[0] == CSV_HEADER
        rows = list(csv.DictReader(io.StringIO(text)))
        estimates = [float(r["estimate"]) for r in rows]
        stored = [int(r["stored_max"]) for r in rows]
        summary = summarize(records, self.stats)["opt"]
        assert summary["mean"] == sample_mean(estimates)
        assert summary["variance"] == sample_variance(estimates)
        assert summary["mean_stored_max"] == sample_mean(stored)

    def test_summary_variance_bound_only_for_opt_family(self):
        recs_opt, _ = bench_records(self.edges, "opt", {"p": 0.5, "q": 0.5}, 5, 1, 8)
        recs_tk, _ = bench_records(self.edges, "tkmf", {"q": 0.5}, 5, 1, 8)
        out = summarize(recs_opt + recs_tk, self.stats)
        assert out["opt"]["variance_bound"] == pytest.approx(
            8 / 0.125 + 8 * 1 / 0.25 + 8 * 8 / 0.5)
        assert out["tkmf"]["variance_bound"] is None

    def test_algorithms_get_distinct_seed_spaces(self):
        recs_opt, _ = bench_records(self.edges, "opt", {"p": 0.5, "q": 0.5}, 5, 1, 8)
        recs_wedge, _ = bench_records(self.edges, "wedge", {"q": 0.5}, 5, 1, 8)
        assert {r.seed for r in recs_opt}.isdisjoint({r.seed for r in recs_wedge})
