import numpy as np
import pytest

from tristream.graphs import Graph


def trace_triangle_count(g: Graph) -> int:
    """Independent triangle oracle: trace(A^3) / 6 over the adjacency matrix."""
    vids = {v: i for i, v in enumerate(g.vertices())}
    n = len(vids)
    if n == 0:
        return 0
    a = np.zeros((n, n), dtype=np.int64)
    for u, v in g.edge_list():
        a[vids[u], vids[v]] = 1
        a[vids[v], vids[u]] = 1
    return int(np.trace(np.linalg.matrix_power(a, 3))) // 6


@pytest.fixture
def force_numpy_kernels(monkeypatch):
    """Make tristream.batch take its numpy fallback path."""
    import tristream.batch as batch

    monkeypatch.setattr(batch, "_kernels", False)
