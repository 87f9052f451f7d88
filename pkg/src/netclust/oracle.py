"""Exhaustive ground truth for small graphs, plus a greedy merge baseline."""

from __future__ import annotations

from typing import Iterator

import numpy as np

from netclust.graph import Graph
from netclust.modularity import canonicalize, modularity

MAX_ENUMERATE_N = 14
MAX_BRUTE_FORCE_N = 12


def enumerate_partitions(n: int) -> Iterator[np.ndarray]:
    """Yield every set partition of ``range(n)`` as a restricted-growth string.

    Order is lexicographic, starting from the all-zero string.  Each yielded
    array is fresh, so callers may keep it.
    """
    if not 1 <= n <= MAX_ENUMERATE_N:
        raise ValueError(f"n must lie in [1, {MAX_ENUMERATE_N}], got {n}")
    a = [0] * n
    # b[i] = 1 + max(a[:i]), the largest label position i may take
    b = [1] * n
    while True:
        yield np.array(a, dtype=np.intp)
        i = n - 1
        while i > 0 and a[i] == b[i]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        top = max(b[i], a[i] + 1)
        for k in range(i + 1, n):
            a[k] = 0
            b[k] = top


def brute_force_max_modularity(graph: Graph) -> tuple[float, np.ndarray]:
    """Best modularity over all partitions; the first optimum in enumeration order wins ties."""
    if not 1 <= graph.n <= MAX_BRUTE_FORCE_N:
        raise ValueError(f"brute force needs 1 <= n <= {MAX_BRUTE_FORCE_N}, got n={graph.n}")
    if graph.m_edges == 0:
        raise ValueError("modularity is undefined for a graph without edges")
    best_q = -np.inf
    best = None
    for labels in enumerate_partitions(graph.n):
        q = modularity(graph, labels)
        if q > best_q:
            best_q, best = q, labels
    return best_q, best


def greedy_baseline(graph: Graph) -> tuple[float, np.ndarray]:
    """Agglomerative merging from singletons while some merge raises Q.

    Merging communities i and j changes Q by ``2 * (e_ij - a_i * a_j)``,
    with ``e_ij`` the half-weight cross fraction of the modules matrix.
    """
    if graph.m_edges == 0:
        raise ValueError("modularity is undefined for a graph without edges")
    m = graph.m_edges
    n = graph.n
    a = graph.degrees / (2.0 * m)
    e = np.zeros((n, n))
    e[graph.src, graph.dst] = 1.0 / (2 * m)
    e[graph.dst, graph.src] = 1.0 / (2 * m)
    alive = np.ones(n, dtype=bool)
    labels = np.arange(n)
    while True:
        gain = 2.0 * (e - np.outer(a, a))
        np.fill_diagonal(gain, -np.inf)
        gain[~alive, :] = -np.inf
        gain[:, ~alive] = -np.inf
        i, j = np.unravel_index(np.argmax(gain), gain.shape)
        if not gain[i, j] > 0:
            break
        i, j = min(i, j), max(i, j)
        e[i, :] += e[j, :]
        e[:, i] += e[:, j]
        e[j, :] = 0.0
        e[:, j] = 0.0
        e[i, i] = 0.0  # only cross fractions are needed
        a[i] += a[j]
        a[j] = 0.0
        alive[j] = False
        labels[labels == j] = i
    labels = canonicalize(labels)
    return modularity(graph, labels), labels
