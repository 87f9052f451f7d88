"""Modules matrix and Newman modularity of a label vector.

A partition is a length-``n`` integer vector; ``labels[v]`` is the community
of node ``v``.  Labels need not be contiguous: empty communities are dropped
before the modules matrix is built and contribute nothing to Q.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from netclust.graph import Graph


@dataclass(frozen=True)
class ModulesMatrix:
    """Edge-fraction matrix ``e`` over nonempty communities, with row sums ``a``.

    ``labels`` gives the original community label of each row, in order of
    first appearance in the partition.
    """

    e: np.ndarray
    a: np.ndarray
    labels: tuple[int, ...]

    @property
    def K(self) -> int:
        return len(self.labels)


def _check(graph: Graph, partition) -> np.ndarray:
    labels = np.asarray(partition)
    if labels.shape != (graph.n,):
        raise ValueError(f"partition length {labels.shape[0] if labels.ndim else 0} != n={graph.n}")
    if graph.m_edges == 0:
        raise ValueError("modularity is undefined for a graph without edges")
    if labels.size and labels.min() < 0:
        raise ValueError("community labels must be non-negative")
    return labels.astype(np.intp, copy=False)


def modules_matrix(graph: Graph, partition) -> ModulesMatrix:
    """Build the K x K modules matrix.

    An edge inside community i adds ``1/m`` to ``e[i, i]``; an edge between
    i and j adds ``1/(2m)`` to both ``e[i, j]`` and ``e[j, i]``.
    """
    labels = _check(graph, partition)
    _, first = np.unique(labels, return_index=True)
    order = labels[np.sort(first)]
    row = np.empty(labels.max() + 1, dtype=np.intp)
    row[order] = np.arange(order.size)
    K = order.size
    m = graph.m_edges

    ru = row[labels[graph.src]]
    rv = row[labels[graph.dst]]
    counts = np.zeros((K, K))
    np.add.at(counts, (ru, rv), 1.0)
    np.add.at(counts, (rv, ru), 1.0)
    # intra edges were added twice to the diagonal, cross edges once to each side
    e = counts / (2.0 * m)
    return ModulesMatrix(e=e, a=e.sum(axis=1), labels=tuple(int(x) for x in order))


def modularity(graph: Graph, partition) -> float:
    """Q = sum_i (e_ii - a_i^2).

    ``e_ii`` is the fraction of edges inside community i and ``a_i`` the
    fraction of edge ends attached to it, so the full matrix is never formed.
    """
    labels = _check(graph, partition)
    m = graph.m_edges
    intra = np.count_nonzero(labels[graph.src] == labels[graph.dst])
    a = np.bincount(labels, weights=graph.degrees) / (2.0 * m)
    return intra / m - float(a @ a)


def modularity_trace_form(mm: ModulesMatrix) -> float:
    """Q = Tr(e) - ||e^2||, where ||x|| sums all entries of x."""
    return float(np.trace(mm.e) - (mm.e @ mm.e).sum())


def delta_modularity(graph: Graph, partition, v: int, new_label: int) -> float:
    """Change in Q when node ``v`` alone moves to ``new_label``.

    Uses only the edges at ``v`` and the edge-end fractions of the two
    communities involved.
    """
    labels = _check(graph, partition)
    if not 0 <= v < graph.n:
        raise IndexError(f"node {v} out of range [0, {graph.n})")
    old = int(labels[v])
    new_label = int(new_label)
    if new_label == old:
        return 0.0
    if new_label < 0:
        raise ValueError("community labels must be non-negative")
    m = graph.m_edges
    two_m = 2.0 * m
    deg = graph.degrees
    nbr_labels = labels[graph.indices[graph.indptr[v] : graph.indptr[v + 1]]]
    links_old = np.count_nonzero(nbr_labels == old)
    links_new = np.count_nonzero(nbr_labels == new_label)
    a_old = deg[labels == old].sum() / two_m
    a_new = deg[labels == new_label].sum() / two_m
    d = deg[v] / two_m
    # a_old' = a_old - d, a_new' = a_new + d
    return (links_new - links_old) / m - 2.0 * d * (a_new - a_old + d)


def canonicalize(partition) -> np.ndarray:
    """Relabel so first occurrences read 0, 1, 2, ... (restricted-growth form)."""
    labels = np.asarray(partition)
    out = np.empty(labels.shape, dtype=np.intp)
    mapping: dict[int, int] = {}
    for i, x in enumerate(labels.tolist()):
        out[i] = mapping.setdefault(x, len(mapping))
    return out


def community_count(partition) -> int:
    return int(np.unique(np.asarray(partition)).size)
