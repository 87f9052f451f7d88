import itertools
from math import comb

import numpy as np
import pytest

from conftest import bridged_triangles, dataset_path, random_graph
from netclust.graph import Graph, load_graph
from netclust.modularity import canonicalize, modularity
from netclust.oracle import brute_force_max_modularity, enumerate_partitions, greedy_baseline


def bell(n: int) -> int:
    """Bell numbers from B(k+1) = sum_i C(k, i) B(i)."""
    b = [1]
    for k in range(n):
        b.append(sum(comb(k, i) * b[i] for i in range(k + 1)))
    return b[n]


def label_vector_max(graph):
    """Maximize over every vector in [0, n)^n, deduplicated by canonical form."""
    seen = set()
    best = -np.inf
    for labels in itertools.product(range(graph.n), repeat=graph.n):
        key = tuple(canonicalize(labels).tolist())
        if key in seen:
            continue
        seen.add(key)
        best = max(best, modularity(graph, np.array(labels)))
    return best, len(seen)


def test_bell_recurrence_values():
    assert [bell(i) for i in range(1, 11)] == [1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975]


@pytest.mark.parametrize("n", range(1, 11))
def test_enumeration_counts_and_form(n):
    parts = [tuple(p.tolist()) for p in enumerate_partitions(n)]
    assert len(parts) == bell(n)
    assert len(set(parts)) == len(parts)
    assert all(tuple(canonicalize(p).tolist()) == p for p in parts)
    assert parts == sorted(parts)


def test_enumerate_small():
    assert [p.tolist() for p in enumerate_partitions(1)] == [[0]]
    assert [p.tolist() for p in enumerate_partitions(3)] == [[0, 0, 0], [0, 0, 1], [0, 1, 0], [0, 1, 1], [0, 1, 2]]


@pytest.mark.parametrize("n", [0, 15])
def test_enumerate_range_guard(n):
    with pytest.raises(ValueError):
        next(enumerate_partitions(n))


def test_brute_force_single_edge(single_edge):
    q, labels = brute_force_max_modularity(single_edge)
    assert q == 0.0
    assert labels.tolist() == [0, 0]


def test_brute_force_triangle():
    q, labels = brute_force_max_modularity(Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)]))
    assert q == 0.0 and labels.tolist() == [0, 0, 0]


def test_brute_force_bridged_triangles(triangles):
    q, labels = brute_force_max_modularity(triangles)
    assert q == pytest.approx(5 / 14, abs=1e-12)
    assert labels.tolist() == [0, 0, 0, 1, 1, 1]


def test_brute_force_guards():
    with pytest.raises(ValueError):
        brute_force_max_modularity(Graph.from_edges(13, [(0, 1)]))
    with pytest.raises(ValueError):
        brute_force_max_modularity(Graph.from_edges(3, []))


@pytest.mark.parametrize("seed", range(12))
def test_brute_force_matches_label_vector_search(seed):
    rng = np.random.default_rng(seed)
    n = 3 + seed % 4
    g = random_graph(rng, n, 0.5)
    q, labels = brute_force_max_modularity(g)
    q2, distinct = label_vector_max(g)
    assert distinct == bell(n)
    assert q == pytest.approx(q2, abs=1e-12)
    assert modularity(g, labels) == q


def test_greedy_single_edge(single_edge):
    q, labels = greedy_baseline(single_edge)
    assert q == 0.0 and labels.tolist() == [0, 0]


def test_greedy_bridged_triangles(triangles):
    q, labels = greedy_baseline(triangles)
    # regression fixture: greedy finds the two triangles here
    assert q == pytest.approx(5 / 14, abs=1e-12)
    assert q >= 0.30


def test_greedy_karate():
    q, labels = greedy_baseline(load_graph(dataset_path("karate")))
    # regression fixture from the implemented merge order
    assert q == pytest.approx(0.3806706114398422, abs=1e-12)
    assert q >= 0.35


@pytest.mark.parametrize("seed", range(20))
def test_greedy_never_beats_brute_force(seed):
    rng = np.random.default_rng(1000 + seed)
    g = random_graph(rng, int(rng.integers(4, 10)), 0.4)
    assert greedy_baseline(g)[0] <= brute_force_max_modularity(g)[0] + 1e-12


def test_greedy_q_is_consistent():
    rng = np.random.default_rng(5)
    g = random_graph(rng, 30, 0.15)
    q, labels = greedy_baseline(g)
    assert q == modularity(g, labels)
    assert labels.tolist() == canonicalize(labels).tolist()


def test_tie_break_is_first_in_enumeration_order():
    g = bridged_triangles()
    q, labels = brute_force_max_modularity(g)
    firsts = [p for p in enumerate_partitions(6) if modularity(g, p) == q]
    assert labels.tolist() == firsts[0].tolist()
