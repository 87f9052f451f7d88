import itertools
import os
from pathlib import Path

import numpy as np
import pytest

from netclust.graph import Graph

DATA_DIR = Path(os.environ.get("NETCLUST_DATA", Path(__file__).resolve().parent.parent / "data"))

DATASET_FILES = {
    "karate": "karate.gml",
    "dolphins": "dolphins.gml",
    "jazz": "jazz.edgelist",
    "football": "football.gml",
    "lesmis": "lesmis.gml",
}


def dataset_path(name: str) -> Path:
    return DATA_DIR / DATASET_FILES[name]


def bridged_triangles() -> Graph:
    return Graph.from_edges(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)])


def random_graph(rng: np.random.Generator, n: int, p: float, allow_empty: bool = False) -> Graph:
    """Erdos-Renyi G(n, p); redrawn until it has at least one edge unless ``allow_empty``."""
    while True:
        edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
        if edges or allow_empty:
            return Graph.from_edges(n, edges)


@pytest.fixture
def triangles() -> Graph:
    return bridged_triangles()


@pytest.fixture
def single_edge() -> Graph:
    return Graph.from_edges(2, [(0, 1)])


@pytest.fixture
def path3() -> Graph:
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def karate_path() -> Path:
    return dataset_path("karate")


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for an acceptance criterion."""

    def record(label: str, ok: bool, detail: str = "") -> None:
        line = f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
