"""Undirected simple graphs and their GML / edge-list readers.

Nodes are always dense integers ``0..n-1`` so that a partition can be stored
as a flat label vector.  The identifiers found in the source file are kept in
``Graph.id_map`` for reporting.
"""

from __future__ import annotations

import logging
import re
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

logger = logging.getLogger(__name__)


class GraphParseError(ValueError):
    """Raised when a graph file cannot be turned into a valid Graph.

    ``line`` and ``column`` are 1-based and ``None`` when the problem is not
    tied to a single location (for example a dangling edge reference).
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph on nodes ``0..n-1``.

    Use :meth:`from_edges` to build one; it validates the edge list and fills
    the adjacency lists and the numpy views used by the optimizer.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...]
    id_map: tuple = ()
    duplicate_count: int = 0
    name: str = ""

    # numpy views, derived in __post_init__
    src: np.ndarray = field(init=False, repr=False)
    dst: np.ndarray = field(init=False, repr=False)
    degrees: np.ndarray = field(init=False, repr=False)
    indptr: np.ndarray = field(init=False, repr=False)
    indices: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not self.id_map:
            object.__setattr__(self, "id_map", tuple(range(self.n)))
        src = np.fromiter((u for u, _ in self.edges), dtype=np.intp, count=len(self.edges))
        dst = np.fromiter((v for _, v in self.edges), dtype=np.intp, count=len(self.edges))
        deg = np.fromiter((len(a) for a in self.adjacency), dtype=np.intp, count=self.n)
        indptr = np.zeros(self.n + 1, dtype=np.intp)
        np.cumsum(deg, out=indptr[1:])
        indices = np.fromiter((w for a in self.adjacency for w in a), dtype=np.intp, count=int(indptr[-1]))
        for name, arr in (("src", src), ("dst", dst), ("degrees", deg), ("indptr", indptr), ("indices", indices)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        id_map: Sequence = (),
        name: str = "",
        duplicate_count: int = 0,
    ) -> "Graph":
        if n < 1:
            raise ValueError("a graph needs at least one node")
        seen: set[tuple[int, int]] = set()
        canon: list[tuple[int, int]] = []
        adjacency: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) outside node range [0, {n})")
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            canon.append(key)
            adjacency[u].append(v)
            adjacency[v].append(u)
        if id_map and len(id_map) != n:
            raise ValueError("id_map length must equal n")
        return cls(
            n=n,
            edges=tuple(canon),
            adjacency=tuple(tuple(sorted(a)) for a in adjacency),
            id_map=tuple(id_map),
            duplicate_count=duplicate_count,
            name=name,
        )

    @property
    def m_edges(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        label = f"{self.name!r}, " if self.name else ""
        return f"Graph({label}n={self.n}, m_edges={self.m_edges})"


def degree(graph: Graph, v: int) -> int:
    if not 0 <= v < graph.n:
        raise IndexError(f"node {v} out of range [0, {graph.n})")
    return len(graph.adjacency[v])


# --------------------------------------------------------------------------
# GML

_GML_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<open>\[)
  | (?P<close>\])
  | (?P<string>"[^"]*")
  | (?P<number>[+-]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<key>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)


def _tokenize_gml(text: str):
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        match = _GML_TOKEN.match(text, pos)
        if match is None:
            raise GraphParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = match.lastgroup
        value = match.group()
        col = pos - line_start + 1
        if kind not in ("ws", "comment"):
            yield kind, value, line, col
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rindex("\n") + 1
        pos = match.end()


class _GmlReader:
    """Recursive-descent reader for ``key value`` lists with nested ``[ ]`` blocks."""

    def __init__(self, text: str):
        self.tokens = list(_tokenize_gml(text))
        self.i = 0

    def _end_position(self):
        if self.tokens:
            _, value, line, col = self.tokens[-1]
            return line, col + len(value)
        return 1, 1

    def read_list(self, closing: bool):
        items = []
        while True:
            if self.i >= len(self.tokens):
                if closing:
                    raise GraphParseError("unterminated '[' block", *self._end_position())
                return items
            kind, value, line, col = self.tokens[self.i]
            if kind == "close":
                if not closing:
                    raise GraphParseError("unbalanced ']'", line, col)
                self.i += 1
                return items
            if kind != "key":
                raise GraphParseError(f"expected a key, found {value!r}", line, col)
            self.i += 1
            if self.i >= len(self.tokens):
                raise GraphParseError(f"key {value!r} has no value", *self._end_position())
            vkind, vvalue, vline, vcol = self.tokens[self.i]
            self.i += 1
            if vkind == "open":
                items.append((value, self.read_list(closing=True), line, col))
            elif vkind == "string":
                items.append((value, vvalue[1:-1], vline, vcol))
            elif vkind == "number":
                num = float(vvalue) if any(c in vvalue for c in ".eE") else int(vvalue)
                items.append((value, num, vline, vcol))
            else:
                raise GraphParseError(f"expected a value for key {value!r}, found {vvalue!r}", vline, vcol)


def _int_field(block, key, owner, line, col):
    found = [(v, ln, c) for k, v, ln, c in block if k == key]
    if not found:
        raise GraphParseError(f"{owner} block without '{key}'", line, col)
    value, ln, c = found[0]
    if not isinstance(value, int):
        raise GraphParseError(f"{owner} '{key}' must be an integer", ln, c)
    return value


def parse_gml(text: str, name: str = "") -> Graph:
    """Parse the ``graph [ node [...] edge [...] ]`` subset of GML.

    Unknown keys are skipped.  Edge weights (``value`` / ``weight``) are
    ignored with a warning, ``directed 1`` is rejected.  Repeated edges
    collapse to one and are counted in ``Graph.duplicate_count``.
    """
    top = _GmlReader(text).read_list(closing=False)
    graphs = [(v, ln, c) for k, v, ln, c in top if k == "graph"]
    if not graphs:
        raise GraphParseError("no top-level 'graph [ ... ]' block")
    if len(graphs) > 1:
        raise GraphParseError("more than one 'graph' block", graphs[1][1], graphs[1][2])
    body, gline, gcol = graphs[0]
    if not isinstance(body, list):
        raise GraphParseError("'graph' must be followed by '[ ... ]'", gline, gcol)

    index: dict[int, int] = {}
    raw_edges: list[tuple[int, int, int, int]] = []
    weighted = 0
    for key, value, line, col in body:
        if key == "directed":
            if value not in (0, "0"):
                raise GraphParseError("directed graphs are not supported", line, col)
        elif key == "node":
            if not isinstance(value, list):
                raise GraphParseError("'node' must be a block", line, col)
            node_id = _int_field(value, "id", "node", line, col)
            if node_id in index:
                raise GraphParseError(f"duplicate node id {node_id}", line, col)
            index[node_id] = len(index)
        elif key == "edge":
            if not isinstance(value, list):
                raise GraphParseError("'edge' must be a block", line, col)
            s = _int_field(value, "source", "edge", line, col)
            t = _int_field(value, "target", "edge", line, col)
            if any(k in ("value", "weight") for k, *_ in value):
                weighted += 1
            raw_edges.append((s, t, line, col))

    if not index:
        raise GraphParseError("graph declares no nodes", gline, gcol)
    edges = []
    seen = set()
    duplicates = 0
    for s, t, line, col in raw_edges:
        for endpoint in (s, t):
            if endpoint not in index:
                raise GraphParseError(f"edge references undeclared node {endpoint}", line, col)
        if s == t:
            raise GraphParseError(f"self-loop on node {s}", line, col)
        u, v = index[s], index[t]
        key = (min(u, v), max(u, v))
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        edges.append(key)
    if weighted:
        warnings.warn(f"{name or 'GML input'}: ignoring weights on {weighted} edges", stacklevel=2)
    if duplicates:
        warnings.warn(f"{name or 'GML input'}: collapsed {duplicates} duplicate edges", stacklevel=2)
    return Graph.from_edges(len(index), edges, id_map=tuple(index), name=name, duplicate_count=duplicates)


# --------------------------------------------------------------------------
# Edge list


def parse_edge_list(text: str, name: str = "") -> Graph:
    """Parse ``u v`` lines (``#`` starts a comment line).

    Node ids are remapped to ``0..n-1`` in ascending numeric order, so a
    dense graph written by :func:`to_edge_list` reads back unchanged.
    Repeated pairs collapse to one edge and are counted in
    ``Graph.duplicate_count``.
    """
    pairs: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    duplicates = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) < 2:
            raise GraphParseError(f"expected two node ids, got {stripped!r}", lineno, 1)
        ids = []
        for part in parts[:2]:
            try:
                ids.append(int(part))
            except ValueError:
                col = raw.index(part) + 1
                raise GraphParseError(f"non-integer node id {part!r}", lineno, col) from None
        u, v = ids
        if u == v:
            raise GraphParseError(f"self-loop on node {u}", lineno, 1)
        key = (min(u, v), max(u, v))
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        pairs.append(key)
    if not pairs:
        raise GraphParseError("edge list contains no edges")
    ids = sorted({x for pair in pairs for x in pair})
    index = {node: i for i, node in enumerate(ids)}
    if duplicates:
        warnings.warn(f"{name or 'edge list'}: collapsed {duplicates} duplicate edges", stacklevel=2)
    return Graph.from_edges(
        len(ids),
        ((index[u], index[v]) for u, v in pairs),
        id_map=tuple(ids),
        name=name,
        duplicate_count=duplicates,
    )


def to_edge_list(graph: Graph) -> str:
    """Serialize with dense ids, one edge per line.  Isolated nodes are not representable."""
    return "".join(f"{u} {v}\n" for u, v in graph.edges)


def load_graph(path: str | Path, fmt: str | None = None) -> Graph:
    path = Path(path)
    if fmt is None:
        fmt = "gml" if path.suffix.lower() == ".gml" else "edgelist"
    text = path.read_text(encoding="utf-8", errors="replace")
    if fmt == "gml":
        graph = parse_gml(text, name=path.stem)
    elif fmt == "edgelist":
        graph = parse_edge_list(text, name=path.stem)
    else:
        raise ValueError(f"unknown graph format {fmt!r}")
    logger.debug("loaded %s: n=%d m=%d", path, graph.n, graph.m_edges)
    return graph
