"""Core graph container, edge-stream cleaning, and edge-list file I/O.

Graphs are simple and undirected: no self-loops, no duplicate edges.
Edges are stored canonically as an (m, 2) int64 array with u < v per row,
sorted lexicographically, which makes edge-list output byte-stable.
A graph is immutable after construction and safe for concurrent reads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
import scipy.sparse as sp


class EdgeListFormatError(ValueError):
    """A data line of an edge-list file could not be parsed."""

    def __init__(self, path, line_number: int, line: str):
        self.path = str(path)
        self.line_number = line_number
        self.line = line
        super().__init__(
            f"{path}:{line_number}: expected two integer node ids, got {line!r}"
        )


@dataclass(frozen=True)
class EdgeStreamStats:
    """Accounting of what edge-stream cleaning removed.

    Every sampled pair is accounted for:
    raw_edges == kept + self_loops_dropped + duplicates_dropped.
    """

    raw_edges: int
    self_loops_dropped: int
    duplicates_dropped: int

    @property
    def kept(self) -> int:
        return self.raw_edges - self.self_loops_dropped - self.duplicates_dropped


class Graph:
    """Simple undirected graph with dense node ids 0..n-1.

    Parameters
    ----------
    n : int
        Node count. May exceed the largest endpoint (isolated nodes allowed).
    edges : ndarray, shape (m, 2)
        Canonical edge array: u < v in every row, rows unique and sorted
        lexicographically. Use :func:`build_graph` to clean arbitrary input.
    """

    __slots__ = ("n", "edges", "_indptr", "_indices", "_degrees")

    def __init__(self, n: int, edges: np.ndarray):
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if n < 0:
            raise ValueError("node count must be non-negative")
        if edges.size:
            if edges.min() < 0 or edges.max() >= n:
                raise ValueError("edge endpoint outside 0..n-1")
            if not (edges[:, 0] < edges[:, 1]).all():
                raise ValueError("edges must satisfy u < v")
            keys = edges[:, 0] * np.int64(n) + edges[:, 1]
            if not (np.diff(keys) > 0).all():
                raise ValueError("edges must be unique and lexicographically sorted")
        self.n = int(n)
        self.edges = edges
        self.edges.setflags(write=False)
        self._build_adjacency()

    def _build_adjacency(self) -> None:
        rows = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
        cols = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
        order = np.lexsort((cols, rows))
        self._indices = cols[order]
        counts = np.bincount(rows, minlength=self.n)
        self._indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(counts, out=self._indptr[1:])
        self._degrees = np.diff(self._indptr)
        self._indices.setflags(write=False)
        self._degrees.setflags(write=False)

    @property
    def edge_count(self) -> int:
        return self.edges.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        return self._degrees

    def degree(self, u: int) -> int:
        return int(self._degrees[u])

    def neighbors(self, u: int) -> np.ndarray:
        """Sorted neighbor ids of u (read-only view)."""
        return self._indices[self._indptr[u] : self._indptr[u + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.neighbors(u)
        i = np.searchsorted(nbrs, v)
        return bool(i < len(nbrs) and nbrs[i] == v)

    def adjacency_csr(self) -> sp.csr_matrix:
        """Adjacency matrix as a scipy CSR matrix (0/1, float64)."""
        data = np.ones(len(self._indices), dtype=np.float64)
        return sp.csr_matrix(
            (data, self._indices.copy(), self._indptr.copy()), shape=(self.n, self.n)
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __hash__(self):
        return hash((self.n, self.edges.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"


def _as_pair_array(edge_stream) -> np.ndarray:
    if isinstance(edge_stream, np.ndarray):
        arr = edge_stream.astype(np.int64, copy=False)
    else:
        arr = np.asarray(list(edge_stream), dtype=np.int64)
    return arr.reshape(-1, 2)


def build_graph(
    edge_stream: Iterable[tuple[int, int]] | np.ndarray, n: int | None = None
) -> tuple[Graph, EdgeStreamStats]:
    """Build a simple undirected graph from a raw stream of node-id pairs.

    Self-loops and duplicate pairs (in either orientation) are discarded;
    the returned stats account for every input pair. Node ids must be
    non-negative. When ``n`` is not given it is inferred as max id + 1 over
    every id referenced in the stream, including endpoints of dropped
    self-loops.
    """
    arr = _as_pair_array(edge_stream)
    raw = arr.shape[0]
    if raw and arr.min() < 0:
        raise ValueError("node ids must be non-negative")
    inferred = int(arr.max()) + 1 if raw else 0
    if n is None:
        n = inferred
    elif n < inferred:
        raise ValueError(f"n={n} too small for max node id {inferred - 1}")

    loops = arr[:, 0] == arr[:, 1]
    self_loops = int(loops.sum())
    kept = arr[~loops]
    lo = np.minimum(kept[:, 0], kept[:, 1])
    hi = np.maximum(kept[:, 0], kept[:, 1])
    keys = np.unique(lo * np.int64(max(n, 1)) + hi)
    duplicates = int(kept.shape[0] - keys.shape[0])
    edges = np.column_stack(np.divmod(keys, np.int64(max(n, 1))))
    stats = EdgeStreamStats(raw, self_loops, duplicates)
    return Graph(n, edges), stats


@dataclass(frozen=True)
class LoadedEdgeList:
    """A graph read from disk, with the id compaction map and cleaning stats.

    ``original_ids[i]`` is the id in the source file of compacted node i.
    """

    graph: Graph
    original_ids: np.ndarray
    stats: EdgeStreamStats


def read_snap_edgelist(path) -> LoadedEdgeList:
    """Read a SNAP-style edge list: '#' comment lines, two ids per data line.

    Directed inputs are symmetrized (every line is treated as an undirected
    pair) and self-loops and duplicates are dropped. A strict "# nodes N"
    comment (as written by :func:`write_edgelist`) declares the node count,
    preserving isolated nodes with an identity id map; otherwise node ids
    are compacted to 0..n-1 in ascending order of original id.
    """
    pairs: list[tuple[int, int]] = []
    declared_n: int | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            if stripped.startswith("#"):
                tokens = stripped[1:].split()
                if len(tokens) == 2 and tokens[0] == "nodes" and tokens[1].isdigit():
                    declared_n = int(tokens[1])
                continue
            tokens = stripped.split()
            if len(tokens) != 2:
                raise EdgeListFormatError(path, line_number, stripped)
            try:
                u, v = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise EdgeListFormatError(path, line_number, stripped) from None
            pairs.append((u, v))

    arr = (
        np.asarray(pairs, dtype=np.int64)
        if pairs
        else np.empty((0, 2), dtype=np.int64)
    )
    if declared_n is not None and (arr.size == 0 or int(arr.max()) < declared_n):
        original_ids = np.arange(declared_n, dtype=np.int64)
        compact = arr
        n = declared_n
    else:
        original_ids = np.unique(arr)
        compact = np.searchsorted(original_ids, arr) if arr.size else arr
        n = len(original_ids)
    graph, stats = build_graph(compact, n=n)
    return LoadedEdgeList(graph, original_ids, stats)


def write_edgelist(g: Graph, path) -> None:
    """Write a "# nodes N" header, then one "u v" line per edge, u < v,
    sorted lexicographically.

    Output is byte-exact for a fixed graph, and reading it back reproduces
    the graph exactly (the header carries nodes that appear on no edge
    line). The genuinely empty graph produces an empty file.
    """
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if g.n:
            fh.write(f"# nodes {g.n}\n")
        for u, v in g.edges:
            fh.write(f"{u} {v}\n")


def load_graph(path) -> Graph:
    """Convenience wrapper: read an edge-list file and return just the graph."""
    return read_snap_edgelist(path).graph


def canonical_keys(pairs: np.ndarray, n: int) -> np.ndarray:
    """Map an (m, 2) pair array to scalar keys identifying unordered pairs.

    Self-loops map to -1. Used for first-occurrence attribution when several
    edge streams are merged.
    """
    pairs = pairs.reshape(-1, 2)
    lo = np.minimum(pairs[:, 0], pairs[:, 1])
    hi = np.maximum(pairs[:, 0], pairs[:, 1])
    keys = lo * np.int64(max(n, 1)) + hi
    keys[lo == hi] = -1
    return keys
