"""Simple labeled graphs (directed or undirected) on n nodes.

Nodes are the integers 0..n-1. Adjacency is stored as a dense boolean
matrix; undirected graphs keep both mirrored entries so edge lookup is
uniform for both directednesses. Graph values are treated as immutable:
the adjacency array is write-protected and :func:`toggle_edge` returns a
new graph, so instances are safe to share across workers.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import GraphFormatError

_HEADER_RE = re.compile(r"^n=(\d+)\s+directed=([01])$")


@dataclass(eq=False)
class Graph:
    """A simple graph: no self-loops, no multi-edges, boolean adjacency."""

    n: int
    directed: bool
    adjacency: np.ndarray

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("node count must be >= 1")
        adj = np.asarray(self.adjacency, dtype=bool)
        if adj.shape != (self.n, self.n):
            raise ValueError(f"adjacency must be ({self.n}, {self.n})")
        if adj.diagonal().any():
            raise ValueError("self-loops are not allowed")
        if not self.directed and not np.array_equal(adj, adj.T):
            raise ValueError("undirected adjacency must be symmetric")
        adj = adj.copy()
        adj.setflags(write=False)
        self.adjacency = adj

    @property
    def edge_count(self) -> int:
        total = int(self.adjacency.sum())
        return total if self.directed else total // 2

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adjacency[i, j])

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield edges in canonical order (i < j for undirected graphs)."""
        if self.directed:
            rows, cols = np.nonzero(self.adjacency)
        else:
            rows, cols = np.nonzero(np.triu(self.adjacency))
        for i, j in zip(rows.tolist(), cols.tolist()):
            yield i, j

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self.directed == other.directed
            and np.array_equal(self.adjacency, other.adjacency)
        )


def dyad_pairs(n: int, directed: bool) -> list[tuple[int, int]]:
    """All orderable dyads: ordered pairs i != j if directed, else i < j."""
    if directed:
        return [(i, j) for i in range(n) for j in range(n) if i != j]
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def max_edges(n: int, directed: bool) -> int:
    return n * (n - 1) if directed else n * (n - 1) // 2


def new_empty(n: int, directed: bool) -> Graph:
    """Graph on n nodes with zero edges. Rejects n = 0."""
    if n < 1:
        raise ValueError("node count must be >= 1")
    return Graph(n, directed, np.zeros((n, n), dtype=bool))


def _check_pair(g: Graph, i: int, j: int) -> None:
    if i == j:
        raise ValueError(f"self-loop ({i}, {j}) is not allowed")
    for node in (i, j):
        if not 0 <= node < g.n:
            raise ValueError(f"node {node} out of range for n={g.n}")


def toggle_edge(g: Graph, i: int, j: int) -> Graph:
    """Return a copy of g with the edge indicator for (i, j) flipped.

    For undirected graphs the mirrored entry (j, i) is flipped identically.
    Toggling twice restores the original graph.
    """
    _check_pair(g, i, j)
    adj = g.adjacency.copy()
    adj.setflags(write=True)
    adj[i, j] = not adj[i, j]
    if not g.directed:
        adj[j, i] = adj[i, j]
    return Graph(g.n, g.directed, adj)


def from_edges(n: int, directed: bool, edges: list[tuple[int, int]]) -> Graph:
    adj = np.zeros((n, n), dtype=bool)
    for i, j in edges:
        if i == j:
            raise ValueError(f"self-loop ({i}, {j}) is not allowed")
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
        adj[i, j] = True
        if not directed:
            adj[j, i] = True
    return Graph(n, directed, adj)


def random_graph(n: int, directed: bool, p: float, seed: int) -> Graph:
    """G(n, p) sample; each orderable dyad is an independent Bernoulli(p)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("edge probability must be in [0, 1]")
    rng = np.random.Generator(np.random.PCG64(seed))
    g = new_empty(n, directed)
    adj = g.adjacency.copy()
    adj.setflags(write=True)
    for (i, j), u in zip(dyad_pairs(n, directed), rng.random(max_edges(n, directed))):
        if u < p:
            adj[i, j] = True
            if not directed:
                adj[j, i] = True
    return Graph(n, directed, adj)


def read_edge_list(source) -> Graph:
    """Parse the edge-list text format into a Graph.

    Format: first significant line ``n=<int> directed=<0|1>``, then one
    ``<i> <j>`` edge per line. ``#`` begins a comment line; blank lines are
    ignored. Undirected files list each edge once, with either orientation.
    Accepts str, bytes, or a file-like object.
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    elif isinstance(source, io.IOBase) or hasattr(source, "read"):
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    else:
        raise TypeError("source must be str, bytes, or file-like")

    n: int | None = None
    directed = False
    adj: np.ndarray | None = None
    seen: set[tuple[int, int]] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if n is None:
            m = _HEADER_RE.match(stripped)
            if m is None:
                raise GraphFormatError(
                    f"malformed header at line {lineno}: expected 'n=<int> directed=<0|1>'"
                )
            n = int(m.group(1))
            if n < 1:
                raise GraphFormatError(f"node count must be >= 1 at line {lineno}")
            directed = m.group(2) == "1"
            adj = np.zeros((n, n), dtype=bool)
            continue
        tokens = stripped.split()
        if len(tokens) != 2:
            raise GraphFormatError(f"malformed edge at line {lineno}: {stripped!r}")
        try:
            i, j = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphFormatError(
                f"malformed edge at line {lineno}: {stripped!r}"
            ) from None
        if i == j:
            raise GraphFormatError(f"self-loop at line {lineno}")
        if not (0 <= i < n and 0 <= j < n):
            raise GraphFormatError(f"node index out of range at line {lineno}")
        key = (i, j) if directed else (min(i, j), max(i, j))
        if key in seen:
            raise GraphFormatError(f"duplicate edge at line {lineno}")
        seen.add(key)
        assert adj is not None
        adj[i, j] = True
        if not directed:
            adj[j, i] = True
    if n is None:
        raise GraphFormatError("empty input: missing 'n=... directed=...' header")
    return Graph(n, directed, adj)


def write_edge_list(g: Graph) -> str:
    """Serialize g to the edge-list text format (UTF-8, LF endings).

    Undirected edges are written once in i < j orientation; round-trips
    through :func:`read_edge_list` exactly.
    """
    lines = [f"n={g.n} directed={1 if g.directed else 0}"]
    for i, j in g.edges():
        lines.append(f"{i} {j}")
    return "\n".join(lines) + "\n"
