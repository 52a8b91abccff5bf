"""Undirected simple graphs and their Laplacian algebra.

Node indices are 0-based everywhere. Edges are stored order-normalized as
(min, max) tuples so equality and deduplication are deterministic. Graph
objects are immutable after construction and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DisconnectedGraphError,
    EdgeListParseError,
    NodeIndexError,
    SelfLoopError,
    TooFewNodesError,
)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on nodes 0..n-1."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def neighbors(self, i: int) -> list:
        return sorted(
            j for (a, b) in self.edges for j in ((b,) if a == i else (a,) if b == i else ())
        )

    def degree(self, i: int) -> int:
        return sum(1 for (a, b) in self.edges if a == i or b == i)

    @property
    def degrees(self) -> np.ndarray:
        d = np.zeros(self.n, dtype=np.int64)
        for a, b in self.edges:
            d[a] += 1
            d[b] += 1
        return d


def from_edge_list(n: int, edges) -> Graph:
    """Build a canonical Graph from an edge list.

    Duplicate edges are merged; (i, j) and (j, i) are the same edge.
    """
    if n < 2:
        raise TooFewNodesError(f"need at least 2 nodes, got n={n}")
    canon = set()
    for i, j in edges:
        if i == j:
            raise SelfLoopError(f"self-loop ({i},{j}) is not allowed")
        if not (0 <= i < n) or not (0 <= j < n):
            raise NodeIndexError(f"edge ({i},{j}) out of range for n={n}")
        canon.add((min(i, j), max(i, j)))
    return Graph(n=n, edges=frozenset(canon))


def degree_matrix(g: Graph) -> np.ndarray:
    """Diagonal matrix of node degrees."""
    return np.diag(g.degrees).astype(float)


def adjacency_matrix(g: Graph) -> np.ndarray:
    """Symmetric 0/1 adjacency matrix with zero diagonal."""
    a = np.zeros((g.n, g.n))
    for i, j in g.edges:
        a[i, j] = 1.0
        a[j, i] = 1.0
    return a


def laplacian(g: Graph) -> np.ndarray:
    """Graph Laplacian: degree matrix minus adjacency matrix."""
    return degree_matrix(g) - adjacency_matrix(g)


def is_connected(g: Graph) -> bool:
    """Breadth-first reachability from node 0."""
    adj = [[] for _ in range(g.n)]
    for i, j in g.edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = [False] * g.n
    seen[0] = True
    stack = [0]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                stack.append(v)
    return all(seen)


def laplacian_spectrum(g: Graph) -> np.ndarray:
    """Ascending Laplacian eigenvalues of a connected graph.

    The first eigenvalue is 0 (eigenvector 1); the second is the algebraic
    connectivity and must be strictly positive.
    """
    if not is_connected(g):
        raise DisconnectedGraphError("Laplacian spectrum ordering requires a connected graph")
    vals = np.linalg.eigvalsh(laplacian(g))
    return np.sort(vals)


def algebraic_connectivity(g: Graph) -> float:
    """Second-smallest Laplacian eigenvalue; positive iff connected."""
    return float(laplacian_spectrum(g)[1])


def parse_edge_list(text: str) -> Graph:
    """Parse the edge-list text format.

    First non-comment line is ``n m``; then m lines ``i j``. Lines starting
    with ``#`` are comments. Errors report 1-based line numbers.
    """
    header = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListParseError(f"expected two integers, got {line!r}", lineno)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(f"non-integer token in {line!r}", lineno) from None
        if header is None:
            header = (a, b, lineno)
        else:
            pairs.append((a, b, lineno))
    if header is None:
        raise EdgeListParseError("empty edge-list file", 1)
    n, m, hline = header
    if len(pairs) != m:
        raise EdgeListParseError(
            f"header declares {m} edges but file has {len(pairs)}", hline
        )
    try:
        return from_edge_list(n, [(a, b) for a, b, _ in pairs])
    except (SelfLoopError, NodeIndexError, TooFewNodesError) as exc:
        # Attribute the error to the first offending edge line.
        for a, b, lineno in pairs:
            if a == b or not (0 <= a < n) or not (0 <= b < n):
                raise EdgeListParseError(str(exc), lineno) from exc
        raise EdgeListParseError(str(exc), hline) from exc


def load_edge_list(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {len(g.edges)}"]
    lines.extend(f"{i} {j}" for i, j in sorted(g.edges))
    return "\n".join(lines) + "\n"


def path_graph(n: int) -> Graph:
    return from_edge_list(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise TooFewNodesError("cycle needs n >= 3")
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return from_edge_list(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def random_connected_graph(n: int, rng: np.random.Generator, extra_edge_prob: float = 0.3) -> Graph:
    """Random connected graph: random spanning tree plus extra edges.

    Deterministic for a given generator state.
    """
    edges = []
    # random attachment tree over a random node ordering
    order = rng.permutation(n)
    for k in range(1, n):
        parent = order[int(rng.integers(0, k))]
        edges.append((int(order[k]), int(parent)))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < extra_edge_prob:
                edges.append((i, j))
    return from_edge_list(n, edges)
