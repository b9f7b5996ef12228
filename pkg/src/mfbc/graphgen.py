"""Seeded synthetic graph generators and preprocessing.

Graphs are stored as flat edge arrays (one row per edge, each undirected edge
stored once) so that generation scales to millions of edges; the desk-scale
algorithms convert to sparse adjacency on demand.  Generators are pure
functions of their parameters and seed: identical inputs give bit-identical
edge lists.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spmat import SparseMatrix

#: Default recursive-quadrant probabilities (standard power-law convention).
RMAT_DEFAULT_PROBS = (0.57, 0.19, 0.19, 0.05)


@dataclass(frozen=True)
class Graph:
    """Edge-list graph with ``n`` vertices labelled 0..n-1.

    Invariants: no self-loops, no duplicate edges, all weights positive and
    finite.  Undirected graphs store each edge once with ``u < v``.
    """

    n: int
    directed: bool
    weighted: bool
    edge_u: np.ndarray
    edge_v: np.ndarray
    edge_w: np.ndarray

    @property
    def m(self) -> int:
        return int(self.edge_u.shape[0])

    def edge_list(self) -> list[tuple[int, int, float]]:
        return [(int(u), int(v), float(w))
                for u, v, w in zip(self.edge_u, self.edge_v, self.edge_w)]

    def degrees(self) -> np.ndarray:
        """Per-vertex degree (in-degree plus out-degree for directed graphs)."""
        deg = np.bincount(self.edge_u, minlength=self.n)
        deg += np.bincount(self.edge_v, minlength=self.n)
        return deg

    def degree_stats(self) -> tuple[float, int]:
        """(mean degree, max degree); the mean equals 2m/n."""
        if self.n == 0:
            return 0.0, 0
        deg = self.degrees()
        return float(deg.mean()), int(deg.max())


def _make_graph(n: int, directed: bool, weighted: bool,
                u: np.ndarray, v: np.ndarray, w: np.ndarray) -> Graph:
    return Graph(n, directed, weighted,
                 np.ascontiguousarray(u, dtype=np.int64),
                 np.ascontiguousarray(v, dtype=np.int64),
                 np.ascontiguousarray(w, dtype=np.float64))


def graph_from_edges(n: int, edges: list[tuple[int, int, float]],
                     directed: bool = False, weighted: bool = False) -> Graph:
    """Build a graph from python tuples, canonicalizing and validating."""
    u = np.array([e[0] for e in edges], dtype=np.int64)
    v = np.array([e[1] for e in edges], dtype=np.int64)
    w = np.array([e[2] if len(e) > 2 else 1.0 for e in edges], dtype=np.float64)
    if len(edges):
        if u.min() < 0 or v.min() < 0 or max(u.max(), v.max()) >= n:
            raise ValueError("edge endpoint outside vertex range")
        if np.any(u == v):
            raise ValueError("self-loops are not permitted")
        if not np.all((w > 0) & np.isfinite(w)):
            raise ValueError("edge weights must be positive and finite")
        if not directed:
            u, v = np.minimum(u, v), np.maximum(u, v)
        codes = u * n + v
        if np.unique(codes).size != codes.size:
            raise ValueError("duplicate edges are not permitted")
    return _make_graph(n, directed, weighted, u, v, w)


def rmat(scale: int, edge_factor: int,
         probs: tuple[float, float, float, float] = RMAT_DEFAULT_PROBS,
         seed: int = 0, directed: bool = False) -> Graph:
    """Recursive-quadrant power-law generator on 2**scale vertices.

    Performs edge_factor * 2**scale edge insertions; self-loops and duplicate
    insertions are discarded (first occurrence kept), so the final edge count
    is slightly below the insertion count.  Deterministic per seed.
    """
    if scale < 1:
        raise ValueError("scale must be >= 1")
    if edge_factor < 0:
        raise ValueError("edge factor must be nonnegative")
    if len(probs) != 4 or any(q < 0 for q in probs):
        raise ValueError("need four nonnegative quadrant probabilities")
    if abs(sum(probs) - 1.0) > 1e-9:
        raise ValueError("quadrant probabilities must sum to 1")

    n = 1 << scale
    total = edge_factor * n
    rng = np.random.default_rng(seed)
    cum = np.cumsum(probs[:3])
    chunk = 1 << 20
    code_chunks: list[np.ndarray] = []
    remaining = total
    while remaining > 0:
        size = min(chunk, remaining)
        remaining -= size
        u = np.zeros(size, dtype=np.int64)
        v = np.zeros(size, dtype=np.int64)
        for bit in range(scale):
            quad = np.searchsorted(cum, rng.random(size), side="right")
            u |= (quad >> 1) << bit
            v |= (quad & 1) << bit
        if not directed:
            u, v = np.minimum(u, v), np.maximum(u, v)
        keep = u != v
        code_chunks.append((u[keep] * n + v[keep]).astype(np.int64))
    codes = np.unique(np.concatenate(code_chunks)) if code_chunks else \
        np.empty(0, dtype=np.int64)
    u = codes // n
    v = codes % n
    return _make_graph(n, directed, False, u, v, np.ones(codes.size))


def uniform_random(n: int, degree: float | None = None,
                   fill: float | None = None, seed: int = 0,
                   directed: bool = False) -> Graph:
    """Uniform random graph: every (un)ordered pair is an edge independently.

    Exactly one of ``degree`` (expected vertex degree) or ``fill`` (edge
    percentage, 100 * m / max-possible-m) selects the edge probability.
    """
    if (degree is None) == (fill is None):
        raise ValueError("give exactly one of degree or fill")
    if n < 1:
        raise ValueError("n must be >= 1")
    if degree is not None:
        if degree < 0 or (n > 1 and degree > n - 1):
            raise ValueError("degree must lie in [0, n-1]")
        q = 0.0 if n == 1 else degree / (n - 1)
    else:
        if not 0 <= fill <= 100:
            raise ValueError("fill must lie in [0, 100]")
        q = fill / 100.0

    rng = np.random.default_rng(seed)
    us: list[np.ndarray] = []
    vs: list[np.ndarray] = []
    for u in range(n):
        if directed:
            hit = np.flatnonzero(rng.random(n) < q)
            hit = hit[hit != u]
        else:
            hit = u + 1 + np.flatnonzero(rng.random(n - u - 1) < q)
        if hit.size:
            us.append(np.full(hit.size, u, dtype=np.int64))
            vs.append(hit.astype(np.int64))
    u_arr = np.concatenate(us) if us else np.empty(0, dtype=np.int64)
    v_arr = np.concatenate(vs) if vs else np.empty(0, dtype=np.int64)
    return _make_graph(n, directed, False, u_arr, v_arr, np.ones(u_arr.size))


def assign_weights(g: Graph, lo: int, hi: int, seed: int = 0) -> Graph:
    """Draw an integer weight uniformly from [lo, hi] for every edge."""
    if lo < 1:
        raise ValueError("weights must be positive integers (lo >= 1)")
    if hi < lo:
        raise ValueError("weight range is empty")
    rng = np.random.default_rng(seed)
    w = rng.integers(lo, hi + 1, size=g.m).astype(np.float64)
    return _make_graph(g.n, g.directed, True, g.edge_u, g.edge_v, w)


def remove_disconnected(g: Graph) -> tuple[Graph, list[int]]:
    """Drop vertices that touch no edge; returns (reduced graph, kept ids).

    ``kept[i]`` is the original id of new vertex ``i``.  Scores computed on
    the reduced graph map back to original ids, with zero for removed ones.
    """
    touched = np.zeros(g.n, dtype=bool)
    touched[g.edge_u] = True
    touched[g.edge_v] = True
    kept = np.flatnonzero(touched)
    if kept.size == g.n:
        return g, list(range(g.n))
    remap = np.full(g.n, -1, dtype=np.int64)
    remap[kept] = np.arange(kept.size)
    out = _make_graph(kept.size, g.directed, g.weighted,
                      remap[g.edge_u], remap[g.edge_v], g.edge_w)
    return out, [int(x) for x in kept]


def to_adjacency(g: Graph) -> SparseMatrix:
    """Sparse adjacency with positive finite weights; undirected edges are
    expanded symmetrically."""
    if g.m and not np.all((g.edge_w > 0) & np.isfinite(g.edge_w)):
        raise ValueError("adjacency requires positive finite weights")
    entries = [(int(u), int(v), float(w))
               for u, v, w in zip(g.edge_u, g.edge_v, g.edge_w)]
    if not g.directed:
        entries.extend((v, u, w) for u, v, w in list(entries))
    return SparseMatrix(g.n, g.n, entries)


def diameter(g: Graph) -> int:
    """Largest finite hop count between any ordered vertex pair (BFS-based,
    ignores weights; desk scale only)."""
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for u, v in zip(g.edge_u, g.edge_v):
        adj[int(u)].append(int(v))
        if not g.directed:
            adj[int(v)].append(int(u))
    best = 0
    for s in range(g.n):
        dist = [-1] * g.n
        dist[s] = 0
        queue = [s]
        while queue:
            nxt: list[int] = []
            for x in queue:
                dx = dist[x]
                for y in adj[x]:
                    if dist[y] < 0:
                        dist[y] = dx + 1
                        nxt.append(y)
            queue = nxt
        best = max(best, max(d for d in dist if d >= 0))
    return best
