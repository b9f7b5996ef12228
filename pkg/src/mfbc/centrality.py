"""Frontier-based betweenness centrality over generalized sparse multiplies.

The forward pass is a Bellman-Ford variant that relaxes, each round, every
(source, vertex) pair whose path information changed in the previous round,
and counts shortest paths while doing so.  The backward pass walks the
shortest-path DAG from its leaves toward each source: a vertex enters exactly
one frontier, once all of its DAG successors have reported, and propagates a
partial centrality factor (dependency divided by path count) across reversed
edges.  Both passes are expressed as products of a rectangular batch matrix
with the adjacency matrix.

Column entries at a row's own source are filtered out of every product:
under positive weights a walk returning to its source is never shortest, and
keeping such entries would leak bogus tie contributions into back-propagation.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .algebra import Centpath, Multpath, bf_action, br_action, centpath_combine, \
    multpath_combine
from .spmat import SparseMatrix, elementwise_combine, mm_general


class StructuralInconsistencyError(RuntimeError):
    """The multiplicity matrix does not describe shortest paths of the graph."""


@dataclass(frozen=True)
class MultpathMatrix:
    """Batch result of the forward pass: row s holds (distance, path count)
    for every vertex reachable from sources[s], the source column excluded."""

    mat: SparseMatrix
    sources: list[int]


@dataclass(frozen=True)
class CentpathMatrix:
    """Batch result of the backward pass: row s holds the partial centrality
    factor of every vertex reachable from sources[s]."""

    mat: SparseMatrix
    sources: list[int]


@dataclass
class BatchTrace:
    """Per-iteration instrumentation of one source batch."""

    sources: list[int]
    forward: list[tuple[int, int]] = field(default_factory=list)
    backward: list[int] = field(default_factory=list)

    @property
    def forward_iterations(self) -> int:
        return len(self.forward)

    @property
    def backward_iterations(self) -> int:
        return len(self.backward)


def _validate_adjacency(A: SparseMatrix) -> tuple[float, float]:
    if A.n_rows != A.n_cols:
        raise ValueError("adjacency matrix must be square")
    lo, hi = math.inf, 0.0
    for r, c, w in A.entries():
        if not (0.0 < w < math.inf):
            raise ValueError(f"non-positive or infinite weight at ({r},{c})")
        if r == c:
            raise ValueError(f"self-loop at vertex {r}")
        lo = min(lo, w)
        hi = max(hi, w)
    return (lo, hi) if A.nnz else (1.0, 1.0)


def mfbf(A: SparseMatrix, sources: list[int]
         ) -> tuple[MultpathMatrix, list[tuple[int, int]]]:
    """Forward pass: shortest distances and multiplicities from ``sources``.

    Returns the multpath matrix and a trace of (frontier nnz, product nnz)
    per iteration.  On unweighted graphs the iteration count equals the
    largest hop distance from the batch and every pair enters one frontier.
    """
    lo, hi = _validate_adjacency(A)
    n = A.n_rows
    if len(set(sources)) != len(sources):
        raise ValueError("sources must be distinct")
    for s in sources:
        if not 0 <= s < n:
            raise ValueError(f"source {s} out of range")
    n_b = len(sources)
    src_of_row = list(sources)

    init = [(s, v, Multpath(w, 1.0))
            for s, src in enumerate(src_of_row) for v, w in A.row(src)]
    T = SparseMatrix(n_b, n, init)
    frontier = T
    trace: list[tuple[int, int]] = []
    # Shortest paths have < n edges, each contributing >= lo to a weight that
    # tops out near n*hi; beyond this many rounds the input must be corrupt.
    guard = int(n * (1.0 + hi / lo)) + 2
    while frontier.nnz:
        product, _ = mm_general(frontier, A, bf_action, multpath_combine)
        trace.append((frontier.nnz, product.nnz))
        if len(trace) > guard:
            raise StructuralInconsistencyError(
                "forward pass failed to converge; adjacency is corrupt")
        product = product.sparsify(lambda s, v, _: v != src_of_row[s])
        T = elementwise_combine(T, product, multpath_combine)
        best = T.to_dict()
        frontier = product.sparsify(lambda s, v, mp: mp.w == best[(s, v)].w)
    return MultpathMatrix(T, src_of_row), trace


def successor_counts(A: SparseMatrix, tmat: MultpathMatrix) -> SparseMatrix:
    """Initial backward state: per pair, the recorded distance, a zero factor,
    and the number of successors in the shortest-path DAG.

    Each row also carries an entry at its own source column (distance 0) so
    the source's countdown is tracked; sources never join a frontier.
    """
    T = tmat.mat
    entries: list[tuple[int, int, Centpath]] = []
    for s, src in enumerate(tmat.sources):
        dist = {v: mp.w for v, mp in T.row(s)}
        dist[src] = 0.0
        for v, dv in dist.items():
            count = sum(1 for u, w in A.row(v) if dist.get(u) == dv + w)
            entries.append((s, v, Centpath(dv, 0.0, count)))
    return SparseMatrix(T.n_rows, T.n_cols, entries)


def mfbr(A: SparseMatrix, tmat: MultpathMatrix
         ) -> tuple[CentpathMatrix, list[int]]:
    """Backward pass: partial centrality factors from a forward-pass result.

    Returns the centpath matrix and the per-iteration frontier nnz trace.
    Raises StructuralInconsistencyError when ``tmat`` cannot have come from
    ``A`` (a countdown overshoots below -1, a contribution arrives above the
    recorded distance, the loop outlives the vertex count, or a countdown
    never reaches zero).
    """
    T = tmat.mat
    src_of_row = tmat.sources
    n_b, n = T.n_rows, T.n_cols
    At = A.transpose()
    Z: dict[tuple[int, int], Centpath] = {
        (s, v): cp for s, v, cp in successor_counts(A, tmat).entries()}

    frontier_entries: list[tuple[int, int, Centpath]] = []
    for (s, v), cp in Z.items():
        if cp.c != 0:
            continue
        Z[(s, v)] = Centpath(cp.w, cp.p, -1)
        if v != src_of_row[s]:
            mult = T.get(s, v)
            frontier_entries.append((s, v, Centpath(cp.w, 1.0 / mult.m, -1)))

    trace: list[int] = []
    while frontier_entries:
        frontier = SparseMatrix(n_b, n, frontier_entries)
        trace.append(frontier.nnz)
        if len(trace) > n:
            raise StructuralInconsistencyError(
                "backward frontier failed to empty within n iterations")
        product, _ = mm_general(frontier, At, br_action, centpath_combine)
        frontier_entries = []
        for s, v, contrib in product.entries():
            cur = Z.get((s, v))
            if cur is None:
                # Outside the recorded support the implicit infinite-weight
                # state absorbs every finite contribution.
                continue
            if contrib.w < cur.w:
                continue
            if contrib.w > cur.w:
                raise StructuralInconsistencyError(
                    f"contribution above recorded distance at pair ({s},{v})")
            merged = centpath_combine(cur, contrib)
            if merged.c < -1:
                raise StructuralInconsistencyError(
                    f"countdown below -1 at pair ({s},{v})")
            if merged.c == 0:
                Z[(s, v)] = Centpath(merged.w, merged.p, -1)
                if v != src_of_row[s]:
                    mult = T.get(s, v)
                    frontier_entries.append(
                        (s, v, Centpath(merged.w, merged.p + 1.0 / mult.m, -1)))
            else:
                Z[(s, v)] = merged
    starved = [pair for pair, cp in Z.items() if cp.c > 0]
    if starved:
        raise StructuralInconsistencyError(
            f"countdown never reached zero for pairs {sorted(starved)[:4]}")
    zmat = SparseMatrix(n_b, n, ((s, v, cp) for (s, v), cp in Z.items()))
    return CentpathMatrix(zmat, src_of_row), trace


def _score_batch(A: SparseMatrix, sources: list[int]
                 ) -> tuple[np.ndarray, BatchTrace]:
    tmat, fwd = mfbf(A, sources)
    zmat, bwd = mfbr(A, tmat)
    part = np.zeros(A.n_rows)
    zd = zmat.mat.to_dict()
    for s, v, mp in tmat.mat.entries():
        part[v] += zd[(s, v)].p * mp.m
    return part, BatchTrace(sources, fwd, bwd)


def mfbc(A: SparseMatrix, n_b: int, threads: int = 1
         ) -> tuple[np.ndarray, list[BatchTrace]]:
    """Betweenness scores of every vertex, processed ``n_b`` sources per batch.

    Scores are independent of the batch size up to floating-point
    reassociation.  Batches are independent; with ``threads > 1`` they run on
    a worker pool and are still reduced in batch order, so results do not
    depend on scheduling.
    """
    _validate_adjacency(A)
    n = A.n_rows
    if not 1 <= n_b <= max(n, 1):
        raise ValueError("batch size must lie in [1, n]")
    batches = [list(range(lo, min(lo + n_b, n))) for lo in range(0, n, n_b)]
    scores = np.zeros(n)
    traces: list[BatchTrace] = []
    if threads > 1 and len(batches) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda b: _score_batch(A, b), batches))
    else:
        results = [_score_batch(A, b) for b in batches]
    for part, trace in results:
        scores += part
        traces.append(trace)
    return scores, traces


def choose_batch_size(n: int, m: int, words_per_proc: int, p: int) -> int:
    """Largest batch that keeps the n x n_b working set within memory.

    With replication factor c = floor(words_per_proc * p / m), the chosen
    batch is c*m/n clamped to [1, n].
    """
    if n < 1 or m < 1 or p < 1:
        raise ValueError("n, m, p must be positive")
    if words_per_proc * p < m:
        raise ValueError("insufficient memory: need at least m/p words per processor")
    c = (words_per_proc * p) // m
    return int(max(1, min(n, (c * m) // n)))
