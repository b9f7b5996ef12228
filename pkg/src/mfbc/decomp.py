"""Single-process simulation of distributed sparse-multiply schedules.

"Processors" are schedule slots on a virtual p1 x p2 x p3 grid: matrices are
blocked by seeded random row/column permutations, every slot's local products
are actually computed (so the simulated product can be compared entry-for-
entry against the direct multiply), and communication is counted rather than
performed.  Each collective charges a per-participant ledger and updates a
critical path: participants' running critical costs are set to the maximum
over the group plus the collective's cost, words and messages tracked as
separate (possibly different) dependent sequences.

Ledger charges use coefficient 1 and base-2 logarithms: a collective over g
slots moving x words charges (log2 g) messages and x words, and a
single-slot collective is free.  ``collective_cost`` separately exposes the
measurement-oriented constants (broadcast and reduce cost twice a scatter or
allgather) for cost reporting.

Simulated products are bit-identical to the direct multiply whenever the
combine operator is exactly associative and commutative on the data, which
holds for integer-valued weights and counts and for dyadic-rational
centrality factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .spmat import SparseMatrix, elementwise_combine, mm_general
from . import costmodel

VARIANTS_1D = ("A", "B", "C")
VARIANTS_2D = ("AB", "AC", "BC")


@dataclass(frozen=True)
class ProcGrid:
    """Virtual processor grid; degenerate dimensions of size 1 are allowed."""

    p1: int
    p2: int
    p3: int

    def __post_init__(self) -> None:
        if min(self.p1, self.p2, self.p3) < 1:
            raise ValueError("grid dimensions must be positive")

    @property
    def p(self) -> int:
        return self.p1 * self.p2 * self.p3


class CommLedger:
    """Per-slot cumulative and critical-path communication accounting."""

    def __init__(self, n_procs: int) -> None:
        if n_procs < 1:
            raise ValueError("need at least one processor")
        self.n_procs = n_procs
        self.words = [0.0] * n_procs
        self.messages = [0.0] * n_procs
        self.crit_words = [0.0] * n_procs
        self.crit_messages = [0.0] * n_procs

    def charge(self, procs: list[int], messages: float, words: float) -> None:
        """Account one collective over ``procs`` (the critical-path merge).

        Participants' critical costs become the maximum over the group so
        far plus the collective's cost; disjoint groups stay independent.
        """
        if not procs:
            return
        for q in procs:
            self.words[q] += words
            self.messages[q] += messages
        base_w = max(self.crit_words[q] for q in procs) + words
        base_m = max(self.crit_messages[q] for q in procs) + messages
        for q in procs:
            self.crit_words[q] = base_w
            self.crit_messages[q] = base_m

    def collective(self, procs: list[int], words: float) -> None:
        """Charge one coefficient-1 collective; free on a single slot."""
        if len(procs) > 1:
            self.charge(procs, math.log2(len(procs)), words)

    @property
    def critical_words(self) -> float:
        return max(self.crit_words)

    @property
    def critical_messages(self) -> float:
        return max(self.crit_messages)

    def seconds(self, alpha: float, beta: float) -> float:
        return alpha * self.critical_messages + beta * self.critical_words

    def to_table(self) -> str:
        """Flat tabular report: one row per slot plus a critical-path row."""
        lines = ["proc\twords\tmessages"]
        for q in range(self.n_procs):
            lines.append(f"{q}\t{self.words[q]:g}\t{self.messages[q]:g}")
        lines.append(
            f"critical\t{self.critical_words:g}\t{self.critical_messages:g}")
        return "\n".join(lines)


def collective_cost(kind: str, words: float, p: int) -> tuple[float, float]:
    """(message term, word term) of one collective over p processors.

    Broadcast and reduce move a message of size ``words`` at twice the cost
    of scatter and allgather; a sparse reduction is charged by its output
    nonzeros.  Everything is free on a single processor.
    """
    if words < 0 or p < 1:
        raise ValueError("need words >= 0 and p >= 1")
    if p == 1:
        return 0.0, 0.0
    if kind in ("broadcast", "reduce"):
        return 2.0 * math.log2(p), 2.0 * words
    if kind in ("scatter", "allgather", "sparse_reduce"):
        return math.log2(p), float(words)
    raise ValueError(f"unknown collective kind {kind!r}")


@dataclass(frozen=True)
class BlockDist:
    """Randomized near-equal partition of one index space.

    A seeded permutation randomizes the index order, then contiguous ranges
    of the permuted positions form the parts, so part sizes differ by at most
    one and part nonzero counts concentrate around their expectation.
    """

    parts: int
    part_of: np.ndarray

    @classmethod
    def create(cls, size: int, parts: int, rng: np.random.Generator
               ) -> "BlockDist":
        if parts < 1 or size < 0:
            raise ValueError("need parts >= 1 and size >= 0")
        pos = np.empty(size, dtype=np.int64)
        pos[rng.permutation(size)] = np.arange(size)
        return cls(parts, (pos * parts) // max(size, 1))

    @classmethod
    def trivial(cls, size: int) -> "BlockDist":
        return cls(1, np.zeros(size, dtype=np.int64))


def block_matrices(M: SparseMatrix, rows: BlockDist, cols: BlockDist
                   ) -> dict[tuple[int, int], SparseMatrix]:
    """Tile ``M`` by the two partitions; every block keeps the full dimensions
    with support restricted to its tile, so blocks multiply directly."""
    buckets: dict[tuple[int, int], list] = {
        (a, b): [] for a in range(rows.parts) for b in range(cols.parts)}
    rp, cp = rows.part_of, cols.part_of
    for r, c, v in M.entries():
        buckets[(int(rp[r]), int(cp[c]))].append((r, c, v))
    return {key: SparseMatrix(M.n_rows, M.n_cols, ents)
            for key, ents in buckets.items()}


def block_nnz(M: SparseMatrix, rows: BlockDist, cols: BlockDist) -> np.ndarray:
    counts = np.zeros((rows.parts, cols.parts), dtype=np.int64)
    rp, cp = rows.part_of, cols.part_of
    for r, c, _ in M.entries():
        counts[rp[r], cp[c]] += 1
    return counts


@dataclass
class SimResult:
    product: SparseMatrix
    ledger: CommLedger
    replication_memory_words: float | None = None


def _union(n_rows: int, n_cols: int, blocks: list[SparseMatrix]) -> SparseMatrix:
    entries: list[tuple[int, int, Any]] = []
    for blk in blocks:
        entries.extend(blk.entries())
    return SparseMatrix(n_rows, n_cols, entries)


def _fold(n_rows: int, n_cols: int, blocks: list[SparseMatrix],
          combine: Callable[[Any, Any], Any]) -> SparseMatrix:
    acc = SparseMatrix(n_rows, n_cols)
    for blk in blocks:
        acc = elementwise_combine(acc, blk, combine)
    return acc


def _schedule_1d(variant: str, A: SparseMatrix, B: SparseMatrix,
                 f: Callable, combine: Callable, procs: list[int],
                 ledger: CommLedger, rng: np.random.Generator) -> SparseMatrix:
    """Replicate one matrix (A, B) or reduce the product (C) over ``procs``."""
    p = len(procs)
    m, n = A.n_rows, B.n_cols
    if p == 1:
        return mm_general(A, B, f, combine)[0]
    if variant == "A":
        ledger.collective(procs, A.nnz)
        cols = BlockDist.create(n, p, rng)
        blocks = block_matrices(B, BlockDist.trivial(B.n_rows), cols)
        parts = [mm_general(A, blocks[(0, q)], f, combine)[0] for q in range(p)]
        return _union(m, n, parts)
    if variant == "B":
        ledger.collective(procs, B.nnz)
        rows = BlockDist.create(m, p, rng)
        blocks = block_matrices(A, rows, BlockDist.trivial(A.n_cols))
        parts = [mm_general(blocks[(q, 0)], B, f, combine)[0] for q in range(p)]
        return _union(m, n, parts)
    if variant == "C":
        ks = BlockDist.create(A.n_cols, p, rng)
        a_blocks = block_matrices(A, BlockDist.trivial(m), ks)
        b_blocks = block_matrices(B, ks, BlockDist.trivial(n))
        parts = [mm_general(a_blocks[(0, q)], b_blocks[(q, 0)], f, combine)[0]
                 for q in range(p)]
        product = _fold(m, n, parts, combine)
        ledger.collective(procs, product.nnz)
        return product
    raise ValueError(f"unknown 1d variant {variant!r}")


#: 1D schedule equivalent to a 2D variant when one grid dimension collapses.
_DEGENERATE_ROW = {"AB": "A", "AC": "A", "BC": "B"}   # p_r == 1
_DEGENERATE_COL = {"AB": "B", "AC": "C", "BC": "C"}   # p_c == 1


def _schedule_2d(variant: str, A: SparseMatrix, B: SparseMatrix,
                 f: Callable, combine: Callable,
                 p_r: int, p_c: int, pid: Callable[[int, int], int],
                 ledger: CommLedger, rng: np.random.Generator) -> SparseMatrix:
    """Stepped broadcast/reduce schedule on a p_r x p_c slot grid.

    Variant AB keeps the product stationary and broadcasts operand tiles;
    AC and BC keep an operand stationary, broadcast the other, and reduce
    product tiles along grid columns.  A grid with a collapsed dimension
    degenerates to the matching single-collective 1D schedule.
    """
    if variant not in VARIANTS_2D:
        raise ValueError(f"unknown 2d variant {variant!r}")
    m, n = A.n_rows, B.n_cols
    if p_r == 1 and p_c == 1:
        return mm_general(A, B, f, combine)[0]
    if p_r == 1:
        procs = [pid(0, c) for c in range(p_c)]
        return _schedule_1d(_DEGENERATE_ROW[variant], A, B, f, combine,
                            procs, ledger, rng)
    if p_c == 1:
        procs = [pid(r, 0) for r in range(p_r)]
        return _schedule_1d(_DEGENERATE_COL[variant], A, B, f, combine,
                            procs, ledger, rng)

    steps = max(p_r, p_c)
    row_procs = [[pid(r, c) for c in range(p_c)] for r in range(p_r)]
    col_procs = [[pid(r, c) for r in range(p_r)] for c in range(p_c)]

    if variant == "AB":
        rows = BlockDist.create(m, p_r, rng)
        ks = BlockDist.create(A.n_cols, steps, rng)
        cols = BlockDist.create(n, p_c, rng)
        a_blocks = block_matrices(A, rows, ks)
        b_blocks = block_matrices(B, ks, cols)
        acc: dict[tuple[int, int], SparseMatrix] = {}
        for t in range(steps):
            for r in range(p_r):
                ledger.collective(row_procs[r], a_blocks[(r, t)].nnz)
            for c in range(p_c):
                ledger.collective(col_procs[c], b_blocks[(t, c)].nnz)
            for r in range(p_r):
                for c in range(p_c):
                    part = mm_general(a_blocks[(r, t)], b_blocks[(t, c)],
                                      f, combine)[0]
                    prev = acc.get((r, c))
                    acc[(r, c)] = part if prev is None else \
                        elementwise_combine(prev, part, combine)
        return _union(m, n, list(acc.values()))

    if variant == "AC":
        # B stays put on the grid; product tiles are reduced down columns.
        steps_dist = BlockDist.create(m, steps, rng)
        ks = BlockDist.create(A.n_cols, p_r, rng)
        cols = BlockDist.create(n, p_c, rng)
        a_blocks = block_matrices(A, steps_dist, ks)
        b_blocks = block_matrices(B, ks, cols)
        out: list[SparseMatrix] = []
        for t in range(steps):
            for r in range(p_r):
                ledger.collective(row_procs[r], a_blocks[(t, r)].nnz)
            for c in range(p_c):
                tile = _fold(m, n, [mm_general(a_blocks[(t, r)],
                                               b_blocks[(r, c)], f, combine)[0]
                                    for r in range(p_r)], combine)
                ledger.collective(col_procs[c], tile.nnz)
                out.append(tile)
        return _union(m, n, out)

    # BC: A stays put; B tiles are broadcast and product tiles reduced.
    rows_a = BlockDist.create(m, p_c, rng)
    ks = BlockDist.create(A.n_cols, p_r, rng)
    steps_dist = BlockDist.create(n, steps, rng)
    a_blocks = block_matrices(A, rows_a, ks)
    b_blocks = block_matrices(B, ks, steps_dist)
    out = []
    for t in range(steps):
        for r in range(p_r):
            ledger.collective(row_procs[r], b_blocks[(r, t)].nnz)
        for c in range(p_c):
            tile = _fold(m, n, [mm_general(a_blocks[(c, r)],
                                           b_blocks[(r, t)], f, combine)[0]
                                for r in range(p_r)], combine)
            ledger.collective(col_procs[c], tile.nnz)
            out.append(tile)
    return _union(m, n, out)


def run_1d(variant: str, A: SparseMatrix, B: SparseMatrix, p: int,
           f: Callable, combine: Callable, seed: int = 0) -> SimResult:
    """Simulate the 1D schedule on ``p`` slots; the product is exact."""
    if variant not in VARIANTS_1D:
        raise ValueError(f"unknown 1d variant {variant!r}")
    if p < 1:
        raise ValueError("need p >= 1")
    if A.n_cols != B.n_rows:
        raise ValueError("dimension mismatch")
    ledger = CommLedger(p)
    rng = np.random.default_rng(seed)
    product = _schedule_1d(variant, A, B, f, combine, list(range(p)),
                           ledger, rng)
    return SimResult(product, ledger)


def run_2d(variant: str, A: SparseMatrix, B: SparseMatrix, p_r: int, p_c: int,
           f: Callable, combine: Callable, seed: int = 0) -> SimResult:
    """Simulate the 2D schedule on a p_r x p_c grid; the product is exact."""
    if A.n_cols != B.n_rows:
        raise ValueError("dimension mismatch")
    grid = ProcGrid(1, p_r, p_c)
    ledger = CommLedger(grid.p)
    rng = np.random.default_rng(seed)
    product = _schedule_2d(variant, A, B, f, combine, p_r, p_c,
                           lambda r, c: r * p_c + c, ledger, rng)
    return SimResult(product, ledger)


def run_3d(variant_1d: str, variant_2d: str, A: SparseMatrix, B: SparseMatrix,
           p1: int, p2: int, p3: int, f: Callable, combine: Callable,
           seed: int = 0) -> SimResult:
    """Simulate one of the nine nested schedules on a p1 x p2 x p3 grid.

    The 1D variant splits work across p1 layers (replicating A or B up
    front, or reducing the product at the end); each layer runs the 2D
    variant on its p2 x p3 slice.  With p1 == 1 this is exactly the 2D run.
    """
    if variant_1d not in VARIANTS_1D or variant_2d not in VARIANTS_2D:
        raise ValueError(f"unknown 3d variant {variant_1d!r},{variant_2d!r}")
    if A.n_cols != B.n_rows:
        raise ValueError("dimension mismatch")
    grid = ProcGrid(p1, p2, p3)
    ledger = CommLedger(grid.p)
    rng = np.random.default_rng(seed)
    m, k, n = A.n_rows, A.n_cols, B.n_cols

    def pid(layer: int, r: int, c: int) -> int:
        return layer * p2 * p3 + r * p3 + c

    if p1 == 1:
        product = _schedule_2d(variant_2d, A, B, f, combine, p2, p3,
                               lambda r, c: pid(0, r, c), ledger, rng)
    elif variant_1d == "A":
        counts = block_nnz(A, BlockDist.create(m, p2, rng),
                           BlockDist.create(k, p3, rng))
        for r in range(p2):
            for c in range(p3):
                ledger.collective([pid(q, r, c) for q in range(p1)],
                                  int(counts[r, c]))
        layers = BlockDist.create(n, p1, rng)
        b_blocks = block_matrices(B, BlockDist.trivial(k), layers)
        product = _union(m, n, [
            _schedule_2d(variant_2d, A, b_blocks[(0, q)], f, combine, p2, p3,
                         lambda r, c, q=q: pid(q, r, c), ledger, rng)
            for q in range(p1)])
    elif variant_1d == "B":
        counts = block_nnz(B, BlockDist.create(k, p2, rng),
                           BlockDist.create(n, p3, rng))
        for r in range(p2):
            for c in range(p3):
                ledger.collective([pid(q, r, c) for q in range(p1)],
                                  int(counts[r, c]))
        layers = BlockDist.create(m, p1, rng)
        a_blocks = block_matrices(A, layers, BlockDist.trivial(k))
        product = _union(m, n, [
            _schedule_2d(variant_2d, a_blocks[(q, 0)], B, f, combine, p2, p3,
                         lambda r, c, q=q: pid(q, r, c), ledger, rng)
            for q in range(p1)])
    else:  # variant_1d == "C"
        layers = BlockDist.create(k, p1, rng)
        a_blocks = block_matrices(A, BlockDist.trivial(m), layers)
        b_blocks = block_matrices(B, layers, BlockDist.trivial(n))
        partials = [
            _schedule_2d(variant_2d, a_blocks[(0, q)], b_blocks[(q, 0)],
                         f, combine, p2, p3,
                         lambda r, c, q=q: pid(q, r, c), ledger, rng)
            for q in range(p1)]
        product = _fold(m, n, partials, combine)
        counts = block_nnz(product, BlockDist.create(m, p2, rng),
                           BlockDist.create(n, p3, rng))
        for r in range(p2):
            for c in range(p3):
                ledger.collective([pid(q, r, c) for q in range(p1)],
                                  int(counts[r, c]))

    named = {"A": A.nnz, "B": B.nnz, "C": product.nnz}
    memory = costmodel.memory_3d(named[variant_1d], named[variant_2d[0]],
                                 named[variant_2d[1]], grid.p, p1)
    return SimResult(product, ledger, memory)
