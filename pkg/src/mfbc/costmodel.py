"""Closed-form latency/bandwidth evaluators for the distributed multiply
schedules, the exhaustive grid optimizer, and the end-to-end centrality bound.

Modeling conventions: every expression is evaluated with coefficient 1 and
base-2 logarithms, and a grid dimension of size 1 incurs no communication.
The executable simulation is compared against these values only within a
constant band (factor 4).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

VARIANTS_1D = ("A", "B", "C")
VARIANTS_2D = ("AB", "AC", "BC")


@dataclass(frozen=True)
class MachineParams:
    """Latency per message, seconds per word, processor count, words of
    memory per processor, and replication factor."""

    alpha: float
    beta: float
    p: int
    memory_words: float
    replication: float = 1.0

    def __post_init__(self) -> None:
        if not self.alpha >= self.beta > 0:
            raise ValueError("need alpha >= beta > 0")
        if self.p < 1:
            raise ValueError("need p >= 1")
        if not 1 <= self.replication <= self.p:
            raise ValueError("replication factor must lie in [1, p]")


@dataclass(frozen=True)
class CostEstimate:
    """Message count and word count, scalarized as alpha*messages + beta*words."""

    messages: float
    words: float
    alpha: float = 1.0
    beta: float = 1.0

    @property
    def seconds(self) -> float:
        return self.alpha * self.messages + self.beta * self.words

    def __add__(self, other: "CostEstimate") -> "CostEstimate":
        if (self.alpha, self.beta) != (other.alpha, other.beta):
            raise ValueError("cannot add estimates under different machine rates")
        return CostEstimate(self.messages + other.messages,
                            self.words + other.words, self.alpha, self.beta)


def cost_1d(variant: str, nnz_moved: float, p: int,
            alpha: float = 1.0, beta: float = 1.0) -> CostEstimate:
    """One collective moving the replicated (A, B) or reduced (C) matrix."""
    if variant not in VARIANTS_1D:
        raise ValueError(f"unknown 1d variant {variant!r}")
    if p < 1:
        raise ValueError("need p >= 1")
    if p == 1:
        return CostEstimate(0.0, 0.0, alpha, beta)
    return CostEstimate(math.log2(p), float(nnz_moved), alpha, beta)


def cost_2d(variant: str, nnz_y: float, nnz_z: float, p_r: int, p_c: int,
            alpha: float = 1.0, beta: float = 1.0) -> CostEstimate:
    """Stepped broadcasts/reductions on a p_r x p_c grid.

    max(p_r, p_c) steps, each a log2(p) message phase; the first named matrix
    moves divided by p_r along grid rows (groups of p_c) and the second
    divided by p_c along grid columns (groups of p_r).  A movement along a
    single-processor group is free.
    """
    if variant not in VARIANTS_2D:
        raise ValueError(f"unknown 2d variant {variant!r}")
    if p_r < 1 or p_c < 1:
        raise ValueError("grid dimensions must be positive")
    p = p_r * p_c
    if p == 1:
        return CostEstimate(0.0, 0.0, alpha, beta)
    messages = max(p_r, p_c) * math.log2(p)
    words = (nnz_y / p_r if p_c > 1 else 0.0) + (nnz_z / p_c if p_r > 1 else 0.0)
    return CostEstimate(messages, words, alpha, beta)


def moved_nnz_1d(variant: str, nnz_a: float, nnz_b: float, nnz_c: float
                 ) -> float:
    """Nonzeros of the matrix a 1D variant replicates or reduces."""
    return {"A": nnz_a, "B": nnz_b, "C": nnz_c}[variant]


def moved_nnz_2d(variant: str, nnz_a: float, nnz_b: float, nnz_c: float
                 ) -> tuple[float, float]:
    """Nonzeros of the two matrices a 2D variant moves, in (Y, Z) order."""
    named = {"A": nnz_a, "B": nnz_b, "C": nnz_c}
    return named[variant[0]], named[variant[1]]


def cost_3d(variant_1d: str, variant_2d: str,
            nnz_a: float, nnz_b: float, nnz_c: float,
            p1: int, p2: int, p3: int,
            alpha: float = 1.0, beta: float = 1.0) -> CostEstimate:
    """Nested schedule: a 1D phase over p1 layers of p2 x p3 grids.

    The layer phase moves the named matrix in (p2 x p3)-tile pieces; inside a
    layer, operands already split across layers enter the 2D cost divided by
    p1.  Degenerate dimensions reduce to the lower-dimensional evaluators.
    """
    if variant_1d not in VARIANTS_1D or variant_2d not in VARIANTS_2D:
        raise ValueError(f"unknown 3d variant {variant_1d!r},{variant_2d!r}")
    if min(p1, p2, p3) < 1:
        raise ValueError("grid dimensions must be positive")
    nnz_x = moved_nnz_1d(variant_1d, nnz_a, nnz_b, nnz_c)
    nnz_y, nnz_z = moved_nnz_2d(variant_2d, nnz_a, nnz_b, nnz_c)
    layer_phase = cost_1d(variant_1d, nnz_x / (p2 * p3), p1, alpha, beta)
    if variant_1d == variant_2d[0]:
        grid_phase = cost_2d(variant_2d, nnz_y, nnz_z / p1, p2, p3, alpha, beta)
    elif variant_1d == variant_2d[1]:
        grid_phase = cost_2d(variant_2d, nnz_y / p1, nnz_z, p2, p3, alpha, beta)
    else:
        grid_phase = cost_2d(variant_2d, nnz_y / p1, nnz_z / p1, p2, p3,
                             alpha, beta)
    return layer_phase + grid_phase


def memory_3d(nnz_x: float, nnz_y: float, nnz_z: float, p: int, p1: int) -> float:
    """Words per processor: the layer-replicated matrix counts p1 times."""
    if p < 1 or not 1 <= p1 <= p:
        raise ValueError("need 1 <= p1 <= p")
    return nnz_x * p1 / p + (nnz_y + nnz_z) / p


@dataclass(frozen=True)
class GridChoice:
    """Optimizer result; len(grid) tells the schedule dimensionality."""

    grid: tuple[int, ...]
    variant: str
    cost: CostEstimate


def _factor_pairs(p: int) -> list[tuple[int, int]]:
    return [(d, p // d) for d in range(1, p + 1) if p % d == 0]


def _factor_triples(p: int) -> list[tuple[int, int, int]]:
    out = []
    for p1, rest in _factor_pairs(p):
        out.extend((p1, p2, p3) for p2, p3 in _factor_pairs(rest))
    return out


def optimize_grid(nnz_a: float, nnz_b: float, nnz_c: float, p: int,
                  alpha: float = 1.0, beta: float = 1.0) -> GridChoice:
    """Exhaustive minimum over pure 1D, all 2D grids, and all nine nested
    variants on every ordered factorization p1*p2*p3 = p.

    Ties are broken by enumeration order (1D first, then 2D, then 3D), so the
    result is deterministic.  Exhaustive enumeration is fine for desk-scale p.
    """
    if p < 1:
        raise ValueError("need p >= 1")
    best: GridChoice | None = None
    for v in VARIANTS_1D:
        est = cost_1d(v, moved_nnz_1d(v, nnz_a, nnz_b, nnz_c), p, alpha, beta)
        if best is None or est.seconds < best.cost.seconds:
            best = GridChoice((p,), v, est)
    for p_r, p_c in _factor_pairs(p):
        for v in VARIANTS_2D:
            y, z = moved_nnz_2d(v, nnz_a, nnz_b, nnz_c)
            est = cost_2d(v, y, z, p_r, p_c, alpha, beta)
            if est.seconds < best.cost.seconds:
                best = GridChoice((p_r, p_c), v, est)
    for p1, p2, p3 in _factor_triples(p):
        for x in VARIANTS_1D:
            for yz in VARIANTS_2D:
                est = cost_3d(x, yz, nnz_a, nnz_b, nnz_c, p1, p2, p3,
                              alpha, beta)
                if est.seconds < best.cost.seconds:
                    best = GridChoice((p1, p2, p3), f"{x},{yz}", est)
    return best


def mfbc_bound(n: int, m: int, p: int, c: float, d: int,
               alpha: float = 1.0, beta: float = 1.0) -> CostEstimate:
    """End-to-end communication bound of the batched centrality algorithm on
    an unweighted n-vertex m-edge graph of diameter d with replication c.

    messages = (d n^2 / m) sqrt(p / c^3) log2 p
    words    = n^2 / sqrt(c p) + n sqrt(m) / p^(2/3)
    """
    if min(n, m, p, d) < 1 or not 1 <= c <= p:
        raise ValueError("need n, m, p, d >= 1 and c in [1, p]")
    messages = (d * n * n / m) * math.sqrt(p / c ** 3) * math.log2(p)
    words = n * n / math.sqrt(c * p) + n * math.sqrt(m) / p ** (2.0 / 3.0)
    return CostEstimate(messages, words, alpha, beta)


def replication_tradeoff_words(n: int, m: int, p: int, c: float) -> float:
    """Bandwidth-plus-replication word count at replication factor c, before
    the factor is optimized away: n^2/sqrt(cp) cross-processor words plus the
    c*m/p words each processor holds and exchanges for the replicated graph."""
    if min(n, m, p) < 1 or not 1 <= c <= p:
        raise ValueError("need n, m, p >= 1 and c in [1, p]")
    return n * n / math.sqrt(c * p) + c * m / p


def optimal_replication(n: int, m: int, p: int) -> float:
    """Replication factor balancing the two bandwidth terms of the bound:
    c = p^(1/3) n^2 / m (meaningful when it lands inside [1, p])."""
    return p ** (1.0 / 3.0) * n * n / m


def flops_estimate(nnz_a: float, nnz_b: float, k: int) -> float:
    """Expected nonzero products for uniform-random operands with inner
    dimension k: nnz(A) * nnz(B) / k."""
    if k < 1:
        raise ValueError("inner dimension must be positive")
    return nnz_a * nnz_b / k


def output_nnz_estimate(flops: float, m: int, n: int) -> float:
    """Expected output nonzeros: min(m*n, flops)."""
    return min(float(m) * n, flops)


def block_nnz_estimate(nnz: float, m: int, k: int, b1: int, b2: int) -> float:
    """Expected nonzeros of a b1 x b2 block of an m x k matrix with nnz
    stored entries: nnz * b1 * b2 / (m * k)."""
    if min(m, k, b1, b2) < 1:
        raise ValueError("dimensions must be positive")
    return nnz * b1 * b2 / (m * k)
