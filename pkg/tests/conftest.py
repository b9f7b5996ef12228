"""Shared helpers for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from mfbc.algebra import Multpath
from mfbc.graphgen import Graph, graph_from_edges
from mfbc.spmat import SparseMatrix


def graph(n: int, edges: list[tuple], directed: bool = False,
          weighted: bool = False) -> Graph:
    return graph_from_edges(n, edges, directed=directed, weighted=weighted)


def p3() -> Graph:
    """Path 0-1-2 with unit weights."""
    return graph(3, [(0, 1, 1.0), (1, 2, 1.0)])


def star(leaves: int = 3) -> Graph:
    """Vertex 0 joined to ``leaves`` leaves."""
    return graph(leaves + 1, [(0, i, 1.0) for i in range(1, leaves + 1)])


def four_cycle() -> Graph:
    """Edges {0,1},{0,2},{1,3},{2,3}: two disjoint 0-3 paths."""
    return graph(4, [(0, 1, 1.0), (0, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)])


def chorded_diamond() -> Graph:
    """The diamond graph (K4 minus the 0-3 edge)."""
    return graph(4, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0),
                     (1, 3, 1.0), (2, 3, 1.0)])


def random_operands(m: int, k: int, n: int, nnz_a: int, nnz_b: int, seed: int
                    ) -> tuple[SparseMatrix, SparseMatrix]:
    """Random multpath and weight matrices with integer-valued components,
    so monoid folds are exact under any association order."""
    rng = np.random.default_rng(seed)
    pos_a = rng.choice(m * k, size=nnz_a, replace=False)
    pos_b = rng.choice(k * n, size=nnz_b, replace=False)
    A = SparseMatrix(m, k, [(int(q) // k, int(q) % k,
                             Multpath(float(rng.integers(1, 10)),
                                      float(rng.integers(1, 5))))
                            for q in pos_a])
    B = SparseMatrix(k, n, [(int(q) // n, int(q) % n,
                             float(rng.integers(1, 10))) for q in pos_b])
    return A, B


def max_rel_err(got: np.ndarray, expect: np.ndarray) -> float:
    if len(expect) == 0:
        return 0.0
    return float(np.max(np.abs(got - expect) / np.maximum(1.0, np.abs(expect))))


@pytest.fixture
def tmp_text_path(tmp_path):
    return str(tmp_path / "data.txt")
