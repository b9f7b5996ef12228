"""Betweenness centrality via monoid-parameterized sparse matrix products,
with simulators and cost models for 1D/2D/3D distributed multiply schedules."""

from .algebra import (Centpath, Multpath, bf_action, br_action,
                      centpath_combine, multpath_combine)
from .centrality import (BatchTrace, CentpathMatrix, MultpathMatrix,
                         StructuralInconsistencyError, choose_batch_size,
                         mfbc, mfbf, mfbr, successor_counts)
from .spmat import SparseMatrix, elementwise_combine, mm_general

__version__ = "0.1.0"

__all__ = [
    "BatchTrace", "Centpath", "CentpathMatrix", "Multpath", "MultpathMatrix",
    "SparseMatrix", "StructuralInconsistencyError", "bf_action", "br_action",
    "centpath_combine", "choose_batch_size", "elementwise_combine", "mfbc",
    "mfbf", "mfbr", "mm_general", "multpath_combine", "successor_counts",
]
