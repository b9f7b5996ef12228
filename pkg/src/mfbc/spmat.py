"""Rectangular sparse matrices over arbitrary value domains, plus the
generalized multiply ``C(i,j) = combine over k of f(A(i,k), B(k,j))``.

A value is "absent" when its weight component is infinite.  Absent values are
never stored, which realizes the shared sparsity convention of the weight,
multpath, and centpath domains uniformly: the support of a vector or matrix is
exactly the set of finite-weight entries.

Matrices are immutable after construction.  Entries are kept in row-major
(row, then column) order so that traversals, and therefore whole runs, are
bit-reproducible; coordinate and compressed-row views are built together and
always agree.  Within one output entry of the multiply, contributions are
combined in ascending order of the inner index ``k``, independent of any
internal execution schedule.
"""

from __future__ import annotations

from bisect import bisect_left
from typing import Any, Callable, Iterable, Iterator

from .algebra import INF


def value_weight(value: Any) -> float:
    """Weight component of a domain value (the value itself for plain weights)."""
    return value[0] if isinstance(value, tuple) else value


def is_absent(value: Any) -> bool:
    """True when a value denotes "no entry" for its domain."""
    return value_weight(value) == INF


class SparseMatrix:
    """Immutable sparse matrix with unique (row, col) coordinates."""

    __slots__ = ("n_rows", "n_cols", "_rows", "_cols", "_vals", "_indptr")

    def __init__(self, n_rows: int, n_cols: int,
                 entries: Iterable[tuple[int, int, Any]] = ()) -> None:
        if n_rows < 0 or n_cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self.n_rows = n_rows
        self.n_cols = n_cols
        kept = [(r, c, v) for (r, c, v) in entries if not is_absent(v)]
        kept.sort(key=lambda e: (e[0], e[1]))
        rows: list[int] = []
        cols: list[int] = []
        vals: list[Any] = []
        last = (-1, -1)
        for r, c, v in kept:
            if not (0 <= r < n_rows and 0 <= c < n_cols):
                raise ValueError(f"entry ({r},{c}) outside {n_rows}x{n_cols} matrix")
            if (r, c) == last:
                raise ValueError(f"duplicate entry at ({r},{c})")
            last = (r, c)
            rows.append(r)
            cols.append(c)
            vals.append(v)
        self._rows = rows
        self._cols = cols
        self._vals = vals
        indptr = [0] * (n_rows + 1)
        for r in rows:
            indptr[r + 1] += 1
        for i in range(n_rows):
            indptr[i + 1] += indptr[i]
        self._indptr = indptr

    @property
    def nnz(self) -> int:
        return len(self._vals)

    def entries(self) -> Iterator[tuple[int, int, Any]]:
        """Yield (row, col, value) in row-major order."""
        return zip(self._rows, self._cols, self._vals)

    def coordinate_view(self) -> list[tuple[int, int, Any]]:
        return list(self.entries())

    def compressed_view(self) -> tuple[list[int], list[int], list[Any]]:
        """(indptr, col_indices, values) of the compressed-row form."""
        return list(self._indptr), list(self._cols), list(self._vals)

    def row(self, i: int) -> list[tuple[int, Any]]:
        """Stored (col, value) pairs of row ``i``, ascending by column."""
        a, b = self._indptr[i], self._indptr[i + 1]
        return list(zip(self._cols[a:b], self._vals[a:b]))

    def get(self, r: int, c: int, default: Any = None) -> Any:
        a, b = self._indptr[r], self._indptr[r + 1]
        k = bisect_left(self._cols, c, a, b)
        if k < b and self._cols[k] == c:
            return self._vals[k]
        return default

    def to_dict(self) -> dict[tuple[int, int], Any]:
        return {(r, c): v for r, c, v in self.entries()}

    def values(self) -> list[Any]:
        return list(self._vals)

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.n_cols, self.n_rows,
                            ((c, r, v) for r, c, v in self.entries()))

    def sparsify(self, keep: Callable[[int, int, Any], bool]) -> "SparseMatrix":
        """Keep exactly the entries satisfying the predicate."""
        return SparseMatrix(self.n_rows, self.n_cols,
                            (e for e in self.entries() if keep(*e)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.n_rows == other.n_rows and self.n_cols == other.n_cols
                and self._rows == other._rows and self._cols == other._cols
                and self._vals == other._vals)

    def __hash__(self) -> int:  # pragma: no cover - matrices are not dict keys
        raise TypeError("SparseMatrix is unhashable")

    def __repr__(self) -> str:
        return f"SparseMatrix({self.n_rows}x{self.n_cols}, nnz={self.nnz})"


def mm_general(A: SparseMatrix, B: SparseMatrix,
               f: Callable[[Any, Any], Any],
               combine: Callable[[Any, Any], Any]) -> tuple[SparseMatrix, int]:
    """Generalized product: apply ``f`` to stored operand pairs, fold with ``combine``.

    Returns the product and the number of elementwise products performed
    (pairs (i,k,j) with both A(i,k) and B(k,j) stored).  Output entries whose
    combined value is absent are dropped from storage.
    """
    if A.n_cols != B.n_rows:
        raise ValueError(f"dimension mismatch: {A.n_rows}x{A.n_cols} times "
                         f"{B.n_rows}x{B.n_cols}")
    a_indptr, a_cols, a_vals = A._indptr, A._cols, A._vals
    b_indptr, b_cols, b_vals = B._indptr, B._cols, B._vals
    out: list[tuple[int, int, Any]] = []
    flops = 0
    for i in range(A.n_rows):
        acc: dict[int, Any] = {}
        get = acc.get
        for t in range(a_indptr[i], a_indptr[i + 1]):
            k = a_cols[t]
            av = a_vals[t]
            b0, b1 = b_indptr[k], b_indptr[k + 1]
            flops += b1 - b0
            for u in range(b0, b1):
                j = b_cols[u]
                x = f(av, b_vals[u])
                cur = get(j)
                acc[j] = x if cur is None else combine(cur, x)
        out.extend((i, j, v) for j, v in acc.items() if not is_absent(v))
    return SparseMatrix(A.n_rows, B.n_cols, out), flops


def elementwise_combine(A: SparseMatrix, B: SparseMatrix,
                        op: Callable[[Any, Any], Any]) -> SparseMatrix:
    """Union of supports; where both sides store an entry, ``op`` is applied.

    Suitable for monoid operators whose identity is the absent value (such as
    the multpath combine).  Results equal to the absent value are dropped.
    """
    if A.n_rows != B.n_rows or A.n_cols != B.n_cols:
        raise ValueError("elementwise combine requires identical dimensions")
    merged = A.to_dict()
    for r, c, v in B.entries():
        cur = merged.get((r, c))
        merged[(r, c)] = v if cur is None else op(cur, v)
    return SparseMatrix(A.n_rows, A.n_cols,
                        ((r, c, v) for (r, c), v in merged.items()))
