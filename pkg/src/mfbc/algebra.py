"""Path algebra: the weight domain, the two path monoids, and their edge actions.

All values are immutable and every operation is a pure function, so they are
safe to evaluate concurrently and to move between threads.
"""

from __future__ import annotations

import math
from typing import NamedTuple

INF = math.inf


class Multpath(NamedTuple):
    """A bundle of equally-light paths: total weight and how many paths reach it.

    Multiplicities are stored as doubles: counts are exact below 2**53 and
    documented as approximate beyond that.
    """

    w: float
    m: float


class Centpath(NamedTuple):
    """Back-propagation state for one (source, vertex) pair.

    ``w`` is the recorded shortest-path weight, ``p`` the accumulated partial
    centrality factor, and ``c`` a countdown of dependents that have not yet
    reported; ``c == -1`` marks a vertex that already reported.
    """

    w: float
    p: float
    c: int


#: Identity element of ``multpath_combine``; never stored in sparse matrices.
MULTPATH_IDENTITY = Multpath(INF, 0.0)

#: Absent marker of the centpath domain.  Unlike ``MULTPATH_IDENTITY`` it is
#: absorbing under ``centpath_combine`` (infinite weight wins), so it must
#: never be materialized as a stored entry; sparse storage keeps it implicit.
CENTPATH_ABSENT = Centpath(INF, 0.0, 0)


def multpath_combine(x: Multpath, y: Multpath) -> Multpath:
    """Keep the lighter bundle; merge multiplicities on a weight tie."""
    if x.w < y.w:
        return x
    if y.w < x.w:
        return y
    return Multpath(x.w, x.m + y.m)


def centpath_combine(x: Centpath, y: Centpath) -> Centpath:
    """Keep the heavier operand; sum factors and counters on a weight tie.

    Back-propagated contributions that travelled through a non-shortest link
    carry strictly less weight than the recorded shortest distance and must
    lose, hence larger weight wins.
    """
    if x.w > y.w:
        return x
    if y.w > x.w:
        return y
    return Centpath(x.w, x.p + y.p, x.c + y.c)


def bf_action(a: Multpath, w: float) -> Multpath:
    """Extend every path in the bundle by one edge of weight ``w``."""
    return Multpath(a.w + w, a.m)


def br_action(a: Centpath, w: float) -> Centpath:
    """Retract a reported state backwards across one edge of weight ``w``."""
    return Centpath(a.w - w, a.p, a.c)
