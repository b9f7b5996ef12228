"""Reference betweenness and all-pairs shortest-path implementations.

Deliberately a different algorithm family from the production path
(priority-queue / breadth-first single-source traversals with predecessor
lists and a stack-ordered dependency accumulation), so that agreement between
the two is evidence of correctness rather than a tautology.  Desk scale only.
"""

from __future__ import annotations

import heapq

import numpy as np

from .graphgen import Graph

INF = float("inf")


def _out_adjacency(g: Graph) -> list[list[tuple[int, float]]]:
    adj: list[list[tuple[int, float]]] = [[] for _ in range(g.n)]
    for u, v, w in zip(g.edge_u, g.edge_v, g.edge_w):
        adj[int(u)].append((int(v), float(w)))
        if not g.directed:
            adj[int(v)].append((int(u), float(w)))
    for row in adj:
        row.sort()
    return adj


def _sssp(adj: list[list[tuple[int, float]]], s: int, unit: bool
          ) -> tuple[list[float], list[float], list[int], list[list[int]]]:
    """Distances, path counts, finish order, and predecessor lists from ``s``.

    Breadth-first traversal when all weights are 1, binary-heap search with
    deterministic (distance, vertex-id) tie order otherwise.
    """
    n = len(adj)
    dist = [INF] * n
    sigma = [0.0] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    order: list[int] = []
    dist[s] = 0.0
    sigma[s] = 1.0
    if unit:
        frontier = [s]
        while frontier:
            nxt: list[int] = []
            for v in frontier:
                order.append(v)
                dv = dist[v]
                for u, _ in adj[v]:
                    if dist[u] == INF:
                        dist[u] = dv + 1.0
                        nxt.append(u)
                    if dist[u] == dv + 1.0:
                        sigma[u] += sigma[v]
                        preds[u].append(v)
            frontier = nxt
    else:
        done = [False] * n
        heap: list[tuple[float, int]] = [(0.0, s)]
        while heap:
            dv, v = heapq.heappop(heap)
            if done[v]:
                continue
            done[v] = True
            order.append(v)
            for u, w in adj[v]:
                alt = dv + w
                if alt < dist[u]:
                    dist[u] = alt
                    sigma[u] = sigma[v]
                    preds[u] = [v]
                    heapq.heappush(heap, (alt, u))
                elif alt == dist[u]:
                    sigma[u] += sigma[v]
                    preds[u].append(v)
    return dist, sigma, order, preds


def _is_unit(g: Graph) -> bool:
    return g.m == 0 or bool(np.all(g.edge_w == 1.0))


def brandes(g: Graph) -> np.ndarray:
    """Exact betweenness scores over ordered pairs, endpoints excluded."""
    if g.m and not np.all((g.edge_w > 0) & np.isfinite(g.edge_w)):
        raise ValueError("weights must be positive and finite")
    adj = _out_adjacency(g)
    unit = _is_unit(g)
    scores = np.zeros(g.n)
    for s in range(g.n):
        _, sigma, order, preds = _sssp(adj, s, unit)
        delta = [0.0] * g.n
        for v in reversed(order):
            for u in preds[v]:
                delta[u] += (sigma[u] / sigma[v]) * (1.0 + delta[v])
            if v != s:
                scores[v] += delta[v]
    return scores


def apsp_reference(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Dense (distance, shortest-path count) tables.

    Diagonal is (0, 1); unreachable pairs are (inf, 0).
    """
    adj = _out_adjacency(g)
    unit = _is_unit(g)
    tau = np.full((g.n, g.n), INF)
    sig = np.zeros((g.n, g.n))
    for s in range(g.n):
        dist, sigma, _, _ = _sssp(adj, s, unit)
        tau[s, :] = dist
        sig[s, :] = sigma
    return tau, sig


def predecessor_lists(g: Graph, s: int) -> list[list[int]]:
    """Immediate shortest-path predecessors of every vertex, from ``s``.

    ``u`` appears in the list of ``v`` exactly when
    dist(s,u) + w(u,v) = dist(s,v).
    """
    adj = _out_adjacency(g)
    _, _, _, preds = _sssp(adj, s, _is_unit(g))
    return preds


def hop_distances(g: Graph, s: int) -> list[int]:
    """Edge-count distances from ``s`` ignoring weights (-1 if unreachable)."""
    adj = _out_adjacency(g)
    hops = [-1] * g.n
    hops[s] = 0
    frontier = [s]
    while frontier:
        nxt = []
        for v in frontier:
            for u, _ in adj[v]:
                if hops[u] < 0:
                    hops[u] = hops[v] + 1
                    nxt.append(u)
        frontier = nxt
    return hops


def dag_depth(g: Graph, s: int) -> int:
    """Largest edge count among all shortest paths rooted at ``s``.

    Computed over the shortest-path DAG (edges (v,u) with
    dist(v) + w(v,u) = dist(u)) by dynamic programming in distance order.
    """
    adj = _out_adjacency(g)
    dist, _, order, _ = _sssp(adj, s, _is_unit(g))
    depth = [0] * g.n
    best = 0
    for v in order:
        for u, w in adj[v]:
            if dist[v] + w == dist[u]:
                depth[u] = max(depth[u], depth[v] + 1)
                best = max(best, depth[u])
    return best
