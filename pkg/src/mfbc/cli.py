"""Command-line surface: graph generation, centrality runs with TEPS
reporting, oracle verification, cost evaluation, and schedule simulation.

File formats
------------
Edge lists are plain text: '#' starts a comment, data lines are "u v" or
"u v w" with arbitrary nonnegative integer vertex ids.  Ids are densely
relabelled on parse; score files map results back to the original ids, one
tab-separated "id<TAB>score" row per vertex of the input (removed isolated
vertices score 0), written with full round-trip precision.

Exit codes: 0 success, 1 usage error, 2 data error, 3 verification failure.
All randomness is seeded via --seed; MFBC_THREADS sizes the batch worker
pool (default 1, scores do not depend on it).
"""

from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from . import costmodel, decomp, graphgen, oracle
from .algebra import Multpath, bf_action, multpath_combine
from .centrality import MultpathMatrix, StructuralInconsistencyError, \
    mfbc, mfbf, mfbr
from .graphgen import Graph
from .spmat import SparseMatrix, mm_general


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class VerificationError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D102 - argparse hook
        raise UsageError(message)


# ----------------------------------------------------------------------
# file formats

def write_edge_list(path: str, g: Graph, header: list[str] | None = None) -> None:
    lines = [f"# {h}" for h in (header or [])]
    lines.append(f"# nodes={g.n} edges={g.m} directed={g.directed} "
                 f"weighted={g.weighted}")
    if g.weighted:
        lines.extend(f"{u} {v} {w:g}" for u, v, w in
                     zip(g.edge_u, g.edge_v, g.edge_w))
    else:
        lines.extend(f"{u} {v}" for u, v in zip(g.edge_u, g.edge_v))
    _atomic_write(path, "\n".join(lines) + "\n")


def parse_edge_list(path: str, weighted: bool = False, directed: bool = False
                    ) -> tuple[Graph, list[int]]:
    """Parse a file into a densely-relabelled graph.

    Returns (graph, original_ids) with original_ids[i] the file id of vertex
    i.  Self-loops are dropped; duplicate edges keep their first occurrence.
    """
    raw: list[tuple[int, int, float]] = []
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot open {path}: {exc}") from exc
    with fh:
        for ln, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise DataError(f"{path}:{ln}: expected 'u v' or 'u v w'")
            try:
                u, v = int(parts[0]), int(parts[1])
                w = float(parts[2]) if weighted and len(parts) == 3 else 1.0
            except ValueError as exc:
                raise DataError(f"{path}:{ln}: {exc}") from exc
            if weighted and len(parts) == 2:
                raise DataError(f"{path}:{ln}: weighted run needs a third column")
            if u < 0 or v < 0:
                raise DataError(f"{path}:{ln}: negative vertex id")
            if weighted and not w > 0:
                raise DataError(f"{path}:{ln}: weights must be positive")
            raw.append((u, v, w))
    ids = sorted({u for u, _, _ in raw} | {v for _, v, _ in raw})
    index = {orig: i for i, orig in enumerate(ids)}
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int, float]] = []
    for u, v, w in raw:
        a, b = index[u], index[v]
        if a == b:
            continue
        key = (a, b) if directed else (min(a, b), max(a, b))
        if key in seen:
            continue
        seen.add(key)
        edges.append((key[0], key[1], w) if not directed else (a, b, w))
    try:
        g = graphgen.graph_from_edges(len(ids), edges, directed=directed,
                                      weighted=weighted)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    return g, ids


def write_scores(path: str, original_ids: list[int], scores) -> None:
    lines = [f"{orig}\t{float(s)!r}" for orig, s in zip(original_ids, scores)]
    _atomic_write(path, "\n".join(lines) + "\n")


def read_scores(path: str) -> dict[int, float]:
    out: dict[int, float] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                key, val = line.split("\t")
                out[int(key)] = float(val)
    return out


def _atomic_write(path: str, text: str) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def teps(m: int, sources: int, seconds: float) -> float:
    """Edge traversals per second: m edges visited per processed source."""
    return m * sources / seconds


def _threads() -> int:
    raw = os.environ.get("MFBC_THREADS", "1")
    try:
        value = int(raw)
    except ValueError as exc:
        raise UsageError(f"MFBC_THREADS must be an integer, got {raw!r}") from exc
    if value < 1:
        raise UsageError("MFBC_THREADS must be >= 1")
    return value


# ----------------------------------------------------------------------
# commands

def _parse_weight_range(spec: str) -> tuple[int, int]:
    try:
        lo, hi = spec.split(":")
        return int(lo), int(hi)
    except ValueError as exc:
        raise UsageError(f"--weights expects LO:HI, got {spec!r}") from exc


def cmd_gen(args) -> int:
    header = [f"generated by: mfbc gen {args.kind}"]
    if args.kind == "rmat":
        probs = tuple(float(x) for x in args.probs.split(","))
        if len(probs) != 4:
            raise UsageError("--probs expects four comma-separated values")
        g = graphgen.rmat(args.scale, args.edgefactor, probs, seed=args.seed,
                          directed=args.directed)
        header.append(f"params: scale={args.scale} edgefactor={args.edgefactor} "
                      f"probs={args.probs} seed={args.seed} "
                      f"directed={args.directed}")
    else:
        if (args.degree is None) == (args.fill is None):
            raise UsageError("give exactly one of --degree or --fill")
        g = graphgen.uniform_random(args.n, degree=args.degree, fill=args.fill,
                                    seed=args.seed, directed=args.directed)
        header.append(f"params: n={args.n} degree={args.degree} "
                      f"fill={args.fill} seed={args.seed} "
                      f"directed={args.directed}")
    if args.weights:
        lo, hi = _parse_weight_range(args.weights)
        g = graphgen.assign_weights(g, lo, hi, seed=args.seed)
        header.append(f"weights: integers in [{lo},{hi}]")
    write_edge_list(args.out, g, header)
    print(f"wrote {args.out} (n={g.n}, m={g.m})")
    return 0


def _load_graph(args) -> tuple[Graph, list[int]]:
    g, ids = parse_edge_list(args.input, weighted=args.weighted,
                             directed=args.directed)
    return g, ids


def cmd_bc(args) -> int:
    g, ids = _load_graph(args)
    reduced, kept = graphgen.remove_disconnected(g)
    n_b = args.batch_size or min(max(reduced.n, 1), 512)
    if not 1 <= n_b <= max(reduced.n, 1):
        raise UsageError(f"batch size must lie in [1, {reduced.n}]")
    A = graphgen.to_adjacency(reduced)
    start = time.perf_counter()
    scores, traces = mfbc(A, n_b, threads=_threads())
    elapsed = time.perf_counter() - start
    full = np.zeros(g.n)
    full[kept] = scores
    write_scores(args.out, ids, full)
    fwd = sum(t.forward_iterations for t in traces)
    bwd = sum(t.backward_iterations for t in traces)
    print(f"graph: n={g.n} m={g.m} directed={g.directed} weighted={g.weighted}"
          f" (scored n={reduced.n} after isolate removal)")
    print(f"batches={len(traces)} batch-size={n_b}")
    print(f"iterations: forward={fwd} backward={bwd}")
    for i, t in enumerate(traces):
        print(f"batch {i}: frontier-nnz forward={[x for x, _ in t.forward]} "
              f"product={[y for _, y in t.forward]} backward={t.backward}")
    print(f"elapsed-seconds={elapsed!r}")
    print(f"TEPS={teps(g.m, reduced.n, elapsed):.6g}")
    print(f"scores written: {args.out}")
    return 0


def cmd_verify(args) -> int:
    g, _ = _load_graph(args)
    reduced, _ = graphgen.remove_disconnected(g)
    if reduced.n > 2000:
        raise DataError("verification oracle supports at most 2000 vertices")
    A = graphgen.to_adjacency(reduced)
    n_b = args.batch_size or min(max(reduced.n, 1), 512)
    try:
        if args.inject_corruption:
            scores = _scores_with_corruption(A, n_b)
        else:
            scores, _ = mfbc(A, n_b, threads=_threads())
    except StructuralInconsistencyError as exc:
        raise VerificationError(f"structural inconsistency: {exc}") from exc
    expect = oracle.brandes(reduced)
    denom = np.maximum(1.0, np.abs(expect))
    err = float(np.max(np.abs(scores - expect) / denom)) if reduced.n else 0.0
    print(f"max per-vertex relative error: {err:.3e}")
    if err > 1e-9:
        raise VerificationError(f"scores deviate from oracle by {err:.3e}")
    print("verify: PASS")
    return 0


def _scores_with_corruption(A: SparseMatrix, n_b: int) -> np.ndarray:
    """Test hook: perturb one stored forward-pass entry before back-propagation."""
    sources = list(range(min(n_b, A.n_rows)))
    tmat, _ = mfbf(A, sources)
    entries = list(tmat.mat.entries())
    if not entries:
        raise DataError("graph too small to inject corruption")
    s, v, mp = entries[len(entries) // 2]
    corrupted = tmat.mat.sparsify(lambda r, c, _: (r, c) != (s, v))
    corrupted = SparseMatrix(
        corrupted.n_rows, corrupted.n_cols,
        list(corrupted.entries()) + [(s, v, Multpath(mp.w + 1.0, mp.m))])
    mfbr(A, MultpathMatrix(corrupted, tmat.sources))
    raise VerificationError("corrupted distances were accepted")


def cmd_cost(args) -> int:
    bound_mode = args.n is not None
    optimizer_mode = args.nnza is not None
    if bound_mode == optimizer_mode:
        raise UsageError("give either --n/--m/--c/--d or --nnza/--nnzb/--nnzc")
    if args.p is None:
        raise UsageError("--p is required")
    if bound_mode:
        if None in (args.m, args.c, args.d):
            raise UsageError("--n mode needs --m, --c and --d")
        est = costmodel.mfbc_bound(args.n, args.m, args.p, args.c, args.d,
                                   args.alpha, args.beta)
        print(f"latency-messages={est.messages!r}")
        print(f"bandwidth-words={est.words!r}")
        print(f"modeled-seconds={est.seconds!r} (alpha={args.alpha}, "
              f"beta={args.beta})")
        return 0
    if None in (args.nnzb, args.nnzc):
        raise UsageError("--nnza mode needs --nnzb and --nnzc")
    choice = costmodel.optimize_grid(args.nnza, args.nnzb, args.nnzc, args.p,
                                     args.alpha, args.beta)
    dims = len(choice.grid)
    print(f"chosen: {dims}D variant={choice.variant} "
          f"grid={'x'.join(str(x) for x in choice.grid)}")
    print(f"messages={choice.cost.messages!r} words={choice.cost.words!r}")
    print(f"modeled-seconds={choice.cost.seconds!r} (alpha={args.alpha}, "
          f"beta={args.beta})")
    return 0


def _parse_grid(spec: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(x) for x in spec.lower().split("x"))
    except ValueError as exc:
        raise UsageError(f"bad --grid {spec!r}") from exc
    if not 1 <= len(dims) <= 3 or any(d < 1 for d in dims):
        raise UsageError(f"bad --grid {spec!r}")
    return dims


def _random_operands(m: int, k: int, n: int, nnz_a: int, nnz_b: int,
                     seed: int) -> tuple[SparseMatrix, SparseMatrix]:
    rng = np.random.default_rng(seed)
    if nnz_a > m * k or nnz_b > k * n:
        raise UsageError("requested nnz exceeds matrix capacity")
    pos_a = rng.choice(m * k, size=nnz_a, replace=False)
    pos_b = rng.choice(k * n, size=nnz_b, replace=False)
    A = SparseMatrix(m, k, [(int(q) // k, int(q) % k,
                             Multpath(float(rng.integers(1, 10)),
                                      float(rng.integers(1, 5))))
                            for q in pos_a])
    B = SparseMatrix(k, n, [(int(q) // n, int(q) % n,
                             float(rng.integers(1, 10))) for q in pos_b])
    return A, B


def cmd_simulate(args) -> int:
    grid = _parse_grid(args.grid)
    if args.input:
        g, _ = parse_edge_list(args.input, weighted=args.weighted,
                               directed=args.directed)
        reduced, _ = graphgen.remove_disconnected(g)
        adj = graphgen.to_adjacency(reduced)
        A = SparseMatrix(adj.n_rows, adj.n_cols,
                         [(r, c, Multpath(w, 1.0)) for r, c, w in adj.entries()])
        B = adj
    else:
        m, k, n = (int(x) for x in args.dims.split(","))
        A, B = _random_operands(m, k, n, args.nnza, args.nnzb, args.seed)

    direct, _ = mm_general(A, B, bf_action, multpath_combine)
    variant = args.variant.upper()
    if len(grid) == 1:
        if variant not in decomp.VARIANTS_1D:
            raise UsageError(f"1D grid needs variant A, B or C, got {variant}")
        result = decomp.run_1d(variant, A, B, grid[0], bf_action,
                               multpath_combine, args.seed)
        analytic = costmodel.cost_1d(
            variant, {"A": A.nnz, "B": B.nnz, "C": direct.nnz}[variant], grid[0])
    elif len(grid) == 2:
        if variant not in decomp.VARIANTS_2D:
            raise UsageError(f"2D grid needs variant AB, AC or BC, got {variant}")
        result = decomp.run_2d(variant, A, B, grid[0], grid[1], bf_action,
                               multpath_combine, args.seed)
        y, z = costmodel.moved_nnz_2d(variant, A.nnz, B.nnz, direct.nnz)
        analytic = costmodel.cost_2d(variant, y, z, grid[0], grid[1])
    else:
        parts = variant.split(",")
        if len(parts) != 2 or parts[0] not in decomp.VARIANTS_1D \
                or parts[1] not in decomp.VARIANTS_2D:
            raise UsageError(f"3D grid needs variant like C,AB; got {variant}")
        result = decomp.run_3d(parts[0], parts[1], A, B, *grid, bf_action,
                               multpath_combine, args.seed)
        analytic = costmodel.cost_3d(parts[0], parts[1], A.nnz, B.nnz,
                                     direct.nnz, *grid)

    print(f"simulate: dims={A.n_rows}x{A.n_cols}x{B.n_cols} nnzA={A.nnz} "
          f"nnzB={B.nnz} nnzC={direct.nnz}")
    print(f"variant={variant} grid={'x'.join(str(x) for x in grid)} "
          f"seed={args.seed}")
    ok = result.product == direct
    print("verdict: product matches direct multiply" if ok
          else "verdict: PRODUCT MISMATCH")
    print(result.ledger.to_table())
    sim_words = result.ledger.critical_words
    sim_msgs = result.ledger.critical_messages
    for term, sim, model in (("words", sim_words, analytic.words),
                             ("messages", sim_msgs, analytic.messages)):
        ratio = sim / model if model else float("nan")
        print(f"analytic {term}={model:g} simulated={sim:g} ratio={ratio:.3f}")
    print(f"modeled-seconds={args.alpha * sim_msgs + args.beta * sim_words!r} "
          f"(alpha={args.alpha}, beta={args.beta})")
    if result.replication_memory_words is not None:
        print(f"replication-memory-words={result.replication_memory_words:g}")
    if not ok:
        raise VerificationError("simulated product differs from direct multiply")
    return 0


# ----------------------------------------------------------------------
# argument wiring

def _build_parser() -> _Parser:
    top = _Parser(prog="mfbc", description=__doc__,
                  formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = top.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a synthetic graph file")
    gen_sub = gen.add_subparsers(dest="kind", required=True)
    rmat = gen_sub.add_parser("rmat", help="recursive-quadrant power-law graph")
    rmat.add_argument("--scale", type=int, required=True)
    rmat.add_argument("--edgefactor", type=int, required=True)
    rmat.add_argument("--probs", default="0.57,0.19,0.19,0.05")
    uni = gen_sub.add_parser("uniform", help="uniform random graph")
    uni.add_argument("--n", type=int, required=True)
    uni.add_argument("--degree", type=float, default=None)
    uni.add_argument("--fill", type=float, default=None)
    for p in (rmat, uni):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--directed", action="store_true")
        p.add_argument("--weights", default=None, metavar="LO:HI")
        p.add_argument("--out", required=True)
        p.set_defaults(func=cmd_gen)

    bc = sub.add_parser("bc", help="compute betweenness scores")
    bc.add_argument("input")
    bc.add_argument("--batch-size", type=int, default=None)
    bc.add_argument("--weighted", action="store_true")
    bc.add_argument("--directed", action="store_true")
    bc.add_argument("--seed", type=int, default=0,
                    help="reserved for layout randomization; scores ignore it")
    bc.add_argument("--out", required=True)
    bc.set_defaults(func=cmd_bc)

    ver = sub.add_parser("verify", help="compare against the reference scores")
    ver.add_argument("input")
    ver.add_argument("--batch-size", type=int, default=None)
    ver.add_argument("--weighted", action="store_true")
    ver.add_argument("--directed", action="store_true")
    ver.add_argument("--inject-corruption", action="store_true",
                     help=argparse.SUPPRESS)
    ver.set_defaults(func=cmd_verify)

    cost = sub.add_parser("cost", help="evaluate analytic cost expressions")
    cost.add_argument("--n", type=int, default=None)
    cost.add_argument("--m", type=int, default=None)
    cost.add_argument("--c", type=float, default=None)
    cost.add_argument("--d", type=int, default=None)
    cost.add_argument("--nnza", type=float, default=None)
    cost.add_argument("--nnzb", type=float, default=None)
    cost.add_argument("--nnzc", type=float, default=None)
    cost.add_argument("--p", type=int, default=None)
    cost.add_argument("--alpha", type=float, default=1.0)
    cost.add_argument("--beta", type=float, default=1.0)
    cost.set_defaults(func=cmd_cost)

    sim = sub.add_parser("simulate", help="run a schedule on a virtual grid")
    sim.add_argument("--input", default=None,
                     help="edge-list file; the adjacency squares against itself")
    sim.add_argument("--weighted", action="store_true")
    sim.add_argument("--directed", action="store_true")
    sim.add_argument("--dims", default="32,32,32", metavar="M,K,N")
    sim.add_argument("--nnza", type=int, default=128)
    sim.add_argument("--nnzb", type=int, default=128)
    sim.add_argument("--grid", required=True, metavar="P1[xP2[xP3]]")
    sim.add_argument("--variant", required=True)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--alpha", type=float, default=1.0)
    sim.add_argument("--beta", type=float, default=1.0)
    sim.set_defaults(func=cmd_simulate)
    return top


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 3


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
