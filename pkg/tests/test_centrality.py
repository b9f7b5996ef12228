"""Forward pass, backward pass, batched driver, and batch sizing."""

import numpy as np
import pytest

from mfbc import oracle
from mfbc.algebra import Multpath
from mfbc.centrality import (MultpathMatrix, StructuralInconsistencyError,
                             choose_batch_size, mfbc, mfbf, mfbr,
                             successor_counts)
from mfbc.graphgen import (assign_weights, graph_from_edges, to_adjacency,
                           uniform_random)
from mfbc.spmat import SparseMatrix

from conftest import chorded_diamond, four_cycle, max_rel_err, p3, star


def adjacency(g):
    return to_adjacency(g)


class TestForwardPass:
    def test_p3_distances_and_counts(self):
        t, _ = mfbf(adjacency(p3()), [0])
        assert t.mat.get(0, 1) == Multpath(1.0, 1.0)
        assert t.mat.get(0, 2) == Multpath(2.0, 1.0)

    def test_two_route_multiplicity(self):
        t, _ = mfbf(adjacency(four_cycle()), [0])
        assert t.mat.get(0, 3) == Multpath(2.0, 2.0)

    def test_weighted_triangle_prefers_indirect_route(self):
        g = graph_from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)],
                             weighted=True)
        t, _ = mfbf(adjacency(g), [0])
        assert t.mat.get(0, 2) == Multpath(2.0, 1.0)

    def test_matches_oracle_tables_exactly(self):
        for seed in range(4):
            g = uniform_random(24, degree=3, seed=seed)
            g = assign_weights(g, 1, 5, seed=seed + 9)
            A = adjacency(g)
            tau, sigma = oracle.apsp_reference(g)
            t, _ = mfbf(A, list(range(g.n)))
            for s in range(g.n):
                for v in range(g.n):
                    stored = t.mat.get(s, v)
                    if s == v or tau[s, v] == np.inf:
                        assert stored is None
                    else:
                        assert stored == Multpath(tau[s, v], sigma[s, v])

    def test_source_column_never_stored(self):
        t, _ = mfbf(adjacency(four_cycle()), [1, 2])
        assert t.mat.get(0, 1) is None and t.mat.get(1, 2) is None

    def test_iterations_equal_max_hops_unweighted(self):
        g = uniform_random(30, degree=2, seed=11)
        A = adjacency(g)
        for s in range(g.n):
            _, trace = mfbf(A, [s])
            hops = [h for h in oracle.hop_distances(g, s) if h > 0]
            assert len(trace) == (max(hops) if hops else 0)

    def test_rejects_bad_inputs(self):
        A = adjacency(p3())
        with pytest.raises(ValueError, match="out of range"):
            mfbf(A, [7])
        with pytest.raises(ValueError, match="distinct"):
            mfbf(A, [1, 1])
        with pytest.raises(ValueError, match="self-loop"):
            mfbf(SparseMatrix(2, 2, [(0, 0, 1.0)]), [0])
        with pytest.raises(ValueError, match="weight"):
            mfbf(SparseMatrix(2, 2, [(0, 1, -1.0)]), [0])


class TestSuccessorCounts:
    def test_four_cycle_counts(self):
        A = adjacency(four_cycle())
        t, _ = mfbf(A, [0])
        counts = {v: cp.c for _, v, cp in successor_counts(A, t).entries()}
        assert counts == {0: 2, 1: 1, 2: 1, 3: 0}

    def test_p3_counts(self):
        A = adjacency(p3())
        t, _ = mfbf(A, [0])
        counts = {v: cp.c for _, v, cp in successor_counts(A, t).entries()}
        assert counts == {0: 1, 1: 1, 2: 0}

    def test_star_leaves_have_no_successors(self):
        A = adjacency(star(3))
        t, _ = mfbf(A, [0])
        counts = {v: cp.c for _, v, cp in successor_counts(A, t).entries()}
        assert counts == {0: 3, 1: 0, 2: 0, 3: 0}

    def test_factor_starts_at_zero_and_weight_matches(self):
        A = adjacency(four_cycle())
        t, _ = mfbf(A, [0])
        for s, v, cp in successor_counts(A, t).entries():
            assert cp.p == 0.0
            expect_w = 0.0 if v == 0 else t.mat.get(s, v).w
            assert cp.w == expect_w


class TestBackwardPass:
    def test_four_cycle_split_factor(self):
        A = adjacency(four_cycle())
        t, _ = mfbf(A, [0])
        z, _ = mfbr(A, t)
        assert z.mat.get(0, 1).p == 0.5 and z.mat.get(0, 2).p == 0.5
        assert z.mat.get(0, 3).p == 0.0

    def test_p3_factor(self):
        A = adjacency(p3())
        t, _ = mfbf(A, [0])
        z, _ = mfbr(A, t)
        assert z.mat.get(0, 1).p == 1.0 and z.mat.get(0, 2).p == 0.0

    def test_weighted_tie_graph(self):
        g = graph_from_edges(4, [(0, 1, 2.0), (1, 3, 2.0), (0, 2, 1.0),
                                 (2, 3, 3.0)], weighted=True)
        A = adjacency(g)
        t, _ = mfbf(A, [0])
        z, _ = mfbr(A, t)
        assert z.mat.get(0, 1).p == 0.5 and z.mat.get(0, 2).p == 0.5

    def test_every_pair_reports_exactly_once(self):
        g = uniform_random(40, degree=3, seed=5)
        A = adjacency(g)
        t, _ = mfbf(A, list(range(0, 40, 7)))
        z, trace = mfbr(A, t)
        # Each stored forward pair enters exactly one backward frontier, and
        # every countdown ends at -1.
        assert sum(trace) == t.mat.nnz
        assert all(cp.c == -1 for _, _, cp in z.mat.entries())

    def test_frontier_count_equals_dag_depth(self):
        for seed in (0, 3):
            for weighted in (False, True):
                g = uniform_random(26, degree=3, seed=seed)
                if weighted:
                    g = assign_weights(g, 1, 4, seed=seed)
                A = adjacency(g)
                for s in range(0, g.n, 5):
                    t, _ = mfbf(A, [s])
                    _, trace = mfbr(A, t)
                    assert len(trace) == oracle.dag_depth(g, s)

    def test_corrupted_distance_detected(self):
        g = graph_from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)])
        A = adjacency(g)
        t, _ = mfbf(A, [0])
        bumped = [(s, v, Multpath(mp.w + 1.0, mp.m)) if v == 2 else (s, v, mp)
                  for s, v, mp in t.mat.entries()]
        bad = MultpathMatrix(SparseMatrix(1, 4, bumped), [0])
        with pytest.raises(StructuralInconsistencyError):
            mfbr(A, bad)

    def test_corrupted_random_graph_detected(self):
        # Raising one recorded distance either sends an over-weight
        # contribution to a shortest-path predecessor or starves a countdown;
        # both are detected.
        g = uniform_random(12, degree=3, seed=2)
        A = adjacency(g)
        t, _ = mfbf(A, [0])
        assert t.mat.nnz > 2
        s, v, mp = list(t.mat.entries())[t.mat.nnz // 2]
        bumped = [(r, c, Multpath(e.w + 1.0, e.m)) if (r, c) == (s, v)
                  else (r, c, e) for r, c, e in t.mat.entries()]
        bad = MultpathMatrix(SparseMatrix(1, g.n, bumped), [0])
        with pytest.raises(StructuralInconsistencyError):
            mfbr(A, bad)


class TestScoreDriver:
    def test_p3(self):
        scores, _ = mfbc(adjacency(p3()), 3)
        assert scores.tolist() == [0.0, 2.0, 0.0]

    def test_star(self):
        scores, _ = mfbc(adjacency(star(3)), 2)
        assert scores.tolist() == [6.0, 0.0, 0.0, 0.0]

    def test_four_cycle_and_chorded_diamond(self):
        # Expected vectors verified against Brandes and full path
        # enumeration (see test_oracle).
        assert mfbc(adjacency(four_cycle()), 4)[0].tolist() == [1.0] * 4
        assert mfbc(adjacency(chorded_diamond()), 4)[0].tolist() == \
            [0.0, 1.0, 1.0, 0.0]

    @pytest.mark.parametrize("n_b", [1, 4, None])
    def test_batch_invariance(self, n_b):
        g = uniform_random(36, degree=3, seed=8)
        A = adjacency(g)
        expect = oracle.brandes(g)
        scores, _ = mfbc(A, n_b or g.n)
        assert max_rel_err(scores, expect) <= 1e-9

    def test_threaded_batches_match_serial(self):
        g = uniform_random(30, degree=3, seed=4)
        A = adjacency(g)
        serial, _ = mfbc(A, 7, threads=1)
        threaded, _ = mfbc(A, 7, threads=4)
        assert np.array_equal(serial, threaded)

    def test_batch_size_validated(self):
        with pytest.raises(ValueError):
            mfbc(adjacency(p3()), 0)
        with pytest.raises(ValueError):
            mfbc(adjacency(p3()), 4)

    def test_isolated_vertex_scores_zero(self):
        g = graph_from_edges(4, [(0, 1, 1.0), (1, 2, 1.0)])
        scores, _ = mfbc(adjacency(g), 4)
        assert scores[3] == 0.0


class TestBatchSizing:
    def test_replication_two(self):
        assert choose_batch_size(1000, 10000, words_per_proc=2000, p=10) == 20

    def test_lower_clamp(self):
        assert choose_batch_size(100, 100, words_per_proc=50, p=2) == 1

    def test_upper_clamp(self):
        assert choose_batch_size(10, 90, words_per_proc=90, p=10) == 10

    def test_insufficient_memory(self):
        with pytest.raises(ValueError, match="memory"):
            choose_batch_size(100, 1000, words_per_proc=10, p=10)
