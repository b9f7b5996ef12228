"""Monoid and action laws of the path algebra."""

import math
from itertools import product

from hypothesis import given, settings
from hypothesis import strategies as st

from mfbc.algebra import (CENTPATH_ABSENT, INF, MULTPATH_IDENTITY, Centpath,
                          Multpath, bf_action, br_action, centpath_combine,
                          multpath_combine)

# Integer-valued components keep every fold exact, so laws hold bitwise.
finite_multpaths = st.builds(
    Multpath,
    st.integers(1, 50).map(float),
    st.integers(1, 9).map(float),
)
multpaths = st.one_of(finite_multpaths, st.just(MULTPATH_IDENTITY))
weights = st.integers(1, 20).map(float)

finite_centpaths = st.builds(
    Centpath,
    st.integers(1, 50).map(float),
    st.integers(0, 8).map(lambda x: x / 4.0),
    st.integers(-1, 5),
)


class TestMultpathCombine:
    def test_tie_sums_multiplicities(self):
        assert multpath_combine(Multpath(2.0, 3), Multpath(2.0, 4)) == \
            Multpath(2.0, 7)

    def test_min_weight_wins(self):
        assert multpath_combine(Multpath(1.0, 5), Multpath(3.0, 2)) == \
            Multpath(1.0, 5)

    def test_identity(self):
        assert multpath_combine(MULTPATH_IDENTITY, Multpath(4.0, 2)) == \
            Multpath(4.0, 2)

    @given(multpaths, multpaths, multpaths)
    @settings(max_examples=300)
    def test_associative_commutative(self, x, y, z):
        assert multpath_combine(multpath_combine(x, y), z) == \
            multpath_combine(x, multpath_combine(y, z))
        assert multpath_combine(x, y) == multpath_combine(y, x)
        assert multpath_combine(x, MULTPATH_IDENTITY) == x

    def test_finite_combine_never_increases_weight(self):
        x, y = Multpath(3.0, 1), Multpath(5.0, 2)
        assert multpath_combine(x, y).w <= min(x.w, y.w)


class TestCentpathCombine:
    def test_tie_sums_factor_and_counter(self):
        got = centpath_combine(Centpath(4.0, 0.5, -1), Centpath(4.0, 0.25, -1))
        assert got == Centpath(4.0, 0.75, -2)

    def test_larger_weight_wins_filtering_stale(self):
        assert centpath_combine(Centpath(4.0, 0.5, 0), Centpath(2.0, 1.0, -1)) \
            == Centpath(4.0, 0.5, 0)

    def test_larger_weight_wins(self):
        assert centpath_combine(Centpath(1.0, 0.1, 2), Centpath(3.0, 0.2, 1)) \
            == Centpath(3.0, 0.2, 1)

    def test_exhaustive_small_domain_associativity(self):
        domain = [Centpath(float(w), p / 4.0, c)
                  for w, p, c in product((1, 2), (1, 2), (-1, 1))]
        for x, y, z in product(domain, repeat=3):
            assert centpath_combine(centpath_combine(x, y), z) == \
                centpath_combine(x, centpath_combine(y, z))
            assert centpath_combine(x, y) == centpath_combine(y, x)

    @given(finite_centpaths, finite_centpaths, finite_centpaths)
    @settings(max_examples=300)
    def test_associative_commutative_random(self, x, y, z):
        assert centpath_combine(centpath_combine(x, y), z) == \
            centpath_combine(x, centpath_combine(y, z))
        assert centpath_combine(x, y) == centpath_combine(y, x)

    def test_absent_is_absorbing(self):
        # Infinite weight wins, so the absent marker must stay out of storage.
        assert centpath_combine(Centpath(5.0, 1.0, 2), CENTPATH_ABSENT) == \
            CENTPATH_ABSENT


class TestActions:
    def test_bf_action_extends_weight(self):
        assert bf_action(Multpath(3.0, 2), 1.5) == Multpath(4.5, 2)

    def test_bf_action_absorbs_infinity(self):
        assert bf_action(Multpath(INF, 1), 7.0) == Multpath(INF, 1)

    def test_br_action_retracts_weight(self):
        assert br_action(Centpath(5.0, 0.5, -1), 2.0) == Centpath(3.0, 0.5, -1)

    @given(finite_multpaths, weights, weights)
    @settings(max_examples=300)
    def test_bf_action_composes_with_weight_addition(self, a, w1, w2):
        assert bf_action(bf_action(a, w1), w2) == bf_action(a, w1 + w2)

    @given(finite_centpaths, weights, weights)
    @settings(max_examples=300)
    def test_br_action_composes_with_weight_addition(self, a, w1, w2):
        assert br_action(br_action(a, w1), w2) == br_action(a, w1 + w2)

    def test_br_action_composition_example(self):
        assert br_action(br_action(Centpath(9.0, 0.25, -1), 4.0), 3.0) == \
            Centpath(2.0, 0.25, -1) == br_action(Centpath(9.0, 0.25, -1), 7.0)

    def test_bf_action_composition_example(self):
        assert bf_action(bf_action(Multpath(0.0, 1), 2.0), 3.0) == \
            Multpath(5.0, 1) == bf_action(Multpath(0.0, 1), 5.0)

    def test_infinity_absorbs_addition(self):
        assert INF + 7.0 == INF and math.isinf(INF)
