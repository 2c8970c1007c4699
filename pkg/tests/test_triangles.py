import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hocent import enumerate_triangles, from_edges, linearized_matrix, power_mean, tensor_apply
from hocent.measures import local_closure, ws_clustering

from _oracles import (brute_triangles, dense_adjacency, dense_linearization, dense_tensor,
                      dense_tensor_apply, gnp_edges, mu)

VARIANTS = ["B", "W", "C", "L"]
# range where the naive formula neither overflows nor underflows
safe_floats = st.one_of(st.just(0.0), st.floats(1e-3, 1e6))


def gnp(n=12, prob=0.4, seed=0):
    return from_edges(gnp_edges(n, prob, seed), n=n)


class TestEnumeration:

    def test_k3(self, k3):
        ts = enumerate_triangles(k3)
        assert ts.triangles.tolist() == [[0, 1, 2]]
        assert ts.per_node_count.tolist() == [1, 1, 1]

    def test_karate(self, karate):
        assert len(enumerate_triangles(karate).triangles) == 45

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_triple_loop(self, seed):
        g = gnp(seed=seed)
        a = dense_adjacency(g.edges(), g.n)
        ts = enumerate_triangles(g)
        assert [tuple(t) for t in ts.triangles] == brute_triangles(a)
        a2 = a @ a
        assert np.array_equal(ts.per_node_count, np.diag(a2 @ a) / 2)
        assert np.allclose(ts.per_edge_count.toarray(), a * a2)
        d = a.sum(axis=1)
        assert np.array_equal(ts.wedge_count, d * (d - 1) / 2)
        assert np.array_equal(ts.path2_count, a2.sum(axis=1) - d)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(3, 25), st.floats(0.05, 0.9), st.integers(0, 2**31))
    def test_count_invariants(self, n, prob, seed):
        g = gnp(n, prob, seed)
        ts = enumerate_triangles(g)
        t = len(ts.triangles)
        assert ts.per_node_count.sum() == 3 * t
        # each undirected edge stored twice in the symmetric matrix
        assert ts.per_edge_count.sum() == 6 * t
        assert np.all(ts.per_node_count <= ts.wedge_count)
        assert np.all(ts.triangles[:, 0] < ts.triangles[:, 1])
        assert np.all(ts.triangles[:, 1] < ts.triangles[:, 2])
        assert len({tuple(r) for r in ts.triangles}) == t

    def test_triangle_free(self, star4):
        ts = enumerate_triangles(star4)
        assert len(ts.triangles) == 0
        assert np.all(tensor_apply(ts, "B", 1, np.ones(5)) == 0)


class TestPowerMean:

    @pytest.mark.parametrize("a,b,p,expected", [
        (3, 5, 1, 4.0),
        (4, 9, 0, 6.0),
        (2, 7, -math.inf, 2.0),
        (2, 7, math.inf, 7.0),
        (0, 5, 0, 0.0),
        (0, 5, -2, 0.0),
        (1, 1, -5, 1.0),
        (2, 8, 1e-13, 4.0),
    ])
    def test_examples(self, a, b, p, expected):
        assert power_mean(a, b, p) == pytest.approx(expected, rel=1e-14)

    def test_large_exponent_no_overflow(self):
        assert power_mean(1e300, 1e299, 50) == pytest.approx(1e300 * 0.5 ** (1 / 50), rel=1e-12)
        assert power_mean(1e-300, 1e-299, -50) > 0

    @settings(max_examples=200, deadline=None)
    @given(safe_floats, safe_floats, st.sampled_from([-5, -1, -0.5, 0, 0.5, 1, 2, 5]))
    def test_matches_direct_formula(self, a, b, p):
        ref = mu(a, b, p)
        assert power_mean(a, b, p) == pytest.approx(ref, rel=1e-12, abs=1e-300)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(1e-6, 1e6), st.floats(1e-6, 1e6), st.floats(-10, 10))
    def test_between_min_and_max(self, a, b, p):
        m = power_mean(a, b, p)
        assert min(a, b) * (1 - 1e-12) <= m <= max(a, b) * (1 + 1e-12)

    def test_vectorized(self):
        a, b = np.array([1.0, 4.0]), np.array([9.0, 16.0])
        assert np.allclose(power_mean(a, b, 0), [3.0, 8.0])


class TestTensorApply:

    def test_ones_gives_triangle_counts(self, karate):
        ts = enumerate_triangles(karate)
        for p in (-5, -1, 0, 1, 5, math.inf):
            assert np.array_equal(tensor_apply(ts, "B", p, np.ones(karate.n)), 2 * ts.per_node_count)

    def test_ones_gives_coefficients(self, karate):
        ts = enumerate_triangles(karate)
        ones = np.ones(karate.n)
        for p in (-1, 0, 2):
            assert np.allclose(tensor_apply(ts, "C", p, ones), ws_clustering(karate, ts).values, atol=1e-15)
            assert np.allclose(tensor_apply(ts, "L", p, ones), local_closure(karate, ts).values, atol=1e-15)

    def test_diamond_dense_oracle(self, diamond):
        ts = enumerate_triangles(diamond)
        x = np.array([1.0, 4.0, 9.0, 16.0])
        t = dense_tensor(dense_adjacency(diamond.edges(), 4), "B")
        assert np.allclose(tensor_apply(ts, "B", 0, x), dense_tensor_apply(t, x, 0), rtol=1e-14)

    @pytest.mark.parametrize("variant", VARIANTS)
    @pytest.mark.parametrize("p", [-2, 0, 0.5, 1, 3, math.inf, -math.inf])
    def test_dense_tensor_oracle(self, variant, p):
        g = gnp(seed=7)
        ts = enumerate_triangles(g)
        t = dense_tensor(dense_adjacency(g.edges(), g.n), variant)
        x = np.random.default_rng(3).random(g.n)
        assert np.allclose(tensor_apply(ts, variant, p, x), dense_tensor_apply(t, x, p), rtol=1e-12, atol=0)

    def test_batched_columns(self, karate):
        ts = enumerate_triangles(karate)
        xs = np.random.default_rng(0).random((karate.n, 3))
        out = tensor_apply(ts, "W", 0, xs)
        for j in range(3):
            assert np.array_equal(out[:, j], tensor_apply(ts, "W", 0, xs[:, j]))

    def test_errors(self, k3):
        ts = enumerate_triangles(k3)
        with pytest.raises(ValueError):
            tensor_apply(ts, "B", 1, np.ones(4))
        with pytest.raises(ValueError):
            tensor_apply(ts, "B", 1, np.array([1.0, -1.0, 1.0]))
        with pytest.raises(ValueError):
            tensor_apply(ts, "Q", 1, np.ones(3))

    def test_deterministic(self, karate):
        ts = enumerate_triangles(karate)
        x = np.random.default_rng(5).random(karate.n)
        assert np.array_equal(tensor_apply(ts, "W", -1, x), tensor_apply(ts, "W", -1, x.copy()))


class TestLinearized:

    def test_diamond_b(self, diamond):
        ts = enumerate_triangles(diamond)
        mat = linearized_matrix(ts, "B", diamond).toarray()
        a = dense_adjacency(diamond.edges(), 4)
        assert np.array_equal(mat, a * (a @ a))
        assert mat[1, 2] == 2

    def test_k3_c_rows(self, k3):
        ts = enumerate_triangles(k3)
        assert np.allclose(linearized_matrix(ts, "C", k3).toarray().sum(axis=1), 1.0)

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_dense_oracle(self, variant):
        g = gnp(seed=11)
        ts = enumerate_triangles(g)
        ref = dense_linearization(dense_adjacency(g.edges(), g.n), variant)
        assert np.allclose(linearized_matrix(ts, variant, g).toarray(), ref, rtol=1e-14, atol=0)

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_matvec_at_p1(self, variant):
        g = gnp(seed=2)
        ts = enumerate_triangles(g)
        mat = linearized_matrix(ts, variant, g)
        rng = np.random.default_rng(0)
        for _ in range(20):
            x = rng.random(g.n)
            ref = mat @ x
            got = tensor_apply(ts, variant, 1, x)
            assert np.max(np.abs(got - ref)) <= 1e-12 * np.max(np.abs(ref))
