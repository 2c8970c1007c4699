import networkx as nx
import numpy as np
import pytest
import scipy.sparse as sp
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from hocent import (HigherOrderCentrality, MapSpec, SeededDiffusionLinkPredictor, SpectralClusteringCoefficient,
                    solve, ws_clustering)
from hocent.linkpred import similarity_matrix
from hocent.validation import check_graph, check_nonnegative_vector, check_unit_interval


class TestCheckGraph:

    def test_inputs_agree(self, karate, karate_path):
        a = karate.adjacency()
        variants = [karate, str(karate_path), karate_path, a, a.toarray(), karate.edges(),
                    nx.karate_club_graph()]
        for x in variants:
            assert check_graph(x).edges().tolist() == karate.edges().tolist()

    def test_rejects(self):
        with pytest.raises(ValueError):
            check_graph(np.array([[0.5, 1.5], [1.0, 2.0], [0.0, 1.0]]))
        with pytest.raises(TypeError):
            check_graph(3.0)

    def test_vector_and_interval(self):
        assert check_nonnegative_vector([1, 2], 2).dtype == float
        with pytest.raises(ValueError):
            check_nonnegative_vector([1, -2], 2)
        with pytest.raises(ValueError):
            check_nonnegative_vector([1, 2], 3)
        with pytest.raises(ValueError):
            check_nonnegative_vector([1, np.nan], 2)
        assert check_unit_interval(1, "a") == 1.0
        with pytest.raises(ValueError):
            check_unit_interval(1, "c", closed_right=False)


class TestHigherOrderCentrality:

    def test_params_and_clone(self):
        est = HigherOrderCentrality(alpha=0.3, tensor="L")
        params = clone(est).get_params()
        assert params["alpha"] == 0.3 and params["tensor"] == "L"
        assert est.set_params(p=2.0).p == 2.0

    def test_matches_solver(self, karate):
        est = HigherOrderCentrality(alpha=0.5, p=0, tensor="B", norm="inf")
        values = est.fit_transform(karate)
        ref = solve(karate, None, MapSpec(alpha=0.5, p=0, tensor="B")).eigenvector
        assert np.allclose(values, ref / ref.max(), atol=1e-14)
        assert est.eigenvalue_ == est.report_.eigenvalue
        assert np.array_equal(est.transform(), values)

    def test_transform_other_graph_refits(self, karate, k3):
        est = HigherOrderCentrality(alpha=1.0).fit(karate)
        assert np.allclose(est.transform(k3), 1 / 3)
        assert est.graph_.n == 3

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            HigherOrderCentrality().transform()

    def test_invalid_alpha(self, k3):
        with pytest.raises(ValueError):
            HigherOrderCentrality(alpha=1.5).fit(k3)
        with pytest.raises(ValueError):
            HigherOrderCentrality(norm="two").fit(k3)


class TestSpectralClusteringCoefficient:

    def test_static_is_ws(self, karate):
        vals = SpectralClusteringCoefficient(tensor="C", static=True).fit_transform(karate)
        assert np.allclose(vals, ws_clustering(karate).values, rtol=1e-14, atol=0)

    def test_spectral(self, karate):
        est = SpectralClusteringCoefficient(tensor="L", p=0).fit(karate)
        assert est.values_.sum() == pytest.approx(1.0)
        assert est.report_.converged

    def test_accepts_sparse(self, k3):
        vals = SpectralClusteringCoefficient().fit_transform(sp.csr_matrix(k3.adjacency()))
        assert np.allclose(vals, 1 / 3)


class TestLinkPredictor:

    def test_predict_matches_scores(self, karate):
        est = SeededDiffusionLinkPredictor(method="PR").fit(karate)
        ref = similarity_matrix(karate, None, "PR", 0.85)
        assert est.predict(5).tolist() == ref.top(5).tolist()

    def test_score_pairs(self, karate):
        est = SeededDiffusionLinkPredictor().fit(karate)
        scores = est.score_pairs([[0, 1], [9, 0]])
        assert np.isnan(scores[0]) and scores[1] > 0

    def test_invalid_c(self, karate):
        with pytest.raises(ValueError):
            SeededDiffusionLinkPredictor(c=1.0).fit(karate)

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            SeededDiffusionLinkPredictor().predict(3)
