"""scikit-learn style wrappers.

The measures are transductive: ``fit`` takes a graph and stores per-node
results, ``fit_transform`` returns them.  ``X`` is anything accepted by
:func:`hocent.validation.check_graph`.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .linkpred import DIFFUSION_TOL, similarity_matrix
from .measures import spectral_coefficient, static_coefficient
from .solver import DEFAULT_MAX_ITER, DEFAULT_TOL, MapSpec, solve
from .triangles import enumerate_triangles
from .validation import check_graph, check_unit_interval


def _normalize(x, norm):
    if norm == "one":
        return x / x.sum()
    if norm == "inf":
        return x / x.max()
    if norm == "raw":
        return x
    raise ValueError(f"norm must be 'one', 'inf' or 'raw', got {norm!r}")


class _GraphTransformer(BaseEstimator):

    def transform(self, X=None):
        """Per-node values of the fitted graph.

        Passing a different graph refits on it; the estimator is transductive.
        """
        check_is_fitted(self, "graph_")
        if X is not None:
            g = check_graph(X)
            if g != self.graph_:
                return self.fit(g).values_.copy()
        return self.values_.copy()

    def fit_transform(self, X, y=None):
        return self.fit(X, y).values_.copy()


class HigherOrderCentrality(_GraphTransformer):
    """First- and second-order eigenvector centrality.

    Parameters
    ----------
    alpha : float in [0, 1]
        Weight of the matrix term; ``alpha=1`` is classical eigenvector
        centrality (or PageRank), ``alpha=0`` uses triangles only.
    p : float
        Power-mean exponent combining the two other corners of a triangle.
    tensor : {"B", "W", "C", "L"}
    matrix : {"adjacency", "random_walk", "pagerank"}
    c : float
        PageRank teleportation, only used with ``matrix="pagerank"``.
    norm : {"one", "inf", "raw"}
        Scaling of the returned vector.

    Attributes
    ----------
    values_ : ndarray of shape (n,)
    eigenvalue_ : float
    report_ : SolverReport
    """

    def __init__(self, alpha=0.5, p=0.0, tensor="B", matrix="adjacency", c=0.85, norm="one",
                 tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
        self.alpha = alpha
        self.p = p
        self.tensor = tensor
        self.matrix = matrix
        self.c = c
        self.norm = norm
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, X, y=None):
        g = check_graph(X)
        spec = MapSpec(alpha=check_unit_interval(self.alpha, "alpha"), p=self.p,
                       matrix=self.matrix, tensor=self.tensor, c=self.c)
        ts = enumerate_triangles(g) if spec.uses_tensor else None
        self.report_ = solve(g, ts, spec, tol=self.tol, max_iter=self.max_iter)
        self.graph_ = g
        self.eigenvalue_ = self.report_.eigenvalue
        self.values_ = _normalize(self.report_.eigenvector, self.norm)
        return self


class SpectralClusteringCoefficient(_GraphTransformer):
    """Spectral (``static=False``) or static triangle coefficients.

    ``tensor="C"`` gives the spectral Watts-Strogatz coefficient and
    ``tensor="L"`` the spectral local closure coefficient.  With
    ``static=True`` the values are ``T_p(1)``, i.e. the classical coefficient.
    """

    def __init__(self, tensor="C", p=0.0, static=False, norm="one", tol=DEFAULT_TOL,
                 max_iter=DEFAULT_MAX_ITER):
        self.tensor = tensor
        self.p = p
        self.static = static
        self.norm = norm
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, X, y=None):
        g = check_graph(X)
        ts = enumerate_triangles(g)
        if self.static:
            self.report_ = None
            self.values_ = static_coefficient(ts, self.tensor).values
        else:
            mv = spectral_coefficient(g, ts, self.tensor, self.p, tol=self.tol, max_iter=self.max_iter)
            self.report_ = mv.report
            self.values_ = _normalize(mv.values, self.norm)
        self.graph_ = g
        return self


class SeededDiffusionLinkPredictor(BaseEstimator):
    """Rank missing links by seeded-diffusion similarity.

    ``method="PR"`` is rooted PageRank; ``method="M"`` replaces the random
    walk with the second-order map ``alpha P + (1 - alpha) T_p``.

    Attributes
    ----------
    scores_ : SimilarityScores
        Scores on all non-edges of the fitted graph.
    """

    def __init__(self, method="M", alpha=0.5, p=0.0, tensor="W", c=0.85, tol=DIFFUSION_TOL):
        self.method = method
        self.alpha = alpha
        self.p = p
        self.tensor = tensor
        self.c = c
        self.tol = tol

    def fit(self, X, y=None):
        g = check_graph(X)
        check_unit_interval(self.c, "c", closed_right=False)
        spec = MapSpec(alpha=check_unit_interval(self.alpha, "alpha"), p=self.p,
                       matrix="random_walk", tensor=self.tensor)
        ts = enumerate_triangles(g) if self.method == "M" and spec.uses_tensor else None
        self.scores_ = similarity_matrix(g, ts, self.method, self.c, spec, tol=self.tol)
        self.graph_ = g
        return self

    def predict(self, n_links):
        """Top ``n_links`` non-edges as an ``(n_links, 2)`` array of node indices."""
        check_is_fitted(self, "scores_")
        return self.scores_.top(int(n_links))

    def score_pairs(self, pairs):
        """Similarity of the given ``(i, j)`` pairs; existing edges score ``nan``."""
        check_is_fitted(self, "scores_")
        lookup = self.scores_.as_dict()
        pairs = np.sort(np.asarray(pairs, dtype=np.int64).reshape(-1, 2), axis=1)
        return np.array([lookup.get((int(i), int(j)), np.nan) for i, j in pairs])
