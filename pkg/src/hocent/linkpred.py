"""Seeded diffusions, similarity scores and the edge-removal experiment."""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .graph import Graph, components
from .solver import MapSpec, map_operator, matrix_operator
from .triangles import TriangleSet, enumerate_triangles

DIFFUSION_TOL = 1e-12
DIFFUSION_MAX_ITER = 10000

# the configuration used for second-order link prediction
DEFAULT_LINK_SPEC = MapSpec(alpha=0.5, p=0.0, matrix="random_walk", tensor="W")


class ConvergenceWarning(UserWarning):
    pass


def _check_c(c):
    if not 0.0 <= c < 1.0:
        raise ValueError(f"teleportation c must lie in [0, 1), got {c}")


def _check_seed(g: Graph, seed: int, allow_isolated: bool = False) -> int:
    seed = int(seed)
    if not 0 <= seed < g.n:
        raise ValueError(f"seed {seed} is not a node index")
    if not allow_isolated and g.degrees[seed] == 0:
        raise ValueError(f"seed {seed} is isolated (degree 0)")
    return seed


def diffuse(op, n: int, c: float, seeds, y0=None, tol=DIFFUSION_TOL, max_iter=DIFFUSION_MAX_ITER):
    """Run ``y <- normalize(c * op(y) + (1 - c) * e_seed)`` for many seeds at once.

    Column ``s`` of the result belongs to ``seeds[s]``.  Each column stops
    updating as soon as its own 1-norm step is ``<= tol``, so a column's
    value does not depend on which other seeds share the batch.  Returns the
    ``(n, len(seeds))`` array and a boolean array of converged flags.
    """
    seeds = np.asarray(seeds, dtype=np.int64)
    s = len(seeds)
    if y0 is None:
        y = np.full((n, s), 1.0 / n)
    else:
        y = np.array(np.broadcast_to(np.asarray(y0, dtype=float).reshape(n, -1), (n, s)))
        if np.any(y <= 0):
            raise ValueError("starting vector must be positive")
        y /= y.sum(axis=0)
    active = np.arange(s)
    done = np.zeros(s, dtype=bool)
    if c == 0.0:
        y[:] = 0.0
        y[seeds, np.arange(s)] = 1.0
        return y, np.ones(s, dtype=bool)
    for _ in range(max_iter):
        if len(active) == 0:
            break
        cur = y[:, active]
        nxt = c * op(cur)
        nxt[seeds[active], np.arange(len(active))] += 1.0 - c
        nxt /= nxt.sum(axis=0)
        step = np.abs(nxt - cur).sum(axis=0)
        y[:, active] = nxt
        fin = step <= tol
        done[active[fin]] = True
        active = active[~fin]
    return y, done


def _unit(n, i):
    e = np.zeros(n)
    e[i] = 1.0
    return e


def random_walk_matrix(g: Graph) -> sp.csc_matrix:
    """``P = A D^-1`` with isolated-node columns replaced by the uniform vector."""
    d = g.degrees.astype(float)
    p = g.adjacency() @ sp.diags(np.divide(1.0, d, out=np.zeros_like(d), where=d > 0))
    iso = np.flatnonzero(d == 0)
    if len(iso):
        rows = np.tile(np.arange(g.n), len(iso))
        cols = np.repeat(iso, g.n)
        p = p + sp.csr_matrix((np.full(len(rows), 1.0 / g.n), (rows, cols)), shape=p.shape)
    return sp.csc_matrix(p)


def seeded_pagerank(g: Graph, c: float = 0.85, seed: int = 0, method: str = "iterate",
                    tol: float = DIFFUSION_TOL) -> np.ndarray:
    """Rooted PageRank vector solving ``(I - c P) x = (1 - c) e_seed``.

    ``method="iterate"`` runs the normalized diffusion; ``method="solve"``
    uses a sparse direct solve.  Both return a vector with unit 1-norm.
    """
    _check_c(c)
    seed = _check_seed(g, seed)
    if method == "solve":
        x = spla.spsolve(sp.identity(g.n, format="csc") - c * random_walk_matrix(g), _unit(g.n, seed) * (1.0 - c))
        return x / x.sum()
    if method != "iterate":
        raise ValueError(f"unknown method {method!r}")
    op = matrix_operator(g, MapSpec(alpha=1.0, matrix="random_walk"))
    y, done = diffuse(op, g.n, c, [seed], tol=tol)
    if not done.all():
        warnings.warn("seeded PageRank did not converge", ConvergenceWarning, stacklevel=2)
    return y[:, 0]


def nonlinear_seeded_diffusion(
    g: Graph,
    ts: Optional[TriangleSet] = None,
    spec: MapSpec = DEFAULT_LINK_SPEC,
    c: float = 0.85,
    seed: int = 0,
    y0=None,
    tol: float = DIFFUSION_TOL,
    max_iter: int = DIFFUSION_MAX_ITER,
) -> np.ndarray:
    """Stationary point of the normalized second-order seeded diffusion.

    Iterates ``y_hat = c * M(y) + (1 - c) * e_seed``, ``y = y_hat / ||y_hat||_1``.
    With ``spec.alpha == 1`` and the random-walk matrix this is exactly the
    rooted PageRank iteration.
    """
    _check_c(c)
    seed = _check_seed(g, seed)
    op = map_operator(g, ts, spec)
    y, done = diffuse(op, g.n, c, [seed], y0=y0, tol=tol, max_iter=max_iter)
    if not done.all():
        warnings.warn(
            f"seeded diffusion did not converge in {max_iter} iterations "
            "(periodic or degenerate support graph?)",
            ConvergenceWarning,
            stacklevel=2,
        )
    return y[:, 0]


@dataclass
class SimilarityScores:
    """Scores on the non-edges ``i < j`` of the graph they were computed on."""

    rows: np.ndarray
    cols: np.ndarray
    scores: np.ndarray
    method: str
    converged: bool = True

    def __len__(self):
        return len(self.scores)

    def top(self, k: int) -> np.ndarray:
        """The ``k`` highest-scoring pairs; ties go to the smaller ``(i, j)``."""
        order = np.lexsort((self.cols, self.rows, -self.scores))[:k]
        return np.column_stack([self.rows[order], self.cols[order]])

    def as_dict(self) -> dict:
        return {(int(i), int(j)): float(s) for i, j, s in zip(self.rows, self.cols, self.scores)}


def diffusion_matrix(g: Graph, method: str = "M", c: float = 0.85, spec: MapSpec = DEFAULT_LINK_SPEC,
                     ts: Optional[TriangleSet] = None, tol: float = DIFFUSION_TOL,
                     max_iter: int = DIFFUSION_MAX_ITER):
    """``(n, n)`` array whose column ``l`` is the diffusion seeded at ``l``."""
    _check_c(c)
    if method == "PR":
        op = matrix_operator(g, MapSpec(alpha=1.0, matrix="random_walk"))
        # same arithmetic as map_operator with alpha == 1, so ties match bit for bit
        op_pr = lambda x: 1.0 * op(x)  # noqa: E731
        return diffuse(op_pr, g.n, c, np.arange(g.n), tol=tol, max_iter=max_iter)
    if method != "M":
        raise ValueError(f"method must be 'PR' or 'M', got {method!r}")
    op = map_operator(g, ts, spec)
    return diffuse(op, g.n, c, np.arange(g.n), tol=tol, max_iter=max_iter)


def similarity_matrix(g: Graph, ts: Optional[TriangleSet] = None, method: str = "M", c: float = 0.85,
                      spec: MapSpec = DEFAULT_LINK_SPEC, tol: float = DIFFUSION_TOL,
                      max_iter: int = DIFFUSION_MAX_ITER) -> SimilarityScores:
    """Symmetric scores ``S_ij = y(i)_j + y(j)_i`` on the non-edges of ``g``."""
    y, done = diffusion_matrix(g, method, c, spec, ts, tol, max_iter)
    if not done.all():
        warnings.warn(f"{(~done).sum()} seeded diffusion(s) did not converge", ConvergenceWarning,
                      stacklevel=2)
    s = y + y.T
    iu, ju = np.triu_indices(g.n, k=1)
    a = g.adjacency().toarray()
    non_edge = a[iu, ju] == 0
    iu, ju = iu[non_edge], ju[non_edge]
    return SimilarityScores(iu, ju, s[iu, ju], method, bool(done.all()))


@dataclass
class SplitExperiment:
    trial: int
    rng_seed: int
    removed: np.ndarray
    retained: Graph
    predicted: dict
    hits: dict
    ratio: float
    disconnected: bool
    methods: tuple = ("M", "PR")
    converged: dict = field(default_factory=dict)

    @property
    def total(self) -> int:
        return len(self.removed)


def hit_ratio(hits_new: int, hits_ref: int) -> float:
    if hits_ref == 0:
        return 1.0 if hits_new == 0 else float("inf")
    return hits_new / hits_ref


def _edge_keys(pairs, n):
    pairs = np.sort(np.asarray(pairs, dtype=np.int64).reshape(-1, 2), axis=1)
    return pairs[:, 0] * n + pairs[:, 1]


def _run_trial(g, trial, rng_seed, removed_idx, methods, c, spec, tol, max_iter):
    e = g.edges()
    removed = e[np.sort(removed_idx)]
    g0 = g.remove_edges(removed)
    ts0 = enumerate_triangles(g0) if spec.uses_tensor else None
    predicted, hits, conv = {}, {}, {}
    removed_keys = _edge_keys(removed, g.n)
    for label, (method, mspec) in methods.items():
        scores = similarity_matrix(g0, ts0, method, c, mspec, tol, max_iter)
        top = scores.top(len(removed))
        predicted[label] = top
        hits[label] = int(np.isin(_edge_keys(top, g.n), removed_keys).sum())
        conv[label] = scores.converged
    labels = list(methods)
    return SplitExperiment(
        trial=trial,
        rng_seed=rng_seed,
        removed=removed,
        retained=g0,
        predicted=predicted,
        hits=hits,
        ratio=hit_ratio(hits[labels[0]], hits[labels[1]]),
        disconnected=not components(g0).is_connected,
        methods=tuple(labels),
        converged=conv,
    )


def run_split_experiment(
    g: Graph,
    c: float = 0.85,
    spec: MapSpec = DEFAULT_LINK_SPEC,
    rng_seed: int = 0,
    trials: int = 10,
    reference: Optional[MapSpec] = None,
    tol: float = DIFFUSION_TOL,
    max_iter: int = DIFFUSION_MAX_ITER,
    threads: int = 1,
) -> list:
    """Hide ~10% of the edges and compare how many each similarity recovers.

    Per trial a uniform sample of ``round(m / 10)`` edges is removed; both
    methods score the non-edges of the remaining graph and the top-scoring
    pairs are compared with the removed set.  ``ratio`` is hits of the
    second-order diffusion (``spec``) over hits of seeded PageRank, or of
    the diffusion given by ``reference`` when supplied.

    All edge samples are drawn up front from one ``numpy`` generator, so the
    result depends only on ``rng_seed`` and not on ``threads``.
    """
    _check_c(c)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    m = g.edge_count
    if m < 20:
        raise ValueError("the split experiment needs at least 20 edges")
    k = int(round(m / 10))
    rng = np.random.default_rng(rng_seed)
    samples = [rng.choice(m, size=k, replace=False) for _ in range(trials)]
    methods = {"M": ("M", spec)}
    methods["PR"] = ("PR", None) if reference is None else ("M", reference)

    def one(t):
        return _run_trial(g, t, rng_seed, samples[t], methods, c, spec, tol, max_iter)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, range(trials)))
    return [one(t) for t in range(trials)]


def experiment_rows(experiments) -> list:
    """Flat rows ``(trial, method, hits, total, ratio)``."""
    rows = []
    for ex in experiments:
        for label in ex.methods:
            rows.append({"trial": ex.trial, "method": label, "hits": ex.hits[label],
                         "total": ex.total, "ratio": ex.ratio})
    return rows


def experiment_summary(experiments) -> dict:
    """Quartiles of the hit ratio over trials (boxplot data)."""
    ratios = np.array([ex.ratio for ex in experiments], dtype=float)
    finite = ratios[np.isfinite(ratios)]
    q = np.percentile(finite, [0, 25, 50, 75, 100]) if len(finite) else [np.nan] * 5
    return {
        "trials": len(ratios),
        "rng_seed": experiments[0].rng_seed if experiments else None,
        "ratios": ratios.tolist(),
        "min": float(q[0]),
        "q1": float(q[1]),
        "median": float(q[2]),
        "q3": float(q[3]),
        "max": float(q[4]),
        "mean": float(finite.mean()) if len(finite) else float("nan"),
        "infinite": int((~np.isfinite(ratios)).sum()),
        "disconnected_trials": int(sum(ex.disconnected for ex in experiments)),
    }
