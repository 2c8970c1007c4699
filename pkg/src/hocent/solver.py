"""Nonlinear power method for ``alpha * M x + (1 - alpha) * T_p(x) = lambda * x``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .graph import Graph, components, map_support_graph
from .triangles import TriangleSet, check_tensor, enumerate_triangles, tensor_apply

MATRICES = ("adjacency", "random_walk", "pagerank")

# ratios y_i / x_i are taken only where x_i exceeds this
EPS_SUPPORT = 1e-300

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 10000


def check_matrix(name) -> str:
    key = str(name).lower().replace("-", "_")
    aliases = {"a": "adjacency", "adj": "adjacency", "p": "random_walk", "rw": "random_walk",
               "randomwalk": "random_walk", "pr": "pagerank"}
    key = aliases.get(key, key)
    if key not in MATRICES:
        raise ValueError(f"matrix must be one of {MATRICES}, got {name!r}")
    return key


@dataclass(frozen=True)
class MapSpec:
    """Parameters of the map ``x -> alpha * M x + (1 - alpha) * T_p(x)``.

    ``c`` and ``v`` only matter for ``matrix="pagerank"``; ``v=None`` means
    the uniform teleportation vector.
    """

    alpha: float = 0.5
    p: float = 1.0
    matrix: str = "adjacency"
    tensor: str = "B"
    c: float = 0.85
    v: Optional[tuple] = None

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if math.isnan(self.p):
            raise ValueError("p must not be NaN")
        object.__setattr__(self, "matrix", check_matrix(self.matrix))
        object.__setattr__(self, "tensor", check_tensor(self.tensor))
        if self.matrix == "pagerank":
            if not 0.0 < self.c < 1.0:
                raise ValueError(f"pagerank requires 0 < c < 1, got {self.c}")
            if self.v is not None:
                v = np.asarray(self.v, dtype=float)
                if np.any(v < 0) or not np.isclose(v.sum(), 1.0, rtol=0, atol=1e-12):
                    raise ValueError("pagerank v must be a nonnegative vector summing to one")
                object.__setattr__(self, "v", tuple(v.tolist()))

    @property
    def uses_matrix(self) -> bool:
        return self.alpha > 0

    @property
    def uses_tensor(self) -> bool:
        return self.alpha < 1


def matrix_operator(g: Graph, spec: MapSpec) -> Callable[[np.ndarray], np.ndarray]:
    """Return ``x -> M x`` for the matrix named in ``spec``, never densified.

    Columns of ``A D^-1`` belonging to isolated nodes are replaced by the
    uniform vector so the random-walk and PageRank matrices stay
    column-stochastic.
    """
    a = g.adjacency()
    if spec.matrix == "adjacency":
        return lambda x: a @ x
    d = g.degrees.astype(float)
    inv_d = np.divide(1.0, d, out=np.zeros_like(d), where=d > 0)
    dangling = d == 0
    n = g.n

    def walk(x):
        scaled = (x.T * inv_d).T
        out = a @ scaled
        if dangling.any():
            out = out + x[dangling].sum(axis=0) / n
        return out

    if spec.matrix == "random_walk":
        return walk
    c = spec.c
    v = np.full(n, 1.0 / n) if spec.v is None else np.asarray(spec.v, dtype=float)
    if len(v) != n:
        raise ValueError("pagerank v has the wrong length")

    def pagerank(x):
        return c * walk(x) + (1.0 - c) * np.multiply.outer(v, x.sum(axis=0))

    return pagerank


def map_operator(g: Graph, ts: Optional[TriangleSet], spec: MapSpec) -> Callable[[np.ndarray], np.ndarray]:
    """Return the combined map as a callable on vectors or ``(n, s)`` blocks."""
    if spec.uses_tensor and ts is None:
        ts = enumerate_triangles(g)
    if not spec.uses_tensor:
        mat = matrix_operator(g, spec)
        alpha = spec.alpha
        return lambda x: alpha * mat(x)
    if not spec.uses_matrix:
        return lambda x: tensor_apply(ts, spec.tensor, spec.p, x)
    mat = matrix_operator(g, spec)
    alpha, beta = spec.alpha, 1.0 - spec.alpha
    return lambda x: alpha * mat(x) + beta * tensor_apply(ts, spec.tensor, spec.p, x)


def _check_input(g: Graph, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[0] != g.n:
        raise ValueError(f"expected a vector of length {g.n}, got {x.shape[0]}")
    if np.any(x < 0):
        raise ValueError("input vector must be nonnegative")
    return x


def apply_map(g: Graph, ts: Optional[TriangleSet], spec: MapSpec, x) -> np.ndarray:
    """Evaluate ``alpha * M x + (1 - alpha) * T_p(x)``."""
    x = _check_input(g, x)
    return map_operator(g, ts, spec)(x)


@dataclass
class SolverReport:
    """Result of :func:`solve`.

    ``lower_history[k]`` and ``upper_history[k]`` are the Collatz-Wielandt
    bounds ``min_i M(x_k)_i / x_k_i`` and ``max_i M(x_k)_i / x_k_i``.
    """

    eigenvector: np.ndarray
    eigenvalue: float
    lower_history: np.ndarray
    upper_history: np.ndarray
    iterations: int
    converged: bool
    hypothesis_warnings: list = field(default_factory=list)
    excluded: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    shift: float = 0.0

    @property
    def bracket(self):
        return float(self.lower_history[-1]), float(self.upper_history[-1])

    def normalized(self, norm="one") -> np.ndarray:
        x = self.eigenvector
        if norm in ("one", 1, "l1"):
            return x / x.sum()
        if norm in ("inf", np.inf, "max"):
            return x / x.max()
        if norm == "raw":
            return x.copy()
        raise ValueError(f"unknown norm {norm!r}")


def hypothesis_warnings(g: Graph, spec: MapSpec, ts: Optional[TriangleSet] = None):
    """Check connectivity and aperiodicity of the support graph.

    Returns the list of human-readable warnings and whether the support graph
    is periodic (some component with an edge is bipartite).
    """
    support = map_support_graph(g, spec, ts)
    rep = components(support)
    warns = []
    if not rep.is_connected:
        warns.append(
            f"support graph not connected ({rep.num_components} components): "
            "uniqueness of the positive eigenvector is not guaranteed"
        )
    if rep.periodic:
        warns.append("support graph bipartite (periodic): iterating the shifted map M + sigma*I")
    return warns, rep.periodic


def solve(
    g: Graph,
    ts: Optional[TriangleSet],
    spec: MapSpec,
    x0=None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    shift="auto",
) -> SolverReport:
    """Nonlinear power method with Collatz-Wielandt eigenvalue brackets.

    Iterates ``y = M(x_k)``, ``x_{k+1} = y / ||y||_1`` from a positive start
    and stops when the bracket width drops below ``tol * max(1, lower)`` or
    successive iterates differ by at most ``tol`` in the 1-norm.

    When the support graph is bipartite the plain iteration oscillates; with
    ``shift="auto"`` the map ``x -> M(x) + sigma * x`` is iterated instead.
    It has the same eigenvectors and its ratios are shifted by exactly
    ``sigma``, which is subtracted again before anything is recorded.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = g.n
    if x0 is None:
        x = np.full(n, 1.0 / n)
    else:
        x = np.asarray(x0, dtype=float)
        if x.shape != (n,):
            raise ValueError(f"x0 must have shape ({n},)")
        if not np.all(x > 0):
            raise ValueError("x0 must be entrywise positive")
        x = x / x.sum()
    if spec.uses_tensor and ts is None:
        ts = enumerate_triangles(g)
    warns, periodic = hypothesis_warnings(g, spec, ts)
    op = map_operator(g, ts, spec)

    sigma = 0.0
    if shift == "auto":
        if periodic:
            y0 = op(x)
            sigma = 0.5 * float(np.max(y0 / x))
    elif shift:
        sigma = float(shift)

    lows, highs = [], []
    converged = False
    it = 0
    final = False
    while True:
        y = op(x)
        supp = x > EPS_SUPPORT
        if not np.any(y[supp] > 0):
            raise ValueError("the map annihilates the iterate; no positive eigenvector")
        ratios = y[supp] / x[supp]
        lo, hi = float(ratios.min()), float(ratios.max())
        lows.append(lo)
        highs.append(hi)
        if final or hi - lo <= tol * max(1.0, lo):
            converged = True
            break
        if it >= max_iter:
            break
        it += 1
        z = y + sigma * x if sigma else y
        x_new = z / z.sum()
        step = float(np.abs(x_new - x).sum())
        x = x_new
        if step <= tol:
            # one more evaluation to record the bracket at the returned vector
            final = True

    excluded = np.flatnonzero(~(x > EPS_SUPPORT))
    if len(excluded):
        warns.append(f"{len(excluded)} node(s) with zero entries excluded from the eigenvalue bracket")
    return SolverReport(
        eigenvector=x,
        eigenvalue=0.5 * (lows[-1] + highs[-1]),
        lower_history=np.asarray(lows),
        upper_history=np.asarray(highs),
        iterations=it,
        converged=converged,
        hypothesis_warnings=warns,
        excluded=excluded,
        shift=sigma,
    )
