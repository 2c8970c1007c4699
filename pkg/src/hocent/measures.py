"""First- and second-order node measures and dataset summaries."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .graph import Graph, components
from .solver import DEFAULT_MAX_ITER, DEFAULT_TOL, MapSpec, SolverReport, solve
from .triangles import TriangleSet, check_tensor, enumerate_triangles, tensor_apply

NORMALIZATIONS = ("one", "inf", "raw")


class NoSecondOrderStructure(ValueError):
    """The graph has no triangles, so second-order measures are undefined."""


@dataclass
class MeasureVector:
    values: np.ndarray
    name: str
    normalization: str = "raw"
    report: Optional[SolverReport] = None
    warnings: list = field(default_factory=list)

    def __post_init__(self):
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"normalization must be one of {NORMALIZATIONS}")

    def __len__(self):
        return len(self.values)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def renormalized(self, normalization: str) -> "MeasureVector":
        v = np.asarray(self.values, dtype=float)
        if normalization == "one":
            v = v / v.sum()
        elif normalization == "inf":
            v = v / v.max()
        elif normalization != "raw":
            raise ValueError(f"normalization must be one of {NORMALIZATIONS}")
        return MeasureVector(v, self.name, normalization, self.report, list(self.warnings))


def _triangles(g, ts):
    return enumerate_triangles(g) if ts is None else ts


def ws_clustering(g: Graph, ts: Optional[TriangleSet] = None) -> MeasureVector:
    """Local Watts-Strogatz clustering coefficient ``2 tri(i) / (d_i (d_i - 1))``."""
    ts = _triangles(g, ts)
    d = g.degrees.astype(float)
    wedges = d * (d - 1.0)
    c = np.divide(2.0 * ts.per_node_count, wedges, out=np.zeros(g.n), where=d >= 2)
    return MeasureVector(c, "ws_clustering")


def global_clustering(g: Graph, ts: Optional[TriangleSet] = None) -> float:
    """Graph transitivity ``6 |K3| / sum_i d_i (d_i - 1)``."""
    ts = _triangles(g, ts)
    d = g.degrees.astype(float)
    wedges = float((d * (d - 1.0)).sum())
    if wedges == 0:
        raise ValueError("no wedges: global clustering coefficient undefined")
    return 6.0 * len(ts) / wedges


def local_closure(g: Graph, ts: Optional[TriangleSet] = None) -> MeasureVector:
    """Local closure coefficient ``2 tri(i) / w(i)``; zero where ``w(i) = 0``."""
    ts = _triangles(g, ts)
    w = ts.path2_count.astype(float)
    h = np.divide(2.0 * ts.per_node_count, w, out=np.zeros(g.n), where=w > 0)
    return MeasureVector(h, "local_closure")


def static_coefficient(ts: TriangleSet, tensor) -> MeasureVector:
    """``T_p(1)``, which does not depend on ``p``."""
    tensor = check_tensor(tensor)
    values = tensor_apply(ts, tensor, 1.0, np.ones(ts.n))
    return MeasureVector(values, f"static_{tensor}")


def spectral_coefficient(
    g: Graph,
    ts: Optional[TriangleSet] = None,
    tensor="C",
    p: float = 0.0,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    x0=None,
) -> MeasureVector:
    """Spectral clustering coefficient: positive solution of ``T_p(x) = lambda x``.

    With ``tensor="C"`` this is the spectral Watts-Strogatz coefficient, with
    ``"L"`` the spectral local closure coefficient.  The result is
    1-normalized and carries the solver report.
    """
    ts = _triangles(g, ts)
    if len(ts) == 0:
        raise NoSecondOrderStructure("no second-order structure: the graph has no triangles")
    spec = MapSpec(alpha=0.0, p=p, tensor=tensor)
    rep = solve(g, ts, spec, x0=x0, tol=tol, max_iter=max_iter)
    return MeasureVector(
        rep.normalized("one"), f"spectral_{spec.tensor}", "one", rep, list(rep.hypothesis_warnings)
    )


def first_order_centrality(
    g: Graph,
    kind: str = "degree",
    c: float = 0.85,
    v=None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> MeasureVector:
    """Degree, eigenvector or PageRank centrality."""
    if kind == "degree":
        return MeasureVector(g.degrees.astype(float), "degree")
    if kind == "eigenvector":
        spec = MapSpec(alpha=1.0, matrix="adjacency")
    elif kind == "pagerank":
        spec = MapSpec(alpha=1.0, matrix="pagerank", c=c, v=v)
    else:
        raise ValueError(f"unknown centrality kind {kind!r}")
    rep = solve(g, None, spec, tol=tol, max_iter=max_iter)
    return MeasureVector(rep.normalized("one"), kind, "one", rep, list(rep.hypothesis_warnings))


@dataclass
class DatasetSummary:
    """One row of network statistics; spectral columns are ``None`` without triangles."""

    n: int
    m: int
    triangle_count: int
    global_cc: Optional[float]
    average_cc: float
    average_spectral_cc: Optional[float]
    average_closure: float
    average_spectral_closure: Optional[float]
    connected: bool = True

    COLUMNS = (
        "n", "m", "triangle_count", "global_cc", "average_cc", "average_spectral_cc",
        "average_closure", "average_spectral_closure", "connected",
    )

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.COLUMNS}


def summarize(
    g: Graph,
    ts: Optional[TriangleSet] = None,
    p: float = 0.0,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> DatasetSummary:
    """Network statistics: size, triangles, clustering and closure averages.

    Spectral averages use the ``p``-spectral coefficients of tensors ``C``
    and ``L`` scaled so the largest entry is one.
    """
    ts = _triangles(g, ts)
    try:
        gcc = global_clustering(g, ts)
    except ValueError:
        gcc = None
    spec_c = spec_l = None
    if len(ts):
        xc = spectral_coefficient(g, ts, "C", p, tol=tol, max_iter=max_iter).values
        xl = spectral_coefficient(g, ts, "L", p, tol=tol, max_iter=max_iter).values
        spec_c, spec_l = float((xc / xc.max()).mean()), float((xl / xl.max()).mean())
    return DatasetSummary(
        n=g.n,
        m=g.edge_count,
        triangle_count=len(ts),
        global_cc=gcc,
        average_cc=float(ws_clustering(g, ts).values.mean()),
        average_spectral_cc=spec_c,
        average_closure=float(local_closure(g, ts).values.mean()),
        average_spectral_closure=spec_l,
        connected=components(g).is_connected,
    )


def degree_binned(values, degrees, base: float = 2.0):
    """Average degree and average value per logarithmic degree bin.

    Bin ``b`` holds nodes with ``base**b <= d < base**(b + 1)``; nodes of
    degree zero are dropped.  Returns ``(mean_degree, mean_value, count)``
    arrays over the non-empty bins.
    """
    values = np.asarray(values, dtype=float)
    d = np.asarray(degrees, dtype=float)
    keep = d > 0
    bins = np.floor(np.log(d[keep]) / np.log(base) + 1e-12).astype(int)
    out = []
    for b in np.unique(bins):
        sel = bins == b
        out.append((d[keep][sel].mean(), values[keep][sel].mean(), int(sel.sum())))
    if not out:
        return np.empty(0), np.empty(0), np.empty(0, dtype=int)
    md, mv, cnt = zip(*out)
    return np.array(md), np.array(mv), np.array(cnt)
