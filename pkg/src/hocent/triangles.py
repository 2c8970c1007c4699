"""Triangle enumeration and the triangle-tensor operators.

A triangle tensor is never stored as an ``n x n x n`` array.  Every variant is
supported on ordered triples ``(i, j, k)`` that form a triangle and is
symmetric in its last two indices, so the list of unordered triangles plus a
per-corner weight fully describes it:

========  ==========================  ===================
variant   weight of ``T[i, j, k]``    name
========  ==========================  ===================
``B``     ``1``                       binary
``W``     ``1 / tri(j, k)``           random walk
``C``     ``1 / (d_i (d_i - 1))``     clustering coeff.
``L``     ``1 / w(i)``                local closure
========  ==========================  ===================

where ``tri(j, k)`` is the number of triangles on edge ``(j, k)`` and ``w(i)``
the number of length-two paths leaving ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .graph import Graph

TENSORS = ("B", "W", "C", "L")

# |p| below this is treated as the geometric-mean limit
P_ZERO = 1e-12


def check_tensor(variant) -> str:
    v = str(variant).upper()
    if v not in TENSORS:
        raise ValueError(f"tensor must be one of {TENSORS}, got {variant!r}")
    return v


@dataclass(frozen=True, eq=False)
class TriangleSet:
    """All triangles of a graph together with the derived counts.

    ``triangles`` is a ``(t, 3)`` array of node triples ``i < j < k`` in
    lexicographic order.  ``edge_count_per_triangle[t, c]`` is the number of
    triangles on the edge opposite corner ``c`` of triangle ``t``.
    """

    n: int
    triangles: np.ndarray
    per_node_count: np.ndarray
    edge_count_per_triangle: np.ndarray
    degrees: np.ndarray
    path2_count: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False)

    def __len__(self):
        return len(self.triangles)

    @property
    def wedge_count(self) -> np.ndarray:
        d = self.degrees
        return d * (d - 1) // 2

    @cached_property
    def per_edge_count(self) -> sp.csr_matrix:
        """Symmetric sparse matrix of triangles per edge, i.e. ``A o A^2``."""
        t = self.triangles
        rows = np.concatenate([t[:, 0], t[:, 0], t[:, 1]])
        cols = np.concatenate([t[:, 1], t[:, 2], t[:, 2]])
        ones = np.ones(len(rows))
        upper = sp.coo_matrix((ones, (rows, cols)), shape=(self.n, self.n)).tocsr()
        return (upper + upper.T).tocsr()

    def corner_weights(self, variant) -> np.ndarray:
        """``(t, 3)`` array: tensor weight at each corner of each triangle."""
        v = check_tensor(variant)
        t = self.triangles
        if v == "B":
            return np.ones(t.shape, dtype=float)
        if v == "W":
            return 1.0 / self.edge_count_per_triangle
        if v == "C":
            d = self.degrees[t].astype(float)
            return 1.0 / (d * (d - 1.0))
        w = self.path2_count[t].astype(float)
        # a node on a triangle has two neighbours of degree >= 2
        assert (w > 0).all(), "local closure weight undefined on a triangle node"
        return 1.0 / w

    def scatter(self, variant) -> sp.csr_matrix:
        """Sparse ``(n, 3t)`` matrix summing weighted corner terms per node.

        Column ``c * t + r`` belongs to corner ``c`` of triangle ``r`` and has
        value ``2 * weight``: the two ordered entries ``T[i, u, v]`` and
        ``T[i, v, u]`` share the symmetric power mean.
        """
        v = check_tensor(variant)
        if v not in self._cache:
            t = len(self.triangles)
            rows = self.triangles.T.ravel()
            data = 2.0 * self.corner_weights(v).T.ravel()
            mat = sp.csr_matrix((data, (rows, np.arange(3 * t))), shape=(self.n, 3 * t))
            mat.sort_indices()
            self._cache[v] = mat
        return self._cache[v]

    @cached_property
    def opposite_pairs(self):
        """Node pairs opposite each corner, ordered like :meth:`scatter` columns."""
        t = self.triangles
        u = np.concatenate([t[:, 1], t[:, 0], t[:, 0]])
        v = np.concatenate([t[:, 2], t[:, 2], t[:, 1]])
        return u, v


def _forward_triangles(g: Graph) -> np.ndarray:
    """Degree-ordered forward algorithm, vectorized over wedges.

    Edges are oriented from lower to higher (degree, id) rank so every node
    has out-degree ``O(sqrt(m))``.  Each oriented wedge ``u -> v -> w`` is
    closed iff ``u -> w`` is an oriented edge.
    """
    n = g.n
    rank = np.empty(n, dtype=np.int64)
    rank[np.lexsort((np.arange(n), g.degrees))] = np.arange(n)
    e = g.edges()
    if len(e) == 0:
        return np.empty((0, 3), dtype=np.int64)
    flip = rank[e[:, 0]] > rank[e[:, 1]]
    src = np.where(flip, e[:, 1], e[:, 0])
    dst = np.where(flip, e[:, 0], e[:, 1])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    outdeg = np.bincount(src, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(outdeg, out=indptr[1:])

    # every oriented edge (u, v) extended by every out-neighbour w of v
    reps = outdeg[dst]
    total = int(reps.sum())
    if total == 0:
        return np.empty((0, 3), dtype=np.int64)
    u = np.repeat(src, reps)
    v = np.repeat(dst, reps)
    starts = np.repeat(indptr[dst], reps)
    offsets = np.arange(total) - np.repeat(np.cumsum(reps) - reps, reps)
    w = dst[starts + offsets]

    keys = src * n + dst
    probe = u * n + w
    pos = np.searchsorted(keys, probe)
    pos[pos == len(keys)] = 0
    closed = keys[pos] == probe
    tri = np.sort(np.column_stack([u[closed], v[closed], w[closed]]), axis=1)
    return tri[np.lexsort((tri[:, 2], tri[:, 1], tri[:, 0]))]


def enumerate_triangles(g: Graph) -> TriangleSet:
    """Exact list of 3-cliques of ``g`` with per-node and per-edge counts."""
    tri = _forward_triangles(g)
    n = g.n
    per_node = np.bincount(tri.ravel(), minlength=n)
    if len(tri):
        # edges opposite corners 0, 1, 2
        opp = np.concatenate([tri[:, 1] * n + tri[:, 2], tri[:, 0] * n + tri[:, 2], tri[:, 0] * n + tri[:, 1]])
        _, inverse, counts = np.unique(opp, return_inverse=True, return_counts=True)
        edge_counts = counts[inverse].reshape(3, -1).T
    else:
        edge_counts = np.empty((0, 3), dtype=np.int64)
    d = g.degrees
    path2 = g.adjacency(dtype=np.int64) @ d - d
    return TriangleSet(
        n=n,
        triangles=tri,
        per_node_count=per_node,
        edge_count_per_triangle=edge_counts,
        degrees=d,
        path2_count=np.asarray(path2).ravel(),
    )


def power_mean(a, b, p):
    """Power mean ``((a**p + b**p) / 2) ** (1 / p)`` of nonnegative values.

    Works elementwise on arrays.  ``p = 0`` is the geometric mean and
    ``p = +/-inf`` the max / min.  For ``p <= 0`` a zero argument gives zero.
    The larger argument is factored out so nothing overflows for large ``|p|``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    p = float(p)
    if p == np.inf:
        return np.maximum(a, b)
    if p == -np.inf:
        return np.minimum(a, b)
    if abs(p) < P_ZERO:
        return np.sqrt(a * b)
    if p == 1.0:
        return 0.5 * (a + b)
    hi = np.maximum(a, b)
    lo = np.minimum(a, b)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        r = lo / hi
        if p > 0:
            out = hi * ((r ** p + 1.0) / 2.0) ** (1.0 / p)
        else:
            # r**p may overflow; work with log(r**p + 1) instead
            out = hi * np.exp((np.logaddexp(p * np.log(r), 0.0) - np.log(2.0)) / p)
            out = np.where(lo > 0, out, 0.0)
    return np.where(hi > 0, out, 0.0)


def tensor_apply(ts: TriangleSet, variant, p, x) -> np.ndarray:
    """Evaluate ``T_p(x)_i = sum_jk T[i, j, k] * mu_p(x_j, x_k)``.

    ``x`` may be a vector of length ``n`` or an ``(n, s)`` array, in which
    case each column is transformed independently.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[0] != ts.n:
        raise ValueError(f"expected length {ts.n}, got {x.shape[0]}")
    if np.any(x < 0):
        raise ValueError("tensor_apply requires a nonnegative vector")
    if len(ts) == 0:
        return np.zeros_like(x)
    u, v = ts.opposite_pairs
    return ts.scatter(variant) @ power_mean(x[u], x[v], p)


def linearized_matrix(ts: TriangleSet, variant, g: Graph) -> sp.csr_matrix:
    """Matrix ``sum_k T[i, j, k]``, the ``p = 1`` form of the tensor operator.

    Built from matrix products of the adjacency matrix rather than from the
    triangle list, so it serves as an independent check of
    :func:`tensor_apply`.
    """
    v = check_tensor(variant)
    a = g.adjacency()
    tri_edges = a.multiply(a @ a).tocsr()
    tri_edges.eliminate_zeros()
    if v == "B":
        return tri_edges
    d = g.degrees.astype(float)
    if v == "C":
        dd = d * (d - 1.0)
        scale = np.divide(1.0, dd, out=np.zeros_like(dd), where=dd > 0)
        return sp.diags(scale) @ tri_edges
    if v == "L":
        w = (a @ d - d)
        scale = np.divide(1.0, w, out=np.zeros_like(w), where=w > 0)
        return sp.diags(scale) @ tri_edges
    inv = tri_edges.copy()
    inv.data = 1.0 / inv.data
    return a.multiply(a @ inv).tocsr()
