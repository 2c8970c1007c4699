"""Undirected simple graphs: construction, file IO and structural predicates."""

from __future__ import annotations

import io
import logging
import os
from collections import deque
from dataclasses import dataclass, field
from typing import IO, Iterable, Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

logger = logging.getLogger(__name__)

Source = Union[str, os.PathLike, bytes, IO]


class GraphFormatError(ValueError):
    """Raised when a graph file cannot be parsed."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph in CSR form.

    Nodes are indexed ``0..n-1``; ``labels[i]`` holds the id node ``i`` had in
    the source file.  ``indices[indptr[i]:indptr[i + 1]]`` is the strictly
    increasing neighbour list of node ``i``.
    """

    indptr: np.ndarray
    indices: np.ndarray
    labels: np.ndarray
    repairs: dict = field(default_factory=dict)

    def __post_init__(self):
        for arr in (self.indptr, self.indices, self.labels):
            arr.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    m = edge_count

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    @property
    def neighbor_lists(self) -> list:
        return [self.neighbors(i) for i in range(self.n)]

    def edges(self) -> np.ndarray:
        """Undirected edges as an ``(m, 2)`` array with ``i < j``, sorted."""
        rows = np.repeat(np.arange(self.n), self.degrees)
        mask = rows < self.indices
        return np.column_stack([rows[mask], self.indices[mask]])

    def adjacency(self, dtype=float) -> sp.csr_matrix:
        data = np.ones(len(self.indices), dtype=dtype)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def has_edge(self, i: int, j: int) -> bool:
        nb = self.neighbors(i)
        pos = np.searchsorted(nb, j)
        return bool(pos < len(nb) and nb[pos] == j)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.labels, other.labels)
        )

    def __hash__(self):
        return hash((self.n, self.indices.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.edge_count})"

    def relabel(self, perm) -> "Graph":
        """Return the graph with node ``i`` moved to position ``perm[i]``."""
        perm = np.asarray(perm)
        if sorted(perm.tolist()) != list(range(self.n)):
            raise ValueError("perm must be a permutation of range(n)")
        e = self.edges()
        labels = np.empty_like(self.labels)
        labels[perm] = self.labels
        return from_edges(perm[e], n=self.n, labels=labels)

    def remove_edges(self, edges) -> "Graph":
        """Return a copy without the given ``(i, j)`` edges; node set is kept."""
        e = self.edges()
        drop = np.sort(np.asarray(edges, dtype=np.int64).reshape(-1, 2), axis=1)
        keys = e[:, 0] * self.n + e[:, 1]
        keep = ~np.isin(keys, drop[:, 0] * self.n + drop[:, 1])
        return from_edges(e[keep], n=self.n, labels=self.labels)

    def subgraph_edges(self, edges) -> "Graph":
        return from_edges(edges, n=self.n, labels=self.labels)


def from_edges(edges, n=None, labels=None) -> Graph:
    """Build a :class:`Graph` from 0-based integer pairs.

    Self-loops are dropped and duplicate or reversed pairs collapsed; the
    number of each repair is recorded in ``Graph.repairs``.  Without
    ``labels`` node ``i`` is labelled ``i + 1``, matching the 1-based files.
    """
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if n is None:
        n = int(e.max()) + 1 if len(e) else 0
    if n <= 0:
        raise ValueError("empty graph: zero nodes")
    if len(e) and (e.min() < 0 or e.max() >= n):
        raise ValueError("edge endpoint out of range")
    loops = e[:, 0] == e[:, 1]
    e = np.sort(e[~loops], axis=1)
    keys = np.unique(e[:, 0] * n + e[:, 1])
    dup = len(e) - len(keys)
    u, v = keys // n, keys % n
    rows = np.concatenate([u, v])
    cols = np.concatenate([v, u])
    order = np.lexsort((cols, rows))
    rows, cols = rows[order], cols[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
    if labels is None:
        labels = np.arange(1, n + 1, dtype=np.int64)
    labels = np.array(labels)
    if len(labels) != n:
        raise ValueError("labels must have length n")
    repairs = {"self_loops": int(loops.sum()), "duplicates": int(dup)}
    return Graph(indptr, cols.astype(np.int64), labels, repairs)


def from_adjacency(a) -> Graph:
    """Graph from a square (sparse or dense) matrix; nonzeros become edges, union of supports."""
    a = sp.coo_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError("adjacency matrix must be square")
    mask = a.data != 0
    return from_edges(np.column_stack([a.row[mask], a.col[mask]]), n=a.shape[0])


def _open_text(source: Source):
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(bytes(source).decode())
    if isinstance(source, (str, os.PathLike)):
        try:
            return open(source, "r", encoding="utf-8")
        except OSError as exc:
            raise GraphFormatError(f"cannot read {source}: {exc}") from exc
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode()
    return io.StringIO(data)


def _parse_edge_list(lines: Iterable[str], zero_based: bool):
    ids, pairs = [], []
    zero_weight = 0
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) > 3:
            raise GraphFormatError(f"expected 'u v [weight]', got {raw.strip()!r}", lineno)
        try:
            nodes = [int(tok) for tok in parts[:2]]
            weight = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise GraphFormatError(f"non-integer node id in {raw.strip()!r}", lineno) from None
        lowest = 0 if zero_based else 1
        if min(nodes) < lowest:
            raise GraphFormatError(f"node id below {lowest} in {raw.strip()!r}", lineno)
        ids.extend(nodes)
        if len(nodes) == 1:
            # lone id: isolated node
            continue
        if weight == 0:
            zero_weight += 1
            continue
        pairs.append(nodes)
    return ids, pairs, zero_weight


def _parse_matrix_market(lines: Iterable[str]):
    it = enumerate(lines, start=1)
    try:
        lineno, header = next(it)
    except StopIteration:
        raise GraphFormatError("empty file") from None
    tokens = header.strip().lower().split()
    if len(tokens) < 4 or tokens[0] != "%%matrixmarket" or tokens[1] != "matrix":
        raise GraphFormatError("missing '%%MatrixMarket matrix' header", lineno)
    if tokens[2] != "coordinate":
        raise GraphFormatError("only coordinate format is supported", lineno)
    fld = tokens[3]
    if fld not in ("pattern", "real", "integer", "double"):
        raise GraphFormatError(f"unsupported field {fld!r}", lineno)
    size = None
    pairs = []
    zero_weight = 0
    for lineno, raw in it:
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        parts = line.split()
        if size is None:
            try:
                size = [int(tok) for tok in parts]
            except ValueError:
                raise GraphFormatError(f"bad size line {line!r}", lineno) from None
            if len(size) != 3:
                raise GraphFormatError(f"bad size line {line!r}", lineno)
            continue
        want = 2 if fld == "pattern" else 3
        if len(parts) != want:
            raise GraphFormatError(f"expected {want} fields, got {line!r}", lineno)
        try:
            i, j = int(parts[0]), int(parts[1])
            w = float(parts[2]) if want == 3 else 1.0
        except ValueError:
            raise GraphFormatError(f"malformed entry {line!r}", lineno) from None
        if not (1 <= i <= size[0] and 1 <= j <= size[1]):
            raise GraphFormatError(f"index out of range in {line!r}", lineno)
        if w == 0:
            zero_weight += 1
            continue
        pairs.append((i - 1, j - 1))
    if size is None:
        raise GraphFormatError("missing size line")
    if size[0] != size[1]:
        raise GraphFormatError("adjacency matrix must be square")
    return size[0], pairs, zero_weight


def _sniff_format(source):
    if isinstance(source, (str, os.PathLike)):
        if str(source).lower().endswith(".mtx"):
            return "matrix-market"
        return "edge-list"
    return None


def load_graph(source: Source, format: str = "auto", zero_based: bool = False) -> Graph:
    """Read an edge list or Matrix Market file into a validated :class:`Graph`.

    ``format`` is ``"edge-list"``, ``"matrix-market"`` or ``"auto"`` (by
    extension or header).  Edges are symmetrized, self-loops and duplicates
    removed and weights binarized; the counts of these repairs end up in
    ``graph.repairs``.
    """
    fmt = format.replace("_", "-").lower()
    if fmt in ("mtx", "mm"):
        fmt = "matrix-market"
    if fmt in ("edgelist", "edges", "txt"):
        fmt = "edge-list"
    with _open_text(source) as fh:
        text = fh.read()
    if fmt == "auto":
        fmt = _sniff_format(source)
        if fmt is None or text.lstrip().lower().startswith("%%matrixmarket"):
            fmt = "matrix-market" if text.lstrip().lower().startswith("%%matrixmarket") else "edge-list"
    lines = text.splitlines()
    if fmt == "edge-list":
        ids, pairs, zero_weight = _parse_edge_list(lines, zero_based)
        if not ids:
            raise GraphFormatError("empty graph: zero nodes")
        labels = np.unique(np.asarray(ids, dtype=np.int64))
        e = np.searchsorted(labels, np.asarray(pairs, dtype=np.int64).reshape(-1, 2))
        g = from_edges(e, n=len(labels), labels=labels)
    elif fmt == "matrix-market":
        n, pairs, zero_weight = _parse_matrix_market(lines)
        if n == 0:
            raise GraphFormatError("empty graph: zero nodes")
        g = from_edges(np.asarray(pairs, dtype=np.int64).reshape(-1, 2), n=n,
                       labels=np.arange(1, n + 1, dtype=np.int64))
    else:
        raise ValueError(f"unknown graph format {format!r}")
    g.repairs["zero_weight"] = zero_weight
    g.repairs["input_entries"] = len(pairs) + zero_weight
    if g.repairs["self_loops"] or g.repairs["duplicates"] or zero_weight:
        logger.info("graph repairs: %s", g.repairs)
    return g


def write_edge_list(g: Graph, dest=None) -> str:
    """Serialize with original labels; isolated nodes appear as single-id lines."""
    out = io.StringIO()
    e = g.edges()
    for i, j in e:
        out.write(f"{g.labels[i]} {g.labels[j]}\n")
    for i in np.flatnonzero(g.degrees == 0):
        out.write(f"{g.labels[i]}\n")
    text = out.getvalue()
    if dest is not None:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def write_matrix_market(g: Graph, dest=None) -> str:
    e = g.edges()
    lines = ["%%MatrixMarket matrix coordinate pattern symmetric", f"{g.n} {g.n} {len(e)}"]
    lines += [f"{j + 1} {i + 1}" for i, j in e]
    text = "\n".join(lines) + "\n"
    if dest is not None:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


@dataclass(frozen=True)
class ComponentReport:
    component_ids: np.ndarray
    num_components: int
    is_connected: bool
    is_bipartite: bool
    # per-component flag, indexed by component id
    bipartite_components: np.ndarray
    # some component with at least one edge is bipartite
    periodic: bool


def components(g: Graph) -> ComponentReport:
    """Connected components and per-component two-colouring."""
    ncomp, labels = connected_components(g.adjacency(), directed=False)
    colour = np.full(g.n, -1, dtype=np.int8)
    bip = np.ones(ncomp, dtype=bool)
    indptr, indices = g.indptr, g.indices
    for start in range(g.n):
        if colour[start] >= 0:
            continue
        colour[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in indices[indptr[u]:indptr[u + 1]]:
                if colour[v] < 0:
                    colour[v] = 1 - colour[u]
                    queue.append(v)
                elif colour[v] == colour[u]:
                    bip[labels[u]] = False
    has_edge = np.bincount(labels, weights=g.degrees, minlength=ncomp) > 0
    return ComponentReport(
        component_ids=labels,
        num_components=int(ncomp),
        is_connected=ncomp == 1,
        is_bipartite=bool(bip.all()),
        bipartite_components=bip,
        periodic=bool((bip & has_edge).any()),
    )


def map_support_graph(g: Graph, spec, ts=None) -> Graph:
    """Support graph of the combined map for ``spec`` (a ``MapSpec``).

    For ``alpha > 0`` every edge of ``g`` is in the support.  For ``alpha == 0``
    only edges lying on at least one triangle remain.
    """
    if spec.alpha > 0:
        return g
    if ts is None:
        from .triangles import enumerate_triangles

        ts = enumerate_triangles(g)
    tri = ts.triangles
    e = np.concatenate([tri[:, [0, 1]], tri[:, [0, 2]], tri[:, [1, 2]]])
    return g.subgraph_edges(e)
