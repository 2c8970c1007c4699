"""Input coercion shared by the estimators."""

import numpy as np
import scipy.sparse as sp

from .graph import Graph, from_adjacency, from_edges, load_graph


def check_graph(X) -> Graph:
    """Coerce ``X`` to a :class:`Graph`.

    Accepts a ``Graph``, a path to a graph file, a square adjacency matrix
    (dense or scipy.sparse), an ``(m, 2)`` integer edge array, or anything
    with an ``edges()`` / ``number_of_nodes()`` interface such as a networkx
    graph.
    """
    if isinstance(X, Graph):
        return X
    if isinstance(X, (str, bytes)) or hasattr(X, "__fspath__"):
        return load_graph(X)
    if sp.issparse(X):
        return from_adjacency(X)
    if hasattr(X, "number_of_nodes") and hasattr(X, "edges"):
        nodes = list(X.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        edges = [(index[u], index[v]) for u, v in X.edges()]
        return from_edges(np.asarray(edges, dtype=np.int64).reshape(-1, 2), n=len(nodes))
    arr = np.asarray(X)
    if arr.ndim == 2 and arr.shape[0] == arr.shape[1] and arr.shape[1] != 2:
        return from_adjacency(arr)
    if arr.ndim == 2 and arr.shape[1] == 2:
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError("edge arrays must hold integer node indices")
        return from_edges(arr)
    raise TypeError(f"cannot interpret {type(X).__name__} as a graph")


def check_nonnegative_vector(x, n: int, name: str = "x") -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise ValueError(f"{name} must have shape ({n},), got {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains non-finite values")
    if np.any(x < 0):
        raise ValueError(f"{name} must be nonnegative")
    return x


def check_unit_interval(value, name: str, closed_right: bool = True) -> float:
    value = float(value)
    ok = 0.0 <= value <= 1.0 if closed_right else 0.0 <= value < 1.0
    if not ok:
        bracket = "]" if closed_right else ")"
        raise ValueError(f"{name} must lie in [0, 1{bracket}, got {value}")
    return value
