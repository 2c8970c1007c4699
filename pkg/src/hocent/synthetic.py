"""Wheel-with-leaves graphs and closed-form hub-versus-rim predictions.

The family: a hub (node 0) joined to every node of an ``m``-cycle (nodes
``1..m``), each cycle node carrying ``k`` pendant leaves.  By symmetry the
positive eigenvector is ``[x, y 1_m, z 1_mk]`` and for ``p = 1`` the
eigenproblem collapses to a scalar quadratic in ``lambda``.  The hub beats a
rim node (``x > y``) iff a simple inequality on ``lambda`` holds.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Union

import numpy as np

from .graph import Graph, from_edges
from .solver import MapSpec, solve
from .triangles import check_tensor, enumerate_triangles

# relative margin below which the closed form is treated as an equality
BOUNDARY_RTOL = 1e-12


@dataclass(frozen=True)
class WheelParams:
    m: int
    k: int = 0

    def __post_init__(self):
        if self.m < 3:
            raise ValueError(f"the cycle needs m >= 3 nodes, got {self.m}")
        if self.k < 0:
            raise ValueError(f"k must be nonnegative, got {self.k}")

    @property
    def n(self) -> int:
        return 1 + self.m + self.m * self.k


def generate_wheel(params: Union[WheelParams, int], k: Optional[int] = None) -> Graph:
    """Hub 0, cycle nodes ``1..m``, leaves of cycle node ``i`` after them in order.

    Labels are 1-based, so the hub is labelled 1.
    """
    if not isinstance(params, WheelParams):
        params = WheelParams(params, 0 if k is None else k)
    m, k = params.m, params.k
    cycle = np.arange(1, m + 1)
    spokes = np.column_stack([np.zeros(m, dtype=np.int64), cycle])
    rim = np.column_stack([cycle, np.roll(cycle, -1)])
    owners = np.repeat(cycle, k)
    leaves = np.column_stack([owners, m + 1 + np.arange(m * k)])
    n = params.n
    return from_edges(np.vstack([spokes, rim, leaves]), n=n)


def _positive_root(b: float, c: float) -> float:
    """Positive root of ``lambda^2 - b lambda - c = 0`` with ``c >= 0``.

    Uses the cancellation-free form of the quadratic formula.
    """
    disc = math.sqrt(b * b + 4.0 * c)
    if b >= 0:
        return 0.5 * (b + disc)
    return 2.0 * c / (disc - b)


@dataclass(frozen=True)
class Crossover:
    """Closed-form comparison of hub ``x`` and rim ``y``.

    ``margin > 0`` means ``x > y``; ``x_gt_y`` is ``None`` on the boundary.
    """

    x_gt_y: Optional[bool]
    margin: float
    eigenvalue: float


def _exact(alpha):
    return Fraction(str(alpha)) if not isinstance(alpha, Fraction) else alpha


def analytic_crossover(params: Union[WheelParams, tuple], alpha: float, tensor: str = "B",
                       p: float = 1.0) -> Crossover:
    """Closed-form prediction of whether the hub outranks a rim node.

    ``alpha == 1`` is standard eigenvector centrality.  For ``alpha < 1`` the
    tensor term uses ``B``, ``C`` or ``L`` with ``p = 1``; those formulas
    assume the rim has no triangle of its own, so ``m >= 4``.
    """
    if not isinstance(params, WheelParams):
        params = WheelParams(*params)
    m, k = params.m, params.k
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    tensor = check_tensor(tensor)
    if alpha < 1:
        if p != 1:
            raise ValueError("closed forms are available for p = 1 only")
        if tensor == "W":
            raise ValueError("no closed form for the random-walk tensor")
        if m < 4:
            raise ValueError("closed forms with a tensor term need m >= 4 (m = 3 is K4)")
    a = _exact(alpha)
    if alpha == 1:
        # lambda x = m y, lambda = 1 + sqrt(1 + m + k)
        lam = 1.0 + math.sqrt(1.0 + m + k)
        margin = Fraction(m * (m - 3) - k)
        return Crossover(None if margin == 0 else margin > 0, float(margin), lam)
    if tensor == "B":
        lam = _positive_root(2.0, float((2 - a) ** 2 * m + k * a * a))
        threshold = (2 - a) / (a * a) * ((2 - a) * m * m + (a - 4) * m)
        margin = threshold - k
        return Crossover(None if margin == 0 else margin > 0, float(margin), lam)
    af = float(alpha)
    if tensor == "C":
        c1 = 2.0 * (1.0 - af) / ((k + 3) * (k + 2))
        c2 = 2.0 * (1.0 - af) / (m - 1)
    else:
        c1 = 2.0 * (1.0 - af) / (m + 2 * k + 3)
        c2 = 2.0 * (1.0 - af) / (k + 2)
    lam = _positive_root(2.0 * af + c1, (af + c1) * (af * m + c2) + k * af * af)
    lhs = af * m + c2
    margin = lhs - lam
    boundary = abs(margin) <= BOUNDARY_RTOL * max(lhs, lam)
    return Crossover(None if boundary else margin > 0, margin, lam)


@dataclass(frozen=True)
class GridCell:
    m: int
    k: int
    alpha: float
    tensor: str
    numeric_x_gt_y: Optional[bool]
    analytic_x_gt_y: Optional[bool]
    lam: float
    numeric_lambda: float
    x: float
    y: float
    converged: bool

    @property
    def agrees(self) -> Optional[bool]:
        """``None`` when either side is on the boundary."""
        if self.numeric_x_gt_y is None or self.analytic_x_gt_y is None:
            return None
        return self.numeric_x_gt_y == self.analytic_x_gt_y


GRID_COLUMNS = ("m", "k", "alpha", "tensor", "numeric_x_gt_y", "analytic_x_gt_y", "lambda",
                "numeric_lambda", "x", "y")


def solve_wheel(params: WheelParams, alpha: float, tensor: str = "B", p: float = 1.0,
                tol: float = 1e-12, max_iter: int = 100000):
    g = generate_wheel(params)
    ts = enumerate_triangles(g) if alpha < 1 else None
    return solve(g, ts, MapSpec(alpha=alpha, p=p, tensor=tensor), tol=tol, max_iter=max_iter)


def _cell(m, k, alpha, tensor, p, tol, max_iter):
    params = WheelParams(m, k)
    rep = solve_wheel(params, alpha, tensor, p, tol, max_iter)
    vec = rep.eigenvector
    x, y = float(vec[0]), float(vec[1])
    numeric = None if abs(x - y) < 100 * tol * max(x, y) else x > y
    try:
        pred = analytic_crossover(params, alpha, tensor, p)
        analytic, lam = pred.x_gt_y, pred.eigenvalue
    except ValueError:
        analytic, lam = None, float("nan")
    return GridCell(m, k, float(alpha), tensor, numeric, analytic, lam, rep.eigenvalue, x, y,
                    rep.converged)


def sweep_phase_diagram(
    m_values: Iterable[int],
    k_values: Union[Iterable[int], Callable[[int], Iterable[int]]],
    alpha: float,
    tensor: str = "B",
    p: float = 1.0,
    tol: float = 1e-12,
    max_iter: int = 100000,
    threads: int = 1,
) -> list:
    """Numeric and closed-form ``x > y`` over a grid of ``(m, k)``.

    ``k_values`` may be a function of ``m``.  Cells are returned in ``(m, k)``
    order whatever ``threads`` is.
    """
    tensor = check_tensor(tensor)
    cells = []
    for m in m_values:
        ks = k_values(m) if callable(k_values) else k_values
        cells.extend((int(m), int(k)) for k in ks)

    def one(mk):
        return _cell(mk[0], mk[1], alpha, tensor, p, tol, max_iter)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, cells))
    return [one(mk) for mk in cells]
