"""Quadrature on closed circles and on the separation path along the real axis.

Every integral here is normalized by ``1/(2*pi*i)``, so integrating
``1/(z - p)`` around a circle that encloses ``p`` gives 1.

The separation path is the open curve ``[-R, -d] + C+(0, d) + [d, R]``
traversed from ``-R`` to ``R``, where ``C+(0, d)`` is the upper half of the
circle of radius ``d`` about the origin, run clockwise over the top.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NodeEvaluationFailure

__all__ = [
    "CirclePath",
    "SeparationPath",
    "integrate_circle",
    "integrate_separation",
    "quadrature_sum",
]

GL_PANEL = 16


@dataclass(frozen=True)
class CirclePath:
    center: complex
    radius: float
    nodes: int = 64

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if self.nodes < 4:
            raise ValueError(f"need at least 4 nodes, got {self.nodes}")
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))

    def points(self) -> np.ndarray:
        theta = 2.0 * np.pi * np.arange(self.nodes) / self.nodes
        return self.center + self.radius * np.exp(1j * theta)

    def rule(self):
        """Nodes ``z_j`` and weights ``w_j`` with ``sum w_j f(z_j) ~ (1/2 pi i) oint f``.

        On the circle ``dz = i (z - c) dtheta``, so the trapezoid weight is
        ``(z_j - c) / M``.
        """
        z = self.points()
        return z, (z - self.center) / self.nodes


@dataclass(frozen=True)
class SeparationPath:
    cut_radius: float
    outer_radius: float
    segment_nodes: int = 128
    arc_nodes: int = 32

    def __post_init__(self):
        if not 0 < self.cut_radius < self.outer_radius:
            raise ValueError(
                f"need 0 < cut_radius < outer_radius, got {self.cut_radius}, {self.outer_radius}"
            )
        if self.segment_nodes < 1 or self.arc_nodes < 1:
            raise ValueError("node counts must be positive")

    def rule(self):
        """Nodes and weights (already divided by ``2 pi i``) in path order."""
        d, big = float(self.cut_radius), float(self.outer_radius)
        panels = max(1, self.segment_nodes // GL_PANEL)
        per_panel = max(1, self.segment_nodes // panels)
        x, w = _graded_gauss(d, big, panels, per_panel)
        # left segment runs from -R to -d: mirror of the right one, reversed
        left_z, left_w = -x[::-1], w[::-1]
        t, wt = np.polynomial.legendre.leggauss(self.arc_nodes)
        # leggauss nodes ascend, so theta runs from pi down to 0 in path order
        theta = 0.5 * np.pi * (1.0 - t)
        arc_z = d * np.exp(1j * theta)
        arc_w = -0.5 * np.pi * wt * 1j * arc_z
        z = np.concatenate([left_z, arc_z, x])
        weights = np.concatenate([left_w, arc_w, w]).astype(np.complex128)
        return z.astype(np.complex128), weights / (2j * np.pi)


def _graded_gauss(a: float, b: float, panels: int, per_panel: int):
    """Composite Gauss-Legendre on [a, b] with geometrically graded panels."""
    edges = np.geomspace(a, b, panels + 1)
    t, wt = np.polynomial.legendre.leggauss(per_panel)
    xs, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        xs.append(lo + half * (t + 1.0))
        ws.append(half * wt)
    return np.concatenate(xs), np.concatenate(ws)


def quadrature_sum(f: Callable, nodes, weights, workers: int | None = None):
    """Evaluate ``f`` at every node and accumulate ``sum w_j f(z_j)`` in node order.

    With ``workers > 1`` the evaluations run on a thread pool; the reduction
    order is unchanged, so results are reproducible bit for bit.
    """

    def call(z):
        try:
            return np.asarray(f(z), dtype=np.complex128)
        except Exception as exc:  # noqa: BLE001 - re-raised with the node attached
            raise NodeEvaluationFailure(complex(z), exc) from exc

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(call, nodes))
    else:
        values = [call(z) for z in nodes]
    total = np.zeros_like(values[0])
    for w, v in zip(weights, values):
        total = total + w * v
    return total


def integrate_circle(f: Callable, path: CirclePath, workers: int | None = None):
    """Trapezoidal approximation of ``(1/2 pi i) oint f(z) dz`` over ``path``."""
    z, w = path.rule()
    return quadrature_sum(f, z, w, workers)


def integrate_separation(f: Callable, path: SeparationPath, workers: int | None = None):
    """Approximate ``(1/2 pi i) int f(z) dz`` along the separation path.

    Straight pieces use composite Gauss-Legendre on panels graded towards
    ``+-cut_radius``; the arc uses Gauss-Legendre in the angle.
    """
    z, w = path.rule()
    return quadrature_sum(f, z, w, workers)
