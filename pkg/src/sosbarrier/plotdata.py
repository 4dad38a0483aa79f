"""CSV emitters for phase-plane and comparison-ODE plot data.

Three products, all plain CSV so any plotting stack can consume them:

  * vector-field samples ``x1,x2,f1,f2`` on a rectangular grid,
  * zero-level-set segments of a certificate polynomial via marching
    squares, columns ``x1a,x2a,x1b,x2b``,
  * solutions theta(t) of the scalar comparison ODE for a list of
    (alpha, beta) pairs in long format ``alpha,beta,t,theta``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .poly import Polynomial
from .system import ContinuousSystem, PsiFunction, theta_closed_form


@dataclass(frozen=True)
class GridSpec:
    xmin: float = -3.0
    xmax: float = 3.0
    ymin: float = -3.0
    ymax: float = 3.0
    resolution: int = 41

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return (np.linspace(self.xmin, self.xmax, self.resolution),
                np.linspace(self.ymin, self.ymax, self.resolution))


class PlotDataError(ValueError):
    pass


def _require_planar(nvars: int) -> None:
    if nvars != 2:
        raise PlotDataError(
            f"phase-plane output supports exactly 2 variables, got {nvars}")


def vector_field_csv(system: ContinuousSystem, grid: GridSpec) -> str:
    """Sampled vector field, one row per grid node."""
    _require_planar(system.nvars)
    f1, f2 = (f.to_float() for f in system.field_vec)
    xs, ys = grid.axes()
    lines = ["x1,x2,f1,f2"]
    for x in xs:
        for y in ys:
            lines.append(f"{x!r},{y!r},{f1.evaluate((x, y))!r},{f2.evaluate((x, y))!r}")
    return "\n".join(lines) + "\n"


def _interp(pa, pb, va, vb):
    t = va / (va - vb)
    return (pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1]))


def level_set_segments(p: Polynomial, grid: GridSpec) -> list[tuple[float, float, float, float]]:
    """Zero-level-set line segments of p by marching squares on the grid."""
    _require_planar(p.nvars)
    pf = p.to_float()
    xs, ys = grid.axes()
    vals = np.array([[pf.evaluate((x, y)) for y in ys] for x in xs])
    segments = []
    for i in range(len(xs) - 1):
        for j in range(len(ys) - 1):
            corners = [(xs[i], ys[j]), (xs[i + 1], ys[j]),
                       (xs[i + 1], ys[j + 1]), (xs[i], ys[j + 1])]
            v = [vals[i, j], vals[i + 1, j], vals[i + 1, j + 1], vals[i, j + 1]]
            crossings = []
            for k in range(4):
                a, b = k, (k + 1) % 4
                if (v[a] > 0) != (v[b] > 0):
                    crossings.append(_interp(corners[a], corners[b], v[a], v[b]))
            # ambiguous saddle cells yield two segments by pairing in order
            for k in range(0, len(crossings) - 1, 2):
                (x1, y1), (x2, y2) = crossings[k], crossings[k + 1]
                segments.append((x1, y1, x2, y2))
    return segments


def level_set_csv(p: Polynomial, grid: GridSpec) -> str:
    lines = ["x1a,x2a,x1b,x2b"]
    for x1, y1, x2, y2 in level_set_segments(p, grid):
        lines.append(f"{x1!r},{y1!r},{x2!r},{y2!r}")
    return "\n".join(lines) + "\n"


def theta_curves_csv(
    pairs: Sequence[tuple[float, float]],
    theta0: float = -1.0,
    t_end: float = 5.0,
    steps: int = 200,
) -> str:
    """Comparison-ODE solutions for several (alpha, beta) pairs."""
    lines = ["alpha,beta,t,theta"]
    ts = np.linspace(0.0, t_end, steps + 1)
    for alpha, beta in pairs:
        psi = PsiFunction.quadratic(alpha, beta)
        for t in ts:
            th = theta_closed_form(psi, theta0, float(t))
            lines.append(f"{alpha!r},{beta!r},{t!r},{th!r}")
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> tuple[list[str], list[list[float]]]:
    """Minimal reader for the CSVs this module writes (round-trip checks)."""
    rows = [r for r in text.splitlines() if r.strip()]
    header = rows[0].split(",")
    data = [[float(tok) for tok in r.split(",")] for r in rows[1:]]
    for row in data:
        if len(row) != len(header):
            raise PlotDataError("ragged CSV row")
    return header, data
