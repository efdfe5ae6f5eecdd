"""Parametric immersions of a 2-D chart into the unit 5-sphere.

A surface is a callable ``(u, v) -> R^6`` landing on the unit sphere,
together with a rectangular chart domain and (optionally) analytic first
and second partial derivatives.  When analytic derivatives are missing,
or when ``derivative_mode`` is forced to ``"fd"``, central finite
differences are used: step ``max(1e-5, |p|*1e-5)`` for first derivatives
and ``1e-4`` for second derivatives.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .errors import ChartBoundary

FD_STEP_FIRST = 1e-5
FD_STEP_SECOND = 1e-4


@dataclass(frozen=True)
class ChartDomain:
    """Open rectangle in (u, v) parameter space."""

    umin: float
    umax: float
    vmin: float
    vmax: float

    def contains(self, u: float, v: float, margin: float = 0.0) -> bool:
        return (self.umin + margin <= u <= self.umax - margin
                and self.vmin + margin <= v <= self.vmax - margin)

    def require(self, u: float, v: float, margin: float = 0.0) -> None:
        if not self.contains(u, v, margin):
            raise ChartBoundary(
                f"point ({u:.6g}, {v:.6g}) outside chart "
                f"[{self.umin}, {self.umax}] x [{self.vmin}, {self.vmax}] "
                f"(margin {margin:g})")

    def interior_grid(self, nu: int, nv: int, edge_fraction: float = 0.02):
        """Evenly spaced grid pulled in from the chart edges."""
        du = (self.umax - self.umin) * edge_fraction
        dv = (self.vmax - self.vmin) * edge_fraction
        us = np.linspace(self.umin + du, self.umax - du, nu)
        vs = np.linspace(self.vmin + dv, self.vmax - dv, nv)
        return us, vs


@dataclass(frozen=True)
class SurfaceImmersion:
    """Immersion of a chart into S^5 with derivative access.

    ``jac_fn`` returns the 6x2 matrix of first partials (columns g_u, g_v);
    ``hess_fn`` the 6x2x2 array of second partials.  Both optional.
    """

    name: str
    chart: ChartDomain
    eval_fn: Callable[[float, float], np.ndarray]
    jac_fn: Optional[Callable[[float, float], np.ndarray]] = None
    hess_fn: Optional[Callable[[float, float], np.ndarray]] = None
    derivative_mode: str = "analytic"

    def __post_init__(self):
        if self.derivative_mode not in ("analytic", "fd"):
            raise ValueError(f"bad derivative_mode {self.derivative_mode!r}")

    @property
    def analytic(self) -> bool:
        return self.derivative_mode == "analytic" and self.jac_fn is not None

    def with_mode(self, mode: str) -> "SurfaceImmersion":
        return replace(self, derivative_mode=mode)

    def point(self, u: float, v: float) -> np.ndarray:
        return np.asarray(self.eval_fn(u, v), dtype=float)

    def unit_defect(self, u: float, v: float) -> float:
        return abs(np.linalg.norm(self.point(u, v)) - 1.0)

    def jacobian(self, u: float, v: float) -> np.ndarray:
        if self.analytic:
            return np.asarray(self.jac_fn(u, v), dtype=float)
        h = max(FD_STEP_FIRST, np.hypot(u, v) * FD_STEP_FIRST)
        gu = (self.point(u + h, v) - self.point(u - h, v)) / (2.0 * h)
        gv = (self.point(u, v + h) - self.point(u, v - h)) / (2.0 * h)
        return np.column_stack([gu, gv])

    def hessian(self, u: float, v: float) -> np.ndarray:
        """Second partials as a (6, 2, 2) array, hess[:, i, j] = d2g/dxi dxj."""
        if self.derivative_mode == "analytic" and self.hess_fn is not None:
            return np.asarray(self.hess_fn(u, v), dtype=float)
        h = FD_STEP_SECOND
        jp_u = self.jacobian(u + h, v)
        jm_u = self.jacobian(u - h, v)
        jp_v = self.jacobian(u, v + h)
        jm_v = self.jacobian(u, v - h)
        out = np.empty((6, 2, 2))
        out[:, :, 0] = (jp_u - jm_u) / (2.0 * h)
        out[:, :, 1] = (jp_v - jm_v) / (2.0 * h)
        # symmetrize the mixed entries
        mixed = 0.5 * (out[:, 0, 1] + out[:, 1, 0])
        out[:, 0, 1] = mixed
        out[:, 1, 0] = mixed
        return out

    def singular_values(self, u: float, v: float) -> np.ndarray:
        return np.linalg.svd(self.jacobian(u, v), compute_uv=False)
