"""Metric-only Gauss curvature (Brioschi formula).

Independent oracle for the frame-based curvature pipeline: uses only
the first fundamental form E, F, G of the chart and finite differences
of its coefficients, never the normal frame or the second fundamental
form.
"""

from __future__ import annotations

import numpy as np

from .surfaces import SurfaceImmersion

BRIOSCHI_STEP = 3e-4


def first_fundamental_form(surface: SurfaceImmersion, u: float, v: float):
    jac = surface.jacobian(u, v)
    gu, gv = jac[:, 0], jac[:, 1]
    return float(gu @ gu), float(gu @ gv), float(gv @ gv)


def brioschi_curvature(surface: SurfaceImmersion, u: float, v: float,
                       step: float = BRIOSCHI_STEP) -> float:
    """Gauss curvature from E, F, G alone.

    First and second derivatives of the metric coefficients by central
    differences with the given step; the chart must contain the 3x3
    stencil around (u, v).
    """
    h = step

    def efg(uu, vv):
        return np.array(first_fundamental_form(surface, uu, vv))

    c = efg(u, v)
    pu, mu = efg(u + h, v), efg(u - h, v)
    pv, mv = efg(u, v + h), efg(u, v - h)
    pp, pm = efg(u + h, v + h), efg(u + h, v - h)
    mp, mm = efg(u - h, v + h), efg(u - h, v - h)

    d_u = (pu - mu) / (2 * h)
    d_v = (pv - mv) / (2 * h)
    d_uu = (pu - 2 * c + mu) / h**2
    d_vv = (pv - 2 * c + mv) / h**2
    d_uv = (pp - pm - mp + mm) / (4 * h**2)

    E, F, G = c
    E_u, F_u, G_u = d_u
    E_v, F_v, G_v = d_v
    E_vv, G_uu = d_vv[0], d_uu[2]
    F_uv = d_uv[1]

    m1 = np.array([
        [-0.5 * E_vv + F_uv - 0.5 * G_uu, 0.5 * E_u, F_u - 0.5 * E_v],
        [F_v - 0.5 * G_u, E, F],
        [0.5 * G_v, F, G],
    ])
    m2 = np.array([
        [0.0, 0.5 * E_v, 0.5 * G_u],
        [0.5 * E_v, E, F],
        [0.5 * G_u, F, G],
    ])
    denom = (E * G - F * F) ** 2
    return float((np.linalg.det(m1) - np.linalg.det(m2)) / denom)
