"""Reference immersions with known invariants.

Each entry carries analytic first and second partials, so the geometry
error and the differencing error can be separated; switching an entry
to FD mode exercises the finite-difference machinery against the same
expected values at a looser tolerance.

Chart domains sit strictly inside periodicity cells, so no wrap
handling is needed anywhere downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnknownSurface
from .surfaces import ChartDomain, SurfaceImmersion

SQ2 = np.sqrt(2.0)
SQ3 = np.sqrt(3.0)


@dataclass(frozen=True)
class CatalogEntry:
    surface: SurfaceImmersion
    expected: dict
    notes: str = ""


# -- geodesic 2-sphere -------------------------------------------------------

def _sphere(u, v):
    cu, su, cv, sv = np.cos(u), np.sin(u), np.cos(v), np.sin(v)
    return np.array([cu * cv, cu * sv, su, 0.0, 0.0, 0.0])


def _sphere_jac(u, v):
    cu, su, cv, sv = np.cos(u), np.sin(u), np.cos(v), np.sin(v)
    gu = np.array([-su * cv, -su * sv, cu, 0.0, 0.0, 0.0])
    gv = np.array([-cu * sv, cu * cv, 0.0, 0.0, 0.0, 0.0])
    return np.column_stack([gu, gv])


def _sphere_hess(u, v):
    cu, su, cv, sv = np.cos(u), np.sin(u), np.cos(v), np.sin(v)
    guu = np.array([-cu * cv, -cu * sv, -su, 0.0, 0.0, 0.0])
    guv = np.array([su * sv, -su * cv, 0.0, 0.0, 0.0, 0.0])
    gvv = np.array([-cu * cv, -cu * sv, 0.0, 0.0, 0.0, 0.0])
    out = np.empty((6, 2, 2))
    out[:, 0, 0] = guu
    out[:, 0, 1] = out[:, 1, 0] = guv
    out[:, 1, 1] = gvv
    return out


# -- Clifford torus in a totally geodesic S^3 --------------------------------

def _clifford(u, v):
    return np.array([np.cos(u), np.sin(u), np.cos(v), np.sin(v), 0.0, 0.0]) / SQ2


def _clifford_jac(u, v):
    gu = np.array([-np.sin(u), np.cos(u), 0.0, 0.0, 0.0, 0.0]) / SQ2
    gv = np.array([0.0, 0.0, -np.sin(v), np.cos(v), 0.0, 0.0]) / SQ2
    return np.column_stack([gu, gv])


def _clifford_hess(u, v):
    guu = np.array([-np.cos(u), -np.sin(u), 0.0, 0.0, 0.0, 0.0]) / SQ2
    gvv = np.array([0.0, 0.0, -np.cos(v), -np.sin(v), 0.0, 0.0]) / SQ2
    out = np.zeros((6, 2, 2))
    out[:, 0, 0] = guu
    out[:, 1, 1] = gvv
    return out


# -- equilateral (hexagonal-lattice) flat torus ------------------------------

def _equilateral(u, v):
    return np.array([np.cos(u), np.sin(u), np.cos(v), np.sin(v),
                     np.cos(u + v), np.sin(u + v)]) / SQ3


def _equilateral_jac(u, v):
    w = u + v
    gu = np.array([-np.sin(u), np.cos(u), 0.0, 0.0, -np.sin(w), np.cos(w)]) / SQ3
    gv = np.array([0.0, 0.0, -np.sin(v), np.cos(v), -np.sin(w), np.cos(w)]) / SQ3
    return np.column_stack([gu, gv])


def _equilateral_hess(u, v):
    w = u + v
    cw, sw = np.cos(w), np.sin(w)
    guu = np.array([-np.cos(u), -np.sin(u), 0.0, 0.0, -cw, -sw]) / SQ3
    guv = np.array([0.0, 0.0, 0.0, 0.0, -cw, -sw]) / SQ3
    gvv = np.array([0.0, 0.0, -np.cos(v), -np.sin(v), -cw, -sw]) / SQ3
    out = np.empty((6, 2, 2))
    out[:, 0, 0] = guu
    out[:, 0, 1] = out[:, 1, 0] = guv
    out[:, 1, 1] = gvv
    return out


# -- Veronese surface in a totally geodesic S^4 ------------------------------
#
# Quadratic image of the radius-sqrt(3) 2-sphere in latitude/longitude
# coordinates; induced metric 3(du^2 + cos^2 u dv^2), so the intrinsic
# curvature is 1/3 everywhere.

def _veronese(u, v):
    cu2 = np.cos(u) ** 2
    s2u = np.sin(2 * u)
    return np.array([
        (SQ3 / 2) * cu2 * np.sin(2 * v),
        (SQ3 / 2) * s2u * np.cos(v),
        (SQ3 / 2) * s2u * np.sin(v),
        (SQ3 / 2) * cu2 * np.cos(2 * v),
        (3 * cu2 - 2) / 2,
        0.0,
    ])


def _veronese_jac(u, v):
    cu2 = np.cos(u) ** 2
    s2u, c2u = np.sin(2 * u), np.cos(2 * u)
    s2v, c2v = np.sin(2 * v), np.cos(2 * v)
    cv, sv = np.cos(v), np.sin(v)
    gu = np.array([
        -(SQ3 / 2) * s2u * s2v,
        SQ3 * c2u * cv,
        SQ3 * c2u * sv,
        -(SQ3 / 2) * s2u * c2v,
        -1.5 * s2u,
        0.0,
    ])
    gv = np.array([
        SQ3 * cu2 * c2v,
        -(SQ3 / 2) * s2u * sv,
        (SQ3 / 2) * s2u * cv,
        -SQ3 * cu2 * s2v,
        0.0,
        0.0,
    ])
    return np.column_stack([gu, gv])


def _veronese_hess(u, v):
    cu2 = np.cos(u) ** 2
    s2u, c2u = np.sin(2 * u), np.cos(2 * u)
    s2v, c2v = np.sin(2 * v), np.cos(2 * v)
    cv, sv = np.cos(v), np.sin(v)
    guu = np.array([
        -SQ3 * c2u * s2v,
        -2 * SQ3 * s2u * cv,
        -2 * SQ3 * s2u * sv,
        -SQ3 * c2u * c2v,
        -3.0 * c2u,
        0.0,
    ])
    guv = np.array([
        -SQ3 * s2u * c2v,
        -SQ3 * c2u * sv,
        SQ3 * c2u * cv,
        SQ3 * s2u * s2v,
        0.0,
        0.0,
    ])
    gvv = np.array([
        -2 * SQ3 * cu2 * s2v,
        -(SQ3 / 2) * s2u * cv,
        -(SQ3 / 2) * s2u * sv,
        -2 * SQ3 * cu2 * c2v,
        0.0,
        0.0,
    ])
    out = np.empty((6, 2, 2))
    out[:, 0, 0] = guu
    out[:, 0, 1] = out[:, 1, 0] = guv
    out[:, 1, 1] = gvv
    return out


_TWO_PI = 2 * np.pi

_ENTRIES = {
    "geodesic-sphere": CatalogEntry(
        surface=SurfaceImmersion(
            name="geodesic-sphere",
            chart=ChartDomain(-1.25, 1.25, 0.1, _TWO_PI - 0.1),
            eval_fn=_sphere, jac_fn=_sphere_jac, hess_fn=_sphere_hess),
        expected={"K": 1.0, "KN": 0.0, "S": 0.0, "minimal": True,
                  "rank_case": "c", "superminimal": True},
        notes="totally geodesic; every fiber direction is excluded"),
    "clifford-torus": CatalogEntry(
        surface=SurfaceImmersion(
            name="clifford-torus",
            chart=ChartDomain(0.1, _TWO_PI - 0.1, 0.1, _TWO_PI - 0.1),
            eval_fn=_clifford, jac_fn=_clifford_jac, hess_fn=_clifford_hess),
        expected={"K": 0.0, "KN": 0.0, "S": 2.0, "minimal": True,
                  "rank_case": "b", "superminimal": False},
        notes="flat, rank-one; excluded fiber set is a great circle"),
    "equilateral-torus": CatalogEntry(
        surface=SurfaceImmersion(
            name="equilateral-torus",
            chart=ChartDomain(0.1, _TWO_PI - 0.1, 0.1, _TWO_PI - 0.1),
            eval_fn=_equilateral, jac_fn=_equilateral_jac,
            hess_fn=_equilateral_hess),
        expected={"K": 0.0, "KN": 4.0, "S": 2.0, "minimal": True,
                  "rank_case": "a", "superminimal": True},
        notes="flat, rank-two; excluded fiber set is an antipodal pair"),
    "veronese": CatalogEntry(
        surface=SurfaceImmersion(
            name="veronese",
            chart=ChartDomain(-1.25, 1.25, 0.1, _TWO_PI - 0.1),
            eval_fn=_veronese, jac_fn=_veronese_jac, hess_fn=_veronese_hess),
        expected={"K": 1.0 / 3.0, "KN": 16.0 / 9.0, "S": 4.0 / 3.0,
                  "minimal": True, "rank_case": "a", "superminimal": True},
        notes="constant curvature 1/3 inside a totally geodesic S^4"),
}


def names() -> list[str]:
    return sorted(_ENTRIES)


def get(name: str) -> CatalogEntry:
    try:
        return _ENTRIES[name]
    except KeyError:
        raise UnknownSurface(
            f"unknown surface {name!r}; available: {', '.join(names())}") from None
