"""Adapted orthonormal frames along a surface immersed in S^5.

A frame at p splits R^6 into the position line, the tangent plane
(e1, e2) and the normal 3-space (e3, e4, e5).  Per-point frames are
deterministic (fixed pivoting and sign rules); smooth frame *fields*
over a chart neighborhood are produced by :class:`FramePatch`, which
aligns every nearby normal frame to an anchor frame through the
closest-rotation (polar decomposition) map.  Certified invariants do
not depend on the gauge; smoothness only matters for differencing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateImmersion, ZeroSecondFundamentalForm
from .surfaces import SurfaceImmersion

RANK_TOL = 1e-8
_SIGN_EPS = 1e-12


@dataclass
class AdaptedFrame:
    """Orthonormal 5-frame at a chart point.

    ``v1``, ``v2`` are the chart components of e1, e2 (dg(vi) = ei);
    they are needed whenever a frame direction has to be realized as a
    chart displacement.
    """

    point: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    e3: Optional[np.ndarray] = None
    e4: Optional[np.ndarray] = None
    e5: Optional[np.ndarray] = None
    v1: Optional[np.ndarray] = None
    v2: Optional[np.ndarray] = None
    gauge: str = "generic"
    theta_reference: float = 0.0

    @property
    def tangent(self) -> np.ndarray:
        return np.column_stack([self.e1, self.e2])

    @property
    def normal(self) -> np.ndarray:
        return np.column_stack([self.e3, self.e4, self.e5])

    def vectors(self) -> np.ndarray:
        return np.column_stack([self.e1, self.e2, self.e3, self.e4, self.e5])

    def orthonormality_defect(self) -> float:
        cols = np.column_stack([self.point, *[c for c in
                                (self.e1, self.e2, self.e3, self.e4, self.e5)
                                if c is not None]])
        gram = cols.T @ cols
        return float(np.max(np.abs(gram - np.eye(gram.shape[0]))))


def build_tangent_frame(surface: SurfaceImmersion, p) -> AdaptedFrame:
    """Gram-Schmidt tangent frame from the chart partials at p.

    e1 is the normalized u-partial, e2 the v-partial orthogonalized
    against it; both are orthogonal to the position by construction of
    the sphere (checked only through the returned defect).
    """
    u, v = float(p[0]), float(p[1])
    surface.chart.require(u, v)
    g = surface.point(u, v)
    jac = surface.jacobian(u, v)
    svals = np.linalg.svd(jac, compute_uv=False)
    if svals[-1] < RANK_TOL:
        raise DegenerateImmersion(
            f"{surface.name}: chart fails to immerse at ({u:.4g}, {v:.4g}); "
            f"smallest singular value {svals[-1]:.3e}")
    gu, gv = jac[:, 0], jac[:, 1]
    # remove any numerical drift off the sphere's tangent space
    gu = gu - (gu @ g) * g
    gv = gv - (gv @ g) * g
    nu = np.linalg.norm(gu)
    e1 = gu / nu
    w = gv - (gv @ e1) * e1
    nw = np.linalg.norm(w)
    e2 = w / nw
    # chart components, from dg(v1) = e1, dg(v2) = e2
    coeff = np.linalg.lstsq(jac, np.column_stack([e1, e2]), rcond=None)[0]
    return AdaptedFrame(point=g, e1=e1, e2=e2,
                        v1=coeff[:, 0], v2=coeff[:, 1])


def _fix_sign(vec: np.ndarray) -> np.ndarray:
    """Flip so the first component exceeding a tiny threshold is positive."""
    for x in vec:
        if abs(x) > _SIGN_EPS:
            return vec if x > 0 else -vec
    return vec


def complete_orthonormal(base: np.ndarray, count: int) -> np.ndarray:
    """Deterministic orthonormal completion of the columns of ``base``.

    Greedy pivoting over the coordinate axes: repeatedly project the
    axes onto the remaining orthogonal complement and take the one with
    the largest residual norm (lowest index on ties), then apply the
    first-nonzero-positive sign rule.
    """
    dim = base.shape[0]
    cols = [base[:, k] for k in range(base.shape[1])]
    out = []
    for _ in range(count):
        best, best_norm = None, 1e-9
        for axis in range(dim):
            cand = np.zeros(dim)
            cand[axis] = 1.0
            for c in cols:
                cand -= (cand @ c) * c
            n = np.linalg.norm(cand)
            if n > best_norm + 1e-12:
                best, best_norm = cand, n
        vec = _fix_sign(best / best_norm)
        cols.append(vec)
        out.append(vec)
    return np.column_stack(out)


def normal_space_projector(frame: AdaptedFrame) -> np.ndarray:
    g, e1, e2 = frame.point, frame.e1, frame.e2
    return (np.eye(6) - np.outer(g, g)
            - np.outer(e1, e1) - np.outer(e2, e2))


def second_form_vectors(surface: SurfaceImmersion, p,
                        frame: AdaptedFrame) -> tuple[np.ndarray, np.ndarray]:
    """Ambient B(e1,e1) and B(e1,e2) from the chart Hessian."""
    u, v = float(p[0]), float(p[1])
    hess = surface.hessian(u, v)
    proj = normal_space_projector(frame)
    b11 = proj @ np.einsum('kij,i,j->k', hess, frame.v1, frame.v1)
    b12 = proj @ np.einsum('kij,i,j->k', hess, frame.v1, frame.v2)
    return b11, b12


def build_normal_frame(surface: SurfaceImmersion, p, tangent_frame: AdaptedFrame,
                       gauge: str = "generic") -> AdaptedFrame:
    """Attach e3, e4, e5 to a tangent frame.

    generic: deterministic completion of span{g, e1, e2}.
    B-aligned: e3 seeded by B(e1,e1) (or by B(e1,e2) if the former
    vanishes), e4 by Gram-Schmidt of the other one, e5 completed; the
    resulting (h^a_1j) matrix is lower-triangular.
    """
    fr = tangent_frame
    base = np.column_stack([fr.point, fr.e1, fr.e2])
    if gauge == "generic":
        normals = complete_orthonormal(base, 3)
        return AdaptedFrame(point=fr.point, e1=fr.e1, e2=fr.e2,
                            e3=normals[:, 0], e4=normals[:, 1],
                            e5=normals[:, 2], v1=fr.v1, v2=fr.v2,
                            gauge="generic",
                            theta_reference=fr.theta_reference)
    if gauge != "b-aligned":
        raise ValueError(f"unknown gauge {gauge!r}")

    b11, b12 = second_form_vectors(surface, p, fr)
    # trace-free part sets the scale: S = 2(|B11|^2 + |B12|^2) for minimal input
    scale = 2.0 * (b11 @ b11 + b12 @ b12)
    if scale < 1e-12:
        raise ZeroSecondFundamentalForm(
            f"{surface.name}: totally geodesic point at "
            f"({p[0]:.4g}, {p[1]:.4g}); B-aligned gauge undefined")
    n11, n12 = np.linalg.norm(b11), np.linalg.norm(b12)
    if n11 >= 1e-8 * max(n11, n12):
        e3 = b11 / n11
        w = b12 - (b12 @ e3) * e3
        nw = np.linalg.norm(w)
        if nw > 1e-8 * n12:
            e4 = w / nw
            e5 = complete_orthonormal(
                np.column_stack([base, e3, e4]), 1)[:, 0]
        else:  # rank one through B11: any deterministic completion
            rest = complete_orthonormal(np.column_stack([base, e3]), 2)
            e4, e5 = rest[:, 0], rest[:, 1]
    else:  # B11 ~ 0, surviving column B12 seeds e3
        e3 = b12 / n12
        rest = complete_orthonormal(np.column_stack([base, e3]), 2)
        e4, e5 = rest[:, 0], rest[:, 1]
    return AdaptedFrame(point=fr.point, e1=fr.e1, e2=fr.e2,
                        e3=e3, e4=e4, e5=e5, v1=fr.v1, v2=fr.v2,
                        gauge="b-aligned", theta_reference=fr.theta_reference)


def build_frame(surface: SurfaceImmersion, p, gauge: str = "generic") -> AdaptedFrame:
    """Tangent + normal frame in one call."""
    return build_normal_frame(surface, p, build_tangent_frame(surface, p), gauge)


def align_normal_basis(surface: SurfaceImmersion, u: float, v: float,
                       reference: np.ndarray) -> np.ndarray:
    """Orthonormal normal basis at (u, v) closest to ``reference``.

    Projects the reference columns onto the normal space at (u, v) and
    symmetrically orthonormalizes (polar factor).  Gauge-independent in
    the reference's own gauge class, and smooth in (u, v) as long as the
    normal spaces stay within a bounded rotation of the anchor.
    """
    fr = build_tangent_frame(surface, (u, v))
    proj = normal_space_projector(fr)
    m = proj @ reference
    uu, s, vt = np.linalg.svd(m, full_matrices=False)
    if s[-1] < 0.1:
        raise DegenerateImmersion(
            f"{surface.name}: normal-frame alignment unreliable at "
            f"({u:.4g}, {v:.4g}) (singular value {s[-1]:.3e}); "
            "anchor too far from evaluation point")
    return uu @ vt


class FramePatch:
    """Smooth adapted frame field anchored at a chart point.

    The anchor frame is built per-point (deterministic rules, given
    gauge); frames elsewhere carry the anchor's normal basis by the
    closest-rotation alignment.  The field is normal-parallel at the
    anchor, which is what makes difference quotients of frame-dependent
    quantities meaningful there.
    """

    def __init__(self, surface: SurfaceImmersion, u0: float, v0: float,
                 gauge: str = "generic"):
        self.surface = surface
        self.u0, self.v0 = float(u0), float(v0)
        self.anchor = build_frame(surface, (u0, v0), gauge)
        self._ref = self.anchor.normal

    def frame_at(self, u: float, v: float) -> AdaptedFrame:
        if u == self.u0 and v == self.v0:
            return self.anchor
        fr = build_tangent_frame(self.surface, (u, v))
        normals = align_normal_basis(self.surface, u, v, self._ref)
        return AdaptedFrame(point=fr.point, e1=fr.e1, e2=fr.e2,
                            e3=normals[:, 0], e4=normals[:, 1],
                            e5=normals[:, 2], v1=fr.v1, v2=fr.v2,
                            gauge=self.anchor.gauge + "+aligned",
                            theta_reference=self.anchor.theta_reference)
