"""Structure identities of degenerate minimal hypersurfaces in S^5.

Works on the polar hypersurface constructed over a minimal surface: a
smooth adapted frame field (principal directions for +/-lambda, an
orthonormal basis of the nullity plane, the base point as unit normal)
is built over the 4-D coordinate patch (u, v, theta, phi), and all
connection quantities are realized as inner products of central
finite differences of that field.

The connection-form convention is fixed by the skew matrices of the
source construction: omega^i_j(e_k) = <D_{e_k} e_j, e_i> with D the
ambient derivative, so omega^3_2 = f3 w^1 + g3 w^2 defines f3, g3 and
omega^3_4(e_k) = <D_{e_k} e4, e3>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import eigh

from .errors import (
    ChartBoundary,
    NonpositiveLambda,
    StencilOutOfDomain,
    WrongSpectrum,
)
from .frames import FramePatch
from .invariants import curvature_invariants, second_fundamental_form
from .polar import (
    HypersurfaceData,
    fiber_direction,
    pencil,
    regularity_threshold,
    shape_and_H,
)
from .surfaces import SurfaceImmersion

FRAME_FD_STEP = 1e-4      # first derivatives of the frame field
SCALAR_FD_STEP = 3e-4     # outer derivatives of frame-dependent scalars
SPECTRUM_GATE = 1e-4      # loose per-point gate; suites assert the tight bound


@dataclass
class ConnectionScalars:
    """lambda, the omega^3_2 / omega^4_2 coefficients and omega^3_4(e_k)."""

    lam: float
    f3: float
    f4: float
    g3: float
    g4: float
    w34: np.ndarray          # omega^3_4(e_k), k = 1..4


@dataclass
class EtaCurvatures:
    K: float
    KN: float
    R3412: float
    R3512: float
    R4512: float


@dataclass
class NullityBasis:
    """Metric-orthonormal eigenbasis splitting ker(shape) from +/-lambda."""

    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray
    e4: np.ndarray
    lam: float


def nullity_distribution(data: HypersurfaceData, tol: float = 1e-6) -> NullityBasis:
    """Eigen-split of the shape operator into {+lam, -lam, 0, 0}.

    Raises WrongSpectrum unless exactly two eigenvalues vanish within
    tol and the remaining pair is opposite with positive leading value.
    """
    lam_asc, vecs = eigh(np.asarray(data.metric) @ np.asarray(data.shape),
                         np.asarray(data.metric))
    lam_desc = lam_asc[::-1]
    vecs = vecs[:, ::-1]
    l1, l2, l3, l4 = lam_desc
    if abs(l2) > tol or abs(l3) > tol:
        raise WrongSpectrum(
            f"kernel not 2-dimensional within {tol:g}: spectrum {lam_desc}")
    if abs(l1 + l4) > tol:
        raise WrongSpectrum(
            f"nonzero pair not opposite within {tol:g}: spectrum {lam_desc}")
    if l1 <= tol:
        raise WrongSpectrum(
            f"no positive curvature (S > 0 violated): spectrum {lam_desc}")
    return NullityBasis(e1=vecs[:, 0], e2=vecs[:, 3],
                        e3=vecs[:, 1], e4=vecs[:, 2], lam=float(l1))


def rotate_frame_scalars(sc: ConnectionScalars, theta: float) -> ConnectionScalars:
    """Constant rotation of the nullity pair; pure algebra.

    (f3, f4) and (g3, g4) rotate as column vectors.  The connection
    form omega^3_4 itself is unchanged for a constant angle, so its
    values on the unrotated directions e1, e2 stay put while the values
    on the rotated pair rotate with it.
    """
    c, s = math.cos(theta), math.sin(theta)
    w = np.array(sc.w34, dtype=float)
    w[2], w[3] = c * w[2] - s * w[3], s * w[2] + c * w[3]
    return ConnectionScalars(
        lam=sc.lam,
        f3=c * sc.f3 - s * sc.f4,
        f4=s * sc.f3 + c * sc.f4,
        g3=c * sc.g3 - s * sc.g4,
        g4=s * sc.g3 + c * sc.g4,
        w34=w)


def scalar_rotation_invariants(sc: ConnectionScalars) -> np.ndarray:
    """The four quantities preserved by rotate_frame_scalars."""
    return np.array([
        sc.f3 ** 2 + sc.f4 ** 2,
        sc.g3 ** 2 + sc.g4 ** 2,
        sc.f3 * sc.g3 + sc.f4 * sc.g4,
        sc.f3 * sc.g4 - sc.f4 * sc.g3,
    ])


def eta_curvatures(sc: ConnectionScalars) -> EtaCurvatures:
    """Gauss and scalar normal curvature of the quotient immersion."""
    lam = sc.lam
    if lam <= 0.0:
        raise NonpositiveLambda(f"lambda = {lam:g} must be positive")
    f3, f4, g3, g4 = sc.f3, sc.f4, sc.g3, sc.g4
    cross = f3 * g4 - f4 * g3
    K = 1.0 - (1.0 + f3 ** 2 + f4 ** 2 + g3 ** 2 + g4 ** 2) / lam ** 2
    r3412 = 2.0 * cross / lam ** 2
    r3512 = -2.0 * f3 / lam ** 2
    r4512 = -2.0 * f4 / lam ** 2
    KN = 16.0 * (f3 ** 2 + f4 ** 2 + cross ** 2) / lam ** 4
    check = 4.0 * (r3412 ** 2 + r3512 ** 2 + r4512 ** 2)
    if abs(KN - check) > 1e-12 * (1.0 + KN):
        raise AssertionError(f"normal-curvature identity broken: {KN} vs {check}")
    return EtaCurvatures(K=K, KN=KN, R3412=r3412, R3512=r3512, R4512=r4512)


def coordinate_lie_bracket(field_a: Callable, field_b: Callable, xi,
                           step: float = 1e-4) -> np.ndarray:
    """[A, B] for coordinate vector-field callables xi -> R^n.

    Central differences of each field along the other's components;
    shared by the involutivity detector and its synthetic counterexample
    tests.
    """
    xi = np.asarray(xi, dtype=float)
    n = xi.size
    a0 = np.asarray(field_a(xi), dtype=float)
    b0 = np.asarray(field_b(xi), dtype=float)
    ja = np.zeros((n, n))
    jb = np.zeros((n, n))
    for k in range(n):
        dxi = np.zeros(n)
        dxi[k] = step
        ja[:, k] = (np.asarray(field_a(xi + dxi)) - np.asarray(field_a(xi - dxi))) / (2 * step)
        jb[:, k] = (np.asarray(field_b(xi + dxi)) - np.asarray(field_b(xi - dxi))) / (2 * step)
    return jb @ a0 - ja @ b0


class HypersurfacePatch:
    """Smooth adapted frame field on the polar hypersurface.

    Anchored at xi0 = (u0, v0, theta0, phi0).  The base normal frame is
    alignment-propagated from the anchor; the principal angle of the
    pencil is unwrapped relative to the anchor so the field stays
    smooth across atan2 branch cuts.  ``fiber_rotation`` applies a
    constant rotation to the nullity pair (the Lemma-style gauge test).
    """

    def __init__(self, surface: SurfaceImmersion, xi0,
                 fiber_rotation: float = 0.0,
                 frame_step: float = FRAME_FD_STEP,
                 scalar_step: float = SCALAR_FD_STEP):
        self.surface = surface
        self.xi0 = np.asarray(xi0, dtype=float)
        u0, v0 = self.xi0[0], self.xi0[1]
        self.frame_step = float(frame_step)
        self.scalar_step = float(scalar_step)
        self.fiber_rotation = float(fiber_rotation)
        self.base_patch = FramePatch(surface, u0, v0, gauge="generic")
        self._h_cache: dict = {}
        self._bundle_cache: dict = {}
        h0 = self._h_at(u0, v0)
        self._reg_threshold = regularity_threshold(h0)
        a0 = np.einsum('a,aij->ij',
                       fiber_direction(self.xi0[2], self.xi0[3]), h0)
        self._p0 = np.array([a0[0, 0], a0[0, 1]])
        s0 = np.linalg.norm(self._p0)
        if s0 ** 4 <= self._reg_threshold:
            raise StencilOutOfDomain(
                f"anchor fiber point not in N_* (detC = {s0 ** 4:.3e})")
        self._chi0 = 0.5 * math.atan2(self._p0[1], self._p0[0])

    # -- field evaluation ---------------------------------------------------

    def _h_at(self, u: float, v: float) -> np.ndarray:
        key = (u, v)
        if key not in self._h_cache:
            fr = self.base_patch.frame_at(u, v)
            try:
                hh = second_fundamental_form(self.surface, (u, v), fr)
            except ChartBoundary as exc:
                raise StencilOutOfDomain(str(exc)) from exc
            self._h_cache[key] = hh.h
        return self._h_cache[key]

    def pencil_state(self, xi) -> tuple[np.ndarray, float, float]:
        """(pencil vector (a11, a12), s = |a|, unwrapped principal angle)."""
        u, v, th, ph = xi
        h = self._h_at(u, v)
        a = np.einsum('a,aij->ij', fiber_direction(th, ph), h)
        p = np.array([a[0, 0], a[0, 1]])
        s = float(np.linalg.norm(p))
        if s ** 4 <= self._reg_threshold:
            raise StencilOutOfDomain(
                f"stencil crossed the excluded set at {tuple(xi)}")
        rel = math.atan2(self._p0[0] * p[1] - self._p0[1] * p[0],
                         self._p0 @ p)
        return p, s, self._chi0 + 0.5 * rel

    def lam_pencil(self, xi) -> float:
        """Principal curvature from the pencil: (a11^2 + a12^2)^(-1/2)."""
        _, s, _ = self.pencil_state(xi)
        return 1.0 / s

    def bundle(self, xi) -> np.ndarray:
        """(6, 6) matrix [x, e1, e2, e3, e4, nu] at xi."""
        key = tuple(np.asarray(xi, dtype=float))
        hit = self._bundle_cache.get(key)
        if hit is not None:
            return hit
        u, v, th, ph = key
        try:
            fr = self.base_patch.frame_at(u, v)
        except ChartBoundary as exc:
            raise StencilOutOfDomain(str(exc)) from exc
        _, _, chi = self.pencil_state(key)
        c, s = math.cos(chi), math.sin(chi)
        e1 = c * fr.e1 + s * fr.e2
        e2 = -s * fr.e1 + c * fr.e2
        st, ct = math.sin(th), math.cos(th)
        sp, cp = math.sin(ph), math.cos(ph)
        e3 = -st * fr.e3 + ct * fr.e4
        e4 = cp * ct * fr.e3 + cp * st * fr.e4 - sp * fr.e5
        if self.fiber_rotation:
            cr, sr = math.cos(self.fiber_rotation), math.sin(self.fiber_rotation)
            e3, e4 = cr * e3 - sr * e4, sr * e3 + cr * e4
        x = fr.normal @ fiber_direction(th, ph)
        out = np.column_stack([x, e1, e2, e3, e4, fr.point])
        self._bundle_cache[key] = out
        return out

    def bundle_jacobian(self, xi) -> np.ndarray:
        """(4, 6, 6) array of coordinate partials of the bundle."""
        xi = np.asarray(xi, dtype=float)
        s = self.frame_step
        out = np.empty((4, 6, 6))
        for a in range(4):
            d = np.zeros(4)
            d[a] = s
            out[a] = (self.bundle(xi + d) - self.bundle(xi - d)) / (2 * s)
        return out

    # -- connection quantities ----------------------------------------------

    def frame_state(self, xi):
        """Center bundle, its partials, and coordinate reps of e1..e4.

        W[k] solves dx @ W[k] = e_k, so directional derivatives along
        frame vectors are sums of coordinate partials weighted by W.
        """
        bun = self.bundle(xi)
        jac = self.bundle_jacobian(xi)
        dx = jac[:, :, 0].T                      # (6, 4)
        w, *_ = np.linalg.lstsq(dx, bun[:, 1:5], rcond=None)
        return bun, jac, w.T                      # w rows: e_k components

    def omega_tables(self, xi):
        """Omega[k, i, j] = omega^{i+1}_{j+1}(e_{k+1}) plus the frame state."""
        bun, jac, w = self.frame_state(xi)
        frame = bun[:, 1:5]
        dvec = jac[:, :, 1:5]                     # (axis, 6, vec j)
        deriv = np.einsum('ka,axj->kxj', w, dvec)  # D_{e_k} e_j
        omega = np.einsum('kxj,xi->kij', deriv, frame)
        return omega, bun, jac, w, deriv

    def raw_scalars(self, xi) -> ConnectionScalars:
        """Connection scalars with the pencil-based lambda (smooth field)."""
        omega, *_ = self.omega_tables(xi)
        return ConnectionScalars(
            lam=self.lam_pencil(xi),
            f3=float(omega[0, 2, 1]), f4=float(omega[0, 3, 1]),
            g3=float(omega[1, 2, 1]), g4=float(omega[1, 3, 1]),
            w34=omega[:, 2, 3].copy())

    def hypersurface_data(self, xi) -> HypersurfaceData:
        bun, jac, _ = self.frame_state(xi)
        dx = jac[:, :, 0].T
        u, v = xi[0], xi[1]
        jac_g = self.surface.jacobian(u, v)
        dnu = np.column_stack([jac_g, np.zeros((6, 2))])
        g = dx.T @ dx
        raw = -(dx.T @ dnu)
        ii = 0.5 * (raw + raw.T)
        return shape_and_H(g, ii, point=bun[:, 0], normal=bun[:, 5])


def connection_scalars(patch: HypersurfacePatch,
                       xi=None, spectrum_tol: float = SPECTRUM_GATE) -> ConnectionScalars:
    """Connection scalars at a fiber point, lambda from the spectrum.

    The shape-operator spectrum is validated (pattern {lam, -lam, 0, 0})
    before the scalars are reported; the pencil-based lambda used for
    differencing agrees with the spectral one to FD accuracy.
    """
    xi = patch.xi0 if xi is None else np.asarray(xi, dtype=float)
    data = patch.hypersurface_data(xi)
    basis = nullity_distribution(data, tol=spectrum_tol)   # WrongSpectrum gate
    sc = patch.raw_scalars(xi)
    sc.lam = basis.lam
    return sc


def involutivity_residual(patch: HypersurfacePatch, xi=None) -> float:
    """Norm of the principal-plane component of [e3, e4]."""
    xi = patch.xi0 if xi is None else np.asarray(xi, dtype=float)
    omega, bun, jac, w, deriv = patch.omega_tables(xi)
    bracket = _nullity_bracket(patch, xi, jac, w)
    e1, e2 = bun[:, 1], bun[:, 2]
    return float(np.hypot(bracket @ e1, bracket @ e2))


def _nullity_bracket(patch, xi, jac, w) -> np.ndarray:
    """Ambient [e3, e4] = D_{e3} e4 - D_{e4} e3 from the field partials."""
    d_e3 = jac[:, :, 3]          # (axis, 6)
    d_e4 = jac[:, :, 4]
    return np.einsum('a,ax->x', w[2], d_e4) - np.einsum('a,ax->x', w[3], d_e3)


@dataclass
class IdentityResiduals:
    """Absolute residuals of the derivative and bracket identities."""

    lam_e3: float
    lam_e4: float
    dif2: np.ndarray
    dif3: np.ndarray
    dif1: np.ndarray
    dif_kn: np.ndarray
    dlam12: np.ndarray
    table12: np.ndarray
    codazzi: np.ndarray
    leaf_geodesic: float
    skew: float
    involutivity: float
    bracket_reconstruction: float
    gauss_map: np.ndarray
    leaf_K: np.ndarray
    leaf_KN: np.ndarray
    lam_cross: float
    scalars: ConnectionScalars = field(repr=False, default=None)

    def grouped_max(self) -> dict:
        return {
            "lambda_derivative": max(self.lam_e3, self.lam_e4),
            "dif2": float(np.max(self.dif2)),
            "dif3": float(np.max(self.dif3)),
            "dif1": float(np.max(self.dif1)),
            "dif_kn": float(np.max(self.dif_kn)),
            "dlam12": float(np.max(self.dlam12)),
            "frame_tables": float(max(np.max(self.table12),
                                      np.max(self.codazzi),
                                      self.leaf_geodesic, self.skew)),
            "involutivity": self.involutivity,
            "bracket": self.bracket_reconstruction,
            "gauss_map": float(np.max(self.gauss_map)),
            "leaf_derivative": float(max(np.max(self.leaf_K),
                                         np.max(self.leaf_KN))),
            "lambda_cross": self.lam_cross,
        }


def derivative_identity_residuals(patch: HypersurfacePatch,
                                  xi=None) -> IdentityResiduals:
    """All identity residuals at a fiber point.

    Frame-direction derivatives of the scalar fields (f, g, lambda, and
    the quotient curvatures) are nested central differences: the outer
    step differentiates fields whose own evaluation already uses the
    frame-level step, which is why the e1/e2-direction identities carry
    the loosest tolerance downstream.
    """
    xi = patch.xi0 if xi is None else np.asarray(xi, dtype=float)
    omega, bun, jac, w, deriv = patch.omega_tables(xi)
    sc = patch.raw_scalars(xi)
    f3, f4, g3, g4, lam = sc.f3, sc.f4, sc.g3, sc.g4, sc.lam
    w34 = sc.w34

    # scalar fields sampled on the outer stencil
    step = patch.scalar_step
    samples = {}
    for a in range(4):
        d = np.zeros(4)
        d[a] = step
        for sgn, tag in ((1.0, "p"), (-1.0, "m")):
            pt = xi + sgn * d
            s_pt = patch.raw_scalars(pt)
            eta = eta_curvatures(s_pt)
            samples[(a, tag)] = np.array([
                s_pt.f3, s_pt.f4, s_pt.g3, s_pt.g4, s_pt.lam, eta.K, eta.KN,
                s_pt.f3 ** 2 + s_pt.f4 ** 2 + s_pt.g3 ** 2 + s_pt.g4 ** 2,
                eta.R3412, eta.R3512, eta.R4512])
    grad = np.stack([(samples[(a, "p")] - samples[(a, "m")]) / (2 * step)
                     for a in range(4)])            # (axis, scalar)
    edirs = w @ grad                                 # (frame k, scalar)
    (df3, df4, dg3, dg4, dlam, dK, dKN,
     dq, dr3412, dr3512, dr4512) = (edirs[:, i] for i in range(11))

    dif2 = np.abs([
        df3[2] - (2 * f3 * g3 - w34[2] * f4),
        df4[2] - (f3 * g4 + f4 * g3 + w34[2] * f3),
        dg3[2] - (g3 ** 2 - f3 ** 2 + 1.0 - w34[2] * g4),
        dg4[2] - (g3 * g4 - f3 * f4 + w34[2] * g3),
    ])
    dif3 = np.abs([
        df3[3] - (f3 * g4 + f4 * g3 - w34[3] * f4),
        df4[3] - (2 * f4 * g4 + w34[3] * f3),
        dg3[3] - (g3 * g4 - f3 * f4 - w34[3] * g4),
        dg4[3] - (g4 ** 2 - f4 ** 2 + 1.0 + w34[3] * g3),
    ])
    dif1 = np.abs([
        df3[0] - (-dg3[1] - w34[0] * f4 - w34[1] * g4),
        df3[1] - (dg3[0] + w34[0] * g4 - w34[1] * f4),
        df4[0] - (-dg4[1] + w34[0] * f3 + w34[1] * g3),
        df4[1] - (dg4[0] - w34[0] * g3 + w34[1] * f3),
    ])
    q = f3 ** 2 + f4 ** 2 + g3 ** 2 + g4 ** 2
    eta0 = eta_curvatures(sc)
    r12, r35, r45 = eta0.R3412, eta0.R3512, eta0.R4512
    dif_kn = np.abs([
        dq[2] - 2 * g3 * (q + 1.0),
        dq[3] - 2 * g4 * (q + 1.0),
        dr3412[2] - r45,
        dr3412[3] + r35,
        dr3512[2] + w34[2] * r45,
        dr3512[3] - (r12 - w34[3] * r45),
        dr4512[2] - (-r12 + w34[2] * r35),
        dr4512[3] - w34[3] * r35,
    ])
    dlam12 = np.abs([
        dlam[0] - 2 * lam * omega[1, 0, 1],
        dlam[1] + 2 * lam * omega[0, 0, 1],
    ])
    table12 = np.abs([
        omega[2, 0, 1] - 0.5 * f3,
        omega[3, 0, 1] - 0.5 * f4,
    ])
    codazzi = np.abs([
        omega[0, 2, 1] + omega[1, 2, 0],
        omega[0, 3, 1] + omega[1, 3, 0],
    ])
    leaf_geodesic = float(np.max(np.abs(omega[2:4, 0:2, 2:4])))
    skew = float(np.max(np.abs(omega + omega.transpose(0, 2, 1))))

    bracket = _nullity_bracket(patch, xi, jac, w)
    e1, e2, e3, e4 = (bun[:, k] for k in range(1, 5))
    involutivity = float(np.hypot(bracket @ e1, bracket @ e2))
    reconstruction = float(np.linalg.norm(
        bracket - (w34[2] * e3 + w34[3] * e4)))

    d_nu = jac[:, :, 5]
    gauss_map = np.array([
        np.linalg.norm(np.einsum('a,ax->x', w[2], d_nu)),
        np.linalg.norm(np.einsum('a,ax->x', w[3], d_nu)),
    ])

    data = patch.hypersurface_data(xi)
    lam_spec = float(data.lambdas[0])

    return IdentityResiduals(
        lam_e3=float(abs(dlam[2] - lam * g3)),
        lam_e4=float(abs(dlam[3] - lam * g4)),
        dif2=dif2, dif3=dif3, dif1=dif1, dif_kn=dif_kn, dlam12=dlam12,
        table12=table12, codazzi=codazzi,
        leaf_geodesic=leaf_geodesic, skew=skew,
        involutivity=involutivity,
        bracket_reconstruction=reconstruction,
        gauss_map=gauss_map,
        leaf_K=np.abs([dK[2], dK[3]]),
        leaf_KN=np.abs([dKN[2], dKN[3]]),
        lam_cross=float(abs(lam_spec - lam)),
        scalars=sc)


def sample_fiber_points(surface: SurfaceImmersion, count: int, seed: int = 0,
                        detc_floor_rel: float = 1e-2,
                        phi_gap: float = 0.3,
                        chart_margin_fraction: float = 0.05) -> list:
    """Deterministic fiber-point sample, kept away from the excluded set.

    detc_floor_rel scales the quartic |h|^4 unit, so accepted points
    have moderate lambda and the FD residuals stay far below their
    tolerances.
    """
    rng = np.random.default_rng(seed)
    chart = surface.chart
    mu = (chart.umax - chart.umin) * chart_margin_fraction
    mv = (chart.vmax - chart.vmin) * chart_margin_fraction
    picked = []
    attempts = 0
    while len(picked) < count and attempts < 200 * count:
        attempts += 1
        u = rng.uniform(chart.umin + mu, chart.umax - mu)
        v = rng.uniform(chart.vmin + mv, chart.vmax - mv)
        th = rng.uniform(0.0, 2 * np.pi)
        ph = rng.uniform(phi_gap, np.pi - phi_gap)
        fr = FramePatch(surface, u, v).anchor
        h = second_fundamental_form(surface, (u, v), fr).h
        hmax = float(np.max(np.abs(h)))
        if hmax < 1e-8:
            continue
        pm = pencil(h, th, ph)
        if pm.detC > detc_floor_rel * hmax ** 4:
            picked.append((u, v, th, ph))
    if len(picked) < count:
        raise StencilOutOfDomain(
            f"could not find {count} regular fiber points on {surface.name}")
    return picked


def base_invariants_at(surface: SurfaceImmersion, u: float, v: float):
    """Gauss and scalar normal curvature of the base surface at (u, v)."""
    fr = FramePatch(surface, u, v).anchor
    h = second_fundamental_form(surface, (u, v), fr)
    inv = curvature_invariants(h)
    return inv.K, inv.KN
