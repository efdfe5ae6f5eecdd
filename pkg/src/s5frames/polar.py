"""Polar hypersurface over the punctured unit normal bundle.

A fiber direction over a chart point is V(theta, phi) =
(sin phi cos theta, sin phi sin theta, cos phi) in the normal frame;
the polar map sends it to the ambient unit vector

    x = sin(phi) cos(theta) e3 + sin(phi) sin(theta) e4 + cos(phi) e5.

The pencil a_ij = sum_a V^a h^a_ij controls everything: the map is an
immersion exactly where det C = (det a)^2 is nonzero, the hypersurface
normal is the base point itself, and the principal curvatures come out
as {lam, -lam, 0, 0} with lam = (a11^2 + a12^2)^(-1/2) for a minimal
base surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import eigh

from .errors import PoleExcluded, SingularMetric
from .frames import AdaptedFrame, FramePatch
from .invariants import SecondFundamentalTensor, _as_h, second_fundamental_form
from .surfaces import SurfaceImmersion

POLE_GAP = 1e-3
METRIC_EIG_FLOOR = 1e-10
REG_THRESHOLD_REL = 1e-8
REG_THRESHOLD_ABS = 1e-20
RANK_II_REL_CUTOFF = 1e-6


def fiber_direction(theta: float, phi: float) -> np.ndarray:
    """Unit vector V(theta, phi) in normal coordinates."""
    sp = math.sin(phi)
    return np.array([sp * math.cos(theta), sp * math.sin(theta), math.cos(phi)])


@dataclass
class FiberPoint:
    """Point (p, theta, phi) of the unit normal bundle over a chart point."""

    base: tuple
    theta: float
    phi: float
    in_N_star: bool = False
    detC: float = 0.0


@dataclass
class PencilMatrix:
    """Symmetric 2x2 pencil a_ij = sum_a V^a h^a_ij and its regularity data."""

    a: np.ndarray
    detA: float
    detC: float
    system_residual: float   # squared norm of (h^a_1j)^T V, vanishes iff detC does


def pencil(h, theta: float, phi: float) -> PencilMatrix:
    arr = _as_h(h)
    vdir = fiber_direction(theta, phi)
    a = np.einsum('a,aij->ij', vdir, arr)
    det_a = float(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])
    # residual of the 2x3 linear system applied to V, computed from h directly
    row = arr[:, 0, :].T @ vdir
    return PencilMatrix(a=a, detA=det_a, detC=det_a ** 2,
                        system_residual=float(row @ row))


def regularity_threshold(h) -> float:
    """Scale-invariant cutoff matching the quartic homogeneity of detC."""
    hmax = float(np.max(np.abs(_as_h(h))))
    return max(REG_THRESHOLD_REL * hmax ** 4, REG_THRESHOLD_ABS)


def classify_fiber(h, theta: float, phi: float,
                   reg_threshold: Optional[float] = None) -> bool:
    """Membership of V(theta, phi) in the punctured bundle N_*."""
    if reg_threshold is None:
        reg_threshold = regularity_threshold(h)
    return pencil(h, theta, phi).detC > reg_threshold


def make_fiber_point(h, base, theta: float, phi: float,
                     reg_threshold: Optional[float] = None) -> FiberPoint:
    pm = pencil(h, theta, phi)
    if reg_threshold is None:
        reg_threshold = regularity_threshold(h)
    return FiberPoint(base=tuple(base), theta=theta, phi=phi,
                      in_N_star=pm.detC > reg_threshold, detC=pm.detC)


@dataclass
class ExcludedSet:
    """Fiber directions removed from the 2-sphere, by rank case."""

    kind: str                       # 'antipodal-pair' | 'great-circle' | 'all'
    directions: Optional[np.ndarray] = None   # (2, 3) for the antipodal pair
    circle_normal: Optional[np.ndarray] = None  # circle = {V : V . n = 0}


def excluded_directions(h) -> ExcludedSet:
    arr = _as_h(h)
    b11, b12 = arr[:, 0, 0], arr[:, 0, 1]
    from .invariants import rank_case_of
    case, _, _ = rank_case_of(arr)
    if case == "c":
        return ExcludedSet(kind="all")
    if case == "a":
        n = np.cross(b11, b12)
        n = n / np.linalg.norm(n)
        return ExcludedSet(kind="antipodal-pair",
                           directions=np.array([n, -n]))
    # rank one: the image line of the pencil rows
    line = b11 if np.linalg.norm(b11) >= np.linalg.norm(b12) else b12
    return ExcludedSet(kind="great-circle",
                       circle_normal=line / np.linalg.norm(line))


def x_map(frame: AdaptedFrame, theta: float, phi: float,
          pole_gap: float = POLE_GAP) -> np.ndarray:
    """Ambient position of the fiber direction; excludes the chart poles."""
    if not (pole_gap < phi < math.pi - pole_gap):
        raise PoleExcluded(f"phi = {phi:.6g} outside ({pole_gap:g}, pi - {pole_gap:g})")
    return frame.normal @ fiber_direction(theta, phi)


@dataclass
class HypersurfaceData:
    """Pointwise data of the polar hypersurface."""

    point: np.ndarray
    normal: np.ndarray
    metric: np.ndarray
    shape: np.ndarray
    lambdas: np.ndarray          # principal curvatures, descending
    H: tuple                     # (H1, H2, H3, H4)


def mean_curvature_profile(lambdas: np.ndarray) -> tuple:
    """Normalized elementary symmetric polynomials of four curvatures."""
    l1, l2, l3, l4 = lambdas
    e1 = l1 + l2 + l3 + l4
    e2 = (l1 * l2 + l1 * l3 + l1 * l4 + l2 * l3 + l2 * l4 + l3 * l4)
    e3 = (l1 * l2 * l3 + l1 * l2 * l4 + l1 * l3 * l4 + l2 * l3 * l4)
    e4 = l1 * l2 * l3 * l4
    return (e1 / 4.0, e2 / 6.0, e3 / 4.0, e4)


def shape_and_H(metric: np.ndarray, second_form: np.ndarray,
                point: Optional[np.ndarray] = None,
                normal: Optional[np.ndarray] = None) -> HypersurfaceData:
    """Shape operator, principal curvatures and mean-curvature profile.

    Eigenvalues of the symmetric-definite pencil (II, metric); raises
    SingularMetric when the metric is not positive definite.
    """
    g = np.asarray(metric, dtype=float)
    ii = np.asarray(second_form, dtype=float)
    eigs = np.linalg.eigvalsh(g)
    if eigs[0] <= METRIC_EIG_FLOOR:
        raise SingularMetric(
            f"metric not positive definite (min eigenvalue {eigs[0]:.3e})")
    lam = eigh(ii, g, eigvals_only=True)[::-1]
    shape = np.linalg.solve(g, ii)
    return HypersurfaceData(
        point=point if point is not None else np.zeros(6),
        normal=normal if normal is not None else np.zeros(6),
        metric=g, shape=shape, lambdas=lam,
        H=mean_curvature_profile(lam))


class PolarPatch:
    """Polar-map evaluations over one chart point's fiber sphere.

    Anchors a smooth adapted frame field at (u0, v0) and precomputes
    the finite-difference chart partials of the normal frame, so every
    fiber point over the anchor shares them.  All pullbacks use central
    differences of the x map with the same step (``fd_step``) in the
    four coordinates (u, v, theta, phi).
    """

    def __init__(self, surface: SurfaceImmersion, u0: float, v0: float,
                 gauge: str = "generic", fd_step: float = 1e-5,
                 h: Optional[SecondFundamentalTensor] = None):
        self.surface = surface
        self.u0, self.v0 = float(u0), float(v0)
        self.fd_step = float(fd_step)
        self.patch = FramePatch(surface, u0, v0, gauge=gauge)
        self.frame = self.patch.anchor
        self.h = h if h is not None else second_fundamental_form(
            surface, (u0, v0), self.frame)
        s = self.fd_step
        self._n_u = (self.patch.frame_at(u0 + s, v0).normal
                     - self.patch.frame_at(u0 - s, v0).normal) / (2 * s)
        self._n_v = (self.patch.frame_at(u0, v0 + s).normal
                     - self.patch.frame_at(u0, v0 - s).normal) / (2 * s)
        jac = surface.jacobian(u0, v0)
        self._g_u, self._g_v = jac[:, 0], jac[:, 1]

    def x(self, theta: float, phi: float) -> np.ndarray:
        return x_map(self.frame, theta, phi)

    def dx(self, theta: float, phi: float) -> np.ndarray:
        """6x4 differential of the polar map in (u, v, theta, phi)."""
        s = self.fd_step
        v0 = fiber_direction(theta, phi)
        d_u = self._n_u @ v0
        d_v = self._n_v @ v0
        nmat = self.frame.normal
        d_th = nmat @ ((fiber_direction(theta + s, phi)
                        - fiber_direction(theta - s, phi)) / (2 * s))
        d_ph = nmat @ ((fiber_direction(theta, phi + s)
                        - fiber_direction(theta, phi - s)) / (2 * s))
        return np.column_stack([d_u, d_v, d_th, d_ph])

    def dnormal(self) -> np.ndarray:
        """6x4 differential of the hypersurface normal (the base point)."""
        zeros = np.zeros(6)
        return np.column_stack([self._g_u, self._g_v, zeros, zeros])

    def metric(self, theta: float, phi: float) -> np.ndarray:
        dx = self.dx(theta, phi)
        g = dx.T @ dx
        eigs = np.linalg.eigvalsh(g)
        if eigs[0] <= METRIC_EIG_FLOOR:
            raise SingularMetric(
                f"pullback metric singular at (theta={theta:.4g}, "
                f"phi={phi:.4g}): min eigenvalue {eigs[0]:.3e}")
        return g

    def second_form(self, theta: float, phi: float) -> tuple[np.ndarray, float]:
        """4x4 second fundamental form and its pre-symmetrization asymmetry."""
        raw = -(self.dx(theta, phi).T @ self.dnormal())
        asym = float(np.max(np.abs(raw - raw.T)))
        return 0.5 * (raw + raw.T), asym

    def hypersurface_data(self, theta: float, phi: float) -> HypersurfaceData:
        g = self.metric(theta, phi)
        ii, _ = self.second_form(theta, phi)
        return shape_and_H(g, ii, point=self.x(theta, phi),
                           normal=self.frame.point)

    def coframe_matrix(self) -> np.ndarray:
        """2x2 matrix expressing the base coframe in chart coordinates."""
        vmat = np.column_stack([self.frame.v1, self.frame.v2])
        return np.linalg.inv(vmat)


def induced_metric(patch: PolarPatch, fp: FiberPoint) -> np.ndarray:
    if not fp.in_N_star:
        raise SingularMetric(
            f"fiber point (theta={fp.theta:.4g}, phi={fp.phi:.4g}) not in N_*")
    return patch.metric(fp.theta, fp.phi)


def second_fundamental_form_x(patch: PolarPatch, fp: FiberPoint) -> np.ndarray:
    if not fp.in_N_star:
        raise SingularMetric(
            f"fiber point (theta={fp.theta:.4g}, phi={fp.phi:.4g}) not in N_*")
    return patch.second_form(fp.theta, fp.phi)[0]


def rank_of_form(ii: np.ndarray, rel_cutoff: float = RANK_II_REL_CUTOFF) -> int:
    svals = np.linalg.svd(ii, compute_uv=False)
    if svals[0] <= 0.0:
        return 0
    return int(np.sum(svals > rel_cutoff * svals[0]))


@dataclass
class GridSpec:
    nu: int = 12
    nv: int = 12
    ntheta: int = 12
    nphi: int = 8
    phi_gap: float = 0.15                 # fiber grid stays this far from poles
    theta_bands: tuple = ()               # (center, width) bands removed

    def theta_values(self) -> np.ndarray:
        ts = 2 * np.pi * np.arange(self.ntheta) / self.ntheta
        for center, width in self.theta_bands:
            ts = ts[np.abs(np.angle(np.exp(1j * (ts - center)))) >= width / 2]
        return ts

    def phi_values(self) -> np.ndarray:
        return np.linspace(self.phi_gap, np.pi - self.phi_gap, self.nphi)


@dataclass
class PolarPointRecord:
    u: float
    v: float
    theta: float
    phi: float
    detC: float
    status: str                  # 'evaluated' | 'excluded' | 'failed'
    min_eig: float = np.nan
    H: tuple = (np.nan,) * 4
    rank_II: int = -1
    fiber_row_max: float = np.nan

    def csv_row(self):
        def fmt(x):
            return "" if isinstance(x, float) and math.isnan(x) else repr(x)
        rank = "" if self.rank_II < 0 else str(self.rank_II)
        return [repr(self.u), repr(self.v), repr(self.theta), repr(self.phi),
                repr(self.detC), fmt(self.min_eig), fmt(self.H[0]),
                fmt(self.H[1]), fmt(self.H[2]), fmt(self.H[3]), rank]


CSV_COLUMNS = ["u", "v", "theta", "phi", "detC", "minEig",
               "H1", "H2", "H3", "H4", "rankII"]

DEFAULT_CERT_TOLERANCES = {
    "H1": 1e-5,
    "H3": 1e-5,
    "H4": 1e-5,
    "fiber_rows": 1e-6,
    "min_metric_eig": METRIC_EIG_FLOOR,
    "minimality_defect": 1e-6,
}


@dataclass
class PolarCertificate:
    verdict: str                          # PASS | FAIL | NOT-APPLICABLE
    counts: dict
    residuals: dict                       # name -> max observed
    tolerances: dict
    records: list = field(default_factory=list)
    messages: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"


def certify_polar_hypersurface(surface: SurfaceImmersion,
                               grid: GridSpec = GridSpec(),
                               tolerances: Optional[dict] = None,
                               keep_records: bool = True) -> PolarCertificate:
    """Sweep chart x fiber and certify the constructed hypersurface.

    Per fiber point in N_*: positive-definite pullback metric, rank-two
    second form with the fiber plane in its kernel, and vanishing H1,
    H3, H4.  Points outside N_* are counted as excluded; a rank-two
    base surface with more than half of its fiber points excluded fails
    the certificate outright.
    """
    tol = dict(DEFAULT_CERT_TOLERANCES)
    if tolerances:
        tol.update(tolerances)
    us, vs = surface.chart.interior_grid(grid.nu, grid.nv)
    thetas, phis = grid.theta_values(), grid.phi_values()

    counts = {"evaluated": 0, "excluded": 0, "failed": 0}
    res = {"H1": 0.0, "H3": 0.0, "H4": 0.0, "fiber_rows": 0.0,
           "minimality_defect": 0.0}
    min_eig_seen = np.inf
    records = []
    messages = []
    rank_cases = {"a": 0, "b": 0, "c": 0}
    rank_violation = False

    from .invariants import mean_curvature_vector, rank_case_of

    for u in us:
        for v in vs:
            patch = PolarPatch(surface, u, v)
            h = patch.h
            res["minimality_defect"] = max(
                res["minimality_defect"],
                float(np.linalg.norm(mean_curvature_vector(h))))
            case, _, _ = rank_case_of(h)
            rank_cases[case] += 1
            threshold = regularity_threshold(h)
            for theta in thetas:
                for phi in phis:
                    pm = pencil(h, theta, phi)
                    rec = PolarPointRecord(u=u, v=v, theta=theta, phi=phi,
                                           detC=pm.detC, status="excluded")
                    if pm.detC <= threshold:
                        counts["excluded"] += 1
                        if keep_records:
                            records.append(rec)
                        continue
                    try:
                        g = patch.metric(theta, phi)
                        ii, _ = patch.second_form(theta, phi)
                        data = shape_and_H(g, ii)
                    except SingularMetric as exc:
                        counts["failed"] += 1
                        rec.status = "failed"
                        messages.append(str(exc))
                        if keep_records:
                            records.append(rec)
                        continue
                    counts["evaluated"] += 1
                    h1, h2, h3, h4 = data.H
                    fiber_rows = float(np.max(np.abs(ii[2:, :])))
                    eig_min = float(np.linalg.eigvalsh(g)[0])
                    min_eig_seen = min(min_eig_seen, eig_min)
                    rank_ii = rank_of_form(ii)
                    if rank_ii != 2:
                        rank_violation = True
                        messages.append(
                            f"rank(II) = {rank_ii} at (u={u:.4g}, v={v:.4g}, "
                            f"theta={theta:.4g}, phi={phi:.4g})")
                    res["H1"] = max(res["H1"], abs(h1))
                    res["H3"] = max(res["H3"], abs(h3))
                    res["H4"] = max(res["H4"], abs(h4))
                    res["fiber_rows"] = max(res["fiber_rows"], fiber_rows)
                    rec.status = "evaluated"
                    rec.min_eig = eig_min
                    rec.H = (h1, h2, h3, h4)
                    rec.rank_II = rank_ii
                    rec.fiber_row_max = fiber_rows
                    if keep_records:
                        records.append(rec)

    res["min_metric_eig"] = min_eig_seen if counts["evaluated"] else np.nan

    total_fiber = counts["evaluated"] + counts["excluded"] + counts["failed"]
    if counts["evaluated"] == 0:
        verdict = "NOT-APPLICABLE"
    else:
        ok = (res["H1"] <= tol["H1"] and res["H3"] <= tol["H3"]
              and res["H4"] <= tol["H4"]
              and res["fiber_rows"] <= tol["fiber_rows"]
              and res["min_metric_eig"] > tol["min_metric_eig"]
              and res["minimality_defect"] <= tol["minimality_defect"]
              and counts["failed"] == 0 and not rank_violation)
        majority_rank2 = rank_cases["a"] > (rank_cases["b"] + rank_cases["c"])
        if majority_rank2 and counts["excluded"] > 0.5 * total_fiber:
            ok = False
            messages.append(
                "more than half of the fiber points excluded on a rank-two surface")
        verdict = "PASS" if ok else "FAIL"
    return PolarCertificate(verdict=verdict, counts=counts, residuals=res,
                            tolerances=tol, records=records, messages=messages)
