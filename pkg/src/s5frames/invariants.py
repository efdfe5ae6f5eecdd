"""Second fundamental form and curvature invariants of surfaces in S^5.

Conventions: h[a][i][j] is the coefficient of the second fundamental
form on normal direction e_{a+3} and tangent pair (e_{i+1}, e_{j+1});
the Gauss curvature is K = 1 + sum_a det(h^a); the scalar normal
curvature K_N is the full squared length of the normal curvature
tensor R^a_{b i j} = sum_k (h^a_{ki} h^b_{kj} - h^a_{kj} h^b_{ki}).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ChartBoundary, InconsistentMinimality, NotMinimal
from .frames import AdaptedFrame, build_tangent_frame
from .surfaces import SurfaceImmersion, FD_STEP_SECOND

RANK_REL_CUTOFF = 1e-7
TRACE_TOL = 1e-6


@dataclass
class SecondFundamentalTensor:
    """Coefficients h^a_ij in a given adapted frame, symmetric in i, j."""

    h: np.ndarray                      # (3, 2, 2)
    frame: Optional[AdaptedFrame] = None
    asymmetry: float = 0.0             # |raw_ij - raw_ji| quality metric

    def __post_init__(self):
        self.h = np.asarray(self.h, dtype=float)
        if self.h.shape != (3, 2, 2):
            raise ValueError(f"h must be (3,2,2), got {self.h.shape}")

    @property
    def trace_defect(self) -> float:
        return float(np.max(np.abs(self.h[:, 0, 0] + self.h[:, 1, 1])))

    @property
    def B11(self) -> np.ndarray:
        return self.h[:, 0, 0]

    @property
    def B12(self) -> np.ndarray:
        return self.h[:, 0, 1]


def _as_h(h) -> np.ndarray:
    if isinstance(h, SecondFundamentalTensor):
        return h.h
    return np.asarray(h, dtype=float)


def second_fundamental_form(surface: SurfaceImmersion, p, frame: AdaptedFrame,
                            step: float = FD_STEP_SECOND) -> SecondFundamentalTensor:
    """h^a_ij = <D_{e_i} e_j, e_a> by central differences of the tangent field.

    The tangent frame field (Gram-Schmidt of the chart partials) is
    smooth, so differencing it along chart displacements realizing e_i
    is safe; projection onto the fixed normal vectors at p kills the
    tangential/position parts of the derivative.
    """
    u, v = float(p[0]), float(p[1])
    normals = frame.normal
    raw = np.zeros((3, 2, 2))
    for i, vi in enumerate((frame.v1, frame.v2)):
        up, vp = u + step * vi[0], v + step * vi[1]
        um, vm = u - step * vi[0], v - step * vi[1]
        if not (surface.chart.contains(up, vp) and surface.chart.contains(um, vm)):
            raise ChartBoundary(
                f"{surface.name}: stencil around ({u:.4g}, {v:.4g}) leaves chart")
        fp = build_tangent_frame(surface, (up, vp))
        fm = build_tangent_frame(surface, (um, vm))
        for j, (ep, em) in enumerate(((fp.e1, fm.e1), (fp.e2, fm.e2))):
            dj = (ep - em) / (2.0 * step)
            raw[:, i, j] = normals.T @ dj
    sym = 0.5 * (raw + raw.transpose(0, 2, 1))
    asym = float(np.max(np.abs(raw - raw.transpose(0, 2, 1))))
    return SecondFundamentalTensor(h=sym, frame=frame, asymmetry=asym)


def mean_curvature_vector(h) -> np.ndarray:
    """Normal components (h^a_11 + h^a_22) / 2."""
    arr = _as_h(h)
    return 0.5 * (arr[:, 0, 0] + arr[:, 1, 1])


def normal_curvature_tensor(h) -> np.ndarray:
    """R^a_{b i j} as a (3, 3, 2, 2) array (batched over leading axes)."""
    arr = _as_h(h)
    r = np.einsum('...aki,...bkj->...abij', arr, arr)
    return r - r.swapaxes(-2, -1)


def invariants_batch(h: np.ndarray) -> dict:
    """Vectorized K, K_N, S, H and friends for h of shape (..., 3, 2, 2)."""
    arr = np.asarray(h, dtype=float)
    det = arr[..., 0, 0] * arr[..., 1, 1] - arr[..., 0, 1] * arr[..., 1, 0]
    K = 1.0 + det.sum(axis=-1)
    S = (arr ** 2).sum(axis=(-3, -2, -1))
    R = normal_curvature_tensor(arr)
    KN = (R ** 2).sum(axis=(-4, -3, -2, -1))
    b11 = arr[..., :, 0, 0]
    b12 = arr[..., :, 0, 1]
    n11 = (b11 ** 2).sum(axis=-1)
    n12 = (b12 ** 2).sum(axis=-1)
    dot = (b11 * b12).sum(axis=-1)
    return {
        "K": K,
        "KN": KN,
        "S": S,
        "H_vec": 0.5 * (arr[..., :, 0, 0] + arr[..., :, 1, 1]),
        "R3412": R[..., 0, 1, 0, 1],
        "R3512": R[..., 0, 2, 0, 1],
        "R4512": R[..., 1, 2, 0, 1],
        "superminimal_residual": (n11 - n12) ** 2 + 4.0 * dot ** 2,
    }


@dataclass
class CurvatureInvariants:
    K: float
    KN: float
    S: float
    H_vec: np.ndarray
    R3412: float
    R3512: float
    R4512: float
    superminimal_residual: float
    rank_case: str                    # 'a' (rank 2), 'b' (rank 1), 'c' (rank 0)
    rank_borderline: bool = False
    singular_values: np.ndarray = field(default_factory=lambda: np.zeros(2))


def rank_case_of(h, rel_cutoff: float = RANK_REL_CUTOFF) -> tuple[str, bool, np.ndarray]:
    """a/b/c trichotomy from the singular values of the 3x2 matrix (h^a_1j)."""
    arr = _as_h(h)
    svals = np.linalg.svd(arr[:, 0, :], compute_uv=False)
    smax = svals[0]
    if smax <= 0.0:
        return "c", False, svals
    cut = rel_cutoff * smax
    rank = int(np.sum(svals > cut))
    borderline = bool(np.any((svals > 0.1 * cut) & (svals <= 10.0 * cut)))
    return {2: "a", 1: "b", 0: "c"}[rank], borderline, svals


def curvature_invariants(h, minimal_hint: bool = False,
                         trace_tol: float = TRACE_TOL) -> CurvatureInvariants:
    """All scalar invariants of a second-fundamental tensor.

    With ``minimal_hint`` the cross-formula identities K = 1 - S/2 and
    K_N = 4(R3412^2 + R3512^2 + R4512^2) are asserted at 1e-12 relative
    accuracy (plus a trace-defect allowance, zero for exactly traceless
    input).
    """
    arr = _as_h(h)
    vals = invariants_batch(arr)
    K, KN, S = float(vals["K"]), float(vals["KN"]), float(vals["S"])
    rank_case, borderline, svals = rank_case_of(arr)
    if minimal_hint:
        defect = float(np.max(np.abs(arr[:, 0, 0] + arr[:, 1, 1])))
        if defect > trace_tol:
            raise InconsistentMinimality(
                f"minimal_hint set but trace defect {defect:.3e} > {trace_tol:g}")
        hmax = float(np.max(np.abs(arr)))
        slack = 4.0 * defect * (1.0 + hmax)
        tol_k = 1e-12 * (1.0 + abs(K) + S) + slack
        if abs(K - (1.0 - 0.5 * S)) > tol_k:
            raise InconsistentMinimality(
                f"K = {K} vs 1 - S/2 = {1 - 0.5 * S} disagree beyond {tol_k:.3e}")
        kn_short = 4.0 * (vals["R3412"] ** 2 + vals["R3512"] ** 2
                          + vals["R4512"] ** 2)
        tol_kn = 1e-12 * (1.0 + KN) + slack * (1.0 + hmax) ** 2
        if abs(KN - kn_short) > tol_kn:
            raise InconsistentMinimality(
                f"K_N full sum {KN} vs component shortcut {kn_short} "
                f"disagree beyond {tol_kn:.3e}")
    return CurvatureInvariants(
        K=K, KN=KN, S=S, H_vec=vals["H_vec"],
        R3412=float(vals["R3412"]), R3512=float(vals["R3512"]),
        R4512=float(vals["R4512"]),
        superminimal_residual=float(vals["superminimal_residual"]),
        rank_case=rank_case, rank_borderline=borderline,
        singular_values=svals)


def curvature_ellipse(h, theta_samples: int) -> np.ndarray:
    """Samples B(X, X) over the unit tangent circle, in normal coordinates.

    Returns an (n, 3) array: H_vec + M (cos 2t, sin 2t) with M the 3x2
    matrix of half-trace-difference and off-diagonal columns.  For a
    traceless tensor the center term vanishes and the image is the
    ellipse spanned by B11 and B12.
    """
    arr = _as_h(h)
    center = mean_curvature_vector(arr)
    m = np.column_stack([0.5 * (arr[:, 0, 0] - arr[:, 1, 1]), arr[:, 0, 1]])
    ts = 2.0 * np.pi * np.arange(theta_samples) / theta_samples
    circ = np.column_stack([np.cos(2.0 * ts), np.sin(2.0 * ts)])
    return center[None, :] + circ @ m.T


@dataclass
class SuperminimalityResult:
    is_superminimal: bool
    lhs: float     # (K - 1)^2 - K_N / 4
    rhs: float     # (|B11|^2 - |B12|^2)^2 + 4 <B11, B12>^2


def superminimality_check(h, trace_tol: float = 1e-8,
                          zero_tol: float = 1e-10) -> SuperminimalityResult:
    """Circle-test for the curvature ellipse, via two independent routes.

    lhs comes from the curvature invariants, rhs from the B-vectors
    directly; they agree identically for traceless input and the check
    asserts that before reporting.
    """
    arr = _as_h(h)
    defect = float(np.max(np.abs(arr[:, 0, 0] + arr[:, 1, 1])))
    if defect > trace_tol:
        raise NotMinimal(f"trace defect {defect:.3e} > {trace_tol:g}")
    vals = invariants_batch(arr)
    lhs = float((vals["K"] - 1.0) ** 2 - 0.25 * vals["KN"])
    b11 = arr[:, 0, 0]
    b12 = arr[:, 0, 1]
    rhs = float((b11 @ b11 - b12 @ b12) ** 2 + 4.0 * (b11 @ b12) ** 2)
    hmax = float(np.max(np.abs(arr)))
    if abs(lhs - rhs) > 1e-12 * max(1.0, abs(lhs)) + 8.0 * defect * (1.0 + hmax) ** 3:
        raise AssertionError(
            f"independent superminimality routes disagree: {lhs} vs {rhs}")
    return SuperminimalityResult(is_superminimal=rhs <= zero_tol,
                                 lhs=lhs, rhs=rhs)
