"""Acceptance suite: one test per criterion, printed as pass/fail lines.

Every tolerance is pinned here exactly as stated; runtime budgets are
asserted too (the implementations run far under them).
"""

import time

import numpy as np

from conftest import random_traceless
from s5frames import catalog
from s5frames.errors import WrongSpectrum, ZeroSecondFundamentalForm
from s5frames.frames import build_frame
from s5frames.intrinsic import brioschi_curvature
from s5frames.invariants import invariants_batch, second_fundamental_form
from s5frames.polar import (
    GridSpec,
    certify_polar_hypersurface,
    excluded_directions,
    pencil,
    shape_and_H,
)
from s5frames.structure import (
    ConnectionScalars,
    HypersurfacePatch,
    base_invariants_at,
    coordinate_lie_bracket,
    derivative_identity_residuals,
    eta_curvatures,
    nullity_distribution,
    rotate_frame_scalars,
    sample_fiber_points,
    scalar_rotation_invariants,
)


def _report(num, label, ok, detail, budget, elapsed):
    verdict = "PASS" if ok and elapsed < budget else "FAIL"
    print(f"[{verdict}] criterion {num}: {label} -- {detail} "
          f"({elapsed:.2f}s / budget {budget:.0f}s)")
    assert ok, f"criterion {num}: {detail}"
    assert elapsed < budget, f"criterion {num} exceeded {budget}s ({elapsed:.2f}s)"


def test_criterion_1_superminimality_identity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    h = random_traceless(rng, 10_000)
    vals = invariants_batch(h)
    lhs = (vals["K"] - 1.0) ** 2 - 0.25 * vals["KN"]
    scale = 1.0 + vals["K"] ** 2 + vals["KN"] + vals["S"] ** 2
    err = np.max(np.abs(lhs - vals["superminimal_residual"]) / scale)
    _report(1, "superminimality identity on 10^4 random traceless tensors",
            err <= 1e-12, f"max relative residual {err:.2e} <= 1e-12",
            1.0, time.perf_counter() - t0)


def test_criterion_2_cross_formula_oracles():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    h = random_traceless(rng, 10_000)
    vals = invariants_batch(h)
    err_k = np.max(np.abs(vals["K"] - (1.0 - 0.5 * vals["S"]))
                   / (1.0 + np.abs(vals["K"]) + vals["S"]))
    short = 4.0 * (vals["R3412"] ** 2 + vals["R3512"] ** 2 + vals["R4512"] ** 2)
    err_kn = np.max(np.abs(vals["KN"] - short) / (1.0 + vals["KN"]))
    ok = err_k <= 1e-12 and err_kn <= 1e-12
    _report(2, "K vs 1 - S/2 and K_N full sum vs component shortcut",
            ok, f"max residuals {err_k:.2e}, {err_kn:.2e} <= 1e-12",
            1.0, time.perf_counter() - t0)


def test_criterion_3_metric_oracle():
    t0 = time.perf_counter()
    worst = 0.0
    for name in catalog.names():
        surface = catalog.get(name).surface
        us, vs = surface.chart.interior_grid(20, 20)
        for u in us:
            for v in vs:
                fr = build_frame(surface, (u, v), "generic")
                h = second_fundamental_form(surface, (u, v), fr)
                k_frames = float(invariants_batch(h.h)["K"])
                k_metric = brioschi_curvature(surface, u, v)
                worst = max(worst, abs(k_frames - k_metric))
    _report(3, "frame curvature vs metric-only oracle on 20x20 grids",
            worst <= 1e-4, f"max |K - K_brioschi| = {worst:.2e} <= 1e-4",
            10.0, time.perf_counter() - t0)


def test_criterion_4_polar_certification():
    t0 = time.perf_counter()
    details = []
    ok = True

    cert = certify_polar_hypersurface(
        catalog.get("equilateral-torus").surface, GridSpec(12, 12, 12, 8),
        keep_records=False)
    hmax = max(cert.residuals["H1"], cert.residuals["H3"], cert.residuals["H4"])
    ok &= cert.verdict == "PASS" and hmax <= 1e-5
    ok &= cert.residuals["min_metric_eig"] > 0
    details.append(f"equilateral {cert.verdict} maxH {hmax:.2e}")

    cert = certify_polar_hypersurface(
        catalog.get("clifford-torus").surface,
        GridSpec(12, 12, 12, 8,
                 theta_bands=((np.pi / 2, 0.2), (3 * np.pi / 2, 0.2))),
        keep_records=False)
    hmax = max(cert.residuals["H1"], cert.residuals["H3"], cert.residuals["H4"])
    ok &= cert.verdict == "PASS" and hmax <= 1e-5
    ok &= cert.residuals["min_metric_eig"] > 0
    details.append(f"clifford {cert.verdict} maxH {hmax:.2e}")

    cert = certify_polar_hypersurface(
        catalog.get("geodesic-sphere").surface, GridSpec(12, 12, 12, 8),
        keep_records=False)
    total = sum(cert.counts.values())
    ok &= cert.verdict == "NOT-APPLICABLE" and cert.counts["excluded"] == total
    details.append(f"sphere {cert.verdict} ({cert.counts['excluded']}/{total} excluded)")

    _report(4, "polar hypersurface certification at grid 12x12x12x8",
            ok, "; ".join(details), 120.0, time.perf_counter() - t0)


def test_criterion_5_excluded_set_geometry():
    t0 = time.perf_counter()
    surface = catalog.get("equilateral-torus").surface
    fr = build_frame(surface, (1.0, 2.0), "generic")
    h = second_fundamental_form(surface, (1.0, 2.0), fr).h
    exc = excluded_directions(h)
    ok = exc.kind == "antipodal-pair"
    final = []
    for n in exc.directions:
        start = np.array([n[2], 0.0, -n[0]])
        if np.linalg.norm(start) < 1e-6:
            start = np.array([0.0, n[2], -n[1]])
        start /= np.linalg.norm(start)
        detcs = []
        for t in np.linspace(0.0, 1.0, 12):
            v = np.cos(t * np.pi / 2) * start + np.sin(t * np.pi / 2) * n
            theta = np.arctan2(v[1], v[0])
            phi = np.arccos(np.clip(v[2], -1, 1))
            detcs.append(pencil(h, theta, phi).detC)
        ok &= all(a > b for a, b in zip(detcs, detcs[1:]))
        ok &= detcs[-1] < 1e-10
        final.append(detcs[-1])

    surface = catalog.get("clifford-torus").surface
    fr = build_frame(surface, (2.0, 4.0), "b-aligned")
    h = second_fundamental_form(surface, (2.0, 4.0), fr).h
    worst = max(pencil(h, np.pi / 2, phi).detC
                for phi in np.linspace(0.05, np.pi - 0.05, 25))
    ok &= worst <= 1e-14
    _report(5, "excluded-set geometry (monotone rays, great circle)",
            ok, f"ray endpoints {final[0]:.1e}, {final[1]:.1e}; "
                f"circle max detC {worst:.1e}",
            5.0, time.perf_counter() - t0)


def test_criterion_6_rotation_invariance():
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    drift = 0.0
    eta_drift = 0.0
    for _ in range(10_000):
        f3, f4, g3, g4 = rng.uniform(-1, 1, 4)
        theta = rng.uniform(0, 2 * np.pi)
        sc = ConnectionScalars(lam=rng.uniform(1.0, 3.0), f3=f3, f4=f4,
                               g3=g3, g4=g4, w34=np.zeros(4))
        out = rotate_frame_scalars(sc, theta)
        drift = max(drift, float(np.max(np.abs(
            scalar_rotation_invariants(sc) - scalar_rotation_invariants(out)))))
        e0, e1 = eta_curvatures(sc), eta_curvatures(out)
        eta_drift = max(eta_drift, abs(e0.K - e1.K), abs(e0.KN - e1.KN))
    ok = drift <= 1e-14 and eta_drift <= 1e-12
    _report(6, "rotation invariance of connection scalars (10^4 trials)",
            ok, f"invariant drift {drift:.2e}, curvature drift {eta_drift:.2e}",
            1.0, time.perf_counter() - t0)


def test_criterion_7_structure_suite():
    t0 = time.perf_counter()
    ok = True
    details = []
    for name in ("equilateral-torus", "clifford-torus"):
        surface = catalog.get(name).surface
        points = sample_fiber_points(surface, 25, seed=31)
        spectrum = lamres = d23 = d1 = invol = loop = 0.0
        base_cache = {}
        for (u, v, th, ph) in points:
            patch = HypersurfacePatch(surface, (u, v, th, ph))
            data = patch.hypersurface_data(patch.xi0)
            lam = data.lambdas
            spectrum = max(spectrum, abs(lam[1]), abs(lam[2]),
                           abs(lam[0] + lam[3]))
            res = derivative_identity_residuals(patch)
            lamres = max(lamres, res.lam_e3, res.lam_e4)
            d23 = max(d23, float(np.max(res.dif2)), float(np.max(res.dif3)))
            d1 = max(d1, float(np.max(res.dif1)))
            invol = max(invol, res.involutivity)
            if (u, v) not in base_cache:
                base_cache[(u, v)] = base_invariants_at(surface, u, v)
            kb, knb = base_cache[(u, v)]
            eta = eta_curvatures(res.scalars)
            loop = max(loop, abs(eta.K - kb), abs(eta.KN - knb))
        # leaf constancy: curvature drift across one fiber sphere
        u, v = points[0][0], points[0][1]
        ks, kns = [], []
        for th, ph in [(0.4, 1.2), (1.7, 1.3), (2.9, 1.7), (4.4, 1.9), (5.5, 1.4)]:
            try:
                patch = HypersurfacePatch(surface, (u, v, th, ph))
            except Exception:
                continue
            eta = eta_curvatures(patch.raw_scalars(patch.xi0))
            ks.append(eta.K)
            kns.append(eta.KN)
        drift = max(max(ks) - min(ks), max(kns) - min(kns))
        this_ok = (spectrum <= 1e-5 and invol <= 1e-4 and lamres <= 1e-3
                   and d23 <= 1e-3 and d1 <= 1e-2 and drift <= 1e-6
                   and loop <= 1e-3)
        ok &= this_ok
        details.append(
            f"{name}: spec {spectrum:.1e} invol {invol:.1e} lam {lamres:.1e} "
            f"difII/III {d23:.1e} difI {d1:.1e} drift {drift:.1e} loop {loop:.1e}")
    _report(7, "structure identities at 25 fiber points per fixture",
            ok, "; ".join(details), 60.0, time.perf_counter() - t0)


def test_criterion_8_negative_paths():
    t0 = time.perf_counter()
    ok = True
    try:
        nullity_distribution(shape_and_H(np.eye(4), np.diag([1.0, -2.0, 0, 0])),
                             tol=1e-6)
        ok = False
    except WrongSpectrum:
        pass
    e3 = lambda xi: np.array([0.0, 0.0, 1.0, 0.0])
    e4 = lambda xi: np.array([xi[2], 0.0, 0.0, 1.0])
    br = coordinate_lie_bracket(e3, e4, np.array([0.3, 0.1, 0.7, 1.1]))
    detector = float(np.hypot(br[0], br[1]))
    ok &= detector > 0.1
    try:
        build_frame(catalog.get("geodesic-sphere").surface, (0.3, 3.0),
                    "b-aligned")
        ok = False
    except ZeroSecondFundamentalForm:
        pass
    _report(8, "negative paths (spectrum, involutivity, geodesic gauge)",
            ok, f"detector residual {detector:.3f} > 0.1",
            1.0, time.perf_counter() - t0)
