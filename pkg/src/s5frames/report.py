"""Batch verification driver and machine-readable reports.

Three suites over a catalog surface:

* ``invariants`` — frame/curvature pipeline over a chart grid, checked
  against the catalog's expected values, the metric-only curvature
  oracle, and gauge invariance;
* ``polar``      — grid certificate for the hypersurface built over
  the unit normal bundle;
* ``structure``  — residuals of the degenerate-hypersurface identities
  at sampled fiber points.

Verdicts: PASS (all residual maxima within tolerance, no failures),
FAIL, or NOT-APPLICABLE (nothing to evaluate, e.g. the polar suite
over a totally geodesic surface).  Reports serialize to JSON, per-point
records to CSV.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import catalog, polar, structure
from .errors import S5FramesError
from .frames import build_frame
from .intrinsic import brioschi_curvature
from .invariants import curvature_invariants, mean_curvature_vector, second_fundamental_form

SUITES = ("invariants", "polar", "structure")

DEFAULT_TOLERANCES = {
    # invariants suite
    "expected_match": 1e-5,
    "expected_match_fd": 1e-4,
    "minimality_defect": 1e-6,
    "brioschi": 1e-4,
    "gauge_drift": 1e-8,
    # polar suite
    "H1": 1e-5,
    "H3": 1e-5,
    "H4": 1e-5,
    "fiber_rows": 1e-6,
    # structure suite
    "spectrum": 1e-5,
    "involutivity": 1e-4,
    "lambda_derivative": 1e-3,
    "dif2": 1e-3,
    "dif3": 1e-3,
    "dif1": 1e-2,
    "dif_kn": 1e-3,
    "dlam12": 1e-3,
    "frame_tables": 1e-3,
    "bracket": 1e-3,
    "gauss_map": 1e-8,
    "leaf_drift": 1e-6,
    "leaf_derivative": 1e-4,
    "loop_closure": 1e-3,
    "lambda_cross": 1e-6,
}


@dataclass(frozen=True)
class RunConfig:
    surface: str
    suites: tuple = SUITES
    grid: polar.GridSpec = field(default_factory=polar.GridSpec)
    tolerances: dict = field(default_factory=dict)
    derivative_mode: str = "analytic"
    structure_samples: int = 25
    seed: int = 0
    output: str | None = None
    format: str = "json"

    def __post_init__(self):
        unknown = set(self.suites) - set(SUITES)
        if unknown:
            raise ValueError(f"unknown suites: {sorted(unknown)}; "
                             f"valid: {list(SUITES)}")
        if self.format not in ("json", "csv"):
            raise ValueError(f"unknown format {self.format!r}")
        if min(self.grid.nu, self.grid.nv, self.grid.ntheta, self.grid.nphi) < 2:
            raise ValueError("grid counts must be >= 2")
        if any(t <= 0 for t in self.tolerances.values()):
            raise ValueError("tolerances must be positive")

    def tol(self, name: str) -> float:
        return self.tolerances.get(name, DEFAULT_TOLERANCES[name])

    @classmethod
    def from_json(cls, path: str) -> "RunConfig":
        with open(path) as fh:
            raw = json.load(fh)
        if "grid" in raw and isinstance(raw["grid"], dict):
            raw["grid"] = polar.GridSpec(**raw["grid"])
        if "suites" in raw:
            raw["suites"] = tuple(raw["suites"])
        return cls(**raw)


@dataclass
class SuiteResult:
    name: str
    verdict: str
    checks: dict             # name -> {max, mean, tol, pass}
    counts: dict
    records: list = field(default_factory=list)
    messages: list = field(default_factory=list)

    def to_dict(self, include_records: bool = False) -> dict:
        out = {"verdict": self.verdict, "checks": self.checks,
               "counts": self.counts, "messages": self.messages}
        if include_records:
            out["records"] = [rec if isinstance(rec, dict) else
                              {k: (list(v) if isinstance(v, tuple) else v)
                               for k, v in vars(rec).items()}
                              for rec in self.records]
        return out


@dataclass
class VerificationReport:
    config: RunConfig
    suites: dict
    verdict: str
    wall_time_seconds: float

    def to_dict(self, include_records: bool = False) -> dict:
        cfg = {
            "surface": self.config.surface,
            "suites": list(self.config.suites),
            "grid": vars(self.config.grid) | {
                "theta_bands": [list(b) for b in self.config.grid.theta_bands]},
            "tolerances": self.config.tolerances,
            "derivative_mode": self.config.derivative_mode,
            "structure_samples": self.config.structure_samples,
            "seed": self.config.seed,
        }
        return {
            "config": cfg,
            "suites": {k: v.to_dict(include_records) for k, v in self.suites.items()},
            "verdict": self.verdict,
            "wall_time_seconds": self.wall_time_seconds,
        }

    def to_json(self, include_records: bool = False) -> str:
        return json.dumps(self.to_dict(include_records), indent=2, sort_keys=True)

    def write_csv(self, path: str) -> None:
        """Per-point records; the polar suite uses the certification columns."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            if "polar" in self.suites:
                writer.writerow(polar.CSV_COLUMNS)
                for rec in self.suites["polar"].records:
                    writer.writerow(rec.csv_row() if hasattr(rec, "csv_row")
                                    else rec)
            else:
                first = next((s for s in self.suites.values() if s.records), None)
                if first is None:
                    writer.writerow(["no-records"])
                    return
                cols = sorted(first.records[0])
                writer.writerow(cols)
                for rec in first.records:
                    writer.writerow([rec.get(c, "") for c in cols])


def _check(value: float, tol: float) -> dict:
    return {"max": value, "tol": tol, "pass": bool(value <= tol)}


def _suite_invariants(cfg: RunConfig, entry) -> SuiteResult:
    surface = entry.surface
    if cfg.derivative_mode == "fd":
        surface = surface.with_mode("fd")
        match_tol = cfg.tolerances.get("expected_match", cfg.tol("expected_match_fd"))
    else:
        match_tol = cfg.tol("expected_match")
    expected = entry.expected
    us, vs = surface.chart.interior_grid(20, 20)
    errs = {"K": 0.0, "KN": 0.0, "S": 0.0}
    defect = 0.0
    brioschi_err = 0.0
    gauge_drift = 0.0
    rank_mismatch = 0
    records = []
    for u in us:
        for v in vs:
            frame = build_frame(surface, (u, v), "generic")
            h = second_fundamental_form(surface, (u, v), frame)
            inv = curvature_invariants(h)
            defect = max(defect, float(np.linalg.norm(mean_curvature_vector(h))))
            for key in ("K", "KN", "S"):
                if isinstance(expected.get(key), (int, float)):
                    errs[key] = max(errs[key], abs(getattr(inv, key) - expected[key]))
            if inv.rank_case != expected["rank_case"] and not inv.rank_borderline:
                rank_mismatch += 1
            kb = brioschi_curvature(surface, u, v)
            brioschi_err = max(brioschi_err, abs(inv.K - kb))
            records.append({"u": u, "v": v, "K": inv.K, "KN": inv.KN,
                            "S": inv.S, "defect": defect,
                            "rank_case": inv.rank_case,
                            "superminimal_residual": inv.superminimal_residual,
                            "brioschi_K": kb})
    # gauge invariance on a sparser grid; skip where B-aligned is undefined
    if expected.get("S") != 0.0:
        for u in us[::5]:
            for v in vs[::5]:
                frame_g = build_frame(surface, (u, v), "generic")
                frame_b = build_frame(surface, (u, v), "b-aligned")
                inv_g = curvature_invariants(
                    second_fundamental_form(surface, (u, v), frame_g))
                inv_b = curvature_invariants(
                    second_fundamental_form(surface, (u, v), frame_b))
                gauge_drift = max(
                    gauge_drift,
                    abs(inv_g.K - inv_b.K), abs(inv_g.KN - inv_b.KN),
                    abs(inv_g.S - inv_b.S),
                    abs(inv_g.superminimal_residual - inv_b.superminimal_residual))
    checks = {
        "k_error": _check(errs["K"], match_tol),
        "kn_error": _check(errs["KN"], match_tol),
        "s_error": _check(errs["S"], match_tol),
        "minimality_defect": _check(defect, cfg.tol("minimality_defect")),
        "brioschi": _check(brioschi_err, cfg.tol("brioschi")),
        "gauge_drift": _check(gauge_drift, cfg.tol("gauge_drift")),
        "rank_mismatches": _check(float(rank_mismatch), 0.0),
    }
    verdict = "PASS" if all(c["pass"] for c in checks.values()) else "FAIL"
    return SuiteResult(name="invariants", verdict=verdict, checks=checks,
                       counts={"evaluated": len(records), "excluded": 0,
                               "failed": 0},
                       records=records)


def _suite_polar(cfg: RunConfig, entry) -> SuiteResult:
    surface = entry.surface
    if cfg.derivative_mode == "fd":
        surface = surface.with_mode("fd")
    tol = {k: cfg.tol(k) for k in ("H1", "H3", "H4", "fiber_rows",
                                   "minimality_defect")}
    cert = polar.certify_polar_hypersurface(surface, cfg.grid, tolerances=tol)
    checks = {}
    for name in ("H1", "H3", "H4", "fiber_rows", "minimality_defect"):
        checks[name] = _check(cert.residuals[name], cert.tolerances[name])
    checks["min_metric_eig"] = {
        "max": cert.residuals["min_metric_eig"],
        "tol": cert.tolerances["min_metric_eig"],
        "pass": bool(cert.verdict != "FAIL"),
    }
    return SuiteResult(name="polar", verdict=cert.verdict, checks=checks,
                       counts=cert.counts, records=cert.records,
                       messages=cert.messages)


def _suite_structure(cfg: RunConfig, entry) -> SuiteResult:
    surface = entry.surface
    if entry.expected.get("S") == 0.0:
        return SuiteResult(name="structure", verdict="NOT-APPLICABLE",
                           checks={}, counts={"evaluated": 0, "excluded": 0,
                                              "failed": 0},
                           messages=["second fundamental form vanishes"])
    points = structure.sample_fiber_points(surface, cfg.structure_samples,
                                           seed=cfg.seed)
    agg: dict[str, float] = {}
    spectrum_max = 0.0
    loop_max = 0.0
    records = []
    failed = 0
    messages = []
    base_cache: dict = {}
    for (u, v, th, ph) in points:
        try:
            patch = structure.HypersurfacePatch(surface, (u, v, th, ph))
            data = patch.hypersurface_data(patch.xi0)
            lam = data.lambdas
            spectrum_res = max(abs(lam[1]), abs(lam[2]), abs(lam[0] + lam[3]))
            spectrum_max = max(spectrum_max, spectrum_res)
            res = structure.derivative_identity_residuals(patch)
            for key, val in res.grouped_max().items():
                agg[key] = max(agg.get(key, 0.0), val)
            key_uv = (round(u, 12), round(v, 12))
            if key_uv not in base_cache:
                base_cache[key_uv] = structure.base_invariants_at(surface, u, v)
            k_base, kn_base = base_cache[key_uv]
            eta = structure.eta_curvatures(res.scalars)
            loop = max(abs(eta.K - k_base), abs(eta.KN - kn_base))
            loop_max = max(loop_max, loop)
            records.append({"u": u, "v": v, "theta": th, "phi": ph,
                            "lambda": float(lam[0]),
                            "spectrum_residual": spectrum_res,
                            "loop_closure": loop,
                            **res.grouped_max()})
        except S5FramesError as exc:
            failed += 1
            messages.append(f"({u:.4g},{v:.4g},{th:.4g},{ph:.4g}): {exc}")

    # leaf constancy: drift of the quotient curvatures across a fiber
    drift = 0.0
    rng = np.random.default_rng(cfg.seed + 1)
    for _ in range(3):
        u, v, _, _ = points[int(rng.integers(len(points)))]
        ks, kns = [], []
        for th, ph in [(0.4, 1.2), (1.7, 1.2), (2.9, 1.7), (4.4, 1.9), (5.5, 1.4)]:
            try:
                patch = structure.HypersurfacePatch(surface, (u, v, th, ph))
                eta = structure.eta_curvatures(patch.raw_scalars(patch.xi0))
                ks.append(eta.K)
                kns.append(eta.KN)
            except S5FramesError:
                continue
        if len(ks) >= 2:
            drift = max(drift, max(ks) - min(ks), max(kns) - min(kns))

    checks = {
        "spectrum": _check(spectrum_max, cfg.tol("spectrum")),
        "loop_closure": _check(loop_max, cfg.tol("loop_closure")),
        "leaf_drift": _check(drift, cfg.tol("leaf_drift")),
        "failures": _check(float(failed), 0.0),
    }
    for key in ("involutivity", "lambda_derivative", "dif2", "dif3", "dif1",
                "dif_kn", "dlam12", "frame_tables", "bracket", "gauss_map",
                "leaf_derivative", "lambda_cross"):
        checks[key] = _check(agg.get(key, 0.0), cfg.tol(key))
    verdict = "PASS" if all(c["pass"] for c in checks.values()) else "FAIL"
    if not records:
        verdict = "NOT-APPLICABLE"
    return SuiteResult(name="structure", verdict=verdict, checks=checks,
                       counts={"evaluated": len(records), "excluded": 0,
                               "failed": failed},
                       records=records, messages=messages)


_RUNNERS = {
    "invariants": _suite_invariants,
    "polar": _suite_polar,
    "structure": _suite_structure,
}


def run(config: RunConfig) -> VerificationReport:
    """Run the configured suites; deterministic for a fixed config/seed."""
    entry = catalog.get(config.surface)
    t0 = time.perf_counter()
    suites = {}
    for name in config.suites:
        suites[name] = _RUNNERS[name](config, entry)
    wall = time.perf_counter() - t0
    verdicts = [s.verdict for s in suites.values()]
    if "FAIL" in verdicts:
        overall = "FAIL"
    elif "NOT-APPLICABLE" in verdicts:
        overall = "NOT-APPLICABLE"
    else:
        overall = "PASS"
    report = VerificationReport(config=config, suites=suites,
                                verdict=overall, wall_time_seconds=wall)
    if config.output:
        if config.format == "json":
            with open(config.output, "w") as fh:
                fh.write(report.to_json())
        else:
            report.write_csv(config.output)
    return report


EXIT_CODES = {"PASS": 0, "FAIL": 1, "NOT-APPLICABLE": 2}
