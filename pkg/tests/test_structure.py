import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from s5frames import catalog
from s5frames.errors import NonpositiveLambda, WrongSpectrum
from s5frames.polar import shape_and_H
from s5frames.structure import (
    ConnectionScalars,
    HypersurfacePatch,
    base_invariants_at,
    connection_scalars,
    coordinate_lie_bracket,
    derivative_identity_residuals,
    eta_curvatures,
    involutivity_residual,
    nullity_distribution,
    rotate_frame_scalars,
    sample_fiber_points,
    scalar_rotation_invariants,
)


def _data_from_shape(diag):
    return shape_and_H(np.eye(4), np.diag(np.asarray(diag, dtype=float)))


# nullity distribution ----------------------------------------------------------

def test_nullity_basic():
    basis = nullity_distribution(_data_from_shape([1.0, -1.0, 0.0, 0.0]),
                                 tol=1e-6)
    assert abs(basis.lam - 1.0) <= 1e-12
    kernel = np.column_stack([basis.e3, basis.e4])
    assert np.allclose(np.abs(kernel[2:, :].T @ kernel[2:, :]), np.eye(2),
                       atol=1e-12)
    assert np.allclose(kernel[:2, :], 0.0, atol=1e-12)


def test_nullity_tolerance_absorption():
    basis = nullity_distribution(
        _data_from_shape([2.0, -2.0, 1e-9, -1e-9]), tol=1e-6)
    assert abs(basis.lam - 2.0) <= 1e-9
    shape = np.diag([2.0, -2.0, 1e-9, -1e-9])
    assert np.linalg.norm(shape @ basis.e3) <= 1e-6
    assert np.linalg.norm(shape @ basis.e4) <= 1e-6


def test_nullity_wrong_spectrum():
    with pytest.raises(WrongSpectrum):
        nullity_distribution(_data_from_shape([1.0, -2.0, 0.0, 0.0]), tol=1e-6)
    with pytest.raises(WrongSpectrum):
        nullity_distribution(_data_from_shape([1.0, -1.0, 0.5, 0.0]), tol=1e-6)
    with pytest.raises(WrongSpectrum):   # S > 0 violated
        nullity_distribution(_data_from_shape([0.0, 0.0, 0.0, 0.0]), tol=1e-6)


def test_nullity_metric_orthonormal():
    g = np.diag([2.0, 1.0, 0.5, 4.0])
    ii = g @ np.diag([3.0, -3.0, 0.0, 0.0])
    data = shape_and_H(g, 0.5 * (ii + ii.T))
    basis = nullity_distribution(data, tol=1e-8)
    vecs = np.column_stack([basis.e1, basis.e2, basis.e3, basis.e4])
    assert np.allclose(vecs.T @ g @ vecs, np.eye(4), atol=1e-10)


# rotation law --------------------------------------------------------------------

def test_rotate_identity():
    sc = ConnectionScalars(lam=2.0, f3=1.0, f4=0.5, g3=-0.3, g4=0.8,
                           w34=np.array([0.1, 0.2, 0.3, 0.4]))
    out = rotate_frame_scalars(sc, 0.0)
    assert (out.f3, out.f4, out.g3, out.g4) == (1.0, 0.5, -0.3, 0.8)
    assert np.allclose(out.w34, sc.w34)


def test_rotate_quarter_turn():
    sc = ConnectionScalars(lam=1.0, f3=1.0, f4=0.0, g3=0.0, g4=1.0,
                           w34=np.zeros(4))
    out = rotate_frame_scalars(sc, np.pi / 2)
    assert np.allclose([out.f3, out.f4, out.g3, out.g4], [0.0, 1.0, -1.0, 0.0],
                       atol=1e-15)
    before = scalar_rotation_invariants(sc)
    after = scalar_rotation_invariants(out)
    assert np.allclose(before, [1.0, 1.0, 0.0, 1.0], atol=1e-15)
    assert np.allclose(before, after, atol=1e-15)


@settings(max_examples=300, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3),
       st.floats(0, 2 * np.pi))
def test_rotation_invariants_property(f3, f4, g3, g4, theta):
    sc = ConnectionScalars(lam=1.5, f3=f3, f4=f4, g3=g3, g4=g4, w34=np.zeros(4))
    out = rotate_frame_scalars(sc, theta)
    drift = np.abs(scalar_rotation_invariants(sc)
                   - scalar_rotation_invariants(out))
    assert np.max(drift) <= 1e-13 * (1 + f3**2 + f4**2 + g3**2 + g4**2)
    eta0, eta1 = eta_curvatures(sc), eta_curvatures(out)
    assert abs(eta0.K - eta1.K) <= 1e-12 * (1 + abs(eta0.K))
    assert abs(eta0.KN - eta1.KN) <= 1e-12 * (1 + eta0.KN)


# quotient curvatures ---------------------------------------------------------------

def test_eta_trivial():
    sc = ConnectionScalars(lam=1.0, f3=0, f4=0, g3=0, g4=0, w34=np.zeros(4))
    eta = eta_curvatures(sc)
    assert eta.K == 0.0 and eta.KN == 0.0


def test_eta_unit_example():
    sc = ConnectionScalars(lam=1.0, f3=1.0, f4=0, g3=0, g4=0, w34=np.zeros(4))
    eta = eta_curvatures(sc)
    assert eta.K == -1.0
    assert eta.KN == 16.0
    assert eta.R3512 == -2.0
    assert eta.R3412 == 0.0 and eta.R4512 == 0.0


def test_eta_rejects_nonpositive_lambda():
    sc = ConnectionScalars(lam=0.0, f3=0, f4=0, g3=0, g4=0, w34=np.zeros(4))
    with pytest.raises(NonpositiveLambda):
        eta_curvatures(sc)


# involutivity detector ---------------------------------------------------------------

def test_coordinate_bracket_commuting_fields():
    e3 = lambda xi: np.array([0.0, 0.0, 1.0, 0.0])
    e4 = lambda xi: np.array([0.0, 0.0, 0.0, 1.0])
    br = coordinate_lie_bracket(e3, e4, np.array([0.1, 0.2, 0.3, 0.4]))
    assert np.max(np.abs(br)) <= 1e-12


def test_synthetic_nonintegrable_field_detected():
    # e3 = d/dtheta, e4 = d/dphi + theta * e1 with e1 the first coordinate
    # direction: [e3, e4] = e1, so the principal-plane component is 1
    e3 = lambda xi: np.array([0.0, 0.0, 1.0, 0.0])
    e4 = lambda xi: np.array([xi[2], 0.0, 0.0, 1.0])
    br = coordinate_lie_bracket(e3, e4, np.array([0.3, 0.1, 0.7, 1.1]))
    residual = np.hypot(br[0], br[1])
    assert residual > 0.1
    assert abs(residual - 1.0) <= 1e-9


def test_involutivity_near_zero_on_polar_hypersurfaces(entries):
    for name in ("clifford-torus", "equilateral-torus"):
        surface = entries[name].surface
        patch = HypersurfacePatch(surface, (2.0, 3.0, 0.8, 1.2))
        assert involutivity_residual(patch) <= 1e-4


# connection scalars -------------------------------------------------------------------

def test_connection_scalars_lambda_matches_pencil(entries):
    surface = entries["clifford-torus"].surface
    xi = (2.0, 3.0, 0.8, 1.2)
    patch = HypersurfacePatch(surface, xi)
    sc = connection_scalars(patch)
    assert sc.lam > 0
    assert abs(sc.lam - patch.lam_pencil(patch.xi0)) <= 1e-6


def test_connection_scalars_gauge_rotation(entries):
    # rotating the nullity pair by a constant angle rotates (f, g) by the
    # same angle and leaves w34 unchanged
    surface = entries["equilateral-torus"].surface
    xi = (1.4, 2.6, 1.0, 1.3)
    theta = np.pi / 3
    sc0 = connection_scalars(HypersurfacePatch(surface, xi))
    sc1 = connection_scalars(HypersurfacePatch(surface, xi,
                                               fiber_rotation=theta))
    expect = rotate_frame_scalars(sc0, theta)
    assert abs(sc1.f3 - expect.f3) <= 1e-8
    assert abs(sc1.f4 - expect.f4) <= 1e-8
    assert abs(sc1.g3 - expect.g3) <= 1e-8
    assert abs(sc1.g4 - expect.g4) <= 1e-8
    # the form omega^3_4 is unchanged (constant angle): e1/e2 values fixed,
    # nullity-slot values rotate with the basis
    assert np.allclose(sc1.w34, expect.w34, atol=1e-8)
    assert abs(sc1.lam - sc0.lam) <= 1e-8


def test_wrong_spectrum_propagates():
    # an umbilic non-minimal surface (small sphere): the pencil is a
    # multiple of the identity, so the nonzero principal curvatures of
    # the polar construction share a sign and violate lam1 = -lam2
    from s5frames.errors import S5FramesError
    from s5frames.surfaces import ChartDomain, SurfaceImmersion

    r0 = np.pi / 4

    def small_sphere(u, v):
        return np.array([
            np.sin(r0) * np.cos(u) * np.cos(v),
            np.sin(r0) * np.cos(u) * np.sin(v),
            np.sin(r0) * np.sin(u),
            np.cos(r0), 0.0, 0.0])

    surface = SurfaceImmersion(name="small-sphere",
                               chart=ChartDomain(-1, 1, -1, 1),
                               eval_fn=small_sphere, derivative_mode="fd")
    raised = 0
    for theta in (0.0, np.pi / 3, 2 * np.pi / 3, np.pi):
        for phi in (0.8, 1.6, 2.4):
            try:
                patch = HypersurfacePatch(surface, (0.1, 0.2, theta, phi))
            except S5FramesError:
                continue        # fiber direction outside the regular locus
            with pytest.raises(WrongSpectrum):
                connection_scalars(patch, spectrum_tol=1e-6)
            raised += 1
    assert raised > 0


# derivative identities -----------------------------------------------------------------

@pytest.mark.parametrize("name", ["clifford-torus", "equilateral-torus",
                                  "veronese"])
def test_identity_residuals_within_tolerance(name):
    surface = catalog.get(name).surface
    pts = sample_fiber_points(surface, 3, seed=11)
    for (u, v, th, ph) in pts:
        patch = HypersurfacePatch(surface, (u, v, th, ph))
        res = derivative_identity_residuals(patch)
        assert res.lam_e3 <= 1e-3 and res.lam_e4 <= 1e-3
        assert np.max(res.dif2) <= 1e-3
        assert np.max(res.dif3) <= 1e-3
        assert np.max(res.dif1) <= 1e-2
        assert np.max(res.dif_kn) <= 1e-3
        assert np.max(res.dlam12) <= 1e-3
        assert np.max(res.table12) <= 1e-3
        assert np.max(res.codazzi) <= 1e-3
        assert res.leaf_geodesic <= 1e-4
        assert res.skew <= 1e-6
        assert res.involutivity <= 1e-4
        assert res.bracket_reconstruction <= 1e-3
        assert np.max(res.gauss_map) <= 1e-8
        assert res.lam_cross <= 1e-6


def test_loop_closure_against_base_surface(entries):
    for name in ("clifford-torus", "equilateral-torus", "veronese"):
        surface = entries[name].surface
        pts = sample_fiber_points(surface, 2, seed=5)
        for (u, v, th, ph) in pts:
            patch = HypersurfacePatch(surface, (u, v, th, ph))
            eta = eta_curvatures(connection_scalars(patch))
            k_base, kn_base = base_invariants_at(surface, u, v)
            assert abs(eta.K - k_base) <= 1e-3
            assert abs(eta.KN - kn_base) <= 1e-3


def test_leaf_constancy_across_fiber(entries):
    surface = entries["equilateral-torus"].surface
    u, v = 2.1, 3.3
    ks, kns = [], []
    for th, ph in [(0.4, 1.2), (1.9, 1.5), (3.0, 1.8), (5.1, 1.1)]:
        patch = HypersurfacePatch(surface, (u, v, th, ph))
        eta = eta_curvatures(patch.raw_scalars(patch.xi0))
        ks.append(eta.K)
        kns.append(eta.KN)
    assert max(ks) - min(ks) <= 1e-6
    assert max(kns) - min(kns) <= 1e-6


def test_sample_fiber_points_deterministic(entries):
    surface = entries["veronese"].surface
    a = sample_fiber_points(surface, 5, seed=9)
    b = sample_fiber_points(surface, 5, seed=9)
    assert a == b
