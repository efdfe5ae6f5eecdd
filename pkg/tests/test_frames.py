import numpy as np
import pytest

from s5frames import catalog
from s5frames.errors import DegenerateImmersion, ZeroSecondFundamentalForm
from s5frames.frames import (
    FramePatch,
    align_normal_basis,
    build_frame,
    build_tangent_frame,
    complete_orthonormal,
)
from s5frames.surfaces import ChartDomain, SurfaceImmersion

SQ2 = np.sqrt(2.0)
SQ6 = np.sqrt(6.0)


def test_tangent_frame_geodesic_sphere_origin(origin_surfaces):
    fr = build_tangent_frame(origin_surfaces["geodesic-sphere"], (0.0, 0.0))
    assert np.allclose(fr.e1, [0, 0, 1, 0, 0, 0], atol=1e-12)
    assert np.allclose(fr.e2, [0, 1, 0, 0, 0, 0], atol=1e-12)


def test_tangent_frame_clifford_origin(origin_surfaces):
    fr = build_tangent_frame(origin_surfaces["clifford-torus"], (0.0, 0.0))
    assert np.allclose(fr.e1, [0, 1, 0, 0, 0, 0], atol=1e-12)
    assert np.allclose(fr.e2, [0, 0, 0, 1, 0, 0], atol=1e-12)


def test_tangent_frame_equilateral_origin(origin_surfaces):
    # hand Gram-Schmidt on the two partials at the origin
    fr = build_tangent_frame(origin_surfaces["equilateral-torus"], (0.0, 0.0))
    assert np.allclose(fr.e1, np.array([0, 1, 0, 0, 0, 1]) / SQ2, atol=1e-12)
    assert np.allclose(fr.e2, np.array([0, -1, 0, 2, 0, 1]) / SQ6, atol=1e-12)


@pytest.mark.parametrize("name", catalog.names())
def test_frame_orthonormality_invariant(name):
    surface = catalog.get(name).surface
    us, vs = surface.chart.interior_grid(5, 5)
    for u in us[::2]:
        for v in vs[::2]:
            fr = build_frame(surface, (u, v), "generic")
            assert fr.orthonormality_defect() <= 1e-10
            # e1, e2 span the chart differential image
            jac = surface.jacobian(u, v)
            proj = jac - fr.tangent @ (fr.tangent.T @ jac)
            assert np.max(np.abs(proj)) <= 1e-10
            # chart components reproduce the tangent vectors
            assert np.allclose(jac @ fr.v1, fr.e1, atol=1e-10)
            assert np.allclose(jac @ fr.v2, fr.e2, atol=1e-10)


def test_degenerate_immersion_raises():
    flat = SurfaceImmersion(
        name="collapsed",
        chart=ChartDomain(-1, 1, -1, 1),
        eval_fn=lambda u, v: np.array(
            [np.cos(u), np.sin(u), 0.0, 0.0, 0.0, 0.0]))
    with pytest.raises(DegenerateImmersion):
        build_tangent_frame(flat, (0.1, 0.2))


def test_generic_completion_geodesic_sphere(origin_surfaces):
    fr = build_frame(origin_surfaces["geodesic-sphere"], (0.0, 0.0), "generic")
    assert np.allclose(fr.e3, [0, 0, 0, 1, 0, 0], atol=1e-12)
    assert np.allclose(fr.e4, [0, 0, 0, 0, 1, 0], atol=1e-12)
    assert np.allclose(fr.e5, [0, 0, 0, 0, 0, 1], atol=1e-12)


def test_complete_orthonormal_sign_rule():
    base = np.eye(6)[:, :3]
    out = complete_orthonormal(base, 3)
    for k in range(3):
        first_nonzero = out[np.argmax(np.abs(out[:, k]) > 1e-12), k]
        assert first_nonzero > 0


def test_b_aligned_clifford(origin_surfaces):
    surface = origin_surfaces["clifford-torus"]
    fr = build_frame(surface, (0.0, 0.0), "b-aligned")
    # e3 is the in-S^3 normal; e4, e5 span the flat directions
    assert np.allclose(np.abs(fr.e3), np.array([1, 0, 1, 0, 0, 0]) / SQ2,
                       atol=1e-9)
    span45 = np.abs(fr.e4) + np.abs(fr.e5)
    assert np.allclose(span45[:4], 0.0, atol=1e-9)


def test_b_aligned_lower_triangular_equilateral(entries):
    from s5frames.invariants import second_fundamental_form
    surface = entries["equilateral-torus"].surface
    fr = build_frame(surface, (1.0, 2.0), "b-aligned")
    h = second_fundamental_form(surface, (1.0, 2.0), fr).h
    col = h[:, 0, :]                      # the (h^a_1j) 3x2 matrix
    assert abs(col[1, 0]) <= 1e-8         # zero below the diagonal
    assert abs(col[2, 0]) <= 1e-8
    assert abs(col[2, 1]) <= 1e-8
    assert abs(col[0, 0] * col[1, 1]) > 1e-3   # alpha * gamma != 0 (rank two)


def test_b_aligned_geodesic_sphere_raises(entries):
    surface = entries["geodesic-sphere"].surface
    with pytest.raises(ZeroSecondFundamentalForm):
        build_frame(surface, (0.3, 3.0), "b-aligned")


def test_align_normal_basis_is_gauge_independent(entries):
    surface = entries["equilateral-torus"].surface
    ref = build_frame(surface, (1.0, 2.0), "generic").normal
    # rotating the reference rotates the aligned frame identically
    theta = 0.7
    rot = np.array([[np.cos(theta), -np.sin(theta), 0],
                    [np.sin(theta), np.cos(theta), 0],
                    [0, 0, 1.0]])
    a1 = align_normal_basis(surface, 1.01, 2.02, ref)
    a2 = align_normal_basis(surface, 1.01, 2.02, ref @ rot)
    assert np.allclose(a1 @ rot, a2, atol=1e-12)


def test_frame_patch_smooth_and_parallel_at_anchor(entries):
    surface = entries["veronese"].surface
    patch = FramePatch(surface, 0.4, 2.0)
    # continuity: small steps move the frame by O(step)
    f0 = patch.frame_at(0.4, 2.0).normal
    f1 = patch.frame_at(0.4 + 1e-4, 2.0).normal
    assert np.max(np.abs(f1 - f0)) < 1e-3
    # normal-parallel at the anchor: in-normal-space rotation vanishes
    s = 1e-5
    for dd in ((s, 0.0), (0.0, s)):
        fp = patch.frame_at(0.4 + dd[0], 2.0 + dd[1]).normal
        fm = patch.frame_at(0.4 - dd[0], 2.0 - dd[1]).normal
        omega = f0.T @ (fp - fm) / (2 * s)
        assert np.max(np.abs(omega)) < 1e-6
