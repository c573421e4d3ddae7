import numpy as np
import pytest

from stripforge.errors import WidthExceedsRegression
from stripforge.surface import (
    build_mesh,
    export_obj,
    gauss_curvature_probe,
    parse_obj,
)


@pytest.fixture(scope="module")
def helix_mesh(helix_strip):
    return build_mesh(helix_strip.frame, helix_strip.profile, 0.2, 4)


class TestBuildMesh:
    def test_shape_and_offsets(self, helix_mesh):
        assert helix_mesh.columns == 9
        assert helix_mesh.vertices.shape == (helix_mesh.n, 9, 3)
        np.testing.assert_allclose(helix_mesh.u[0], -0.2)
        np.testing.assert_allclose(helix_mesh.u[-1], 0.2)
        np.testing.assert_allclose(helix_mesh.u[4], 0.0)

    def test_center_column_is_centerline(self, helix_mesh, helix_strip):
        np.testing.assert_array_equal(
            helix_mesh.vertices[:, 4, :], helix_strip.frame.gamma
        )

    def test_ruling_direction(self, helix_mesh, helix_strip):
        D = (helix_strip.profile.lam[:, None] * helix_strip.frame.T
             + helix_strip.frame.B)
        np.testing.assert_allclose(helix_mesh.ruling, D, atol=1e-14)

    def test_constant_profile_is_flat_to_roundoff(self, helix_mesh):
        assert helix_mesh.developability_defect <= 1e-10

    def test_oscillating_strip_is_developable(self, force_free_strip):
        width = 0.5 / np.abs(force_free_strip.profile.dlam).max()
        mesh = build_mesh(force_free_strip.frame, force_free_strip.profile,
                          width, 3)
        assert mesh.developability_defect <= 1e-5

    def test_width_guard(self, force_free_strip):
        bad = 1.5 / np.abs(force_free_strip.profile.dlam).max()
        with pytest.raises(WidthExceedsRegression):
            build_mesh(force_free_strip.frame, force_free_strip.profile, bad, 3)

    def test_rejects_bad_arguments(self, helix_strip):
        with pytest.raises(ValueError):
            build_mesh(helix_strip.frame, helix_strip.profile, -0.1, 3)
        with pytest.raises(ValueError):
            build_mesh(helix_strip.frame, helix_strip.profile, 0.1, 0)


class TestGaussCurvature:
    def test_strip_is_intrinsically_flat(self, helix_mesh):
        K = gauss_curvature_probe(helix_mesh)
        assert K.shape == (helix_mesh.n - 2, helix_mesh.columns - 2)
        assert np.abs(K).max() <= 1e-6

    def test_sphere_patch_negative_control(self):
        # a patch of the unit sphere must report K near 1, not near 0
        th = np.linspace(0.9, 1.3, 60)
        ph = np.linspace(0.0, 0.5, 40)
        TH, PH = np.meshgrid(th, ph, indexing="ij")
        grid = np.stack(
            [np.sin(TH) * np.cos(PH), np.sin(TH) * np.sin(PH), np.cos(TH)],
            axis=-1,
        )
        K = gauss_curvature_probe(grid)
        assert np.abs(K - 1.0).max() <= 1e-3


class TestObjExport:
    def test_roundtrip_is_exact(self, helix_mesh):
        data = export_obj(helix_mesh)
        verts, faces = parse_obj(data)
        np.testing.assert_array_equal(
            verts, helix_mesh.vertices.reshape(-1, 3)
        )
        assert faces.shape == (2 * (helix_mesh.n - 1) * (helix_mesh.columns - 1), 3)
        assert faces.min() == 0
        assert faces.max() == helix_mesh.n * helix_mesh.columns - 1

    def test_export_is_deterministic(self, helix_mesh):
        assert export_obj(helix_mesh) == export_obj(helix_mesh)

    def test_faces_oriented_away_from_normal_vector(self, helix_mesh):
        data = export_obj(helix_mesh)
        verts, faces = parse_obj(data)
        p0, p1, p2 = (verts[faces[:, k]] for k in range(3))
        fn = np.cross(p1 - p0, p2 - p0)
        # every face normal should agree with the stored surface normal -N
        row = np.minimum(faces[:, 0] // helix_mesh.columns, helix_mesh.n - 1)
        agree = np.sum(fn * helix_mesh.normal[row], axis=1)
        assert agree.min() > 0
