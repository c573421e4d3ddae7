"""Ruled-strip meshing, developability probes and OBJ export.

The strip surface is gamma(s) + u D(s) with ruling direction D = lambda T + B.
Its tangent planes are constant along every ruling (the surface normal is -N
independent of u), which is what the developability probes test discretely.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import CurvatureProfile, FramedCurve
from .errors import WidthExceedsRegression


@dataclass
class StripMesh:
    h: float
    width: float
    u: np.ndarray                 # ruling offsets, length 2m+1
    vertices: np.ndarray          # (n, 2m+1, 3)
    ruling: np.ndarray            # (n, 3) = lambda T + B (not normalized)
    normal: np.ndarray            # (n, 3) = -N
    developability_defect: float

    @property
    def n(self) -> int:
        return self.vertices.shape[0]

    @property
    def columns(self) -> int:
        return self.vertices.shape[1]


def build_mesh(
    frame: FramedCurve, profile: CurvatureProfile, width: float, rulings_per_side: int
) -> StripMesh:
    """Quad mesh of the ruled strip with half-width ``width``.

    Guard: the surface parametrization has F_s = (1 + u lambda') T along the
    centerline directions, so the mesh must satisfy width * sup|lambda'| < 1
    or it would cross the edge of regression.

    The per-ruling discrete normals use centered differences in s (interior
    rulings only; one-sided differencing would leak an O(h) u-dependent term
    into the defect).
    """
    if width <= 0:
        raise ValueError("width must be positive")
    profile.require_jets()
    sup_dlam = float(np.abs(profile.dlam).max())
    if width * sup_dlam >= 1.0:
        bound = np.inf if sup_dlam == 0.0 else 1.0 / sup_dlam
        raise WidthExceedsRegression(width, bound)
    m = int(rulings_per_side)
    if m < 1:
        raise ValueError("rulings_per_side must be >= 1")
    u = width * np.arange(-m, m + 1) / m
    D = profile.lam[:, None] * frame.T + frame.B
    vertices = frame.gamma[:, None, :] + u[None, :, None] * D[:, None, :]

    # discrete normals: centered s-difference crossed with the ruling
    Fs = (vertices[2:] - vertices[:-2]) / (2.0 * frame.h)  # (n-2, cols, 3)
    Fu = D[1:-1, None, :]
    nrm = np.cross(Fs, Fu)
    nrm /= np.linalg.norm(nrm, axis=2, keepdims=True)
    ref = nrm[:, m, :][:, None, :]  # centerline column as per-ruling reference
    defect = float(np.linalg.norm(nrm - ref, axis=2).max())

    return StripMesh(
        h=frame.h,
        width=width,
        u=u,
        vertices=vertices,
        ruling=D,
        normal=-frame.N,
        developability_defect=defect,
    )


# ---------------------------------------------------------------------------
# discrete Gaussian curvature (angle defect over mixed Voronoi area)
# ---------------------------------------------------------------------------

def _triangles(n: int, cols: int) -> np.ndarray:
    """Consistent splitting of each quad; indices into the flattened grid.

    Quad corners A=(i,j), B=(i,j+1), C=(i+1,j+1), D=(i+1,j) become the
    triangles (A, D, C) and (A, C, B), oriented so the triangle normal
    matches F_s x F_u (the -N side).
    """
    i, j = np.meshgrid(np.arange(n - 1), np.arange(cols - 1), indexing="ij")
    a = (i * cols + j).ravel()
    b = (i * cols + j + 1).ravel()
    c = ((i + 1) * cols + j + 1).ravel()
    d = ((i + 1) * cols + j).ravel()
    return np.concatenate(
        [np.column_stack([a, d, c]), np.column_stack([a, c, b])], axis=0
    )


def gauss_curvature_probe(mesh_or_vertices) -> np.ndarray:
    """Angle-defect Gaussian curvature at interior vertices of a vertex grid.

    Accepts a StripMesh or a raw (n, cols, 3) grid (the latter is used by
    the calibration test on a sphere patch). K = (2 pi - sum of incident
    triangle angles) / mixed Voronoi area, per Meyer's discretization.
    Returns an (n-2, cols-2) array.
    """
    if isinstance(mesh_or_vertices, StripMesh):
        grid = mesh_or_vertices.vertices
    else:
        grid = np.asarray(mesh_or_vertices, dtype=float)
    n, cols, _ = grid.shape
    pts = grid.reshape(-1, 3)
    tris = _triangles(n, cols)

    angle_sum = np.zeros(pts.shape[0])
    area = np.zeros(pts.shape[0])
    p0 = pts[tris[:, 0]]
    p1 = pts[tris[:, 1]]
    p2 = pts[tris[:, 2]]
    corners = (p0, p1, p2)
    tri_area = 0.5 * np.linalg.norm(np.cross(p1 - p0, p2 - p0), axis=1)

    angles = []
    for k in range(3):
        a = corners[(k + 1) % 3] - corners[k]
        b = corners[(k + 2) % 3] - corners[k]
        cosang = np.sum(a * b, axis=1) / (
            np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1)
        )
        angles.append(np.arccos(np.clip(cosang, -1.0, 1.0)))
    angles = np.array(angles)  # (3, ntri)
    obtuse = angles.max(axis=0) > 0.5 * np.pi
    cot = 1.0 / np.tan(angles)

    for k in range(3):
        np.add.at(angle_sum, tris[:, k], angles[k])
        # Voronoi area: 1/8 (|opposite edges|^2 cot(far angles)); fall back
        # to 1/2 or 1/4 of the triangle area on obtuse triangles
        e_next = np.sum((corners[(k + 2) % 3] - corners[k]) ** 2, axis=1)
        e_prev = np.sum((corners[(k + 1) % 3] - corners[k]) ** 2, axis=1)
        voronoi = 0.125 * (e_next * cot[(k + 1) % 3] + e_prev * cot[(k + 2) % 3])
        mixed = np.where(
            obtuse,
            np.where(angles[k] > 0.5 * np.pi, 0.5 * tri_area, 0.25 * tri_area),
            voronoi,
        )
        np.add.at(area, tris[:, k], mixed)

    K = (2.0 * np.pi - angle_sum) / area
    K = K.reshape(n, cols)
    return K[1:-1, 1:-1]


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def export_obj(mesh: StripMesh) -> bytes:
    """Deterministic Wavefront OBJ text for the strip mesh.

    Vertices in row-major order at 17 significant digits (lossless for
    binary64), each quad split into the two triangles of _triangles, 1-based
    indices, counter-clockwise seen from the -N side.
    """
    lines = []
    for row in mesh.vertices.reshape(-1, 3):
        lines.append(f"v {row[0]:.17g} {row[1]:.17g} {row[2]:.17g}")
    for t in _triangles(mesh.n, mesh.columns):
        lines.append(f"f {t[0] + 1} {t[1] + 1} {t[2] + 1}")
    return ("\n".join(lines) + "\n").encode("ascii")


def parse_obj(data: bytes):
    """Inverse of export_obj, for round-trip tests: (vertices, faces)."""
    verts = []
    faces = []
    for line in data.decode("ascii").splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            verts.append([float(x) for x in parts[1:4]])
        elif parts[0] == "f":
            faces.append([int(x) - 1 for x in parts[1:4]])
    return np.array(verts), np.array(faces, dtype=int)
