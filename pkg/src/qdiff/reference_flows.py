"""The analytic example flow and the icosasphere deformation experiment.

The example vector field is

    v(x, y, z) = (y - x z, -x - y z, 1 - z^2),

a unit-speed rotation about the z-axis combined with a source-to-sink
flow from the south pole to the north pole.  Its flow map Phi has the
closed form implemented by exact_flow, with per-trajectory constants
A, B, C; an RK4 integrator of the same ODE serves as an independent
oracle.

The field is generated by the complex function psi = alpha(s1 + i s2)
Y_{1,0} with alpha = sqrt(4 pi / 3): the real part drives the rotation
(Hamiltonian part), the imaginary part the gradient part.  With our
bracket conventions the signs (s1, s2) = (-1, +1) reproduce v exactly;
gradient_sign=-1 selects the variant with the opposite gradient
component, whose quantized density action exp(P) exp(P)^dagger is
largest near the south pole.
"""

from dataclasses import dataclass

import numpy as np

from .quantization import HarmonicCoefficients

ALPHA = np.sqrt(4.0 * np.pi / 3.0)


def example_field(p):
    """v at one unit vector or an (..., 3) array of them; tangent to the sphere."""
    p = np.asarray(p, dtype=np.float64)
    x, y, z = p[..., 0], p[..., 1], p[..., 2]
    return np.stack([y - x * z, -x - y * z, 1.0 - z * z], axis=-1)


def example_generator(gradient_sign=1):
    """Coefficients of the degree-1 complex generator of the example field.

    gradient_sign=+1 gives psi = alpha(-1 + i) Y_{1,0}, whose induced
    classical field equals example_field; gradient_sign=-1 flips the
    sign of the imaginary (gradient) part.
    """
    if gradient_sign not in (1, -1):
        raise ValueError("gradient_sign must be +1 or -1")
    out = HarmonicCoefficients.zeros(1)
    out[1, 0] = ALPHA * (-1.0 + 1j * gradient_sign)
    return out


@dataclass(frozen=True)
class FlowConstants:
    A: float
    B: float
    C: float


def flow_constants(y0):
    """Integration constants of the trajectory through y0; y0 must not be
    the south pole (a fixed point, where the closed form degenerates)."""
    y0 = np.asarray(y0, dtype=np.float64)
    if y0[2] <= -1.0 + 1e-15:
        raise ValueError("fixed point: constants undefined")
    C = (1.0 - y0[2]) / (1.0 + y0[2])
    return FlowConstants(A=y0[0] * (1.0 + C), B=y0[1] * (1.0 + C), C=C)


def exact_flow(y0, t):
    """Phi_{y0}(t) for one point or an (..., 3) array of points.

    The trajectory constants blow up as z0 -> -1, so the quotient is
    evaluated in terms of u = 1 + z0, which is algebraically identical
    but stays finite there: the exact south pole is returned as the
    fixed point it is, and a vertex nudged off the pole spirals away.
    """
    y0 = np.asarray(y0, dtype=np.float64)
    z0 = y0[..., 2]
    if np.any(np.abs(z0) > 1.0 + 1e-9):
        raise ValueError("points must lie on the unit sphere")
    u = np.maximum(1.0 + z0, 0.0)
    cx = y0[..., 0] * np.cos(t) + y0[..., 1] * np.sin(t)
    cy = -y0[..., 0] * np.sin(t) + y0[..., 1] * np.cos(t)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        et = np.exp(t)
        e2t = np.exp(2.0 * t)
        den = (2.0 - u) + u * e2t
        out = np.stack(
            [2.0 * et * cx / den, 2.0 * et * cy / den, (u * e2t - 2.0 + u) / den],
            axis=-1,
        )
    # overflow at large t: everything except the exact south pole has
    # reached the north pole by then
    far = ~np.isfinite(out).all(axis=-1)
    if np.any(far):
        pole = (u <= 0.0) & (y0[..., 0] == 0.0) & (y0[..., 1] == 0.0)
        out = np.where(far[..., None], np.array([0.0, 0.0, 1.0]), out)
        out = np.where(pole[..., None], np.array([0.0, 0.0, -1.0]), out)
    nrm = np.linalg.norm(out, axis=-1, keepdims=True)
    return out / np.where(nrm == 0.0, 1.0, nrm)


def rk4_flow(y0, t, h):
    """RK4 integration of ydot = v(y), renormalized to the sphere each step."""
    if h <= 0.0:
        raise ValueError("step size must be positive")
    y = np.asarray(y0, dtype=np.float64).copy()
    n = int(np.ceil(t / h - 1e-12)) if t > 0 else 0
    for k in range(n):
        hk = min(h, t - k * h)
        k1 = example_field(y)
        k2 = example_field(y + 0.5 * hk * k1)
        k3 = example_field(y + 0.5 * hk * k2)
        k4 = example_field(y + hk * k3)
        y = y + (hk / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        y = y / np.linalg.norm(y, axis=-1, keepdims=True)
    return y


@dataclass
class TriMesh:
    """Triangulated sphere: unit vertices, index triples, optional per-face scalars."""

    vertices: np.ndarray
    faces: np.ndarray
    face_scalars: np.ndarray = None

    @property
    def n_vertices(self):
        return self.vertices.shape[0]

    @property
    def n_faces(self):
        return self.faces.shape[0]

    def euler_characteristic(self):
        edges = set()
        for a, b, c in self.faces:
            for u, v in ((a, b), (b, c), (c, a)):
                edges.add((min(u, v), max(u, v)))
        return self.n_vertices - len(edges) + self.n_faces


def icosasphere(refinements):
    """Icosahedron subdivided `refinements` times, vertices on the sphere."""
    if refinements < 0:
        raise ValueError("refinements must be >= 0")
    if refinements > 8:
        raise ValueError("refinements > 8 exceeds the resource guard")
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    verts = [
        (-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
        (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
        (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1),
    ]
    verts = [np.array(v, dtype=np.float64) / np.linalg.norm(v) for v in verts]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    for _ in range(refinements):
        cache = {}

        def midpoint(i, j):
            key = (min(i, j), max(i, j))
            if key not in cache:
                v = verts[i] + verts[j]
                verts.append(v / np.linalg.norm(v))
                cache[key] = len(verts) - 1
            return cache[key]

        new_faces = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
    return TriMesh(np.array(verts), np.array(faces, dtype=np.int64))


def transport_mesh(mesh, t):
    """Mesh with every vertex moved by exact_flow; connectivity unchanged.

    A vertex exactly at the south pole (a fixed point outside the closed
    form's domain) is first nudged by 1e-12 toward x-hat.
    """
    verts = mesh.vertices.copy()
    south = verts[:, 2] <= -1.0 + 1e-15
    if np.any(south):
        verts[south, 0] += 1e-12
        verts[south] /= np.linalg.norm(verts[south], axis=1, keepdims=True)
    return TriMesh(exact_flow(verts, t), mesh.faces.copy(), None)


def spherical_face_areas(mesh):
    """Per-face spherical triangle areas by l'Huilier's formula."""
    v = mesh.vertices
    f = mesh.faces
    p, q, r = v[f[:, 0]], v[f[:, 1]], v[f[:, 2]]

    def side(u, w):
        return np.arccos(np.clip(np.sum(u * w, axis=1), -1.0, 1.0))

    a, b, c = side(q, r), side(r, p), side(p, q)
    s = 0.5 * (a + b + c)
    prod = (
        np.tan(0.5 * s)
        * np.tan(0.5 * (s - a))
        * np.tan(0.5 * (s - b))
        * np.tan(0.5 * (s - c))
    )
    return 4.0 * np.arctan(np.sqrt(np.maximum(prod, 0.0)))


def face_area_ratios(before, after):
    """Per-face area quotient after/before for meshes of equal connectivity."""
    if before.faces.shape != after.faces.shape or np.any(before.faces != after.faces):
        raise ValueError("meshes must share connectivity")
    a0 = spherical_face_areas(before)
    a1 = spherical_face_areas(after)
    bad = a0 < 1e-14
    if np.any(bad):
        raise ValueError(f"degenerate faces in the reference mesh: {np.nonzero(bad)[0][:5]}")
    return a1 / a0


def face_centroids(mesh):
    """Unit-vector centroids of all faces."""
    v = mesh.vertices[mesh.faces]
    c = v.mean(axis=1)
    return c / np.linalg.norm(c, axis=1, keepdims=True)
