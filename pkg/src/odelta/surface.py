"""Meshes of the fundamental hexagon, its 8-copy extension and the tP ratio.

The upper half-plane is moved to the unit disk by ``w = (z - i s)/(z + i s)``
with ``s = sqrt(t)``.  The six vertex preimages land on the unit circle and
``z = infinity`` becomes the regular boundary point ``w = 1``.  Because the
exponents of every form add up to -2, a form pulls back to

    F(w) dw = c / (2 i s) * prod h_j(w)**e_j dw,   h_j = (w - w_j)/(1 - w_j),

and each ``h_j`` maps the disk into a disk through 0 that misses the negative
real axis, so principal square roots give one continuous branch.  Surface
points are ``Re(exp(i theta) * integral of omega)`` along straight segments,
starting from the image of ``z = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from .periods import (
    DH_EXP,
    PERIOD_TOL,
    PHI1_EXP,
    PHI2_EXP,
    EdgePeriods,
    FamilyParams,
    WeierstrassData,
    edge_periods,
)
from .quad import MESH_TOL, SingularIntegrand, integrate_singular

CHUNK = 48
OFF_CENTER_TOL = 1e-7
WELD_RADIUS = 1e-6
ANCHOR_TOL = 1e-8
# Schwarz' D surface in this normalisation: its branched values sit on a cube
D_POINT = (math.sqrt(3.0), math.sqrt(3.0), 3.0)

# coordinate held fixed along each planar arc, and direction of each segment
PLANE_AXIS = {1: 0, 2: 1, 4: 1, 5: 0}
LINE_AXIS = {6: 0, 3: 1}


class SurfaceError(ArithmeticError):
    pass


class OffCenterError(SurfaceError):
    """Boundary segments are not centred, so the copies do not close up."""

    def __init__(self, message, dx, dy):
        super().__init__(message)
        self.dx = dx
        self.dy = dy


class AssemblyError(SurfaceError):
    pass


@dataclass(frozen=True)
class MeshProvenance:
    params: FamilyParams
    theta: float
    resolution: int
    copies: int = 1


@dataclass(frozen=True)
class SurfaceMesh:
    """Triangle mesh with per-vertex boundary tags.

    ``boundary_tags[i]`` is k in 1..6 when vertex i lies on the image of
    edge ``v_k v_(k+1)`` (edge 6 passes through infinity) and 0 inside.  A
    vertex image ``V_k`` carries tag k.  ``corners`` holds the indices of
    ``V_1 .. V_6`` and ``chart`` the disk coordinate of every vertex, for
    single hexagons.
    """

    vertices: np.ndarray
    faces: np.ndarray
    boundary_tags: np.ndarray
    provenance: MeshProvenance | None = None
    corners: tuple = ()
    chart: np.ndarray | None = field(default=None, repr=False)
    copy_index: np.ndarray | None = field(default=None, repr=False)

    @property
    def diameter(self):
        v = self.vertices
        return float(np.linalg.norm(v.max(axis=0) - v.min(axis=0)))


@dataclass(frozen=True)
class BoxReport:
    """Bounding box and lattice of the 8-copy cell, scaled to height 1.

    ``A`` and ``B`` are the side lengths of the box; the lattice is spanned by
    ``(2A, 0, 0)``, ``(0, 2B, 0)`` and ``(A, B, 2)``.
    """

    A: float
    B: float
    height: float
    centered: tuple
    lattice: np.ndarray
    off_centering: tuple
    weld_residual: float
    euler_characteristic: int
    closed: bool
    scale: float


class DiskChart:
    """The Weierstrass forms of one parameter point in the disk coordinate."""

    def __init__(self, data: WeierstrassData):
        p = data.params
        self.data = data
        self.s = math.sqrt(p.t)
        self.alphas = np.array([math.pi + 2.0 * math.atan(v / self.s) for v in p.vertices])
        self.w_vertices = np.exp(1j * self.alphas)
        self._one_minus = 1.0 - self.w_vertices
        rho = data.rho
        consts = {"phi1": rho, "phi2": -1.0 / rho, "dh": -1j}
        self._exps = {"phi1": PHI1_EXP, "phi2": PHI2_EXP, "dh": DH_EXP}
        self._const = {}
        w_ref = np.array([0.3 + 0.2j, -0.4 + 0.5j])
        z_ref = self.to_half_plane(w_ref)
        jac = 2j * self.s / (1.0 - w_ref) ** 2
        direct = {"phi1": data.phi1(z_ref), "phi2": data.phi2(z_ref), "dh": data.dh(z_ref)}
        for name in consts:
            raw = self._raw(name, self._diffs(w_ref[None, :]))[0] * consts[name] / (2j * self.s)
            ratio = direct[name] * jac / raw
            kappa = float(np.sign(ratio[0].real))
            if not np.all(np.abs(ratio - kappa) < 1e-8):
                raise SurfaceError(f"branch of {name} in the disk chart is inconsistent: {ratio}")
            self._const[name] = kappa * consts[name] / (2j * self.s)

    def to_disk(self, z):
        z = np.asarray(z, dtype=complex)
        return (z - 1j * self.s) / (z + 1j * self.s)

    def to_half_plane(self, w):
        w = np.asarray(w, dtype=complex)
        return 1j * self.s * (1.0 + w) / (1.0 - w)

    def _diffs(self, u):
        return [u - wj for wj in self.w_vertices]

    def _raw(self, name, diffs):
        out = None
        for j, e in enumerate(self._exps[name]):
            if e == 0:
                continue
            r = np.sqrt(diffs[j] / self._one_minus[j])
            f = r if e > 0 else 1.0 / r
            out = f if out is None else out * f
        return out

    def omega(self, diffs):
        """(omega1, omega2, omega3) in the w coordinate, stacked on axis -2."""
        f1 = self._const["phi1"] * self._raw("phi1", diffs)
        f2 = self._const["phi2"] * self._raw("phi2", diffs)
        f3 = self._const["dh"] * self._raw("dh", diffs)
        return np.stack([0.5 * (f2 - f1), 0.5j * (f2 + f1), f3], axis=-2)

    def omega_at(self, w):
        return self.omega(self._diffs(np.asarray(w, dtype=complex)))

    def metric_factor(self, w):
        """Conformal factor of X = Re(integral omega) with respect to |dw|."""
        om = self.omega_at(w)
        return np.sqrt(0.5 * np.sum(np.abs(om) ** 2, axis=-2))

    def segment_integrals(self, p0, p1, v0=None, v1=None, tol=MESH_TOL):
        """Integrals of omega along the segments p0[i] -> p1[i].

        ``v0[i]``/``v1[i]`` give the vertex index (0..5) when an endpoint is a
        vertex preimage, else -1; the distance to that vertex is then formed
        from the node tables instead of by subtraction.
        """
        p0 = np.atleast_1d(np.asarray(p0, dtype=complex))
        p1 = np.atleast_1d(np.asarray(p1, dtype=complex))
        n = len(p0)
        v0 = np.full(n, -1) if v0 is None else np.atleast_1d(v0)
        v1 = np.full(n, -1) if v1 is None else np.atleast_1d(v1)
        out = np.zeros((n, 3), dtype=complex)
        for start in range(0, n, CHUNK):
            sl = slice(start, start + CHUNK)
            a, d = p0[sl], p1[sl] - p0[sl]
            s0, s1 = v0[sl], v1[sl]
            if not np.any(np.abs(d) > 0):
                continue

            def f(tau, dl, dr, a=a, d=d, s0=s0, s1=s1):
                u = a[:, None] + tau[None, :] * d[:, None]
                diffs = self._diffs(u)
                for j in range(6):
                    end = s1 == j
                    if end.any():
                        diffs[j][end] = -d[end, None] * dr[None, :]
                    beg = s0 == j
                    if beg.any():
                        diffs[j][beg] = d[beg, None] * dl[None, :]
                return self.omega(diffs) * d[:, None, None]

            out[sl] = integrate_singular(SingularIntegrand(f, 0.0, 1.0), tol=tol)
        return out


@lru_cache(maxsize=32)
def _chart(a, b, t, rho):
    return DiskChart(WeierstrassData(FamilyParams(a, b, t, rho)))


def disk_chart(data: WeierstrassData) -> DiskChart:
    p = data.params
    return _chart(p.a, p.b, p.t, data.rho)


def _vertex_index(params, z):
    if z.imag == 0:
        for k, v in enumerate(params.vertices):
            if z.real == v:
                return k
    return -1


def primitive(chart: DiskChart, w, vertex=None, tol=MESH_TOL):
    """Integral of omega from the disk centre to each w along radii."""
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    return chart.segment_integrals(np.zeros_like(w), w, None, vertex, tol)


def _base(chart, tol):
    return primitive(chart, np.array([-1.0 + 0j]), tol=tol)[0]


def weierstrass_point(data: WeierstrassData, z, theta: float = 0.0, tol=MESH_TOL):
    """Re(exp(i theta) * integral of omega from z0 = 0 to z).

    ``z`` lies in the closed upper half-plane; a real z equal to a vertex
    preimage is treated as that vertex, and ``math.inf`` is allowed.
    """
    chart = disk_chart(data)
    z = complex(z)
    if z.imag < 0:
        raise ValueError(f"z must lie in the closed upper half-plane, got {z!r}")
    if math.isinf(z.real) or math.isinf(z.imag):
        w, k = 1.0 + 0j, -1
    else:
        k = _vertex_index(data.params, z)
        w = chart.w_vertices[k] if k >= 0 else complex(chart.to_disk(z))
    val = primitive(chart, [w], [k], tol)[0] - _base(chart, tol)
    return np.real(np.exp(1j * theta) * val)


def path_point(data: WeierstrassData, path, theta: float = 0.0, tol=MESH_TOL):
    """Same as ``weierstrass_point`` but along a polyline of disk points.

    ``path`` starts anywhere in the closed disk; the result is measured from
    the image of ``z = 0`` through the radial primitive at the start point.
    """
    chart = disk_chart(data)
    path = np.asarray(path, dtype=complex)
    total = primitive(chart, path[:1], tol=tol)[0] - _base(chart, tol)
    total = total + chart.segment_integrals(path[:-1], path[1:], tol=tol).sum(axis=0)
    return np.real(np.exp(1j * theta) * total)


def _disk_samples(chart: DiskChart, n: int):
    """Angles with Chebyshev-Lobatto clustering at the six vertex angles."""
    al = chart.alphas
    ends = np.append(al[1:], al[0] + 2 * math.pi)
    angles, tags, corner = [], [], []
    j = np.arange(n)
    frac = 0.5 * (1.0 - np.cos(np.pi * j / n))
    for k in range(6):
        corner.append(len(angles))
        angles.extend((al[k] + (ends[k] - al[k]) * frac).tolist())
        tags.extend([k + 1] * n)
    return np.array(angles), np.array(tags), corner


def fundamental_hexagon(params: FamilyParams, resolution: int = 8, theta: float = 0.0,
                        tol=MESH_TOL) -> SurfaceMesh:
    """Mesh the image of the upper half-plane under the Weierstrass map.

    The disk is sampled on ``resolution`` rings, clustered toward the rim,
    times ``6 * resolution`` angles.
    """
    if resolution < 4:
        raise ValueError(f"resolution must be at least 4, got {resolution}")
    data = WeierstrassData(params)
    chart = disk_chart(data)
    n = int(resolution)
    angles, tags, corner = _disk_samples(chart, n)
    m = len(angles)
    radii = np.sin(0.5 * np.pi * np.arange(1, n + 1) / n)
    radii[-1] = 1.0
    ring = np.exp(1j * angles)
    w = np.concatenate([[0j], (radii[:, None] * ring[None, :]).ravel()])
    # rim points use exactly the unit-circle values, vertices their own preimage
    rim = slice(1 + (n - 1) * m, 1 + n * m)
    w[rim] = ring
    vidx = np.full(len(w), -1)
    corner_idx = tuple(1 + (n - 1) * m + c for c in corner)
    for k, ci in enumerate(corner_idx):
        w[ci] = chart.w_vertices[k]
        vidx[ci] = k
    vals = primitive(chart, w, vidx, tol) - _base(chart, tol)
    xyz = np.real(np.exp(1j * theta) * vals)

    btags = np.zeros(len(w), dtype=int)
    btags[rim] = tags
    faces = []
    for jj in range(m):
        faces.append((0, 1 + jj, 1 + (jj + 1) % m))
    for i in range(n - 1):
        base0, base1 = 1 + i * m, 1 + (i + 1) * m
        for jj in range(m):
            j2 = (jj + 1) % m
            a, b = base0 + jj, base0 + j2
            c, d = base1 + jj, base1 + j2
            faces.append((a, c, d))
            faces.append((a, d, b))
    return SurfaceMesh(
        xyz, np.array(faces, dtype=np.int64), btags,
        MeshProvenance(params, float(theta), n), corner_idx, w,
    )


def boundary_residuals(mesh: SurfaceMesh):
    """Deviation of each boundary arc from its plane or line, over the diameter.

    Returns ``(residuals, diameter)`` with residuals keyed by edge 1..6.
    Meaningful for the theta = 0 hexagon.
    """
    if len(mesh.corners) != 6:
        raise ValueError("boundary residuals need a single hexagon with its corners")
    X = mesh.vertices
    diam = mesh.diameter
    out = {}
    for k in range(1, 7):
        idx = np.nonzero(mesh.boundary_tags == k)[0].tolist()
        idx.append(mesh.corners[k % 6])
        ref = X[mesh.corners[k - 1]]
        pts = X[idx]
        if k in PLANE_AXIS:
            ax = PLANE_AXIS[k]
            dev = np.abs(pts[:, ax] - ref[ax]).max()
        else:
            keep = [c for c in range(3) if c != LINE_AXIS[k]]
            dev = np.abs(pts[:, keep] - ref[keep]).max()
        out[k] = float(dev) / diam
    return out, diam


def _affine_generators(V):
    """Reflections in the lateral planes through V1, V2 and the half-turns
    about the bottom segment (through V1, along x) and the top one (through
    V3, along y)."""
    gens = []
    gens.append((np.diag([-1.0, 1, 1]), np.array([2 * V[0][0], 0, 0])))
    gens.append((np.diag([1.0, -1, 1]), np.array([0, 2 * V[1][1], 0])))
    gens.append((np.diag([1.0, -1, -1]), np.array([0, 2 * V[0][1], 2 * V[0][2]])))
    gens.append((np.diag([-1.0, 1, -1]), np.array([2 * V[2][0], 0, 2 * V[2][2]])))
    return gens


def symmetry_copies(V):
    """One group element per linear part, by breadth-first search (8 total)."""
    gens = _affine_generators(V)
    found = {(1, 1, 1): (np.eye(3), np.zeros(3))}
    frontier = [found[(1, 1, 1)]]
    while frontier and len(found) < 8:
        nxt = []
        for R, c in frontier:
            for Rs, cs in gens:
                R2, c2 = Rs @ R, Rs @ c + cs
                key = tuple(int(x) for x in np.round(np.diag(R2)))
                if key not in found:
                    found[key] = (R2, c2)
                    nxt.append((R2, c2))
        frontier = nxt
    return list(found.values())


class _UnionFind:
    def __init__(self, n):
        self.parent = np.arange(n)

    def find(self, i):
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i, j):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)

    def labels(self):
        return np.array([self.find(i) for i in range(len(self.parent))])


def _compact(labels):
    _, inv = np.unique(labels, return_inverse=True)
    return inv


def euler_characteristic(n_vertices, faces):
    """(chi, closed) for a triangle list on ``n_vertices`` vertices."""
    f = np.asarray(faces)
    e = np.sort(np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]]), axis=1)
    uniq, counts = np.unique(e, axis=0, return_counts=True)
    return int(n_vertices - len(uniq) + len(f)), bool(np.all(counts == 2))


def _periodic_weld(X, A, B, radius):
    box = np.array([2 * A, 2 * B, 4.0])
    shift = np.array([A, B, 2.0])
    n = len(X)
    pts = np.concatenate([X, X + shift])
    pts = np.mod(pts, box)
    pts = np.where(pts >= box, pts - box, pts)
    tree = cKDTree(pts, boxsize=box)
    pairs = tree.query_pairs(radius, output_type="ndarray")
    uf = _UnionFind(n)
    worst = 0.0
    for i, j in pairs:
        d = pts[i] - pts[j]
        d -= box * np.round(d / box)
        worst = max(worst, float(np.linalg.norm(d)))
        uf.union(i % n, j % n)
    return _compact(uf.labels()), worst


def extend_to_lattice_cell(hexmesh: SurfaceMesh, off_center_tol=OFF_CENTER_TOL,
                           weld_radius=WELD_RADIUS):
    """Eight symmetric copies of the hexagon forming a lattice fundamental domain.

    Coordinates are scaled to box height 1 with the origin at the centre of
    the box bottom.  The returned mesh merges coincident vertices; the report
    carries the weld residual and the Euler characteristic of the quotient by
    the lattice.

    Raises:
        OffCenterError: the straight segments are off-centre by more than
            ``off_center_tol`` times the height (the periods do not close).
    """
    prov = hexmesh.provenance
    if prov is None or prov.copies != 1 or len(hexmesh.corners) != 6:
        raise ValueError("extension needs a single fundamental hexagon")
    if abs(prov.theta) > 0:
        raise ValueError("extension is defined for the theta = 0 surface")
    X = hexmesh.vertices
    V = [X[c] for c in hexmesh.corners]
    x1, x5, y2, y4 = V[0][0], V[4][0], V[1][1], V[3][1]
    zb, zt = V[5][2], V[2][2]
    height = zt - zb
    dx = abs(V[2][0] - 0.5 * (x1 + x5))
    dy = abs(V[0][1] - 0.5 * (y2 + y4))
    if max(dx, dy) > off_center_tol * abs(height):
        raise OffCenterError(
            f"segments off-centre by dx={dx:.3g}, dy={dy:.3g} (height {height:.3g}); "
            "the period conditions are not satisfied",
            dx, dy,
        )
    scale = 1.0 / height
    origin = np.array([0.5 * (x1 + x5), 0.5 * (y2 + y4), zb])
    Xn = (X - origin) * scale
    Vn = [(v - origin) * scale for v in V]
    A, B = abs(x1 - x5) * scale, abs(y2 - y4) * scale

    copies = symmetry_copies(Vn)
    n = len(Xn)
    allX, allF, tags, cidx = [], [], [], []
    for k, (R, c) in enumerate(copies):
        allX.append(Xn @ R.T + c)
        f = hexmesh.faces if np.linalg.det(R) > 0 else hexmesh.faces[:, ::-1]
        allF.append(f + k * n)
        tags.append(hexmesh.boundary_tags)
        cidx.append(np.full(n, k))
    allX = np.concatenate(allX)
    allF = np.concatenate(allF)

    # quotient by the lattice: closed surface of genus 3
    qlab, weld = _periodic_weld(allX, A, B, weld_radius)
    chi, closed = euler_characteristic(qlab.max() + 1, qlab[allF])

    # plain spatial weld for the exported cell
    tree = cKDTree(allX)
    uf = _UnionFind(len(allX))
    for i, j in tree.query_pairs(weld_radius, output_type="ndarray"):
        uf.union(i, j)
    lab = uf.labels()
    keep, inv = np.unique(lab, return_inverse=True)
    mesh = SurfaceMesh(
        allX[keep], inv[allF], np.concatenate(tags)[keep],
        MeshProvenance(prov.params, prov.theta, prov.resolution, len(copies)),
        copy_index=np.concatenate(cidx)[keep],
    )
    lattice = np.array([[2 * A, 0, 0], [0, 2 * B, 0], [A, B, 2.0]])
    report = BoxReport(
        A, B, 1.0,
        (dx <= off_center_tol * abs(height), dy <= off_center_tol * abs(height)),
        lattice, (dx * scale, dy * scale), weld, chi, closed, scale,
    )
    return mesh, report


def edge_vectors(p: EdgePeriods, rho: float = 1.0, theta: float = 0.0):
    """Displacements V_(k+1) - V_k of the hexagon images, k = 1..6.

    On every edge each form has constant phase, so the displacements follow
    from the edge lengths.  ``theta`` may be 0 (the surface) or pi/2 (its
    conjugate).
    """
    I = [rho * p.i(k) for k in range(1, 7)]
    J = [p.j(k) / rho for k in range(1, 7)]
    H = [p.h(k) for k in range(1, 7)]
    # complex edge integrals of (omega1, omega2, omega3); phases per edge
    phase1 = {6: 1, 1: 1j, 2: -1, 3: -1j, 4: 1, 5: -1j}
    phase2 = {6: -1, 1: -1j, 2: -1, 3: -1j, 4: 1, 5: 1j}
    phase3 = {6: -1j, 1: 1, 2: 1, 3: 1j, 4: -1, 5: -1}
    out = {}
    for k in range(1, 7):
        f1 = phase1[k] * I[k - 1]
        f2 = phase2[k] * J[k - 1]
        om = np.array([0.5 * (f2 - f1), 0.5j * (f2 + f1), phase3[k] * H[k - 1]])
        out[k] = np.real(np.exp(1j * theta) * om)
    return out


def conjugate_cell_dimensions(params: FamilyParams, tol=PERIOD_TOL):
    """(E, F) of the tetragonal cell of the conjugate surface.

    The conjugate hexagon is a quarter of a catenoid spanned by two parallel
    squares: its horizontal edges are half sides, its two vertical edges
    join the square planes.  The cell's lateral faces are diagonal mirror
    planes, so E is the square diagonal and F twice the plane distance.
    """
    rho = 1.0 if params.rho is None else params.rho
    ev = edge_vectors(edge_periods(params, tol), rho, 0.5 * math.pi)
    side_x = abs(ev[1][0]) + abs(ev[5][0])
    side_y = abs(ev[2][1]) + abs(ev[4][1])
    if abs(side_x - side_y) > 1e-8 * side_x:
        raise AssemblyError(f"conjugate squares are not square: {side_x!r} vs {side_y!r}")
    h = abs(ev[3][2])
    if abs(h - abs(ev[6][2])) > 1e-8 * h:
        raise AssemblyError("vertical edges of the conjugate hexagon differ")
    return math.sqrt(2.0) * side_x, 2.0 * h


def _tetragonal_diagonal(params: FamilyParams):
    a, b, t = params.a, params.b, params.t
    return abs(a - b) <= 1e-12 * b and abs(a * b - t) <= 1e-12 * t


@lru_cache(maxsize=1)
def anchor_ratio():
    """E/F at Schwarz' D surface, whose conjugate P has a cubic cell."""
    E, F = conjugate_cell_dimensions(FamilyParams(*D_POINT, 1.0))
    return E / F


def conjugate_cell_ratio(params: FamilyParams, tol=PERIOD_TOL) -> float:
    """E/F of the conjugate (tP) cell for a point with a = b = sqrt(t).

    The assembly is first checked on the D surface, where E/F must be 1.

    Raises:
        ValueError: params are not on the a = b = sqrt(t) locus.
        AssemblyError: the D anchor fails.
    """
    if not _tetragonal_diagonal(params):
        raise ValueError(f"need a = b = sqrt(t), got {params}")
    gate = anchor_ratio()
    if abs(gate - 1.0) > ANCHOR_TOL:
        raise AssemblyError(f"D anchor gives E/F = {gate!r}, not 1")
    E, F = conjugate_cell_dimensions(params, tol)
    return E / F


def mean_curvature_proxy(mesh: SurfaceMesh):
    """|cotangent Laplacian| / (2 * mixed area) at interior vertices."""
    X, F = mesh.vertices, mesh.faces
    n = len(X)
    L = np.zeros((n, 3))
    area = np.zeros(n)
    for i0, i1, i2 in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        a, b, c = F[:, i0], F[:, i1], F[:, i2]
        u, v = X[b] - X[a], X[c] - X[a]
        cross = np.linalg.norm(np.cross(u, v), axis=1)
        cot = np.einsum("ij,ij->i", u, v) / cross
        # the angle at a weights the opposite edge (b, c)
        w = 0.5 * cot[:, None] * (X[b] - X[c])
        np.add.at(L, b, w)
        np.add.at(L, c, -w)
        np.add.at(area, a, cross / 6.0)
    interior = mesh.boundary_tags == 0
    return np.linalg.norm(L[interior], axis=1) / (2.0 * area[interior])


def export_mesh(mesh: SurfaceMesh, path, fmt: str | None = None) -> Path:
    """Write ASCII OBJ or PLY with 17 significant digits."""
    path = Path(path)
    fmt = (fmt or path.suffix.lstrip(".")).lower()
    if fmt not in ("obj", "ply"):
        raise ValueError(f"unknown mesh format {fmt!r}")
    if len(mesh.vertices) == 0 or len(mesh.faces) == 0:
        raise ValueError("refusing to write an empty mesh")
    lines = []
    if fmt == "obj":
        lines += [f"v {x:.17g} {y:.17g} {z:.17g}" for x, y, z in mesh.vertices]
        lines += [f"f {i + 1} {j + 1} {k + 1}" for i, j, k in mesh.faces]
    else:
        lines += [
            "ply", "format ascii 1.0",
            f"element vertex {len(mesh.vertices)}",
            "property double x", "property double y", "property double z",
            f"element face {len(mesh.faces)}",
            "property list uchar int vertex_indices", "end_header",
        ]
        lines += [f"{x:.17g} {y:.17g} {z:.17g}" for x, y, z in mesh.vertices]
        lines += [f"3 {i} {j} {k}" for i, j, k in mesh.faces]
    try:
        path.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write mesh to {path}: {exc}") from exc
    return path


def read_mesh(path):
    """Read an OBJ or PLY file written by ``export_mesh``: (vertices, faces)."""
    path = Path(path)
    try:
        text = path.read_text().splitlines()
    except OSError as exc:
        raise OSError(f"cannot read mesh from {path}: {exc}") from exc
    if path.suffix.lower() == ".obj":
        v = [list(map(float, ln.split()[1:4])) for ln in text if ln.startswith("v ")]
        f = [[int(x) - 1 for x in ln.split()[1:4]] for ln in text if ln.startswith("f ")]
    else:
        nv = next(int(ln.split()[2]) for ln in text if ln.startswith("element vertex"))
        start = text.index("end_header") + 1
        v = [list(map(float, ln.split())) for ln in text[start:start + nv]]
        f = [list(map(int, ln.split()[1:4])) for ln in text[start + nv:] if ln.strip()]
    return np.array(v, dtype=float), np.array(f, dtype=np.int64)
