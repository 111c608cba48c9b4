"""Convex bodies in R^d: V-polytopes and analytic balls.

Polytopes are always stored hull-reduced (every stored point is an extreme
point) with vertices in lexicographic order, so two polytopes built from
the same point set compare equal element by element.

Volumes come from an incremental beneath-beyond hull. The simplicial facet
complex is coned from the vertex centroid and the simplex volumes summed.
"""
from dataclasses import dataclass, field
from functools import cached_property
import math

import numpy as np

from .errors import (
    DimensionMismatchError,
    GeometryError,
    UnsupportedOperandError,
)
from .streams import BALL, SampleStream

MAX_DIM = 8
COPLANAR_TOL = 1e-10
RANK_TOL = 1e-10
NORMAL_RANK_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class Polytope:
    """Convex hull of ``vertices`` (shape ``(m, d)``).

    Build with :func:`convex_hull`; the constructor trusts its input to be
    hull-reduced and lexicographically sorted.
    """

    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=np.float64, order="C")
        if v.ndim != 2 or v.shape[0] == 0 or v.shape[1] == 0:
            raise GeometryError(f"polytope needs a nonempty (m, d) vertex array, got shape {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def dim(self):
        return self.vertices.shape[1]

    @property
    def n_vertices(self):
        return self.vertices.shape[0]

    def same_as(self, other):
        return (
            isinstance(other, Polytope)
            and other.vertices.shape == self.vertices.shape
            and bool(np.array_equal(other.vertices, self.vertices))
        )

    @cached_property
    def _volume(self):
        return _polytope_volume(self.vertices)

    @cached_property
    def _affine_dim(self):
        return _affine_rank(self.vertices)


@dataclass(frozen=True)
class Ball:
    dim: int
    radius: float = 1.0
    center: tuple = field(default=None)

    def __post_init__(self):
        if self.dim < 1:
            raise GeometryError(f"ball dimension must be positive, got {self.dim}")
        if not self.radius >= 0:
            raise GeometryError(f"ball radius must be nonnegative, got {self.radius}")
        c = (0.0,) * self.dim if self.center is None else tuple(float(x) for x in self.center)
        if len(c) != self.dim:
            raise DimensionMismatchError(f"ball center has {len(c)} coordinates, expected {self.dim}")
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "center", c)

    def same_as(self, other):
        return isinstance(other, Ball) and other == self


@dataclass(frozen=True, eq=False)
class LinearMap:
    matrix: np.ndarray
    det: float = field(init=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise GeometryError(f"linear map needs a square matrix, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "det", float(np.linalg.det(m)))

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def unimodular(self):
        return abs(self.det - 1.0) <= 1e-9

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n))


# --- predicates -------------------------------------------------------------

def _diameter(points):
    return float(np.linalg.norm(points.max(axis=0) - points.min(axis=0)))


def _affine_frame(points):
    """Centroid, rank and orthonormal basis (d, rank) of the affine hull."""
    c = points.mean(axis=0)
    scale = _diameter(points)
    if points.shape[0] == 1 or scale == 0.0:
        return c, 0, np.zeros((points.shape[1], 0))
    _, s, vt = np.linalg.svd(points - c, full_matrices=False)
    rank = int(np.count_nonzero(s > RANK_TOL * scale))
    return c, rank, vt[:rank].T


def _affine_rank(points):
    return _affine_frame(points)[1]


def _lexsort_rows(points):
    return np.lexsort(points.T[::-1])


# --- beneath-beyond ---------------------------------------------------------

def _oriented_plane(corners, interior):
    base = corners[0]
    if corners.shape[0] == 1:
        # d == 1: the "facet" is a point; normal is +-1
        normal = np.array([1.0])
    else:
        _, _, vt = np.linalg.svd(corners[1:] - base)
        normal = vt[-1]
    offset = float(normal @ base)
    if normal @ interior - offset > 0:
        normal, offset = -normal, -offset
    return normal, offset


def _initial_simplex(points, tol):
    d = points.shape[1]
    c = points.mean(axis=0)
    chosen = [int(np.argmax(np.linalg.norm(points - c, axis=1)))]
    basis = np.zeros((0, d))
    for _ in range(d):
        diff = points - points[chosen[0]]
        resid = diff - (diff @ basis.T) @ basis
        dist = np.linalg.norm(resid, axis=1)
        k = int(np.argmax(dist))
        if dist[k] <= tol:
            raise GeometryError("point set is not full-dimensional")
        chosen.append(k)
        basis = np.vstack([basis, resid[k] / dist[k]])
    return chosen


def _simplicial_hull(points):
    """Facets of the hull of a full-dimensional point set.

    Returns ``(facets, normals, interior)`` where ``facets`` is an int array
    ``(F, d)`` of point indices, ``normals`` the outward unit normals and
    ``interior`` a point strictly inside.
    """
    m, d = points.shape
    tol = COPLANAR_TOL * max(_diameter(points), 1e-300)
    simplex = _initial_simplex(points, tol)
    interior = points[simplex].mean(axis=0)

    cap = 64
    normals = np.empty((cap, d))
    offsets = np.empty(cap)
    alive = np.zeros(cap, dtype=bool)
    verts = []

    def add_facet(idx):
        nonlocal cap, normals, offsets, alive
        k = len(verts)
        if k == cap:
            cap *= 2
            normals = np.resize(normals, (cap, d))
            offsets = np.resize(offsets, cap)
            alive = np.concatenate([alive, np.zeros(cap - k, dtype=bool)])
        normals[k], offsets[k] = _oriented_plane(points[list(idx)], interior)
        alive[k] = True
        verts.append(idx)

    sset = sorted(simplex)
    for drop in range(d + 1):
        add_facet(tuple(sset[:drop] + sset[drop + 1:]))

    in_simplex = np.zeros(m, dtype=bool)
    in_simplex[simplex] = True
    dist0 = np.linalg.norm(points - interior, axis=1)
    order = np.argsort(-dist0, kind="stable")

    for p in order:
        if in_simplex[p]:
            continue
        x = points[p]
        live = np.flatnonzero(alive[: len(verts)])
        visible = live[normals[live] @ x - offsets[live] > tol]
        if visible.size == 0:
            continue
        ridges = {}
        for f in visible:
            fv = verts[f]
            for k in range(d):
                ridge = fv[:k] + fv[k + 1:]
                ridges[ridge] = ridges.get(ridge, 0) + 1
        alive[visible] = False
        for ridge, count in ridges.items():
            if count == 1:
                add_facet(tuple(sorted(ridge + (int(p),))))

    live = np.flatnonzero(alive[: len(verts)])
    facets = np.array([verts[f] for f in live], dtype=np.int64)
    return facets, normals[live].copy(), interior


def _extreme_indices(points):
    """Indices of the extreme points of ``points`` (any affine dimension)."""
    m, d = points.shape
    if m == 1:
        return np.array([0])
    c, rank, basis = _affine_frame(points)
    if rank == 0:
        return np.array([0])
    if rank < d:
        return _extreme_indices((points - c) @ basis)
    if d == 1:
        lo, hi = int(np.argmin(points[:, 0])), int(np.argmax(points[:, 0]))
        return np.array(sorted({lo, hi}))
    facets, normals, _ = _simplicial_hull(points)
    keep = []
    for v in np.unique(facets):
        incident = normals[np.any(facets == v, axis=1)]
        s = np.linalg.svd(incident, compute_uv=False)
        if s.size >= d and s[d - 1] > NORMAL_RANK_TOL:
            keep.append(int(v))
    return np.array(keep)


def _polytope_volume(vertices):
    m, d = vertices.shape
    if m <= d or _affine_rank(vertices) < d:
        return 0.0
    if d == 1:
        return float(vertices[:, 0].max() - vertices[:, 0].min())
    facets, _, _ = _simplicial_hull(vertices)
    apex = vertices.mean(axis=0)
    cones = vertices[facets] - apex
    dets = np.abs(np.linalg.det(cones))
    return math.fsum(dets.tolist()) / math.factorial(d)


# --- public operations ------------------------------------------------------

def _as_points(points, dim=None):
    try:
        p = np.array(points, dtype=np.float64)
    except ValueError as exc:
        raise DimensionMismatchError(f"points have inconsistent coordinate counts: {exc}") from None
    if p.ndim == 1 and dim is not None and p.size == dim:
        p = p.reshape(1, dim)
    if p.ndim != 2 or p.shape[0] == 0:
        raise GeometryError(f"expected a nonempty list of points, got shape {p.shape}")
    if dim is not None and p.shape[1] != dim:
        raise DimensionMismatchError(f"points have {p.shape[1]} coordinates, expected {dim}")
    if p.shape[1] < 1:
        raise GeometryError("dimension must be at least 1")
    if p.shape[1] > MAX_DIM:
        raise GeometryError(f"dimension {p.shape[1]} exceeds the supported maximum {MAX_DIM}")
    if not np.all(np.isfinite(p)):
        raise GeometryError("points must have finite coordinates")
    return p


def convex_hull(points, dim=None):
    """Polytope whose vertex set is the extreme points of ``points``."""
    p = np.unique(_as_points(points, dim), axis=0)
    ext = p[_extreme_indices(p)]
    return Polytope(ext[_lexsort_rows(ext)])


def volume(body):
    if isinstance(body, Ball):
        return unit_ball_volume(body.dim) * body.radius ** body.dim
    return body._volume


def affine_dim(body):
    if isinstance(body, Ball):
        return body.dim if body.radius > 0 else 0
    return body._affine_dim


def _require_polytope(body, op):
    if isinstance(body, Ball):
        raise UnsupportedOperandError(f"{op} is polyhedral only; approximate balls with ball_approx first")
    if not isinstance(body, Polytope):
        raise TypeError(f"expected a Polytope or Ball, got {type(body).__name__}")


def _require_same_dim(a, b):
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dimension mismatch: {a.dim} vs {b.dim}")


def minkowski_sum(a, b):
    _require_polytope(a, "minkowski_sum")
    _require_polytope(b, "minkowski_sum")
    _require_same_dim(a, b)
    sums = (a.vertices[:, None, :] + b.vertices[None, :, :]).reshape(-1, a.dim)
    return convex_hull(sums)


def scale(body, factor):
    factor = float(factor)
    if not factor >= 0:
        raise GeometryError(f"scale factor must be nonnegative, got {factor}")
    if isinstance(body, Ball):
        return Ball(body.dim, body.radius * factor, tuple(factor * c for c in body.center))
    if factor == 0.0:
        return Polytope(np.zeros((1, body.dim)))
    # positive scaling keeps extremality and lexicographic order
    return Polytope(factor * body.vertices)


def translate(body, v):
    v = np.asarray(v, dtype=np.float64).ravel()
    if v.size != body.dim:
        raise DimensionMismatchError(f"translation has {v.size} coordinates, expected {body.dim}")
    if isinstance(body, Ball):
        return Ball(body.dim, body.radius, tuple(np.add(body.center, v)))
    return Polytope(body.vertices + v)


def linear_image(body, g):
    if not isinstance(g, LinearMap):
        g = LinearMap(g)
    if g.dim != body.dim:
        raise DimensionMismatchError(f"map is {g.dim}x{g.dim}, body lives in R^{body.dim}")
    if isinstance(body, Ball):
        # only similarities send balls to balls
        gram = g.matrix.T @ g.matrix
        s2 = gram[0, 0]
        if not np.allclose(gram, s2 * np.eye(g.dim), rtol=1e-12, atol=1e-12 * max(s2, 1.0)):
            raise UnsupportedOperandError("a non-similarity map does not send a ball to a ball")
        return Ball(body.dim, body.radius * math.sqrt(s2), tuple(g.matrix @ np.array(body.center)))
    return convex_hull(body.vertices @ g.matrix.T)


def _quasi_uniform_sphere(d, m, rng):
    if d == 1:
        return np.where(np.arange(m) % 2 == 0, -1.0, 1.0)[:, None]
    if d == 2:
        theta = 2 * np.pi * (np.arange(m) + rng.random()) / m
        return np.column_stack([np.cos(theta), np.sin(theta)])
    if d == 3:
        # Fibonacci lattice under a random rotation
        k = np.arange(m) + 0.5
        z = 1 - 2 * k / m
        phi = np.pi * (3 - math.sqrt(5)) * k
        rho = np.sqrt(1 - z * z)
        u = np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])
        q, r = np.linalg.qr(rng.standard_normal((3, 3)))
        return u @ (q * np.sign(np.diag(r))).T
    return rng.standard_normal((m, d))


def ball_approx(dim, radius=1.0, point_count=200, seed=0):
    """Polytope inscribed in the radius-``radius`` ball, from ``point_count`` sphere points."""
    if dim < 1:
        raise GeometryError(f"dimension must be positive, got {dim}")
    if point_count < dim + 1:
        raise GeometryError(f"ball_approx needs at least dim+1={dim + 1} points, got {point_count}")
    if not radius > 0:
        raise GeometryError(f"ball_approx radius must be positive, got {radius}")
    rng = SampleStream(seed).rng(BALL)
    u = _quasi_uniform_sphere(dim, point_count, rng)
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    body = convex_hull(radius * u)
    if affine_dim(body) < dim:
        raise GeometryError("ball_approx points are not full-dimensional")
    return body


def cube(dim, side=1.0):
    grid = np.array(np.meshgrid(*[[0.0, side]] * dim, indexing="ij")).reshape(dim, -1).T
    return convex_hull(grid)


def standard_simplex(dim):
    return convex_hull(np.vstack([np.zeros(dim), np.eye(dim)]))


def unit_ball_volume(d):
    """Volume of the unit ball in R^d, via omega_d = 2 pi / d * omega_{d-2}."""
    if d < 0:
        raise ValueError(f"dimension must be nonnegative, got {d}")
    w = 1.0 if d % 2 == 0 else 2.0
    for k in range(2 + d % 2, d + 1, 2):
        w *= 2 * math.pi / k
    return w
