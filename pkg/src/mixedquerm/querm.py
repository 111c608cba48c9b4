"""Affine quermassintegrals and mixed affine quermassintegrals.

For bodies ``K_1..K_j`` in R^n, with ``0 < j < n``,

    Phi_{n-j}(K_1, ..., K_j) = w_n * ( E_xi [ (V(K_1|xi, ..., K_j|xi) / w_j)^(-n) ] )^(-1/n)

where ``xi`` is a Haar-random j-dimensional subspace and ``w_d`` is the
volume of the unit d-ball. The expectation is replaced by a sample mean over
``N`` subspaces drawn from a replayable stream; all bodies evaluated in one
call share the same subspaces.
"""
from dataclasses import dataclass
import math

import numpy as np

from . import kernels
from .errors import DegenerateBodyError, DimensionMismatchError, GeometryError, UnsupportedOperandError
from .geometry import (
    Ball,
    Polytope,
    affine_dim,
    ball_approx,
    convex_hull,
    unit_ball_volume,
    volume,
)
from .grassmann import haar_bases
from .mixedvol import combination, compensated_sum, group_bodies, mixed_volume, polarization_plan
from .streams import derive_seed

DEFAULT_SAMPLES = 2000
DEFAULT_BALL_POINTS = 200


@dataclass(frozen=True)
class Estimate:
    value: float
    std_error: float
    samples: int
    ambient: int
    subspace_dim: int
    master_seed: int

    def as_dict(self):
        return {
            "value": self.value,
            "std_error": self.std_error,
            "samples": self.samples,
            "n": self.ambient,
            "j": self.subspace_dim,
            "seed": self.master_seed,
        }


def _projected_volumes(vertices, bases):
    j = bases.shape[2]
    if j == 1:
        return kernels.projected_widths(vertices, bases)
    if j == 2:
        return kernels.projected_areas(vertices, bases)
    return np.array([volume(convex_hull(vertices @ b)) for b in bases])


class _Integrand:
    """Per-sample mixed volumes of projections, memoized within one batch."""

    def __init__(self, bases):
        self.bases = bases
        self._memo = {}

    def _body(self, body):
        key = id(body)
        if key not in self._memo:
            self._memo[key] = (body, _projected_volumes(body.vertices, self.bases))
        return self._memo[key][1]

    def __call__(self, bodies):
        j = self.bases.shape[2]
        distinct, counts = group_bodies(bodies)
        if len(distinct) == 1:
            if isinstance(distinct[0], Ball):
                r = distinct[0].radius
                return np.full(self.bases.shape[0], unit_ball_volume(j) * r ** j)
            return self._body(distinct[0])
        terms = []
        for weight, picks in polarization_plan(counts):
            key = tuple((id(b), a) for b, a in zip(distinct, picks) if a)
            if key not in self._memo:
                summed = combination(distinct, picks)
                self._memo[key] = (summed, _projected_volumes(summed.vertices, self.bases))
            terms.append(weight * self._memo[key][1])
        return compensated_sum(terms) / math.factorial(j)


def _summarize(vols, n, j, seed):
    ratio = vols / unit_ball_volume(j)
    bad = np.flatnonzero(~(ratio > 0))
    if bad.size:
        s = int(bad[0])
        raise DegenerateBodyError(
            f"mixed volume of projections is {vols[s]!r} at sample {s}; bodies must be full-dimensional",
            sample_index=s,
        )
    y = ratio ** (-float(n))
    count = y.size
    mean = math.fsum(y.tolist()) / count
    value = unit_ball_volume(n) * mean ** (-1.0 / n)
    if np.all(y == y[0]):
        se = 0.0
    else:
        var = math.fsum(((y - mean) ** 2).tolist()) / (count - 1)
        # delta method: d/dm [w_n m^(-1/n)] = -value / (n m)
        se = value / (n * mean) * math.sqrt(var / count)
    return Estimate(value, se, count, n, j, seed)


def _validate_tuple(bodies, n=None):
    bodies = list(bodies)
    if not bodies:
        raise GeometryError("need at least one body")
    n = bodies[0].dim if n is None else n
    for body in bodies:
        if not isinstance(body, (Polytope, Ball)):
            raise TypeError(f"expected a Polytope or Ball, got {type(body).__name__}")
        if body.dim != n:
            raise DimensionMismatchError(f"all bodies must live in R^{n}, got R^{body.dim}")
    if len(bodies) > n:
        raise GeometryError(f"{len(bodies)} bodies exceed the ambient dimension {n}")
    distinct, _ = group_bodies(bodies)
    if len(distinct) > 1 and any(isinstance(b, Ball) for b in distinct):
        raise UnsupportedOperandError("balls mix with other bodies only through ball_approx")
    for body in distinct:
        if affine_dim(body) < n:
            raise DegenerateBodyError(f"body is {affine_dim(body)}-dimensional in R^{n}; need full dimension")
    return bodies


def _full_dimension(bodies, seed):
    """j == n: the integrand is rotation invariant, so Phi_0 is the mixed volume itself."""
    n = bodies[0].dim
    distinct, _ = group_bodies(bodies)
    value = volume(distinct[0]) if len(distinct) == 1 else mixed_volume(bodies)
    return Estimate(value, 0.0, 0, n, n, seed)


def paired_phi_batch(tuples, j, samples=DEFAULT_SAMPLES, master_seed=0):
    """Estimate Phi_{n-j} for each body tuple on one shared subspace sequence."""
    tuples = [list(t) for t in tuples]
    if not tuples:
        return []
    n = tuples[0][0].dim if tuples[0] else None
    if n is None:
        raise GeometryError("empty body tuple")
    if not 1 <= j <= n:
        raise GeometryError(f"need 1 <= j <= n, got j={j}, n={n}")
    for t in tuples:
        _validate_tuple(t, n)
        if len(t) != j:
            raise GeometryError(f"every tuple needs exactly j={j} bodies, got {len(t)}")
    if j == n:
        return [_full_dimension(t, master_seed) for t in tuples]
    if samples < 2:
        raise GeometryError(f"need at least 2 samples for a standard error, got {samples}")
    integrand = _Integrand(haar_bases(master_seed, n, j, samples))
    return [_summarize(integrand(t), n, j, master_seed) for t in tuples]


def phi_mixed(bodies, samples=DEFAULT_SAMPLES, master_seed=0):
    bodies = list(bodies)
    return paired_phi_batch([bodies], len(bodies), samples, master_seed)[0]


def phi(body, j, samples=DEFAULT_SAMPLES, master_seed=0):
    """Affine quermassintegral Phi_{n-j}(K); exact at j = 0 and j = n."""
    n = body.dim
    if not 0 <= j <= n:
        raise GeometryError(f"need 0 <= j <= n, got j={j}, n={n}")
    if j == 0:
        return Estimate(unit_ball_volume(n), 0.0, 0, n, 0, master_seed)
    return phi_mixed([body] * j, samples, master_seed)


def phi_pair(body, other, j, samples=DEFAULT_SAMPLES, master_seed=0):
    """Phi_{n-j}(K, L): ``j - 1`` copies of K and one L."""
    if j < 1:
        raise GeometryError(f"need j >= 1, got {j}")
    return phi_mixed([body] * (j - 1) + [other], samples, master_seed)


def _ball_for(n, ball_points, master_seed):
    return ball_approx(n, 1.0, ball_points, derive_seed(master_seed, "ball"))


def _check_ith(i, j, n):
    if not 0 <= i < j <= n:
        raise GeometryError(f"need 0 <= i < j <= n, got i={i}, j={j}, n={n}")


def phi_ith_mixed(body, other, i, j, ball_points=DEFAULT_BALL_POINTS, samples=DEFAULT_SAMPLES, master_seed=0):
    """Phi_{n-j,i}(K, L): ``j-i-1`` copies of K, one L and ``i`` copies of the unit ball."""
    _check_ith(i, j, body.dim)
    balls = [_ball_for(body.dim, ball_points, master_seed)] * i if i else []
    return phi_mixed([body] * (j - i - 1) + [other] + balls, samples, master_seed)


def phi_ith(body, i, j, ball_points=DEFAULT_BALL_POINTS, samples=DEFAULT_SAMPLES, master_seed=0):
    """Phi_{n-j,i}(K): ``j-i`` copies of K and ``i`` copies of the unit ball."""
    _check_ith(i, j, body.dim)
    balls = [_ball_for(body.dim, ball_points, master_seed)] * i if i else []
    return phi_mixed([body] * (j - i) + balls, samples, master_seed)


def _simpson(f, a, b, intervals):
    x = np.linspace(a, b, intervals + 1)
    w = np.ones(intervals + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return (b - a) / (3.0 * intervals) * math.fsum((w * f(x)).tolist())


def phi_exact_2d(body, quadrature_points=1024):
    """Phi_1 of a polygon by angular quadrature over lines through the origin.

    The width ``w(theta)`` is a single sinusoid between consecutive edge
    normal angles, so composite Simpson is applied piece by piece.
    """
    if not isinstance(body, Polytope) or body.dim != 2:
        raise GeometryError("phi_exact_2d needs a polygon in R^2")
    if quadrature_points < 16:
        raise GeometryError(f"need at least 16 quadrature points, got {quadrature_points}")
    if affine_dim(body) < 2:
        raise DegenerateBodyError("phi_exact_2d needs a full-dimensional polygon")
    v = np.ascontiguousarray(body.vertices)
    c = v.mean(axis=0)
    ang = np.arctan2(v[:, 1] - c[1], v[:, 0] - c[0])
    ring = v[np.argsort(ang)]
    edges = np.roll(ring, -1, axis=0) - ring
    # direction u(theta) is perpendicular to an edge where the support vertex switches
    breaks = np.mod(np.arctan2(edges[:, 0], -edges[:, 1]), np.pi)
    knots = np.unique(np.concatenate([[0.0, np.pi], breaks]))
    knots = knots[np.concatenate([[True], np.diff(knots) > 1e-15])]
    if knots[-1] < np.pi:
        knots = np.append(knots, np.pi)

    def integrand(theta):
        w = np.array([kernels.support_width(v, math.cos(t), math.sin(t)) for t in theta])
        return (w / 2.0) ** -2.0

    total = 0.0
    for a, b in zip(knots[:-1], knots[1:]):
        intervals = max(2, 2 * int(round(quadrature_points * (b - a) / (2 * np.pi))))
        total += _simpson(integrand, a, b, intervals)
    return math.pi * (total / math.pi) ** -0.5
