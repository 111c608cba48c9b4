"""Haar-distributed subspaces of R^n and orthogonal projection onto them.

A subspace is drawn by orthonormalizing an ``n x j`` standard normal matrix
(QR with the triangular diagonal made positive). The draw at sample
``index`` depends only on ``(master_seed, index)``.
"""
from dataclasses import dataclass
from functools import lru_cache

import math

import numpy as np

from .errors import DimensionMismatchError
from .geometry import Ball, Polytope, convex_hull
from .streams import HAAR, SampleStream

__all__ = ["SampleStream", "Subspace", "haar_sample", "haar_bases", "project", "squared_coordinate_moment"]


@dataclass(frozen=True, eq=False)
class Subspace:
    basis: np.ndarray

    def __post_init__(self):
        b = np.array(self.basis, dtype=np.float64)
        if b.ndim != 2 or not 1 <= b.shape[1] <= b.shape[0]:
            raise ValueError(f"basis must be n x j with 1 <= j <= n, got shape {b.shape}")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def ambient(self):
        return self.basis.shape[0]

    @property
    def dim(self):
        return self.basis.shape[1]

    def orthonormality_residual(self):
        return float(np.max(np.abs(self.basis.T @ self.basis - np.eye(self.dim))))


def _check_dims(n, j):
    if not 1 <= j <= n:
        raise ValueError(f"subspace dimension must satisfy 1 <= j <= n, got n={n}, j={j}")


def _gaussian(seed, index, n, j):
    return SampleStream(seed, index).rng(HAAR).standard_normal((n, j))


def _orthonormalize(g):
    """Q factor of ``g`` (stacked or single) with positive diagonal in R."""
    q, r = np.linalg.qr(g)
    signs = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    signs[signs == 0] = 1.0
    return q * signs[..., None, :]


def haar_sample(stream, n, j):
    _check_dims(n, j)
    return Subspace(_orthonormalize(_gaussian(stream.master_seed, stream.index, n, j)))


@lru_cache(maxsize=64)
def _haar_bases(seed, n, j, count, start):
    g = np.empty((count, n, j))
    for s in range(count):
        g[s] = _gaussian(seed, start + s, n, j)
    q = np.ascontiguousarray(_orthonormalize(g))
    q.setflags(write=False)
    return q


def haar_bases(master_seed, n, j, count, start=0):
    """Bases of the subspaces at indices ``start .. start+count-1``, shape ``(count, n, j)``."""
    _check_dims(n, j)
    return _haar_bases(int(master_seed), int(n), int(j), int(count), int(start))


def project(body, subspace):
    """Orthogonal projection onto ``subspace``, in its basis coordinates."""
    if body.dim != subspace.ambient:
        raise DimensionMismatchError(f"body in R^{body.dim}, subspace in R^{subspace.ambient}")
    if isinstance(body, Ball):
        return Ball(subspace.dim, body.radius, tuple(subspace.basis.T @ np.array(body.center)))
    if not isinstance(body, Polytope):
        raise TypeError(f"expected a Polytope or Ball, got {type(body).__name__}")
    return convex_hull(body.vertices @ subspace.basis)


def squared_coordinate_moment(master_seed, n, samples):
    """Mean of u_1^2 over Haar lines in R^n against its exact law.

    ``u_1^2`` of a uniform unit vector is Beta(1/2, (n-1)/2). Returns the
    sample mean, the exact mean and the exact standard error of the mean.
    """
    u = haar_bases(master_seed, n, 1, samples)[:, 0, 0]
    a, b = 0.5, (n - 1) / 2.0
    var = a * b / ((a + b) ** 2 * (a + b + 1))
    return math.fsum((u * u).tolist()) / samples, a / (a + b), math.sqrt(var / samples)
