import math

import numpy as np
import pytest

from mixedquerm import Ball, SampleStream, Subspace, convex_hull, cube, haar_bases, haar_sample, project, standard_simplex, volume
from mixedquerm.errors import DimensionMismatchError
from mixedquerm.grassmann import squared_coordinate_moment
from mixedquerm.querm import _projected_volumes

from conftest import rand_poly


def test_full_dimension_is_orthogonal():
    s = haar_sample(SampleStream(3, 0), 4, 4)
    assert s.orthonormality_residual() <= 1e-12
    assert abs(abs(np.linalg.det(s.basis)) - 1) <= 1e-12


@pytest.mark.parametrize("n,j", [(2, 1), (3, 1), (3, 2), (5, 3), (6, 6)])
def test_orthonormal(n, j):
    for k in range(50):
        assert haar_sample(SampleStream(11, k), n, j).orthonormality_residual() <= 1e-12


def test_positive_triangular_diagonal():
    # sign convention: the R factor of G = Q R has a positive diagonal
    for k in range(20):
        stream = SampleStream(5, k)
        g = stream.rng().standard_normal((4, 2))
        q = haar_sample(stream, 4, 2).basis
        r = q.T @ g
        assert np.all(np.diag(r) > 0)
        np.testing.assert_allclose(q @ r, g, atol=1e-12)


def test_replayable_and_order_free():
    a = haar_sample(SampleStream(42, 17), 3, 2).basis
    b = haar_sample(SampleStream(42, 17), 3, 2).basis
    assert np.array_equal(a, b)
    batch = haar_bases(42, 3, 2, 30)
    assert np.array_equal(batch[17], a)
    tail = haar_bases(42, 3, 2, 10, start=15)
    assert np.array_equal(tail, batch[15:25])


def test_j_out_of_range():
    with pytest.raises(ValueError):
        haar_sample(SampleStream(0), 3, 4)
    with pytest.raises(ValueError):
        haar_sample(SampleStream(0), 3, 0)


def test_beta_moment():
    mean, expected, se = squared_coordinate_moment(2024, 3, 100_000)
    assert expected == pytest.approx(1 / 3)
    assert abs(mean - expected) <= 3 * se


def test_project_cube():
    s = Subspace(np.eye(3)[:, :2])
    p = project(cube(3), s)
    assert p.dim == 2 and volume(p) == pytest.approx(1.0)
    assert {tuple(v) for v in p.vertices} == {(0, 0), (1, 0), (0, 1), (1, 1)}


def test_project_ball():
    for k in range(5):
        s = haar_sample(SampleStream(1, k), 3, 2)
        b = project(Ball(3), s)
        assert b.dim == 2 and b.radius == 1.0
        assert volume(b) == pytest.approx(math.pi)


def test_project_simplex_to_line():
    p = project(standard_simplex(3), Subspace(np.eye(3)[:, :1]))
    assert sorted(p.vertices[:, 0]) == [0.0, 1.0]


def test_project_dim_mismatch():
    with pytest.raises(DimensionMismatchError):
        project(cube(2), Subspace(np.eye(3)[:, :2]))


def test_projection_bounded_by_box():
    k = rand_poly(3, 3, 10)
    lo, hi = k.vertices.min(axis=0), k.vertices.max(axis=0)
    enclosing = convex_hull(np.array(np.meshgrid(*zip(lo, hi), indexing="ij")).reshape(3, -1).T)
    b = haar_bases(9, 3, 2, 200)
    assert np.all(_projected_volumes(k.vertices, b) <= _projected_volumes(enclosing.vertices, b) + 1e-12)


def test_rotation_invariance_in_distribution():
    k = rand_poly(21, 3, 9)
    q = haar_sample(SampleStream(77), 3, 3).basis
    qk = k.vertices @ q.T
    a = _projected_volumes(k.vertices, haar_bases(1, 3, 2, 10_000))
    b = _projected_volumes(qk, haar_bases(2, 3, 2, 10_000))
    se = math.sqrt(a.var(ddof=1) / a.size + b.var(ddof=1) / b.size)
    assert abs(a.mean() - b.mean()) <= 3 * se
