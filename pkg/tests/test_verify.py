import numpy as np
import pytest

from mixedquerm import (
    Ball,
    GeometryError,
    LinearMap,
    SampleStream,
    SuiteConfig,
    affine_dim,
    check_af,
    check_bm,
    check_minkowski,
    check_product,
    check_sl_invariance,
    cube,
    is_homothetic,
    linear_image,
    random_polytope,
    random_sl_matrix,
    run_suite,
    scale,
    standard_simplex,
    translate,
)
from mixedquerm.verify import InequalityReport

from conftest import rand_poly

N = 1000


def homothet(k, lam=3.0, v=(1.0, -2.0, 0.5)):
    return translate(scale(k, lam), v)


class TestMinkowski:
    def test_self(self):
        k = rand_poly(1)
        r = check_minkowski(k, k, 2, N, 3)
        assert r.margin == 0.0 and r.satisfied and r.equality_expected

    def test_homothet(self):
        k = rand_poly(1)
        r = check_minkowski(k, homothet(k), 2, N, 3)
        assert r.equality_expected and abs(r.margin) <= r.noise_bound

    def test_cube_simplex(self):
        simplex = random_polytope(SampleStream(5), 3, 4)
        r = check_minkowski(cube(3), simplex, 2, 2000, 1)
        assert r.satisfied and not r.equality_expected and r.margin > 0

    def test_full_dimension_is_classical(self):
        r = check_minkowski(rand_poly(2), rand_poly(3), 3, N, 0)
        # j = n: exact mixed volumes, only the rounding floor remains
        assert r.satisfied and r.margin > 0
        assert r.noise_bound == pytest.approx(1e-12 * max(r.lhs, r.rhs))


class TestAF:
    def test_r_one(self):
        ks = [rand_poly(4), rand_poly(5)]
        r = check_af(ks, 1, N, 2)
        assert r.lhs == r.rhs and r.margin == 0.0

    def test_all_equal(self):
        k = rand_poly(4)
        r = check_af([k, k], 2, N, 2)
        assert abs(r.margin) <= r.noise_bound and not r.equality_expected

    def test_triple(self):
        ks = [rand_poly(6 + t) for t in range(3)]
        r = check_af(ks, 2, 2000, 2)
        assert r.satisfied

    def test_r_range(self):
        with pytest.raises(GeometryError):
            check_af([rand_poly(4), rand_poly(5)], 3)


class TestProduct:
    def test_all_equal(self):
        k = rand_poly(7)
        r = check_product([k, k], N, 1)
        assert r.margin == 0.0 and r.equality_expected

    def test_homothets(self):
        k = rand_poly(7)
        r = check_product([k, homothet(k, 2.0)], N, 1)
        assert r.equality_expected and abs(r.margin) <= r.noise_bound

    def test_random_pair(self):
        r = check_product([rand_poly(8), rand_poly(9)], N, 1)
        assert r.satisfied and not r.equality_expected


class TestBM:
    def test_self(self):
        k = rand_poly(10)
        r = check_bm(k, k, 1.0, 2, N, 1)
        assert abs(r.margin) <= r.noise_bound and r.equality_expected

    def test_cube_simplex(self):
        r = check_bm(cube(3), random_polytope(SampleStream(11), 3, 4), 0.5, 2, 2000, 1)
        assert r.satisfied and r.margin > 0

    @pytest.mark.parametrize("eps", [0.0, -1.0])
    def test_epsilon_positive(self, eps):
        with pytest.raises(GeometryError):
            check_bm(rand_poly(1), rand_poly(2), eps, 2)


class TestSL:
    def test_identity_same_seed(self):
        ks = [rand_poly(12), rand_poly(13)]
        r = check_sl_invariance(ks, LinearMap.identity(3), N, 4, transformed_seed=4)
        assert r.margin == 0.0 and r.satisfied and r.equality_expected

    def test_rotation(self):
        from mixedquerm import haar_sample

        q = haar_sample(SampleStream(3), 3, 3).basis.copy()
        if np.linalg.det(q) < 0:
            q[:, 0] *= -1
        r = check_sl_invariance([cube(3), cube(3)], q, 2000, 5)
        assert r.satisfied

    def test_shear_cube(self):
        g = np.eye(3)
        g[0, 1] = 1.0
        r = check_sl_invariance([cube(3), cube(3)], g, 10_000, 6)
        assert r.satisfied

    def test_rejects_non_unimodular(self):
        with pytest.raises(GeometryError):
            check_sl_invariance([cube(3)], 2 * np.eye(3))


class TestHomothety:
    def test_detects(self):
        k = rand_poly(20)
        assert is_homothetic(k, homothet(k, 0.3))
        assert is_homothetic(Ball(3), Ball(3, 2.0, (1, 1, 1)))
        assert not is_homothetic(k, rand_poly(21))
        assert not is_homothetic(cube(3), linear_image(cube(3), np.diag([2.0, 1.0, 0.5])))
        assert not is_homothetic(cube(3), Ball(3))


class TestGenerators:
    def test_triangle(self):
        p = random_polytope(SampleStream(1), 2, 3)
        assert p.n_vertices == 3 and affine_dim(p) == 2

    def test_reproducible(self):
        assert random_polytope(SampleStream(9, 2), 3, 10).same_as(random_polytope(SampleStream(9, 2), 3, 10))

    def test_too_few(self):
        with pytest.raises(GeometryError):
            random_polytope(SampleStream(1), 3, 3)

    def test_sl_matrix(self):
        assert np.array_equal(random_sl_matrix(SampleStream(1), 1).matrix, [[1.0]])
        for n in (2, 3, 4):
            for k in range(10):
                g = random_sl_matrix(SampleStream(k), n)
                assert g.unimodular and abs(g.det - 1) <= 1e-9
        a, b = random_sl_matrix(SampleStream(1), 3), random_sl_matrix(SampleStream(2), 3)
        assert not np.allclose(a.matrix, b.matrix)


class TestSuite:
    def test_empty(self):
        rep = run_suite(SuiteConfig(instances=0))
        assert rep.reports == [] and rep.satisfied == 0 and rep.violated == 0

    def test_single_homothetic(self):
        rep = run_suite(SuiteConfig(suites=("minkowski",), instances=1, samples=500, force_homothetic=True))
        (r,) = rep.reports
        assert r.satisfied and r.equality_expected

    def test_replayable(self):
        cfg = SuiteConfig(instances=2, samples=300, seed=5, epsilons=(0.5, 2.0))
        assert run_suite(cfg).reports == run_suite(cfg).reports

    def test_counts(self):
        rep = run_suite(SuiteConfig(instances=3, samples=300, seed=1))
        assert rep.satisfied + rep.violated == len(rep.reports) == 15
        assert all(isinstance(r, InequalityReport) for r in rep.reports)

    def test_unknown_suite(self):
        with pytest.raises(ValueError):
            run_suite(SuiteConfig(suites=("nope",)))

    def test_af_r_equals_j_is_product_chain(self):
        # AF with r = j and Minkowski chain: Phi(K1,K2)^2 >= Phi(K1,K1) Phi(K2,K2)
        ks = [rand_poly(40), rand_poly(41)]
        af = check_af(ks, 2, N, 3)
        prod = check_product(ks, N, 3)
        assert af.lhs**2 == pytest.approx(prod.lhs, rel=1e-12)
        assert af.rhs**2 == pytest.approx(prod.rhs, rel=1e-12)

    def test_higher_dimensions(self):
        rep = run_suite(SuiteConfig(instances=2, n=4, j=3, samples=50, seed=2, r=3))
        assert rep.violated == 0
