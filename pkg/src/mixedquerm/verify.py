"""Numerical checks of the inequalities for mixed affine quermassintegrals.

Each checker evaluates every quantity it needs on one shared subspace
sequence (common random numbers), then compares the two sides. The verdict
uses a 3-sigma bound on the margin, propagated from the estimates' standard
errors as if they were independent (conservative under positive
correlation), plus a rounding floor of ``ROUNDING`` times the larger side.
"""
from dataclasses import asdict, dataclass, field
import math

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist

from .errors import GeometryError
from .geometry import Ball, LinearMap, Polytope, affine_dim, convex_hull, linear_image, minkowski_sum, scale, translate
from .grassmann import haar_sample
from .querm import DEFAULT_SAMPLES, paired_phi_batch, phi_mixed
from .streams import CORPUS, POLYTOPE, SL_MATRIX, SampleStream, derive_seed

NAMES = ("minkowski", "aleksandrov_fenchel", "product", "brunn_minkowski", "sl_invariance")
SUITES = {
    "minkowski": "minkowski",
    "af": "aleksandrov_fenchel",
    "product": "product",
    "bm": "brunn_minkowski",
    "sl": "sl_invariance",
}
SIGMAS = 3.0
ROUNDING = 1e-12
HOMOTHETY_TOL = 1e-9
MAX_RETRIES = 100


@dataclass(frozen=True)
class InequalityReport:
    name: str
    lhs: float
    rhs: float
    margin: float
    noise_bound: float
    satisfied: bool
    equality_expected: bool
    parameters: dict = field(default_factory=dict)

    def flat(self):
        row = {k: v for k, v in asdict(self).items() if k != "parameters"}
        row.update(self.parameters)
        return row


@dataclass
class SuiteReport:
    reports: list
    seed: int

    @property
    def satisfied(self):
        return sum(r.satisfied for r in self.reports)

    @property
    def violated(self):
        return len(self.reports) - self.satisfied


def _params(n, j, samples, seed, r=None, i=None, epsilon=None, instance=None):
    return {"instance": instance, "n": n, "j": j, "r": r, "i": i, "epsilon": epsilon,
            "samples": samples, "master_seed": seed}


class _Side:
    """A sum of monomials prod(value_t ** power_t), with its gradient."""

    def __init__(self, estimates):
        self.est = estimates
        self.value = 0.0
        self.grad = np.zeros(len(estimates))

    def add(self, factors, coefficient=1.0):
        # factors: list of (estimate index, power); multiplied left to right
        term = coefficient
        for t, p in factors:
            term *= self.est[t].value if p == 1 else self.est[t].value ** p
        for t, p in factors:
            self.grad[t] += p * term / self.est[t].value
        self.value += term
        return self


def _report(name, lhs, rhs, equality_expected, params, two_sided=False):
    se = np.array([e.std_error for e in lhs.est])
    g = lhs.grad - rhs.grad
    sigma = math.sqrt(float(np.sum((g * se) ** 2)))
    margin = lhs.value - rhs.value
    bound = SIGMAS * sigma + ROUNDING * max(abs(lhs.value), abs(rhs.value))
    ok = abs(margin) <= bound if two_sided else margin >= -bound
    return InequalityReport(name, lhs.value, rhs.value, margin, bound, bool(ok), equality_expected, params)


def is_homothetic(a, b, tol=HOMOTHETY_TOL):
    """True when ``b = lambda * a + v`` for some ``lambda > 0`` and vector ``v``."""
    if isinstance(a, Ball) and isinstance(b, Ball):
        return a.dim == b.dim and a.radius > 0 and b.radius > 0
    if not (isinstance(a, Polytope) and isinstance(b, Polytope)):
        return False
    if a.dim != b.dim or a.n_vertices != b.n_vertices:
        return False

    def normalized(p):
        v = p.vertices - p.vertices.mean(axis=0)
        rms = math.sqrt(float(np.mean(np.sum(v * v, axis=1))))
        return v / rms if rms > 0 else v

    va, vb = normalized(a), normalized(b)
    cost = cdist(va, vb)
    rows, cols = linear_sum_assignment(cost)
    return bool(cost[rows, cols].max() <= tol)


def check_minkowski(body, other, j, samples=DEFAULT_SAMPLES, master_seed=0):
    """Phi(K,L)^j >= Phi(K)^(j-1) Phi(L), equality iff K, L homothetic."""
    est = paired_phi_batch([[body] * (j - 1) + [other], [body] * j, [other] * j], j, samples, master_seed)
    lhs = _Side(est).add([(0, 1)] * j)
    rhs = _Side(est).add([(1, 1)] * (j - 1) + [(2, 1)])
    return _report("minkowski", lhs, rhs, is_homothetic(body, other),
                   _params(body.dim, j, samples, master_seed))


def check_af(bodies, r, samples=DEFAULT_SAMPLES, master_seed=0):
    """Phi(K_1..K_j) >= prod_{i<=r} Phi(K_i[r copies], K_{r+1}..K_j)^(1/r)."""
    bodies = list(bodies)
    j = len(bodies)
    if not 0 < r <= j:
        raise GeometryError(f"need 0 < r <= j, got r={r}, j={j}")
    tuples = [bodies] + [[bodies[i]] * r + bodies[r:] for i in range(r)]
    est = paired_phi_batch(tuples, j, samples, master_seed)
    lhs = _Side(est).add([(0, 1)])
    rhs = _Side(est).add([(1 + i, 1 if r == 1 else 1.0 / r) for i in range(r)])
    return _report("aleksandrov_fenchel", lhs, rhs, False,
                   _params(bodies[0].dim, j, samples, master_seed, r=r))


def check_product(bodies, samples=DEFAULT_SAMPLES, master_seed=0):
    """Phi(K_1..K_j)^j >= Phi(K_1) ... Phi(K_j), equality iff all homothetic."""
    bodies = list(bodies)
    j = len(bodies)
    est = paired_phi_batch([bodies] + [[k] * j for k in bodies], j, samples, master_seed)
    lhs = _Side(est).add([(0, 1)] * j)
    rhs = _Side(est).add([(1 + i, 1) for i in range(j)])
    equal = all(is_homothetic(bodies[0], k) for k in bodies[1:])
    return _report("product", lhs, rhs, equal, _params(bodies[0].dim, j, samples, master_seed))


def check_bm(body, other, epsilon, j, samples=DEFAULT_SAMPLES, master_seed=0):
    """Phi(K + eps L)^(1/j) >= Phi(K)^(1/j) + eps Phi(L)^(1/j), for eps > 0."""
    if not epsilon > 0:
        raise GeometryError(f"epsilon must be positive, got {epsilon}")
    total = minkowski_sum(body, scale(other, epsilon))
    est = paired_phi_batch([[total] * j, [body] * j, [other] * j], j, samples, master_seed)
    p = 1 if j == 1 else 1.0 / j
    lhs = _Side(est).add([(0, p)])
    rhs = _Side(est).add([(1, p)]).add([(2, p)], coefficient=epsilon)
    return _report("brunn_minkowski", lhs, rhs, is_homothetic(body, other),
                   _params(body.dim, j, samples, master_seed, epsilon=epsilon))


def check_sl_invariance(bodies, g, samples=DEFAULT_SAMPLES, master_seed=0, transformed_seed=None):
    """Phi(gK_1..gK_j) == Phi(K_1..K_j) for unimodular g.

    The transformed side uses an independent seed unless ``transformed_seed``
    is given; the verdict is two-sided.
    """
    if not isinstance(g, LinearMap):
        g = LinearMap(g)
    if not g.unimodular:
        raise GeometryError(f"map is not unimodular: det = {g.det!r}")
    bodies = list(bodies)
    j = len(bodies)
    if transformed_seed is None:
        transformed_seed = derive_seed(master_seed, "sl")
    moved = [linear_image(k, g) for k in bodies]
    est = [phi_mixed(moved, samples, transformed_seed), phi_mixed(bodies, samples, master_seed)]
    lhs = _Side(est).add([(0, 1)])
    rhs = _Side(est).add([(1, 1)])
    return _report("sl_invariance", lhs, rhs, True,
                   _params(bodies[0].dim, j, samples, master_seed), two_sided=True)


def random_polytope(stream, dim, vertex_count):
    """Hull of seeded standard normal points, redrawn until full-dimensional."""
    if vertex_count < dim + 1:
        raise GeometryError(f"need at least dim+1={dim + 1} points, got {vertex_count}")
    rng = stream.rng(POLYTOPE)
    for _ in range(MAX_RETRIES):
        body = convex_hull(rng.standard_normal((vertex_count, dim)))
        if affine_dim(body) == dim:
            return body
    raise GeometryError(f"no full-dimensional polytope after {MAX_RETRIES} draws")


def random_sl_matrix(stream, n, stretch=0.3, shear=0.5):
    """Seeded rotation times a unit-determinant diagonal-plus-shear factor."""
    if n < 1:
        raise GeometryError(f"dimension must be positive, got {n}")
    if n == 1:
        return LinearMap(np.ones((1, 1)))
    rng = stream.rng(SL_MATRIX)
    rotation = haar_sample(SampleStream(derive_seed(stream.master_seed, "rotation"), stream.index), n, n).basis
    if np.linalg.det(rotation) < 0:
        rotation = rotation.copy()
        rotation[:, 0] *= -1
    logs = stretch * rng.standard_normal(n)
    factor = np.diag(np.exp(logs - logs.mean()))
    upper = np.triu(shear * rng.standard_normal((n, n)), k=1)
    m = rotation @ (factor @ (np.eye(n) + upper))
    # pin det to 1 against rounding
    m = m / abs(np.linalg.det(m)) ** (1.0 / n)
    return LinearMap(m)


@dataclass(frozen=True)
class SuiteConfig:
    suites: tuple = ("minkowski", "af", "product", "bm", "sl")
    instances: int = 100
    n: int = 3
    j: int = 2
    samples: int = DEFAULT_SAMPLES
    seed: int = 0
    epsilons: tuple = (1.0,)
    r: int = 2
    homothetic_every: int = 10
    force_homothetic: bool = False
    min_vertices: int = 0
    max_vertices: int = 0


def _vertex_count(rng, config):
    lo = config.min_vertices or config.n + 1
    hi = max(config.max_vertices or config.n + 8, lo)
    return int(rng.integers(lo, hi + 1))


def _instance(config, suite, k):
    seed = derive_seed(config.seed, suite, k)
    rng = SampleStream(seed).rng(CORPUS)
    homothetic = config.force_homothetic or (
        config.homothetic_every > 0 and k % config.homothetic_every == 0
    )

    def body(index):
        return random_polytope(SampleStream(seed, index), config.n, _vertex_count(rng, config))

    return seed, rng, homothetic, body


def _homothet(rng, body):
    return translate(scale(body, float(rng.uniform(0.5, 3.0))), rng.standard_normal(body.dim))


def _run_one(config, suite, k):
    seed, rng, homothetic, body = _instance(config, suite, k)
    n, j = config.n, config.j
    sample_seed = derive_seed(seed, "samples")
    if suite == "minkowski":
        a = body(1)
        b = _homothet(rng, a) if homothetic else body(2)
        out = [check_minkowski(a, b, j, config.samples, sample_seed)]
    elif suite == "product":
        first = body(1)
        bodies = [first] + [_homothet(rng, first) if homothetic else body(2 + t) for t in range(j - 1)]
        out = [check_product(bodies, config.samples, sample_seed)]
    elif suite == "af":
        bodies = [body(1 + t) for t in range(j)]
        out = [check_af(bodies, config.r, config.samples, sample_seed)]
    elif suite == "bm":
        a = body(1)
        b = _homothet(rng, a) if homothetic else body(2)
        out = [check_bm(a, b, eps, j, config.samples, sample_seed) for eps in config.epsilons]
    elif suite == "sl":
        bodies = [body(1 + t) for t in range(j)]
        g = random_sl_matrix(SampleStream(seed, 0), n)
        out = [check_sl_invariance(bodies, g, config.samples, sample_seed)]
    else:
        raise ValueError(f"unknown suite {suite!r}")
    for report in out:
        report.parameters["instance"] = k
    return out


def run_suite(config=None):
    """Run every configured checker over a seeded corpus; deterministic in ``config``."""
    config = SuiteConfig() if config is None else config
    reports = []
    for suite in config.suites:
        if suite not in SUITES:
            raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
        for k in range(config.instances):
            reports.extend(_run_one(config, suite, k))
    return SuiteReport(reports, config.seed)
