"""Monte Carlo affine quermassintegrals and mixed affine quermassintegrals.

Bodies are V-polytopes (:class:`Polytope`) or analytic balls (:class:`Ball`).
Quermassintegrals are power means of projection volumes over Haar-random
subspaces; :mod:`mixedquerm.verify` checks the Minkowski, Aleksandrov-Fenchel,
Brunn-Minkowski and SL(n)-invariance statements on seeded corpora.
"""
from .errors import DegenerateBodyError, DimensionMismatchError, GeometryError, UnsupportedOperandError
from .geometry import (
    Ball,
    LinearMap,
    Polytope,
    affine_dim,
    ball_approx,
    convex_hull,
    cube,
    linear_image,
    minkowski_sum,
    scale,
    standard_simplex,
    translate,
    unit_ball_volume,
    volume,
)
from .grassmann import SampleStream, Subspace, haar_bases, haar_sample, project
from .mixedvol import mixed_volume, mixed_volume_oracle
from .querm import (
    Estimate,
    paired_phi_batch,
    phi,
    phi_exact_2d,
    phi_ith,
    phi_ith_mixed,
    phi_mixed,
    phi_pair,
)
from .verify import (
    InequalityReport,
    SuiteConfig,
    SuiteReport,
    check_af,
    check_bm,
    check_minkowski,
    check_product,
    check_sl_invariance,
    is_homothetic,
    random_polytope,
    random_sl_matrix,
    run_suite,
)

__version__ = "0.1.0"
