"""Mixed volumes of polytopes by polarization.

    V(K_1, ..., K_j) = 1/j! * sum over nonempty S of (-1)^(j-|S|) vol(sum_{i in S} K_i)

Repeated arguments are grouped: subsets that pick the same number of copies
of each distinct body give the same Minkowski sum, so they are evaluated
once and weighted by a product of binomials. With all arguments distinct
this is the plain 2^j - 1 term sum.
"""
from itertools import combinations_with_replacement, product
import math

import numpy as np

from .errors import DimensionMismatchError, GeometryError
from .geometry import Ball, minkowski_sum, scale, volume, _require_polytope

MAX_BODIES = 12


def group_bodies(bodies):
    """Distinct bodies in first-appearance order and their multiplicities."""
    distinct, counts = [], []
    for body in bodies:
        for k, seen in enumerate(distinct):
            if body is seen or seen.same_as(body):
                counts[k] += 1
                break
        else:
            distinct.append(body)
            counts.append(1)
    return distinct, counts


def polarization_plan(multiplicities):
    """``(weight, picks)`` pairs for grouped polarization, in lexicographic order of ``picks``.

    ``picks[k]`` copies of distinct body ``k`` enter the Minkowski sum; the
    weight already carries the sign and the binomial multiplicity, but not
    the 1/j! factor.
    """
    j = sum(multiplicities)
    plan = []
    for picks in product(*(range(c + 1) for c in multiplicities)):
        size = sum(picks)
        if size == 0:
            continue
        weight = (-1) ** (j - size)
        for c, a in zip(multiplicities, picks):
            weight *= math.comb(c, a)
        plan.append((weight, picks))
    return plan


def combination(distinct, picks):
    """Minkowski sum ``sum_k picks[k] * distinct[k]``."""
    acc = None
    for body, a in zip(distinct, picks):
        if a == 0:
            continue
        term = body if a == 1 else scale(body, a)
        acc = term if acc is None else minkowski_sum(acc, term)
    return acc


def compensated_sum(terms):
    """Neumaier summation; works elementwise on equal-shape arrays."""
    total = np.zeros_like(np.asarray(terms[0], dtype=np.float64))
    comp = np.zeros_like(total)
    for t in terms:
        t = np.asarray(t, dtype=np.float64)
        s = total + t
        big = np.abs(total) >= np.abs(t)
        comp = comp + np.where(big, (total - s) + t, (t - s) + total)
        total = s
    return total + comp


def _validate(bodies):
    bodies = list(bodies)
    j = len(bodies)
    if j == 0:
        raise GeometryError("mixed volume needs at least one body")
    if j > MAX_BODIES:
        raise GeometryError(f"refusing {j} bodies: polarization needs 2^{j} hulls (limit {MAX_BODIES})")
    for body in bodies:
        _require_polytope(body, "mixed_volume")
        if body.dim != j:
            raise DimensionMismatchError(f"mixed volume of {j} bodies needs bodies in R^{j}, got R^{body.dim}")
    return bodies, j


def mixed_volume(bodies, full_output=False):
    """Mixed volume of ``j`` polytopes in R^j.

    With ``full_output=True`` also returns the cancellation ratio
    ``sum |terms| / |result|`` (``inf`` for a zero result).
    """
    bodies, j = _validate(bodies)
    distinct, counts = group_bodies(bodies)
    terms = [w * volume(combination(distinct, picks)) for w, picks in polarization_plan(counts)]
    raw = float(compensated_sum(terms)) / math.factorial(j)
    value = max(raw, 0.0)
    if not full_output:
        return value
    spread = math.fsum(abs(t) for t in terms) / math.factorial(j)
    return value, (spread / value if value > 0 else math.inf)


def _monomials(j):
    return list(combinations_with_replacement(range(j), j))


def mixed_volume_oracle(bodies, grid_size=None):
    """Mixed volume from a least-squares fit of the volume polynomial.

    ``vol(l_1 K_1 + ... + l_j K_j)`` is sampled on a ``grid_size^j`` grid of
    positive weights and fitted by a homogeneous degree-``j`` polynomial.
    The coefficient of ``l_1 l_2 ... l_j`` equals ``j! V(K_1, ..., K_j)``.
    """
    bodies, j = _validate(bodies)
    if grid_size is None:
        grid_size = j + 1
    if grid_size < j + 1:
        raise GeometryError(f"grid_size must be at least j+1={j + 1}, got {grid_size}")
    levels = np.linspace(0.5, 1.5, grid_size)
    monos = _monomials(j)
    rows, values = [], []
    for lam in product(levels, repeat=j):
        rows.append([math.prod(lam[i] for i in mono) for mono in monos])
        body = None
        for lk, k in zip(lam, bodies):
            term = scale(k, lk)
            body = term if body is None else minkowski_sum(body, term)
        values.append(volume(body))
    a = np.array(rows)
    if np.linalg.matrix_rank(a) < len(monos):
        raise GeometryError("singular fitting system; use a finer grid")
    coef, *_ = np.linalg.lstsq(a, np.array(values), rcond=None)
    target = monos.index(tuple(range(j)))
    return max(float(coef[target]) / math.factorial(j), 0.0)
