"""Branched values of the Gauss map and the antipodality test.

The Gauss map ``G = i rho (z + a)^(-1/2) (z - b)^(1/2)`` branches over the
four real parameters ``+1, -1, +t, -t``.  Each branch point appears twice on
a translational fundamental domain, once with each sign of G, so there are
eight branched values on the sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .periods import FamilyParams, check_admissible

ANTIPODAL_TOL = 1e-10

# Order of the eight points: (sign of G, branch parameter).
LABELS = (
    (+1, "+1"), (-1, "+1"),
    (+1, "-1"), (-1, "-1"),
    (+1, "+t"), (-1, "+t"),
    (+1, "-t"), (-1, "-t"),
)


@dataclass(frozen=True)
class BranchValueSet:
    """Eight unit vectors ``sigma(+-G(z))`` for z in (+1, -1, +t, -t).

    ``points[k]`` carries the label ``LABELS[k]``.  ``pairing`` is the best
    antipodal matching found (index pairs) and ``pair_residual`` the largest
    ``|p + q|`` over it.
    """

    points: np.ndarray
    antipodal: bool
    rho_used: float
    pairing: tuple
    pair_residual: float

    @property
    def labels(self):
        return LABELS


@dataclass(frozen=True)
class AntipodalityWitness:
    """The two values rho^4 would need for antipodal pairs, and their gap."""

    rho4_from_unit: float
    rho4_from_t: float
    discrepancy: float
    pair_residual: float


def stereographic(g):
    """Inverse stereographic projection of complex g to the unit sphere."""
    g = complex(g)
    n = abs(g) ** 2
    return np.array([2 * g.real, 2 * g.imag, n - 1.0]) / (n + 1.0)


def _branch_points(a, b, t, rho):
    rr = rho * rho
    pts = []

    def planar(num, lo, hi, axis):
        # sigma of a value of modulus rho*sqrt(hi/lo) on a coordinate axis
        den = rr * hi + lo
        z = (rr * hi - lo) / den
        w = 2 * rho * math.sqrt(lo * hi) / den
        v = np.zeros(3)
        v[axis] = num * w
        v[2] = z
        return v

    # G(+1), G(-1) are negative reals, G(+t), G(-t) positive imaginary.
    for lo, hi in (((a + 1), (b - 1)), ((a - 1), (b + 1))):
        pts.append(planar(-1.0, lo, hi, 0))
        pts.append(planar(+1.0, lo, hi, 0))
    for lo, hi in (((t + a), (t - b)), ((t - a), (t + b))):
        pts.append(planar(+1.0, lo, hi, 1))
        pts.append(planar(-1.0, lo, hi, 1))
    return np.array(pts)


@lru_cache(maxsize=None)
def all_matchings(n=8):
    """Every perfect matching of ``range(n)`` as a tuple of index pairs."""

    def rec(rest):
        if not rest:
            yield ()
            return
        i = rest[0]
        for j in rest[1:]:
            left = tuple(k for k in rest if k not in (i, j))
            for m in rec(left):
                yield ((i, j),) + m

    return tuple(rec(tuple(range(n))))


def best_antipodal_matching(points: np.ndarray):
    """Exhaustive search over all perfect matchings (105 for eight points).

    Returns ``(pairing, residual)`` minimising ``max |p + q|`` over the pairs.
    """
    n = len(points)
    if n % 2:
        raise ValueError("need an even number of points")
    sums = np.linalg.norm(points[:, None, :] + points[None, :, :], axis=-1)
    best, best_pairs = math.inf, None
    for m in all_matchings(n):
        worst = max(sums[i, j] for i, j in m)
        if worst < best:
            best, best_pairs = worst, m
    return best_pairs, float(best)


def branch_values_at(a, b, t, rho=1.0) -> BranchValueSet:
    """Branched values for any admissible (a, b, t), either orientation."""
    check_admissible(a, b, t)
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho!r}")
    pts = _branch_points(a, b, t, rho)
    pairing, res = best_antipodal_matching(pts)
    return BranchValueSet(pts, res <= ANTIPODAL_TOL, float(rho), pairing, res)


def branch_values(params: FamilyParams) -> BranchValueSet:
    """Stereographic images of the eight branched values of G.

    Uses ``params.rho`` when set and 1 otherwise.
    """
    rho = 1.0 if params.rho is None else params.rho
    return branch_values_at(params.a, params.b, params.t, rho)


def rho4_candidates(a, b, t):
    """The two conditions on rho^4 forced by antipodal pairing."""
    return (a * a - 1.0) / (b * b - 1.0), (t - a) * (t + a) / ((t - b) * (t + b))


def antipodality_test(params: FamilyParams):
    """Classify the branched values as ``"meeks"`` or ``"non_meeks"``.

    The decision comes from the exhaustive matching, not from the algebraic
    criterion; the witness records both so they can be compared.
    """
    bv = branch_values(params)
    r1, r2 = rho4_candidates(params.a, params.b, params.t)
    witness = AntipodalityWitness(r1, r2, abs(r1 - r2), bv.pair_residual)
    return ("meeks" if bv.antipodal else "non_meeks"), witness


def pairs_by_label(bv: BranchValueSet):
    """The best pairing with indices replaced by their labels."""
    return [(LABELS[i], LABELS[j]) for i, j in bv.pairing]


__all__ = [
    "ANTIPODAL_TOL", "AntipodalityWitness", "BranchValueSet", "LABELS",
    "all_matchings", "antipodality_test", "best_antipodal_matching",
    "branch_values", "branch_values_at", "pairs_by_label", "rho4_candidates",
    "stereographic",
]
