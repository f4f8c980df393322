"""Root finding for the period problem and the special constants.

Q(a, b; t) is positive as t approaches b from above and tends to minus
infinity as t grows, so a geometric scan upward from b always brackets a
root.  Brent's method (scipy) then polishes it.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .periods import (
    FamilyParams,
    edge_periods_at,
    period_residuals,
    q_value,
    rho_from_periods,
)
from .specfun import ellip_ke, moduli_from_at

BRACKET_DELTA = 1e-3
BRACKET_LIMIT = 1e8
TETRA_CHECK_TOL = 1e-9
BIFURCATION_SLOPE_TOL = 1e-6
BOUNDARY_TOL = 1e-12


class BracketError(ArithmeticError):
    """No sign change found; ``samples`` holds the (t, Q) pairs visited."""

    def __init__(self, message, samples):
        super().__init__(message)
        self.samples = samples


class RootNotFoundError(ArithmeticError):
    """A scan found no sign change; ``scan`` holds the sampled table."""

    def __init__(self, message, scan):
        super().__init__(message)
        self.scan = scan


@dataclass(frozen=True)
class SolveReport:
    params: FamilyParams
    residual_q: float
    residual_period: float
    bracket: tuple
    iterations: int
    warnings: tuple = field(default=(), compare=False)
    residual_tetragonal: float = math.nan


@dataclass(frozen=True)
class RootCount:
    count: int
    roots: tuple
    grid: np.ndarray = field(repr=False, compare=False)
    values: np.ndarray = field(repr=False, compare=False)


def _fill_rho(a, b, t):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        p = edge_periods_at(a, b, t)
    rho = rho_from_periods(p)
    r1, r2 = period_residuals(p, rho)
    return p, rho, max(abs(r1), abs(r2)), tuple(str(w.message) for w in caught)


def _quiet_q(a, b, t):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return q_value(a, b, t)


def _brent(f, lo, hi, scale):
    root, info = brentq(f, lo, hi, xtol=1e-15 * scale, rtol=4 * np.finfo(float).eps,
                        maxiter=200, full_output=True)
    return root, info.iterations


def bracket_t(a, b, delta=BRACKET_DELTA, limit=BRACKET_LIMIT):
    """Bracket a sign change of Q(a, b; .) in t > b.

    Steps ``t = b + 2**k * delta * b`` upward.  If Q is already negative at
    the first step the offset is halved until Q turns positive.
    """
    samples = []
    t = b + delta * b
    q = _quiet_q(a, b, t)
    samples.append((t, q))
    step = delta
    while q <= 0:
        step *= 0.5
        if step < 1e-12:
            raise BracketError(f"Q stays non-positive down to t - b = {step * b:.3g}", samples)
        t = b + step * b
        q = _quiet_q(a, b, t)
        samples.append((t, q))
    lo = t
    k = 0
    while True:
        k += 1
        t = b + 2.0 ** k * step * b
        if t > limit * b:
            raise BracketError(f"no sign change of Q up to t = {limit:g} b", samples)
        q = _quiet_q(a, b, t)
        samples.append((t, q))
        if q < 0:
            return (lo, t), samples
        lo = t


def solve_odelta(a: float, b: float, tol: float = 1e-10) -> SolveReport:
    """Find t > b with Q(a, b; t) = 0 for 1 < a < b, and fill in rho.

    Raises:
        ValueError: a >= b or inadmissible values.
        BracketError: no sign change before t = 1e8 b.
        ArithmeticError: the polished root misses ``tol``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not 1.0 < a:
        raise ValueError(f"need a > 1, got a={a!r}")
    if not a < b:
        raise ValueError(
            f"need a < b (got a={a!r}, b={b!r}); the diagonal a = b solves for every t"
        )
    (lo, hi), _ = bracket_t(a, b)
    t, iters = _brent(lambda x: _quiet_q(a, b, x), lo, hi, b)
    q = _quiet_q(a, b, t)
    if abs(q) >= tol:
        raise ArithmeticError(f"Brent root t={t!r} leaves |Q| = {abs(q):.3g} >= {tol}")
    _, rho, rp, warns = _fill_rho(a, b, t)
    return SolveReport(FamilyParams(a, b, t, rho), abs(q), rp, (lo, hi), iters, warns)


def tetragonal_residual(a, b):
    """((I1+I5) - (I2+I4)) / (I2+I4) at t = a b."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        p = edge_periods_at(a, b, a * b)
    den = p.I[1] + p.I[3]
    return (p.I[0] + p.I[4] - den) / den


def _tetragonal_symmetry_error(p, a, b):
    # at t = a b, I_k = J_(k+3) holds for the forms scaled with rho = (a/b)^(1/4)
    c = math.sqrt(b / a)
    return max(abs(p.i(k) - c * p.j(k + 3)) / p.i(k) for k in (1, 2, 3))


def solve_tdelta(b: float, tol: float = 1e-10, grid: int = 60) -> SolveReport:
    """Find a in (1, b) with I1+I5 = I2+I4 at t = a b.

    The residual vanishes identically at a = b, so the scan stays inside
    (1, b).  Without an interior sign change, a vanishing slope at a = b
    marks the bifurcation point, which is returned as the solution a = b.

    Raises:
        RootNotFoundError: no root in (1, b); carries the scan table.
    """
    if not b > 1.0:
        raise ValueError(f"need b > 1, got b={b!r}")
    gaps = (b - 1.0) * np.geomspace(1e-4, 1.0 - 1e-3, grid)
    avals = (b - gaps)[::-1]
    res = np.array([tetragonal_residual(a, b) for a in avals])
    scan = tuple(zip(avals.tolist(), res.tolist()))
    idx = np.nonzero(np.sign(res[:-1]) * np.sign(res[1:]) < 0)[0]
    notes = []
    if len(idx):
        # the root closest to the diagonal joins the tD branch
        i = int(idx[-1])
        lo, hi = float(avals[i]), float(avals[i + 1])
        a, iters = _brent(lambda x: tetragonal_residual(x, b), lo, hi, b)
    else:
        h = 1e-5 * b
        slope = (tetragonal_residual(b + h, b) - tetragonal_residual(b - h, b)) / (2 * h)
        if abs(slope) > BIFURCATION_SLOPE_TOL:
            raise RootNotFoundError(
                f"no root of the tetragonal residual for a in (1, {b})", scan
            )
        a, lo, hi, iters = b, b, b, 0
        notes.append(f"bifurcation point: residual slope {slope:.3g} at a = b")
    t = a * b
    p, rho, rp, warns = _fill_rho(a, b, t)
    sym = _tetragonal_symmetry_error(p, a, b)
    if sym > TETRA_CHECK_TOL:
        raise ArithmeticError(f"tetragonal symmetry I_k = J_(k+3) violated by {sym:.3g}")
    r = abs((p.I[0] + p.I[4] - p.I[1] - p.I[3]) / (p.I[1] + p.I[3]))
    if r >= tol:
        raise ArithmeticError(f"tetragonal residual {r:.3g} >= {tol}")
    return SolveReport(FamilyParams(a, b, t, rho), abs(p.q), rp, (lo, hi), iters,
                       warns + tuple(notes), r)


def boundary_residual(a, t):
    """K(1-m1) E(m2) + E(1-m1) K(m2) - K(1-m1) K(m2) with moduli from (a, t)."""
    mm = moduli_from_at(a, t)
    k2, e2 = ellip_ke(mm.m2, mm.m2c)
    kb1, eb1 = ellip_ke(mm.m1c, mm.m1)
    return kb1 * e2 + eb1 * k2 - kb1 * k2


def boundary_curve(a: float, tol: float = BOUNDARY_TOL) -> float:
    """The t at which oDelta closes onto oD for this a, by bisection.

    The residual tends to pi/2 as t -> a+ and to minus infinity as t grows.
    Bisection runs on log(t - a).

    Raises:
        RootNotFoundError: no sign change on (a (1 + 1e-8), 1e8 a).
    """
    if not a > 1.0:
        raise ValueError(f"need a > 1, got a={a!r}")
    lo, hi = math.log(1e-8 * a), math.log(1e8 * a)
    flo = boundary_residual(a, a + math.exp(lo))
    fhi = boundary_residual(a, a + math.exp(hi))
    if flo * fhi > 0:
        raise RootNotFoundError(
            f"boundary residual has no sign change for a={a!r}",
            ((a + math.exp(lo), flo), (a + math.exp(hi), fhi)),
        )
    best_t, best_f = None, math.inf
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        t = a + math.exp(mid)
        f = boundary_residual(a, t)
        if abs(f) < abs(best_f):
            best_t, best_f = t, f
        if f == 0 or hi - lo < 1e-16:
            break
        if (f > 0) == (flo > 0):
            lo, flo = mid, f
        else:
            hi = mid
    if abs(best_f) >= tol:
        raise ArithmeticError(f"boundary residual {abs(best_f):.3g} >= {tol} at t={best_t!r}")
    return best_t


def tstar_residual(a):
    """2 E(m) - K(m) with m = a^2/(1 + a^2)."""
    aa = a * a
    k, e = ellip_ke(aa / (1.0 + aa), 1.0 / (1.0 + aa))
    return 2.0 * e - k


def _ulp_polish(f, x, span=8):
    """The float within ``span`` ulps of x with the smallest |f|."""
    cands = [x]
    lo = hi = x
    for _ in range(span):
        lo, hi = math.nextafter(lo, -math.inf), math.nextafter(hi, math.inf)
        cands += [lo, hi]
    return min(cands, key=lambda y: (abs(f(y)), abs(y - x)))


def solve_tstar() -> float:
    """a* with 2 E(m) = K(m), m = a*^2/(1 + a*^2)."""
    a = brentq(tstar_residual, 1.0, 10.0, xtol=1e-16, rtol=4 * np.finfo(float).eps,
               maxiter=200)
    return _ulp_polish(tstar_residual, a)


def count_roots(a: float, b: float, grid: int = 400) -> RootCount:
    """Sign changes of Q on a log grid of t - b over b * [1e-4, 1e4].

    Evidence for uniqueness of the root, not a proof.
    """
    if not 1.0 < a < b:
        raise ValueError(f"need 1 < a < b, got a={a!r}, b={b!r}")
    if grid < 2:
        raise ValueError("grid needs at least two points")
    ts = b + b * np.geomspace(1e-4, 1e4, grid)
    qs = np.array([_quiet_q(a, b, t) for t in ts])
    idx = np.nonzero(np.sign(qs[:-1]) * np.sign(qs[1:]) < 0)[0]
    roots = []
    for i in idx:
        r, _ = _brent(lambda x: _quiet_q(a, b, x), ts[i], ts[i + 1], b)
        roots.append(float(r))
    return RootCount(len(roots), tuple(roots), ts, qs)
