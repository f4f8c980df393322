"""Weierstrass data and edge periods of the oD / oDelta hexagons.

The upper half-plane is normalised so that the preimages of the hexagon
vertices are ``v = (-t, -a, -1, 1, b, t)``.  The three forms are

    phi1 =  rho  * prod (z - v_j)**e1_j dz
    phi2 = -1/rho * prod (z - v_j)**e2_j dz
    dh   = -i     * prod (z - v_j)**e3_j dz

with the exponent tables below.  On every real edge each form has constant
phase, so the edge lengths ``I_k = |int phi1|`` and ``J_k = |int phi2|``
reduce to real integrals of ``prod |x - v_j|**e_j``.  All periods here are
computed at ``rho = 1``; the Lopez-Ros factor is applied afterwards.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .quad import PERIOD_TOL, QuadratureError, SingularIntegrand, integrate_singular
from .specfun import ellip_ke, moduli_from_at

PHI1_EXP = (-0.5, -0.5, -0.5, -0.5, 0.5, -0.5)
PHI2_EXP = (-0.5, 0.5, -0.5, -0.5, -0.5, -0.5)
DH_EXP = (-0.5, 0.0, -0.5, -0.5, 0.0, -0.5)
FORM_EXPONENTS = {"phi1": PHI1_EXP, "phi2": PHI2_EXP, "dh": DH_EXP}
FORM_CONSTANTS = {"phi1": 1.0, "phi2": -1.0, "dh": -1j}

DEGENERATE_GAP = 1e-6
RHO_CHECK_TOL = 1e-9


class PeriodError(ArithmeticError):
    """Quadrature failure on one edge; ``edge`` is the 1-based edge index."""

    def __init__(self, edge: int, form: str, cause: Exception):
        super().__init__(f"edge {edge} ({form}): {cause}")
        self.edge = edge
        self.form = form


class PeriodInconsistencyError(ArithmeticError):
    pass


@dataclass(frozen=True)
class FamilyParams:
    """Normalised parameters ``1 < a <= b < t`` and the Lopez-Ros factor rho."""

    a: float
    b: float
    t: float
    rho: float | None = None

    def __post_init__(self):
        check_admissible(self.a, self.b, self.t)
        if self.a > self.b:
            raise ValueError(
                f"non-canonical orientation a={self.a!r} > b={self.b!r}; "
                "use FamilyParams.canonical"
            )
        if self.rho is not None and not self.rho > 0:
            raise ValueError(f"rho must be positive, got {self.rho!r}")

    @classmethod
    def canonical(cls, a, b, t, rho=None):
        """Return ``(params, swapped)`` with a and b ordered.

        Swapping a and b inverts the Lopez-Ros factor.
        """
        if a <= b:
            return cls(a, b, t, rho), False
        return cls(b, a, t, None if rho is None else 1.0 / rho), True

    @property
    def vertices(self):
        return (-self.t, -self.a, -1.0, 1.0, self.b, self.t)

    @property
    def is_diagonal(self):
        return self.a == self.b

    def with_rho(self, rho):
        return FamilyParams(self.a, self.b, self.t, rho)


def check_admissible(a, b, t):
    if not (1.0 < a < t and 1.0 < b < t):
        raise ValueError(f"need 1 < a, b < t; got a={a!r}, b={b!r}, t={t!r}")
    if not all(math.isfinite(x) for x in (a, b, t)):
        raise ValueError("parameters must be finite")


def conditioning_warnings(a, b, t):
    out = []
    if t - max(a, b) < DEGENERATE_GAP:
        out.append(f"t - max(a, b) = {t - max(a, b):.3g} < {DEGENERATE_GAP}: periods near divergence")
    if min(a, b) - 1.0 < DEGENERATE_GAP:
        out.append(f"min(a, b) - 1 = {min(a, b) - 1.0:.3g} < {DEGENERATE_GAP}: near-degenerate")
    return out


@dataclass(frozen=True)
class WeierstrassData:
    """The forms phi1, phi2, dh and the Gauss map for one parameter point.

    Branches: every factor ``(z - v_j)**(1/2)`` is the principal root, which is
    continuous on the closed upper half-plane when approached from above.
    """

    params: FamilyParams

    @property
    def rho(self):
        return 1.0 if self.params.rho is None else self.params.rho

    def _product(self, z, exps):
        z = np.asarray(z, dtype=complex)
        out = np.ones_like(z)
        for v, e in zip(self.params.vertices, exps):
            if e == 0:
                continue
            d = z - v
            # stay on the upper side of the real axis
            d = d.real + 1j * np.where(d.imag > 0, d.imag, 0.0)
            r = np.sqrt(d)
            out = out * (r if e > 0 else 1.0 / r)
        return out

    def phi1(self, z):
        return self.rho * self._product(z, PHI1_EXP)

    def phi2(self, z):
        return -self._product(z, PHI2_EXP) / self.rho

    def dh(self, z):
        return -1j * self._product(z, DH_EXP)

    def gauss(self, z):
        """G(z) = i rho (z - v2)^(-1/2) (z - v5)^(1/2)."""
        return 1j * self.rho * self._product(z, (0, -0.5, 0, 0, 0.5, 0))

    def omega(self, z):
        """The three Weierstrass forms (omega1, omega2, omega3) at z."""
        p1, p2 = self.phi1(z), self.phi2(z)
        return np.stack([0.5 * (p2 - p1), 0.5j * (p2 + p1), self.dh(z)])


@dataclass(frozen=True)
class EdgePeriods:
    """Edge lengths of the two Schwarz-Christoffel hexagons at rho = 1.

    ``I[k-1]``, ``J[k-1]`` and ``H[k-1]`` are the lengths of edge
    ``v_k v_{k+1}`` under phi1, phi2 and dh (k = 1..5).  ``I6``, ``J6`` and
    ``H6`` belong to the edge ``v6 v1`` through infinity.  Closed-form
    evaluations leave the entries they do not provide as NaN.
    """

    I: tuple
    J: tuple
    H: tuple = (math.nan,) * 5
    I6: float = math.nan
    J6: float = math.nan
    H6: float = math.nan
    warnings: tuple = field(default=(), compare=False)

    def i(self, k):
        return self.I6 if k == 6 else self.I[k - 1]

    def j(self, k):
        return self.J6 if k == 6 else self.J[k - 1]

    def h(self, k):
        return self.H6 if k == 6 else self.H[k - 1]

    @property
    def q_i(self):
        return (self.I[0] + self.I[4]) / (self.I[1] + self.I[3])

    @property
    def q_j(self):
        return (self.J[0] + self.J[4]) / (self.J[1] + self.J[3])

    @property
    def q(self):
        return self.q_i - self.q_j


def _interval_integral(diff, exps, i, scale, tol):
    """Integral of ``scale * prod |x - x_j|**e_j`` between sorted points i, i+1.

    ``diff[i][j] = x_i - x_j`` must be supplied exactly so that distances to
    nearby singular points keep their relative accuracy.
    """
    n = len(exps)
    lo, hi = i, i + 1
    left = [(diff[lo][j], exps[j]) for j in range(0, lo + 1) if exps[j] != 0]
    right = [(diff[j][hi], exps[j]) for j in range(hi, n) if exps[j] != 0]

    def f(z, dl, dr):
        out = np.full_like(dl, scale)
        for gap, e in left:
            out = out * (gap + dl) ** e
        for gap, e in right:
            out = out * (gap + dr) ** e
        return out

    g = SingularIntegrand(f, 0.0, diff[hi][lo], exps[lo], exps[hi])
    return integrate_singular(g, tol=tol)


def _v_diff(v):
    return [[vi - vj for vj in v] for vi in v]


def _edge_length(v, exps, k, tol):
    """Length of edge k (1..5) or the edge through infinity (k = 6)."""
    if k <= 5:
        return _interval_integral(_v_diff(v), exps, k - 1, 1.0, tol)
    # w = -1/z sends v6 v1 to a finite interval and keeps the exponents,
    # because they sum to -2.
    w = [-1.0 / x for x in v]
    order = sorted(range(6), key=lambda j: w[j])
    wd = [[(v[p] - v[q]) / (v[p] * v[q]) for q in order] for p in order]
    e = [exps[j] for j in order]
    scale = math.prod(abs(x) ** ex for x, ex in zip(v, exps))
    pos = order.index(5)  # v6 -> -1/t, followed by v1 -> 1/t
    return _interval_integral(wd, e, pos, scale, tol)


def edge_periods_at(a, b, t, tol=PERIOD_TOL) -> EdgePeriods:
    """Edge periods for any admissible (a, b, t), without canonical ordering."""
    check_admissible(a, b, t)
    v = (-t, -a, -1.0, 1.0, b, t)
    out = {}
    for name, exps in (("I", PHI1_EXP), ("J", PHI2_EXP), ("H", DH_EXP)):
        vals = []
        for k in range(1, 7):
            try:
                vals.append(float(_edge_length(v, exps, k, tol)))
            except QuadratureError as exc:
                raise PeriodError(k, name, exc) from exc
        out[name] = vals
    w = tuple(conditioning_warnings(a, b, t))
    for msg in w:
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
    return EdgePeriods(
        tuple(out["I"][:5]), tuple(out["J"][:5]), tuple(out["H"][:5]),
        out["I"][5], out["J"][5], out["H"][5], w,
    )


def edge_periods(params: FamilyParams, tol=PERIOD_TOL) -> EdgePeriods:
    return edge_periods_at(params.a, params.b, params.t, tol)


def q_value(a, b, t, tol=PERIOD_TOL) -> float:
    """Q = (I1+I5)/(I2+I4) - (J1+J5)/(J2+J4) at the canonical ordering of (a, b).

    Swapping a and b exchanges I_k with J_{6-k}, which flips the sign of the
    raw quotient difference; the canonical ordering removes that ambiguity.
    """
    lo, hi = min(a, b), max(a, b)
    return edge_periods_at(lo, hi, t, tol).q


def rho_from_periods(p: EdgePeriods) -> float:
    return math.sqrt((p.J[0] + p.J[4]) / (p.I[0] + p.I[4]))


def period_residuals(p: EdgePeriods, rho: float):
    """Relative residuals of both period conditions after scaling by rho."""
    r1 = (rho * (p.I[0] + p.I[4]) - (p.J[0] + p.J[4]) / rho) / (p.J[0] + p.J[4])
    r2 = (rho * (p.I[1] + p.I[3]) - (p.J[1] + p.J[3]) / rho) / (p.J[1] + p.J[3])
    return r1, r2


def solve_rho(params: FamilyParams, periods: EdgePeriods | None = None,
              check_tol=RHO_CHECK_TOL) -> float:
    """Lopez-Ros factor closing both period conditions.

    rho^2 = (J1+J5)/(I1+I5) closes the first condition exactly; the second is
    then checked, and a violation means Q != 0 at these parameters.
    """
    if periods is None:
        periods = edge_periods(params)
    rho = rho_from_periods(periods)
    _, r2 = period_residuals(periods, rho)
    if abs(r2) > check_tol:
        raise PeriodInconsistencyError(
            f"second period condition violated by {r2:.3g} at "
            f"(a, b, t) = ({params.a}, {params.b}, {params.t}); Q = {periods.q:.3g}"
        )
    return rho


def _elliptic_table(a, t):
    """K, E at m1, m2 and at their complements, all from exact complements."""
    mm = moduli_from_at(a, t)
    K1, E1 = ellip_ke(mm.m1, mm.m1c)
    K2, E2 = ellip_ke(mm.m2, mm.m2c)
    Kb1, Eb1 = ellip_ke(mm.m1c, mm.m1)
    Kb2, Eb2 = ellip_ke(mm.m2c, mm.m2)
    return K1, K2, E1, E2, Kb1, Kb2, Eb1, Eb2


def closed_form_periods_diagonal(a, t) -> EdgePeriods:
    """Closed forms of I_k = J_{6-k} on the diagonal a = b (k = 1, 2, 4, 5).

    I3, J3 and the dh periods have no closed form here and are NaN.
    """
    k1, k2, _, _, kb1, kb2, _, _ = _elliptic_table(a, t)
    s = math.sqrt((t - 1.0) * (t + 1.0))
    i1 = (kb1 + kb2) / s
    i2 = (k1 + k2) / s
    i4 = (k2 - k1) / s
    i5 = (kb1 - kb2) / s
    nan = math.nan
    return EdgePeriods((i1, i2, nan, i4, i5), (i5, i4, nan, i2, i1))


@dataclass(frozen=True)
class DiagonalDerivatives:
    """b-derivatives of the edge periods at a = b, and their combinations."""

    dI1: float
    dI2: float
    dI4: float
    dI5: float
    dJ1: float
    dJ2: float
    dJ4: float
    dJ5: float
    dI15: float
    dI24: float
    dJ15: float
    dJ24: float
    q_tilde: float


def diagonal_derivatives(a, t) -> DiagonalDerivatives:
    if not 1.0 < a < t:
        raise ValueError(f"need 1 < a < t, got a={a!r}, t={t!r}")
    K1, K2, E1, E2, Kb1, Kb2, Eb1, Eb2 = _elliptic_table(a, t)
    s = math.sqrt((t - 1.0) * (t + 1.0))
    ta = (t - a) * (t + a)
    aa = (a - 1.0) * (a + 1.0)

    dI1 = Kb2 / (2 * a * s)
    dI2 = K2 / (2 * a * s)
    dJ1 = -Kb2 / (2 * a * s) - a / (s * ta) * (Kb2 - Kb1) + s * a / (ta * aa) * (Eb2 - Eb1)
    dJ2 = K2 / (2 * a * s) - a / (s * aa) * (K2 - K1) + s * a / (ta * aa) * (E2 - E1)
    dJ4 = K2 / (2 * a * s) - a / (s * aa) * (K1 + K2) + s * a / (ta * aa) * (E1 + E2)
    dJ5 = Kb2 / (2 * a * s) + a / (s * ta) * (Kb1 + Kb2) - s * a / (ta * aa) * (Eb1 + Eb2)

    dI24 = K2 / (a * s)
    dJ15 = 2 * a * Kb1 / (s * ta) - 2 * a * Eb1 * s / (aa * ta)
    dJ24 = K2 / (a * s) - 2 * a * K2 / (s * aa) + 2 * a * E2 * s / (aa * ta)
    # Sign fixed so that q_tilde = lim Q(a, a + eps; t)/eps; it equals the
    # assembly of the combinations above through the quotient rule.
    q_tilde = (a * s * s / (aa * ta)) * (Kb1 * E2 + Eb1 * K2 - Kb1 * K2) / (K2 * K2)
    return DiagonalDerivatives(
        dI1, dI2, dI2, -dI1, dJ1, dJ2, dJ4, dJ5, 0.0, dI24, dJ15, dJ24, q_tilde
    )


def dq_db_diagonal(a, t) -> float:
    """Analytic continuation of Q(a, b; t)/(b - a) to b = a.

    Its numerator K(1-m1)E(m2) + E(1-m1)K(m2) - K(1-m1)K(m2) vanishes exactly
    on the boundary curve where oDelta meets oD.
    """
    return diagonal_derivatives(a, t).q_tilde


def f_limit(a, b, tol=PERIOD_TOL):
    """lim t*(I2 - J2) as t -> infinity, an integral over (1, a).

    The integrand is (2z - a + b) / sqrt((z^2 - 1)(a - z)(b + z)); at a = b it
    integrates to pi for every a.
    """
    if not (a > 1.0 and b > 1.0):
        raise ValueError(f"need a, b > 1, got a={a!r}, b={b!r}")

    def f(z, dl, dr):
        return (2 * z - a + b) / np.sqrt(dl * (2.0 + dl) * dr * (b + 1.0 + dl))

    return float(integrate_singular(SingularIntegrand(f, 1.0, a, -0.5, -0.5), tol=tol))


def g_limit(a, b, tol=PERIOD_TOL):
    """lim t*(J4 - I4) as t -> infinity; equals f_limit(b, a)."""
    return f_limit(b, a, tol)
