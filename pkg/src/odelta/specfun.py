"""Complete elliptic integrals in the parameter convention ``m = k**2``.

K and E come from the arithmetic-geometric mean.  Close to ``m = 1`` the
second kind is recovered through the Legendre relation from the
complementary integrals, which keeps its relative error at the
round-off level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

AGM_MAX_ITER = 64
_E_SWITCH = 0.9


class EllipticDomainError(ValueError):
    pass


def _agm(m: float, mc: float):
    """Return (K, sum of 2**(n-1) c_n**2) for parameter m with complement mc."""
    a = 1.0
    b = math.sqrt(mc)
    power = 0.5
    csum = power * m
    for _ in range(AGM_MAX_ITER):
        if abs(a - b) <= 2.0 * math.ulp(a):
            return math.pi / (2.0 * a), csum
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        power *= 2.0
        csum += power * c * c
    raise ArithmeticError(f"AGM did not converge for m={m!r}")


def _k(m, mc):
    return _agm(m, mc)[0]


def _e(m, mc):
    if mc == 0.0:
        return 1.0
    if m <= _E_SWITCH:
        k, csum = _agm(m, mc)
        return k * (1.0 - csum)
    # Legendre: E K' + E' K - K K' = pi/2, solved for E with K', E' at 1 - m.
    k = _k(m, mc)
    kc, csum_c = _agm(mc, m)
    ec = kc * (1.0 - csum_c)
    return (0.5 * math.pi + k * (kc - ec)) / kc


def ellip_k(m: float) -> float:
    """K(m) = integral of (1 - m sin^2)^(-1/2) over (0, pi/2), for 0 <= m < 1."""
    if not 0.0 <= m < 1.0:
        raise EllipticDomainError(f"K(m) requires 0 <= m < 1, got m={m!r}")
    return _k(m, 1.0 - m)


def ellip_e(m: float) -> float:
    """E(m) = integral of (1 - m sin^2)^(1/2) over (0, pi/2), for 0 <= m <= 1."""
    if not 0.0 <= m <= 1.0:
        raise EllipticDomainError(f"E(m) requires 0 <= m <= 1, got m={m!r}")
    return _e(m, 1.0 - m)


def ellip_k_bar(m: float) -> float:
    """K(1 - m), for 0 < m <= 1.  Accurate for small m, where 1 - m is not."""
    if not 0.0 < m <= 1.0:
        raise EllipticDomainError(f"K_bar(m) requires 0 < m <= 1, got m={m!r}")
    return _k(1.0 - m, m)


def ellip_e_bar(m: float) -> float:
    """E(1 - m), for 0 <= m <= 1."""
    if not 0.0 <= m <= 1.0:
        raise EllipticDomainError(f"E_bar(m) requires 0 <= m <= 1, got m={m!r}")
    return _e(1.0 - m, m)


def ellip_ke(m: float, mc: float) -> tuple[float, float]:
    """(K(m), E(m)) given m together with an exactly known complement mc = 1 - m."""
    if not (0.0 <= m <= 1.0 and 0.0 < mc <= 1.0):
        raise EllipticDomainError(f"need 0 <= m < 1 with complement in (0, 1], got {m!r}, {mc!r}")
    return _k(m, mc), _e(m, mc)


@dataclass(frozen=True)
class ModuliPair:
    """Moduli (m1, m2) with their complements 1 - m1, 1 - m2.

    The complements are carried separately because K(1 - m2) is needed when
    m2 is within round-off of 1.
    """

    m1: float
    m2: float
    m1c: float | None = None
    m2c: float | None = None

    def __post_init__(self):
        if not 0.0 < self.m1 < self.m2 < 1.0:
            raise ArithmeticError(f"moduli out of order: m1={self.m1!r}, m2={self.m2!r}")
        if self.m1c is None:
            object.__setattr__(self, "m1c", 1.0 - self.m1)
        if self.m2c is None:
            object.__setattr__(self, "m2c", 1.0 - self.m2)


def moduli_from_at(a: float, t: float) -> ModuliPair:
    """Moduli of the diagonal a = b periods.

    m1 = (a^2 - 1)/(t^2 - 1) and m2 = (t^2/a^2) m1, for 1 < a < t.
    """
    if not 1.0 < a < t:
        raise EllipticDomainError(f"moduli need 1 < a < t, got a={a!r}, t={t!r}")
    t2m1 = (t - 1.0) * (t + 1.0)
    m1 = (a - 1.0) * (a + 1.0) / t2m1
    m2 = (t / a) ** 2 * m1
    m1c = (t - a) * (t + a) / t2m1
    m2c = (t - a) * (t + a) / (a * a * t2m1)
    return ModuliPair(m1, m2, m1c, m2c)
