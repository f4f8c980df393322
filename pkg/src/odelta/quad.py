"""Tanh-sinh quadrature for integrands with algebraic endpoint singularities.

The period integrands of the hexagon maps behave like ``(z - p)**(-1/2)`` or
``(z - p)**(+1/2)`` at the ends of each edge.  The double-exponential
substitution ``x = tanh(pi/2 * sinh(tau))`` crushes those singularities, so a
single rule covers every edge.

Near an endpoint the abscissa ``z`` itself carries no useful information about
the distance to the endpoint (``p + 1e-40 == p`` in floating point).  The
integrator therefore hands the integrand the distances ``dl = z - p`` and
``dr = q - z`` computed directly from the node tables, and well-written
integrands build their singular factors from those.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

MAX_LEVEL = 12
MIN_LEVEL = 4
TAU_MAX = 4.5

PERIOD_TOL = 1e-12
MESH_TOL = 1e-9


class QuadratureError(ArithmeticError):
    """Raised when the level budget is exhausted before reaching ``tol``."""

    def __init__(self, message: str, estimate, error: float):
        super().__init__(f"{message} (estimate={estimate!r}, error bound={error:.3g})")
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class SingularIntegrand:
    """An integrand on ``(p, q)`` with power-law behaviour at the endpoints.

    ``evaluate(z, dl, dr)`` receives numpy arrays of abscissae and the exact
    distances to both endpoints.  The exponents document the endpoint
    behaviour (``-0.5``, ``0`` or ``+0.5``); they are checked but the rule does
    not depend on them.
    """

    evaluate: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]
    p: float
    q: float
    left_exponent: float = 0.0
    right_exponent: float = 0.0

    def __post_init__(self):
        if not self.q > self.p:
            raise ValueError(f"empty interval ({self.p}, {self.q})")
        for e in (self.left_exponent, self.right_exponent):
            if e <= -1:
                raise ValueError(f"endpoint exponent {e} is not integrable")

    @classmethod
    def from_function(cls, f, p, q, left_exponent=0.0, right_exponent=0.0):
        """Wrap a plain ``f(z)`` that ignores the endpoint distances."""
        return cls(lambda z, dl, dr: f(z), p, q, left_exponent, right_exponent)


@lru_cache(maxsize=None)
def _level_nodes(level: int):
    """Nodes added at ``level``: (sign, complement, weight) arrays.

    ``complement`` is ``1 - |x|`` computed without cancellation.
    """
    h = 2.0 ** -level
    if level == 0:
        k = np.arange(-int(TAU_MAX), int(TAU_MAX) + 1, dtype=float)
    else:
        n = int(TAU_MAX / h)
        k = np.arange(-n, n + 1)
        k = k[k % 2 != 0].astype(float)
    tau = k * h
    u = 0.5 * math.pi * np.sinh(tau)
    cu = np.cosh(u)
    comp = np.exp(-np.abs(u)) / cu
    weight = 0.5 * math.pi * np.cosh(tau) / (cu * cu)
    sign = np.sign(tau)
    for arr in (sign, comp, weight):
        arr.setflags(write=False)
    return sign, comp, weight


def _nodes_on_interval(level, p, q):
    sign, comp, weight = _level_nodes(level)
    width = q - p
    half = 0.5 * width
    near = half * comp
    far = width - near
    left = sign < 0
    dl = np.where(left, near, far)
    dr = np.where(left, far, near)
    # the tau = 0 node sits at the midpoint
    mid = sign == 0
    dl = np.where(mid, half, dl)
    dr = np.where(mid, half, dr)
    z = np.where(left | mid, p + dl, q - dr)
    return z, dl, dr, half * weight


def _scale(value) -> float:
    return float(np.max(np.abs(value)))


def integrate_singular(f: SingularIntegrand, tol: float = PERIOD_TOL, atol: float = 0.0):
    """Integrate ``f`` over ``(f.p, f.q)`` with tanh-sinh refinement.

    Convergence is declared when two successive levels differ by at most
    ``max(atol, tol * |estimate|)``.  ``evaluate`` may return an array whose
    trailing axis runs over the nodes, in which case the integral of every
    component is returned and the test uses the largest component.

    Raises:
        ValueError: ``tol`` not positive, or the integrand produced NaN.
        QuadratureError: ``MAX_LEVEL`` reached without convergence.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    total = None
    previous = None
    err = math.inf
    for level in range(MAX_LEVEL + 1):
        z, dl, dr, w = _nodes_on_interval(level, f.p, f.q)
        vals = np.asarray(f.evaluate(z, dl, dr))
        if np.isnan(vals).any():
            raise ValueError(f"integrand returned NaN on ({f.p}, {f.q})")
        # weights can underflow against huge integrand values at the ends
        contrib = np.sum(np.where(w == 0, 0, vals * w), axis=-1)
        total = contrib if total is None else total + contrib
        estimate = total * 2.0 ** -level
        if previous is not None:
            err = _scale(estimate - previous)
            if level >= MIN_LEVEL and err <= max(atol, tol * _scale(estimate)):
                return estimate
        previous = estimate
    raise QuadratureError(
        f"tanh-sinh did not converge on ({f.p}, {f.q}) within {MAX_LEVEL} levels",
        previous,
        err,
    )


def integrate_improper_tail(f, p: float, side: str = "upper", tol: float = PERIOD_TOL,
                            atol: float = 0.0):
    """Integrate ``f`` over ``(p, inf)`` (``side="upper"``) or ``(-inf, p)``.

    The map ``z = p + s/(1-s)`` (mirrored for the lower side) turns the tail
    into an integral over ``(0, 1)`` that the tanh-sinh rule handles directly.
    ``f(z, d)`` receives ``d = |z - p|`` computed without cancellation.

    Raises:
        ValueError: when ``f`` does not decay faster than ``1/|z|``.
    """
    if side not in ("upper", "lower"):
        raise ValueError(f"side must be 'upper' or 'lower', got {side!r}")
    sgn = 1.0 if side == "upper" else -1.0

    big = np.array([1e6, 1e9]) * (1.0 + abs(p))
    probe = np.abs(np.asarray(f(p + sgn * big, big), dtype=complex)) * big
    if not np.all(np.isfinite(probe)) or probe[1] > 0.5 * probe[0] + 1e-300:
        raise ValueError("integrand does not decay fast enough at infinity")

    def g(s, ds_left, ds_right):
        d = ds_left / ds_right
        return f(p + sgn * d, d) / (ds_right * ds_right)

    return integrate_singular(SingularIntegrand(g, 0.0, 1.0), tol=tol, atol=atol)
