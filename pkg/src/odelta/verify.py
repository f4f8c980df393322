"""Self-verification suites behind ``odelta verify``.

Each suite compares the library against an independent computation and
reports the worst residual it saw.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad as scipy_quad

from . import gauss, periods, specfun, surface
from .solver import solve_odelta


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    worst: float
    limit: float
    detail: str = ""

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.passed))
        object.__setattr__(self, "worst", float(self.worst))


def suite_specfun() -> SuiteResult:
    worst = 0.0
    for m in np.linspace(0.01, 0.99, 50):
        k_ref = scipy_quad(lambda x: (1 - m * math.sin(x) ** 2) ** -0.5, 0, math.pi / 2,
                           epsabs=0, epsrel=2e-14)[0]
        e_ref = scipy_quad(lambda x: (1 - m * math.sin(x) ** 2) ** 0.5, 0, math.pi / 2,
                           epsabs=0, epsrel=2e-14)[0]
        worst = max(worst, abs(specfun.ellip_k(m) / k_ref - 1), abs(specfun.ellip_e(m) / e_ref - 1))
        leg = (specfun.ellip_k_bar(m) * specfun.ellip_e(m) + specfun.ellip_e_bar(m) * specfun.ellip_k(m)
               - specfun.ellip_k_bar(m) * specfun.ellip_k(m) - 0.5 * math.pi)
        worst = max(worst, abs(leg))
    return SuiteResult("specfun", worst < 1e-12, worst, 1e-12, "AGM vs quadrature, Legendre")


def suite_periods() -> SuiteResult:
    worst = 0.0
    for a in (1.2, 1.7, 2.5):
        for t in (a * 1.3, a * 3.0, a * 20.0):
            q = periods.edge_periods_at(a, a, t)
            c = periods.closed_form_periods_diagonal(a, t)
            for k in (0, 1, 3, 4):
                worst = max(worst, abs(q.I[k] / c.I[k] - 1), abs(q.J[k] / c.J[k] - 1))
            worst = max(worst, abs(q.q))
    return SuiteResult("periods", worst < 1e-9, worst, 1e-9, "closed forms vs quadrature")


def derivative_errors(a, t, eps=1e-5):
    """Relative errors of the derivative combinations against central FD."""
    d = periods.diagonal_derivatives(a, t)

    def combos(b):
        p = periods.edge_periods_at(a, b, t)
        return np.array([
            p.I[1] + p.I[3], p.J[0] + p.J[4], p.J[1] + p.J[3], p.I[0], p.I[1],
            p.J[0], p.J[1], p.J[3], p.J[4],
        ])

    fd = (combos(a + eps) - combos(a - eps)) / (2 * eps)
    an = np.array([d.dI24, d.dJ15, d.dJ24, d.dI1, d.dI2, d.dJ1, d.dJ2, d.dJ4, d.dJ5])
    return np.abs(fd - an) / np.maximum(np.abs(an), 1e-300)


def suite_derivatives() -> SuiteResult:
    worst = 0.0
    for a, t in ((2.0, 5.0), (1.5, 2.4), (3.0, 30.0)):
        worst = max(worst, float(derivative_errors(a, t).max()))
    return SuiteResult("derivatives", worst < 1e-6, worst, 1e-6, "b-derivatives vs central FD")


def suite_gauss() -> SuiteResult:
    rng = np.random.default_rng(7)
    worst_diag, worst_off = 0.0, math.inf
    for _ in range(10):
        a = 1.0 + 4.0 * rng.random() + 1e-3
        t = a * (1.05 + 5 * rng.random())
        worst_diag = max(worst_diag, gauss.branch_values_at(a, a, t, 1.0).pair_residual)
        b = a + 0.05 + 2 * rng.random()
        t = b * (1.05 + 5 * rng.random())
        worst_off = min(worst_off, gauss.branch_values_at(a, b, t, 1.0).pair_residual)
    ok = worst_diag < 1e-12 and worst_off > 1e-6
    return SuiteResult("gauss", ok, worst_diag, 1e-12,
                       f"smallest off-diagonal matching residual {worst_off:.3g}")


def suite_surface() -> SuiteResult:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        rep = solve_odelta(1.5, 2.5)
    worst_res, worst_weld, detail = 0.0, 0.0, []
    ok = True
    for params in (rep.params, periods.FamilyParams(2.0, 2.0, 4.0, 1.0)):
        mesh = surface.fundamental_hexagon(params, 8)
        res, _ = surface.boundary_residuals(mesh)
        _, box = surface.extend_to_lattice_cell(mesh)
        worst_res = max(worst_res, max(res.values()))
        worst_weld = max(worst_weld, box.weld_residual)
        ok &= box.euler_characteristic == -4 and box.closed
        detail.append(f"chi={box.euler_characteristic}")
    ok &= worst_res < 1e-6 and worst_weld < 1e-8
    detail.append(f"boundary residual / diameter {worst_res:.3g}")
    return SuiteResult("surface", ok, worst_weld, 1e-8, ", ".join(detail))


SUITES = {
    "specfun": suite_specfun,
    "periods": suite_periods,
    "derivatives": suite_derivatives,
    "gauss": suite_gauss,
    "surface": suite_surface,
}


def run(names) -> list[SuiteResult]:
    if "all" in names:
        names = list(SUITES)
    return [SUITES[n]() for n in names]
