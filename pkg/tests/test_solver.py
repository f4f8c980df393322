import math
import warnings

import numpy as np
import pytest

from odelta.periods import dq_db_diagonal, edge_periods_at, q_value
from odelta.solver import (
    BracketError,
    RootNotFoundError,
    boundary_curve,
    boundary_residual,
    count_roots,
    solve_odelta,
    solve_tdelta,
    solve_tstar,
    tetragonal_residual,
    tstar_residual,
)
from odelta.specfun import ellip_e, ellip_k

A_STAR = 2.1796604316786983


@pytest.fixture(autouse=True)
def _quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        yield


def test_tstar_value():
    assert abs(solve_tstar() - A_STAR) < 1e-12


def test_tstar_residual_small():
    a = solve_tstar()
    m = a * a / (1 + a * a)
    assert abs(2 * ellip_e(m) - ellip_k(m)) < 1e-13


def test_tstar_unique_sign_change():
    ms = np.linspace(1e-4, 1 - 1e-6, 2000)
    vals = np.array([2 * ellip_e(m) - ellip_k(m) for m in ms])
    assert np.all(np.diff(vals) < 0)
    assert np.count_nonzero(np.diff(np.sign(vals))) == 1
    assert tstar_residual(1.0) > 0 > tstar_residual(10.0)


def test_odelta_root_and_independent_scan(odelta_point):
    rep = odelta_point
    a, b, t = rep.params.a, rep.params.b, rep.params.t
    assert rep.residual_q < 1e-10 and abs(q_value(a, b, t)) < 2e-10
    assert rep.residual_period < 1e-9
    lo, hi = rep.bracket
    assert b < lo <= t <= hi
    assert q_value(a, b, lo) > 0 > q_value(a, b, hi)
    ts = b + b * np.geomspace(1e-4, 1e3, 200)
    qs = np.array([q_value(a, b, x) for x in ts])
    change = np.nonzero(np.diff(np.sign(qs)))[0]
    assert len(change) == 1
    assert ts[change[0]] <= t <= ts[change[0] + 1]


def test_swapped_input_rejected():
    with pytest.raises(ValueError):
        solve_odelta(2.5, 1.5)
    with pytest.raises(ValueError):
        solve_odelta(2.0, 2.0)


def test_solution_invariant_under_canonical_swap(odelta_point):
    t = odelta_point.params.t
    assert abs(q_value(2.5, 1.5, t)) < 2e-10


def test_near_diagonal_solutions_approach_boundary_curve():
    tb = boundary_curve(1.5)
    gaps = [abs(solve_odelta(1.5 - d, 1.5 + d).params.t - tb) for d in (0.1, 0.01, 0.001)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-4


def test_bracket_failure_very_close_to_a_equals_one():
    # the root lies far beyond t = 1e8 b this close to a = 1
    with pytest.raises(BracketError) as info:
        solve_odelta(1.01, 1.02)
    assert all(q > 0 for _, q in info.value.samples)


def test_tdelta_at_bifurcation_point():
    rep = solve_tdelta(A_STAR)
    assert rep.params.a == pytest.approx(A_STAR, abs=1e-9)
    assert rep.params.t == pytest.approx(A_STAR ** 2, rel=1e-12)


def test_tdelta_root_confirmed_by_fine_scan():
    b = A_STAR + 0.5
    rep = solve_tdelta(b)
    a = rep.params.a
    assert 1 < a < A_STAR
    assert rep.residual_tetragonal < 1e-10
    assert rep.params.t == pytest.approx(a * b, rel=1e-15)
    grid = np.linspace(a - 0.02, a + 0.02, 40)
    vals = np.array([tetragonal_residual(x, b) for x in grid])
    change = np.nonzero(np.diff(np.sign(vals)))[0]
    assert len(change) == 1 and grid[change[0]] <= a <= grid[change[0] + 1]


def test_tdelta_solves_period_problem():
    rep = solve_tdelta(A_STAR + 0.3)
    p = rep.params
    assert abs(q_value(p.a, p.b, p.t)) < 1e-10
    assert rep.residual_period < 1e-9


def test_tdelta_monotone_towards_bifurcation():
    avals = [solve_tdelta(A_STAR + d).params.a for d in (0.3, 0.1, 0.03)]
    assert avals[0] < avals[1] < avals[2] < A_STAR


def test_tdelta_not_found_below_bifurcation():
    with pytest.raises(RootNotFoundError) as info:
        solve_tdelta(1.8)
    assert len(info.value.scan) > 10


def test_tdelta_domain():
    with pytest.raises(ValueError):
        solve_tdelta(1.0)


def test_boundary_curve_meets_tstar():
    assert boundary_curve(A_STAR) == pytest.approx(A_STAR ** 2, abs=1e-8)


def test_boundary_curve_is_q_tilde_zero():
    for a in (1.3, 1.5, 2.0, 4.0):
        t = boundary_curve(a)
        assert abs(boundary_residual(a, t)) < 1e-12
        assert abs(dq_db_diagonal(a, t)) < 1e-10


def test_boundary_curve_sign_scan():
    a = 1.5
    t = boundary_curve(a)
    ts = a + a * np.geomspace(1e-6, 1e4, 300)
    vals = np.array([boundary_residual(a, x) for x in ts])
    change = np.nonzero(np.diff(np.sign(vals)))[0]
    assert len(change) == 1 and ts[change[0]] <= t <= ts[change[0] + 1]


def test_boundary_curve_continuous():
    # t grows exponentially as a -> 1, so compare log t
    coarse = np.log([boundary_curve(a) for a in np.linspace(1.1, 5, 40)])
    fine = np.log([boundary_curve(a) for a in np.linspace(1.1, 5, 79)])
    assert np.allclose(fine[::2], coarse, rtol=1e-12)
    # jumps shrink with the step, so no branch switching
    assert np.abs(np.diff(fine)).max() < 0.75 * np.abs(np.diff(coarse)).max()


def test_boundary_curve_not_found():
    with pytest.raises(RootNotFoundError):
        boundary_curve(1.015)
    with pytest.raises(ValueError):
        boundary_curve(1.0)


def test_count_roots_single_sign_change():
    assert count_roots(1.5, 2.5, 400).count == 1
    rc = count_roots(1.1, 5.0, 400)
    assert rc.count == 1
    assert abs(q_value(1.1, 5.0, rc.roots[0])) < 1e-10


def test_count_roots_rejects_diagonal():
    with pytest.raises(ValueError):
        count_roots(2.0, 2.0)


def test_tetragonal_period_symmetry():
    rep = solve_tdelta(A_STAR + 0.3)
    p = rep.params
    e = edge_periods_at(p.a, p.b, p.t)
    c = math.sqrt(p.b / p.a)
    for k in (1, 2, 3):
        assert e.i(k) == pytest.approx(c * e.j(k + 3), rel=1e-9)
    assert rep.params.rho == pytest.approx((p.a / p.b) ** 0.25, rel=1e-9)


def test_tstar_against_high_precision_oracle():
    mpmath = pytest.importorskip("mpmath")
    with mpmath.workdps(40):
        def resid(a):
            m = a * a / (1 + a * a)
            return 2 * mpmath.ellipe(m) - mpmath.ellipk(m)

        ref = mpmath.findroot(resid, 2.18)
        assert abs(solve_tstar() - float(ref)) <= 2 * math.ulp(float(ref))
