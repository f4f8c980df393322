import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from odelta.gauss import (
    LABELS,
    all_matchings,
    antipodality_test,
    best_antipodal_matching,
    branch_values,
    branch_values_at,
    pairs_by_label,
    stereographic,
)
from odelta.periods import FamilyParams, WeierstrassData


def test_matching_count():
    assert len(all_matchings(8)) == 105
    assert len(set(all_matchings(8))) == 105


def test_points_match_direct_gauss_map():
    params = FamilyParams(1.5, 2.5, 4.0, 0.8)
    bv = branch_values(params)
    data = WeierstrassData(params)
    z_of = {"+1": 1.0, "-1": -1.0, "+t": 4.0, "-t": -4.0}
    for (sign, label), pt in zip(LABELS, bv.points):
        g = sign * complex(data.gauss(z_of[label] + 0j))
        assert np.allclose(pt, stereographic(g), atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.floats(1.01, 6), st.floats(1.01, 6), st.floats(1.01, 30), st.floats(0.2, 5))
def test_unit_norm_and_coordinate_planes(a, b, ratio, rho):
    bv = branch_values_at(a, b, max(a, b) * ratio, rho)
    assert np.allclose(np.linalg.norm(bv.points, axis=1), 1.0, atol=1e-12)
    assert np.all(bv.points[:4, 1] == 0)
    assert np.all(bv.points[4:, 0] == 0)


def test_diagonal_rectangle_formulas():
    a, t = 2.0, 5.0
    pts = branch_values(FamilyParams(a, a, t, 1.0)).points
    r = math.sqrt(a * a - 1) / a
    s = math.sqrt(t * t - a * a) / t
    expected = [
        (-r, 0, -1 / a), (r, 0, -1 / a), (-r, 0, 1 / a), (r, 0, 1 / a),
        (0, s, -a / t), (0, -s, -a / t), (0, s, a / t), (0, -s, a / t),
    ]
    assert np.allclose(pts, expected, atol=1e-15)


def test_d_surface_coordinates():
    r2 = math.sqrt(2)
    pts = branch_values(FamilyParams(r2, r2, 2.0, 1.0)).points
    mags = np.abs(pts)
    ok = np.isclose(mags, 0.0, atol=1e-15) | np.isclose(mags, 1 / r2, atol=1e-15)
    assert ok.all()


@settings(max_examples=40, deadline=None)
@given(st.floats(1.001, 8), st.floats(1.01, 40))
def test_diagonal_points_are_antipodal(a, ratio):
    bv = branch_values_at(a, a, a * ratio, 1.0)
    assert bv.antipodal and bv.pair_residual < 1e-12
    pairs = {frozenset((LABELS[i][1], LABELS[j][1])) for i, j in bv.pairing}
    assert pairs == {frozenset(("+1", "-1")), frozenset(("+t", "-t"))}


@settings(max_examples=40, deadline=None)
@given(st.floats(1.01, 5), st.floats(0.05, 3), st.floats(1.01, 40), st.floats(0.2, 5))
def test_off_diagonal_points_never_antipodal(a, gap, ratio, rho):
    b = a + gap
    bv = branch_values_at(a, b, b * ratio, rho)
    assert not bv.antipodal and bv.pair_residual > 1e-6


def test_meeks_classification():
    cls, wit = antipodality_test(FamilyParams(2.0, 2.0, 5.0, 1.0))
    assert cls == "meeks"
    assert wit.discrepancy == 0 and wit.pair_residual < 1e-12


def test_non_meeks_witness():
    cls, wit = antipodality_test(FamilyParams(1.5, 2.5, 4.0, 1.0))
    assert cls == "non_meeks"
    assert wit.rho4_from_unit == pytest.approx(1.25 / 5.25, rel=1e-15)
    assert wit.rho4_from_t == pytest.approx(13.75 / 9.75, rel=1e-15)
    assert wit.discrepancy == pytest.approx(13.75 / 9.75 - 1.25 / 5.25, rel=1e-14)


def test_diagonal_needs_unit_rho():
    cls, _ = antipodality_test(FamilyParams(2.0, 2.0, 5.0, 3.0))
    assert cls == "non_meeks"


def test_unset_rho_defaults_to_one():
    assert branch_values(FamilyParams(2.0, 2.0, 5.0)).rho_used == 1.0


@settings(max_examples=30, deadline=None)
@given(st.floats(1.01, 5), st.floats(1.01, 5), st.floats(1.01, 30), st.floats(0.2, 5))
def test_swap_commutes_with_relabelling(a, b, ratio, rho):
    t = max(a, b) * ratio
    p = branch_values_at(a, b, t, rho).points
    s = branch_values_at(b, a, t, 1.0 / rho).points
    # the swap maps +1 <-> -1 and +t <-> -t and reflects z
    perm = [2, 3, 0, 1, 6, 7, 4, 5]
    assert np.allclose(s, p[perm] * np.array([1, 1, -1]), atol=1e-13)


def test_domain_errors():
    with pytest.raises(ValueError):
        branch_values_at(2.0, 2.0, 1.5)
    with pytest.raises(ValueError):
        branch_values_at(2.0, 2.0, 5.0, 0.0)


def test_pairs_by_label():
    bv = branch_values(FamilyParams(2.0, 2.0, 5.0, 1.0))
    assert len(pairs_by_label(bv)) == 4


def test_best_matching_rejects_odd_sets():
    with pytest.raises(ValueError):
        best_antipodal_matching(np.zeros((3, 3)))
