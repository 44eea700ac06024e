"""ODE and continued-fraction solutions against the recursion module."""

import pytest

from genusmaps.analytic import (
    RiccatiSpec,
    solve_riccati,
    solve_ak,
    solve_bk,
    contfrac_convergent,
    solve_m6_ode,
    r1_ode_residual_6regular,
    ak_tower_check,
)
from genusmaps.pseries import TruncatedSeries
from genusmaps.recursion import solve_eulerian, solve_bipartite, solve_threeregular


def scalars(series):
    return [c.constant_value() for c in series.coeffs]


def test_riccati_p4_headline():
    m = solve_riccati(RiccatiSpec(4), order=3)
    assert scalars(m) == [0, 3, 24, 297]


def test_riccati_p3_headline():
    m = solve_riccati(RiccatiSpec(3), order=3)
    assert scalars(m) == [0, 2, 12, 112]


def test_riccati_first_coefficient_is_p_minus_1():
    for p in (2, 3, 4, 5, 6, 9):
        assert scalars(solve_riccati(RiccatiSpec(p), order=1)) == [0, p - 1]


def test_riccati_p4_matches_four_regular_reindexed():
    # M_4(g) = r_1(sqrt(g)) - 1: [g^n] M_4 = [t^{2n}] (r_1 - 1)
    sol = solve_eulerian({2: 1}, order=16, i_max=1)
    m = solve_riccati(RiccatiSpec(4), order=8)
    for n in range(9):
        assert m.coeffs[n] == sol.r(1).coeffs[2 * n] - (1 if n == 0 else 0)


def test_riccati_p3_matches_bipartite():
    sol = solve_bipartite(3, order=8, i_max=1)
    m = solve_riccati(RiccatiSpec(3), order=8)
    for n in range(9):
        assert m.coeffs[n] == sol.r(1).coeffs[n] - (1 if n == 0 else 0)


def test_riccati_p6_matches_threeregular():
    # M_3 is a series in g^2; with x = g^2 it solves the p = 6 equation.
    sol = solve_threeregular(order=16, i_max=2)
    m3 = sol.m3()
    m = solve_riccati(RiccatiSpec(6), order=8)
    for n in range(9):
        assert m.coeffs[n] == m3.coeffs[2 * n]
        if 2 * n + 1 <= 16:
            assert m3.coeffs[2 * n + 1].is_zero()
    assert scalars(m)[1] == 5  # [g^2] M_3 = 5


def test_riccati_p2_positive_integers():
    # edge-colored trivalent maps: count sanity only
    m = solve_riccati(RiccatiSpec(2), order=8)
    vals = scalars(m)[1:]
    assert all(isinstance(v, int) and v > 0 for v in vals)


def test_contfrac_depth1():
    c = contfrac_convergent(4, depth=1, order=1)
    assert scalars(c) == [1, 3]


def test_contfrac_depth2_hand_expansion():
    # 1/(1 - 3x(1 + 5x + ...)) = 1 + 3x + 24x^2 + O(x^3)
    c = contfrac_convergent(4, depth=2, order=2)
    assert scalars(c) == [1, 3, 24]
    assert scalars(contfrac_convergent(4, depth=5, order=2)) == [1, 3, 24]


def test_contfrac_matches_riccati_all_p():
    one = None
    for p in (2, 3, 4, 6):
        order = 8
        m = solve_riccati(RiccatiSpec(p), order)
        conv = contfrac_convergent(p, depth=order, order=order)
        one = TruncatedSeries.one("x", order)
        assert conv == one + m


def test_contfrac_each_level_adds_an_order():
    p, order = 4, 8
    m = solve_riccati(RiccatiSpec(p), order)
    exact = TruncatedSeries.one("x", order) + m
    for depth in range(1, order + 1):
        conv = contfrac_convergent(p, depth, order)
        agrees_to = 0
        for n in range(order + 1):
            if conv.coeffs[n] != exact.coeffs[n]:
                break
            agrees_to = n
        assert agrees_to >= depth


def test_m6_headline_and_cross_module():
    m6 = solve_m6_ode(order=3)
    assert scalars(m6)[1] == 15
    assert scalars(solve_m6_ode(order=0)) == [0]
    sol = solve_eulerian({3: 1}, order=9, i_max=1)
    for n in range(4):
        assert m6.coeffs[n] == sol.r(1).coeffs[3 * n] - (1 if n == 0 else 0)


def test_m6_t_form_guards_transcription():
    sol = solve_eulerian({3: 1}, order=12, i_max=1)
    assert r1_ode_residual_6regular(sol.r(1)).is_zero()


def test_ak_first_is_riccati():
    for p in (3, 4, 6):
        assert solve_ak(p, 1, 6) == solve_riccati(RiccatiSpec(p), 6)


def test_ak_first_coefficient():
    for p in (3, 4, 6):
        for k in (1, 2, 5):
            assert scalars(solve_ak(p, k, 1)) == [0, k * p - 1]
            assert scalars(solve_bk(p, k, 1)) == [0, k * p + 1]


def test_ak_tower_substitutions():
    for p in (3, 4, 6):
        report = ak_tower_check(p, k_max=3, order=6)
        assert report.ok, report


def test_input_validation():
    with pytest.raises(ValueError):
        RiccatiSpec(1)
    with pytest.raises(ValueError):
        contfrac_convergent(4, depth=0, order=3)
    with pytest.raises(ValueError):
        solve_ak(4, 1, 0)
