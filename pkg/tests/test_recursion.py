"""Recursive systems: Dyck engine, published series values, identities."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from genusmaps.pseries import PolyCoeff, TruncatedSeries
from genusmaps.recursion import (
    DyckPath,
    enumerate_dyck,
    solve_eulerian,
    solve_bipartite,
    solve_threeregular,
    check_identity,
    face_colored_T,
    WeightedSequence,
    phi_bijection,
    phi_inverse,
    sequence_weight,
    marked_weight_up,
    marked_weight_down,
)


def brute_dyck(k, i):
    """Oracle: filter all step words of length 2k-1 for the path conditions."""
    out = []
    for word in itertools.product((1, -1), repeat=2 * k - 1):
        h = i
        ok = True
        for s in word:
            h += s
            if h < 0:
                ok = False
                break
        if ok and h == i - 1:
            out.append(word)
    return sorted(out)


def scalar_coeffs(series):
    return [c.constant_value() for c in series.coeffs]


# ---------------------------------------------------------------------------
# Dyck paths
# ---------------------------------------------------------------------------

def test_dyck_k1():
    paths = enumerate_dyck(1, 1)
    assert len(paths) == 1
    assert paths[0].steps == (-1,)
    assert paths[0].heights() == (1, 0)


def test_dyck_k2_i1():
    paths = enumerate_dyck(2, 1)
    assert [p.heights() for p in paths] == [(1, 2, 1, 0), (1, 0, 1, 0)]
    # DDU excluded by nonnegativity
    assert sorted(p.steps for p in paths) == brute_dyck(2, 1)


def test_dyck_k2_i2():
    paths = enumerate_dyck(2, 2)
    assert len(paths) == 3
    # descent products realize r_i (r_{i+1} + r_i + r_{i-1}) of the 4-regular system
    assert sorted(p.descent_heights() for p in paths) == [(2, 1), (2, 2), (3, 2)]


def test_dyck_exhaustive_small():
    for k in range(1, 5):
        for i in range(1, 5):
            assert sorted(p.steps for p in enumerate_dyck(k, i)) == brute_dyck(k, i)


def test_dyck_sequence_encoding():
    # Descent-height sequences are exactly the all-positive sequences in
    # P_k with u_1 >= i and u_k <= i (values bounded by i+k-1).
    for k in range(1, 5):
        for i in range(1, 5):
            descents = sorted(p.descent_heights() for p in enumerate_dyck(k, i))
            seqs = []
            for u in itertools.product(range(1, i + k), repeat=k):
                if u[0] < i or u[-1] > i:
                    continue
                if all(b >= a - 1 for a, b in zip(u, u[1:])):
                    seqs.append(u)
            assert descents == sorted(seqs)


# ---------------------------------------------------------------------------
# Eulerian system
# ---------------------------------------------------------------------------

def test_four_regular_headline_values():
    sol = solve_eulerian({2: 1}, order=8, i_max=2)
    assert scalar_coeffs(sol.r(1)) == [1, 0, 3, 0, 24, 0, 297, 0, 4896]


def test_four_regular_closed_pattern():
    sol = solve_eulerian({2: 1}, order=8, i_max=5)
    for i in range(1, 6):
        expect = [i, 0, 3 * i**2, 0, 6 * i * (3 * i**2 + 1), 0,
                  27 * i**2 * (5 * i**2 + 6), 0,
                  18 * i * (63 * i**4 + 174 * i**2 + 35)]
        assert scalar_coeffs(sol.r(i)) == expect


def test_g1_only_geometric_series():
    # With only degree-2 vertices the system closes: r_1 = 1/(1 - t g_1),
    # i.e. one rooted cycle map per size.
    sol = solve_eulerian({1: 1}, order=6, i_max=1)
    assert scalar_coeffs(sol.r(1)) == [1] * 7
    sol2 = solve_eulerian({1: 1}, order=6, i_max=3)
    for i in (1, 2, 3):
        assert scalar_coeffs(sol2.r(i)) == [i] * 7


def test_q_analog_specializations():
    q = solve_eulerian({2: 1}, order=6, i_max=3, leaf_weight="q_analog")
    planar = solve_eulerian({2: 1}, order=6, i_max=3, leaf_weight="planar")
    integer = solve_eulerian({2: 1}, order=6, i_max=3)
    for i in (1, 2, 3):
        assert q.r(i).substitute({"q": 0}) == planar.r(i)
        assert q.r(i).substitute({"q": 1}) == integer.r(i)


def test_planar_system_recursion_holds():
    # R_i = 1 + t^2 R_i (R_{i-1} + R_i + R_{i+1}) coefficientwise.
    sol = solve_eulerian({2: 1}, order=8, i_max=4, leaf_weight="planar")
    one = TruncatedSeries.one("t", 8)
    for i in (1, 2, 3):
        lhs = sol.r(i)
        rhs = one + (sol.r(i) * (sol.r(i - 1) + sol.r(i) + sol.r(i + 1))).shift(2)
        assert lhs == rhs
    # headline planar quartic numbers
    assert scalar_coeffs(sol.r(1)) == [1, 0, 2, 0, 9, 0, 54, 0, 378]


def test_symbolic_weights_match_specializations():
    sym = solve_eulerian({1: "g1", 2: "g2"}, order=4, i_max=2)
    only4 = solve_eulerian({2: 1}, order=4, i_max=2)
    for i in (1, 2):
        assert sym.r(i).substitute({"g1": 0, "g2": 1}) == only4.r(i)


# ---------------------------------------------------------------------------
# Bipartite system
# ---------------------------------------------------------------------------

def test_bipartite_m3_headline_values():
    sol = solve_bipartite(3, order=4, i_max=2)
    assert scalar_coeffs(sol.r(1)) == [1, 2, 12, 112, 1392]


def test_bipartite_m3_closed_pattern():
    sol = solve_bipartite(3, order=4, i_max=5)
    for i in range(1, 6):
        expect = [i, 2 * i**2, 4 * i * (2 * i**2 + 1), 8 * i**2 * (5 * i**2 + 9),
                  16 * i * (14 * i**4 + 58 * i**2 + 15)]
        assert scalar_coeffs(sol.r(i)) == expect


def test_bipartite_order_zero_and_r1q1():
    sol = solve_bipartite(3, order=0, i_max=4)
    for i in range(1, 5):
        assert scalar_coeffs(sol.r(i)) == [i]
        assert scalar_coeffs(sol.q(i)) == [0]
    sol = solve_bipartite(3, order=5, i_max=2)
    assert sol.r(1) == sol.q(1) + 1


def test_bipartite_m2_degenerate():
    with pytest.raises(ValueError):
        solve_bipartite(2, order=3, i_max=1)
    sol = solve_bipartite(2, order=5, i_max=1, allow_degenerate=True)
    # r_i = i/(1-g): the digon-chain family
    assert scalar_coeffs(sol.r(1)) == [1] * 6


# ---------------------------------------------------------------------------
# 3-regular system
# ---------------------------------------------------------------------------

def test_threeregular_order0():
    sol = solve_threeregular(order=0, i_max=3)
    for i in (1, 2, 3):
        assert scalar_coeffs(sol.r(i)) == [i]
    assert scalar_coeffs(sol.s(0)) == [0]
    assert scalar_coeffs(sol.m3()) == [0]


def test_threeregular_m3_leading_terms():
    sol = solve_threeregular(order=6, i_max=2)
    m3 = scalar_coeffs(sol.m3())
    assert m3[0] == m3[1] == 0
    assert m3[2] == 5          # five rooted 3-regular maps with two vertices
    assert m3[3] == 0          # odd orders vanish: M_3 is a series in g^2


# ---------------------------------------------------------------------------
# Identities
# ---------------------------------------------------------------------------

def test_identity_eulerian_multiplied_form():
    sol = solve_eulerian({1: "g1", 2: "g2", 3: "g3"}, order=8, i_max=6)
    report = check_identity(sol, "log_derivative")
    assert report.ok and len(report.checks) == 5
    report2 = check_identity(sol, "log_derivative_divided", indices=range(1, 2))
    assert report2.ok


def test_identity_vacuous_at_order_zero():
    sol = solve_eulerian({2: 1}, order=0, i_max=3)
    assert check_identity(sol, "log_derivative").ok


def test_identity_bipartite():
    for m in (3, 4):
        sol = solve_bipartite(m, order=6, i_max=6)
        assert check_identity(sol, "log_derivative").ok
        assert check_identity(sol, "q_derivative").ok


def test_identity_threeregular():
    sol = solve_threeregular(order=8, i_max=6)
    assert check_identity(sol, "log_derivative_r").ok
    assert check_identity(sol, "derivative_s").ok


def test_identity_range_errors():
    sol = solve_eulerian({2: 1}, order=4, i_max=1)
    with pytest.raises(IndexError):
        check_identity(sol, "log_derivative")
    sol2 = solve_eulerian({2: 1}, order=4, i_max=3)
    with pytest.raises(IndexError):
        check_identity(sol2, "log_derivative", indices=range(1, 4))


def test_appendix_series_identity_marked_four_valent_root():
    # The family of admissible marked maps whose root vertex was split off a
    # degree-4 vertex has series t^2 g_2 r_i (r_{i+1} - r_{i-1} - 2), which
    # must equal t^2 g_2 * 2t(d/dt) r_i.
    sol = solve_eulerian({1: "g1", 2: "g2", 3: "g3"}, order=8, i_max=5)
    g2 = PolyCoeff.monomial(sol.ring, "g2")
    for i in (1, 2, 3, 4):
        lhs = (sol.r(i) * (sol.r(i + 1) - sol.r(i - 1) - 2) * g2).shift(2)
        rhs = (sol.r(i).theta(2) * g2).shift(2)
        assert lhs == rhs


# ---------------------------------------------------------------------------
# Face-colored series
# ---------------------------------------------------------------------------

def test_face_colored_N1_is_r1_minus_1():
    sol = solve_eulerian({2: 1}, order=8, i_max=2)
    assert face_colored_T(sol, 1) == sol.r(1) - 1


def test_face_colored_one_vertex_sector_symbolic():
    sol = solve_eulerian({2: "g2"}, order=2, i_max=5)
    T = face_colored_T(sol, "symbolic")
    # three one-vertex 4-valent maps: two planar (F=3), one toral (F=1)
    expect = PolyCoeff(("g2", "N"), {(1, 3): 2, (1, 1): 1})
    assert T.coeffs[2] == expect


def test_face_colored_symbolic_matches_integer_evaluation():
    sol = solve_eulerian({2: 1}, order=4, i_max=7)
    T = face_colored_T(sol, "symbolic")
    for n in (1, 2, 3):
        assert T.substitute({"N": n}) == face_colored_T(sol, n)


def test_face_colored_bipartite():
    sol = solve_bipartite(3, order=6, i_max=9)
    T = face_colored_T(sol, "symbolic")
    assert T.coeffs[1] == PolyCoeff(("N",), {(3,): 1, (1,): 1})  # N(N^2+1)
    assert face_colored_T(sol, 1) == sol.r(1) - 1


def test_face_colored_bipartite_m2_digon():
    sol = solve_bipartite(2, order=1, i_max=4, allow_degenerate=True)
    T = face_colored_T(sol, "symbolic")
    assert T.coeffs[1] == PolyCoeff(("N",), {(2,): 1})  # the digon map: [g]T = N^2


def test_face_colored_needs_enough_indices():
    sol = solve_eulerian({2: 1}, order=4, i_max=2)
    with pytest.raises(IndexError):
        face_colored_T(sol, 5)


# ---------------------------------------------------------------------------
# Marked-sequence shift bijection
# ---------------------------------------------------------------------------

def test_phi_singleton():
    u = WeightedSequence((3,), 0)
    assert phi_bijection(u) == WeightedSequence((2,), 0)


def test_phi_whole_descending_run():
    u = WeightedSequence((5, 4, 3), 2)
    assert phi_bijection(u) == WeightedSequence((4, 3, 2), 0)


def test_phi_requires_mark():
    with pytest.raises(ValueError):
        phi_bijection(WeightedSequence((1, 2)))


def all_sequences(max_len=4, lo=0, hi=5):
    for n in range(1, max_len + 1):
        for vals in itertools.product(range(lo, hi + 1), repeat=n):
            if all(b >= a - 1 for a, b in zip(vals, vals[1:])):
                for m in range(n):
                    yield WeightedSequence(vals, m)


def test_phi_roundtrip_exhaustive():
    for u in all_sequences():
        v = phi_bijection(u)
        assert phi_inverse(v) == u
        w = phi_inverse(u)
        assert phi_bijection(w) == u


def test_phi_weight_identity_exhaustive():
    # w_up(Phi(u*)) = w_down(u*) with r-weights from the 4-regular solution.
    sol = solve_eulerian({2: 1}, order=4, i_max=7)
    for u in all_sequences():
        lhs = marked_weight_up(sol, phi_bijection(u))
        rhs = marked_weight_down(sol, u)
        assert lhs == rhs, u


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(min_value=-2, max_value=8), min_size=1, max_size=7), st.data())
def test_phi_roundtrip_random(raw, data):
    # repair the raw list into a valid sequence, then mark a random position
    vals = [raw[0]]
    for x in raw[1:]:
        vals.append(max(x, vals[-1] - 1))
    m = data.draw(st.integers(min_value=0, max_value=len(vals) - 1))
    u = WeightedSequence(tuple(vals), m)
    assert phi_inverse(phi_bijection(u)) == u


def test_sequence_weight_kills_nonpositive_entries():
    sol = solve_eulerian({2: 1}, order=4, i_max=3)
    assert sequence_weight(sol, (2, 0, 1)).is_zero()
    assert not sequence_weight(sol, (2, 1, 1)).is_zero()
