"""Riccati-type ODEs and continued fractions for bounded-degree map series.

The counting series M(x) of rooted 4-regular maps (x = g, p = 4), rooted
3-regular bipartite maps (x = g, p = 3) and rooted 3-regular maps (x = g^2,
p = 6) all satisfy the one-parameter equation

    M = (p-1) x + p x (M + x M') + x M^2,

whose unique power-series solution also unrolls into the continued fraction
1 + M = 1/(1 - (p-1)x/(1 - (p+1)x/(1 - (2p-1)x/(1 - (2p+1)x/(1 - ...))))).
The tower of auxiliary series A_k (with A_1 = M) and B_k satisfies

    A_k = (kp-1) x + p x ((2k-1) A_k + x A_k') + x ((k-1)p + 1) A_k^2,
    B_k = (kp+1) x + p x (2k B_k + x B_k') + x (kp-1) B_k^2,
    1 + A_k = 1/(1 - (kp-1) x (1 + B_k)),
    1 + B_k = 1/(1 - (kp+1) x (1 + A_{k+1})).

Six-regular maps need a second-order equation for M_6 instead; it is solved
here by plain coefficient extraction as well.  All computations are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .pseries import TruncatedSeries


@dataclass(frozen=True)
class RiccatiSpec:
    """The one-parameter family above; p in {3, 4, 6} for the map families,
    p = 2 for edge-3-colored trivalent maps."""

    p: int
    var: str = "x"

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("need p >= 2")


def solve_ak(p: int, k: int, order: int, var: str = "x") -> TruncatedSeries:
    """Unique power-series solution of the A_k equation with A_k(0) = 0."""
    if order < 1:
        raise ValueError("need order >= 1")
    a = [Fraction(0)] * (order + 1)
    lam = (k - 1) * p + 1
    for n in range(1, order + 1):
        val = Fraction(p * (2 * k - 2 + n)) * a[n - 1]
        if n == 1:
            val += k * p - 1
        conv = sum(a[j] * a[n - 1 - j] for j in range(1, n - 1))
        val += lam * conv
        a[n] = val
    return TruncatedSeries.from_scalars(var, a)


def solve_bk(p: int, k: int, order: int, var: str = "x") -> TruncatedSeries:
    """Unique power-series solution of the B_k equation with B_k(0) = 0."""
    if order < 1:
        raise ValueError("need order >= 1")
    b = [Fraction(0)] * (order + 1)
    lam = k * p - 1
    for n in range(1, order + 1):
        val = Fraction(p * (2 * k - 1 + n)) * b[n - 1]
        if n == 1:
            val += k * p + 1
        conv = sum(b[j] * b[n - 1 - j] for j in range(1, n - 1))
        val += lam * conv
        b[n] = val
    return TruncatedSeries.from_scalars(var, b)


def solve_riccati(spec: RiccatiSpec, order: int) -> TruncatedSeries:
    """The map-counting solution M(x) = A_1(x)."""
    return solve_ak(spec.p, 1, order, spec.var)


def contfrac_convergent(p: int, depth: int, order: int, var: str = "x") -> TruncatedSeries:
    """Finite truncation of the continued fraction for 1 + M(x).

    Level j (from the outside) has numerator (kp-1)x for j odd and (kp+1)x
    for j even, where k = ceil(j/2).  Each extra level contributes at least
    one more exact order, so depth >= order reproduces 1 + solve_riccati
    up to the truncation order.
    """
    if depth < 1:
        raise ValueError("need depth >= 1")
    if p < 2:
        raise ValueError("need p >= 2")
    tail = TruncatedSeries.one(var, order)
    for j in range(depth, 0, -1):
        k = (j + 1) // 2
        num = k * p - 1 if j % 2 == 1 else k * p + 1
        tail = (TruncatedSeries.one(var, order) - tail.shift(1) * num).invert()
    return tail


def solve_m6_ode(order: int, var: str = "g") -> TruncatedSeries:
    """The 6-regular map series from its second-order non-linear ODE.

    M = 15g + 23gM + 9gM^2 + gM^3 + 90g^2 M' + 18g^2 M M' + 36g^3 M'',
    the unique solution with M(0) = 0; order-n extraction only references
    lower coefficients, so the series is determined term by term.
    """
    if order < 0:
        raise ValueError("need order >= 0")
    m = [Fraction(0)] * (order + 1)
    for n in range(1, order + 1):
        val = Fraction(0)
        if n == 1:
            val += 15
        val += 23 * m[n - 1]
        val += 9 * sum(m[j] * m[n - 1 - j] for j in range(1, n - 1))
        val += sum(m[j] * m[l] * m[n - 1 - j - l]
                   for j in range(1, n - 1) for l in range(1, n - 1 - j))
        val += 90 * (n - 1) * m[n - 1]
        # [g^{n-2}] M M' with [g^a] M' = (a+1) m_{a+1}
        val += 18 * sum(m[j] * (n - 1 - j) * m[n - 1 - j] for j in range(1, n - 1))
        val += 36 * (n - 1) * (n - 2) * m[n - 1]
        m[n] = val
    return TruncatedSeries.from_scalars(var, m)


def r1_ode_residual_6regular(r1: TruncatedSeries) -> TruncatedSeries:
    """Residual of the t-form ODE on a candidate 6-regular r_1(t).

    r_1 = 1 + 8t^3 r_1 + 6t^3 r_1^2 + t^3 r_1^3 + 16t^4 r_1' + 6t^4 r_1 r_1'
          + 4t^5 r_1''; a zero residual guards the g-form transcription of
    the M_6 equation.  Every derivative enters as t^k-times-derivative, so
    the residual is exact at the full truncation order.
    """
    order = r1.order
    one = TruncatedSeries.one(r1.var, order, r1.ring)
    d1 = r1.theta(1)                      # t r_1'
    d2 = d1.theta(1) - d1                 # t^2 r_1''
    rhs = (one + (r1 * 8 + r1 * r1 * 6 + r1 * r1 * r1).shift(3)
           + d1.shift(3) * 16 + (r1 * d1).shift(3) * 6 + d2.shift(3) * 4)
    return r1 - rhs


@dataclass(frozen=True)
class TowerCheck:
    k: int
    a_substitution_ok: bool
    b_substitution_ok: bool


@dataclass(frozen=True)
class TowerReport:
    p: int
    order: int
    checks: tuple[TowerCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.a_substitution_ok and c.b_substitution_ok for c in self.checks)


def ak_tower_check(p: int, k_max: int, order: int, var: str = "x") -> TowerReport:
    """Verify the substitution identities linking A_k, B_k and A_{k+1}.

    Checked in multiplied-through form:
    (1 + A_k)(1 - (kp-1)x(1 + B_k)) = 1 and
    (1 + B_k)(1 - (kp+1)x(1 + A_{k+1})) = 1, coefficientwise.
    """
    one = TruncatedSeries.one(var, order)
    checks = []
    for k in range(1, k_max + 1):
        ak = solve_ak(p, k, order, var)
        bk = solve_bk(p, k, order, var)
        ak1 = solve_ak(p, k + 1, order, var)
        lhs_a = (one + ak) * (one - ((one + bk).shift(1) * (k * p - 1)))
        lhs_b = (one + bk) * (one - ((one + ak1).shift(1) * (k * p + 1)))
        checks.append(TowerCheck(k, lhs_a == one, lhs_b == one))
    return TowerReport(p, order, tuple(checks))
