"""Recursive systems for map counting series of unfixed genus.

Three families are solved order by order, exactly:

* even-degree (Eulerian) maps: ``r_i = z_i + sum_k t^k g_k sum_{paths} prod r_h``
  where the inner sum runs over Dyck paths of length 2k-1 from height i to
  height i-1 and each descending step h -> h-1 contributes a factor r_h;
* m-regular bipartite maps: the coupled system
  ``r_i = i + sum_{a=0}^{m-2} q_{i-a}``, ``q_i = g * prod_{a=0}^{m-2} r_{i+a}``;
* 3-regular maps: ``r_i = i + g r_i (s_i + s_{i-1})``,
  ``s_i = g (r_{i+1} + r_i + s_i^2)``.

The leaf weight z_h of the first family selects the variant: z_h = h counts
all genera, z_h = [h]_q refines by crossing number, z_h = 1 is the planar
system.  The module also verifies the differential identities relating
consecutive r_i's, computes the face-colored series T by two independent
routes, and implements the marked-sequence shift bijection used in the
verification proof of the Eulerian identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Optional, Union

from .pseries import PolyCoeff, TruncatedSeries, SeriesError, interpolate_in

Scalar = Union[int, Fraction]


# ---------------------------------------------------------------------------
# Dyck paths
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DyckPath:
    """A walk on the nonnegative integers with steps +1/-1."""

    steps: tuple[int, ...]
    start_height: int

    def __post_init__(self):
        if self.start_height < 0:
            raise ValueError("start height must be nonnegative")
        h = self.start_height
        for s in self.steps:
            if s not in (1, -1):
                raise ValueError("steps must be +1 or -1")
            h += s
            if h < 0:
                raise ValueError("path leaves the nonnegative integers")

    @property
    def end_height(self) -> int:
        return self.start_height + sum(self.steps)

    def heights(self) -> tuple[int, ...]:
        """All visited heights, including the start."""
        out = [self.start_height]
        for s in self.steps:
            out.append(out[-1] + s)
        return tuple(out)

    def descent_heights(self) -> tuple[int, ...]:
        """For each down-step h -> h-1, in order, the starting height h."""
        out = []
        h = self.start_height
        for s in self.steps:
            if s == -1:
                out.append(h)
            h += s
        return tuple(out)


def enumerate_dyck(k: int, i: int) -> list[DyckPath]:
    """All paths of length 2k-1 from height i to i-1 staying >= 0, each once.

    These index the terms of the half-degree-k contribution in the recursive
    systems; the path's descent heights give the r-factors of the term.
    """
    if k < 1 or i < 1:
        raise ValueError("need k >= 1 and i >= 1")
    out = []

    def go(prefix, h, ups, downs):
        if ups == 0 and downs == 0:
            out.append(DyckPath(tuple(prefix), i))
            return
        if ups > 0:
            prefix.append(1)
            go(prefix, h + 1, ups - 1, downs)
            prefix.pop()
        # never descend below 0, and keep enough downs to finish at i-1
        if downs > 0 and h > 0:
            prefix.append(-1)
            go(prefix, h - 1, ups, downs - 1)
            prefix.pop()

    go([], i, k - 1, k)
    return out


@lru_cache(maxsize=None)
def _descent_tuples(k: int, i: int) -> tuple[tuple[int, ...], ...]:
    return tuple(p.descent_heights() for p in enumerate_dyck(k, i))


# ---------------------------------------------------------------------------
# Solutions
# ---------------------------------------------------------------------------

class InvariantViolation(AssertionError):
    """An internal cross-check that must never fail did fail."""


@dataclass(frozen=True)
class SystemSolution:
    """Series family produced by one of the solvers.

    Indices 1..i_max (and s_0..s_{i_max} for the 3-regular family) are exact
    to the truncation order; the conventional values r_i = 0 and q_i = 0 for
    i <= 0 are represented structurally by the accessors.
    """

    family: str                      # 'eulerian' | 'eulerian_q' | 'planar' | 'bipartite' | 'threeregular'
    var: str
    order: int
    i_max: int
    ring: tuple[str, ...]
    _r: tuple[TruncatedSeries, ...]
    _q: Optional[tuple[TruncatedSeries, ...]] = None
    _s: Optional[tuple[TruncatedSeries, ...]] = None
    m: Optional[int] = None
    weights: Optional[tuple] = None

    def _zero(self) -> TruncatedSeries:
        return TruncatedSeries.zero(self.var, self.order, self.ring)

    def r(self, i: int) -> TruncatedSeries:
        if i <= 0:
            return self._zero()
        if i > self.i_max:
            raise IndexError(f"r_{i} not materialized (i_max={self.i_max})")
        return self._r[i - 1]

    def q(self, i: int) -> TruncatedSeries:
        if self._q is None:
            raise ValueError(f"family {self.family} has no q series")
        if i <= 0:
            return self._zero()
        if i > self.i_max:
            raise IndexError(f"q_{i} not materialized (i_max={self.i_max})")
        return self._q[i - 1]

    def s(self, i: int) -> TruncatedSeries:
        if self._s is None:
            raise ValueError(f"family {self.family} has no s series")
        if i < 0 or i > self.i_max:
            raise IndexError(f"s_{i} not materialized (i_max={self.i_max})")
        return self._s[i]

    def m3(self) -> TruncatedSeries:
        """Counting series of rooted 3-regular maps: r_1 + s_0^2 - 1."""
        if self.family != "threeregular":
            raise ValueError("m3() only applies to the threeregular family")
        return self.r(1) + self.s(0) * self.s(0) - 1


# ---------------------------------------------------------------------------
# Shared coefficient-level helpers (lists of PolyCoeff indexed by order)
# ---------------------------------------------------------------------------

def _prod_at(lists, n, ring) -> PolyCoeff:
    """Coefficient of order n in the product of coefficient lists."""
    cur = [PolyCoeff.const(ring, 1)] + [PolyCoeff.zero(ring)] * n
    for lst in lists:
        nxt = [PolyCoeff.zero(ring) for _ in range(n + 1)]
        for a in range(n + 1):
            ca = cur[a]
            if not ca.terms:
                continue
            for b in range(n + 1 - a):
                if b < len(lst) and lst[b].terms:
                    nxt[a + b] = nxt[a + b] + ca * lst[b]
        cur = nxt
    return cur[n]


def _wrap(var, order, ring, lists, count) -> tuple[TruncatedSeries, ...]:
    return tuple(TruncatedSeries(var, order, ring, lists[i][: order + 1]) for i in range(1, count + 1))


def _weight_polys(weights: Mapping[int, Union[Scalar, str]], ring) -> dict[int, PolyCoeff]:
    out = {}
    for k, w in sorted(weights.items()):
        if k < 1:
            raise ValueError("vertex half-degrees must be >= 1")
        if isinstance(w, str):
            out[k] = PolyCoeff.monomial(ring, w)
        else:
            out[k] = PolyCoeff.const(ring, w)
    return out


# ---------------------------------------------------------------------------
# Solvers
# ---------------------------------------------------------------------------

def solve_eulerian(weights: Mapping[int, Union[Scalar, str]], order: int, i_max: int,
                   leaf_weight: str = "integer",
                   extra_indets: tuple[str, ...] = (),
                   var: str = "t") -> SystemSolution:
    """Solve the even-degree system to the given order for indices 1..i_max.

    ``weights`` maps half-degree k to the weight of a degree-2k vertex; a
    string value declares a named indeterminate.  ``leaf_weight`` selects the
    constant term z_i of r_i:

    * ``"integer"``  -- z_i = i (all genera),
    * ``"q_analog"`` -- z_i = 1 + q + ... + q^{i-1} (crossing refinement),
    * ``"planar"``   -- z_i = 1 (planar system).
    """
    if order < 0 or i_max < 1:
        raise ValueError("need order >= 0 and i_max >= 1")
    if leaf_weight not in ("integer", "q_analog", "planar"):
        raise ValueError(f"unknown leaf weight {leaf_weight!r}")
    sym = tuple(w for _, w in sorted(weights.items()) if isinstance(w, str))
    ring = sym + (("q",) if leaf_weight == "q_analog" else ()) + tuple(extra_indets)
    gpoly = _weight_polys(weights, ring)

    def z(i: int) -> PolyCoeff:
        if leaf_weight == "integer":
            return PolyCoeff.const(ring, i)
        if leaf_weight == "planar":
            return PolyCoeff.const(ring, 1)
        # q-analog [i]_q = 1 + q + ... + q^{i-1}
        qpos = ring.index("q")
        terms = {}
        for j in range(i):
            e = [0] * len(ring)
            e[qpos] = j
            terms[tuple(e)] = 1
        return PolyCoeff(ring, terms)

    i_top = i_max + order
    zero = PolyCoeff.zero(ring)
    r = {i: [z(i)] + [zero] * order for i in range(1, i_top + 1)}
    for n in range(1, order + 1):
        for i in range(1, min(i_top, i_top + 1 - n) + 1):
            acc = zero
            for k, gk in gpoly.items():
                if k > n:
                    continue
                s = zero
                for desc in _descent_tuples(k, i):
                    s = s + _prod_at([r[h] for h in desc], n - k, ring)
                acc = acc + gk * s
            r[i][n] = acc

    family = {"integer": "eulerian", "q_analog": "eulerian_q", "planar": "planar"}[leaf_weight]
    return SystemSolution(family=family, var=var, order=order, i_max=i_max, ring=ring,
                          _r=_wrap(var, order, ring, r, i_max),
                          weights=tuple(sorted(weights.items())))


def solve_bipartite(m: int, order: int, i_max: int,
                    extra_indets: tuple[str, ...] = (),
                    var: str = "g",
                    allow_degenerate: bool = False) -> SystemSolution:
    """Solve the m-regular bipartite system (r_i, q_i) to the given order.

    m >= 3 is the real family; m = 2 is a degenerate digon-chain case kept
    only as an oracle sanity case and must be requested explicitly.
    """
    if m < 3 and not (m == 2 and allow_degenerate):
        raise ValueError("need m >= 3 (m=2 only with allow_degenerate=True)")
    if order < 0 or i_max < 1:
        raise ValueError("need order >= 0 and i_max >= 1")
    ring = tuple(extra_indets)
    zero = PolyCoeff.zero(ring)
    reach = m - 2
    i_top = i_max + order * max(reach, 1)
    r = {i: [PolyCoeff.const(ring, i)] + [zero] * order for i in range(1, i_top + 1)}
    q = {i: [zero] * (order + 1) for i in range(1, i_top + 1)}
    for n in range(1, order + 1):
        bound = i_top - n * reach
        for i in range(1, bound + 1):
            # q first: [g^n] q_i = [g^{n-1}] prod_{a=0}^{m-2} r_{i+a}
            q[i][n] = _prod_at([r[i + a] for a in range(m - 1)], n - 1, ring)
        for i in range(1, bound + 1):
            acc = zero
            for a in range(m - 1):
                if i - a >= 1:
                    acc = acc + q[i - a][n]
            r[i][n] = acc
    return SystemSolution(family="bipartite", var=var, order=order, i_max=i_max, ring=ring,
                          _r=_wrap(var, order, ring, r, i_max),
                          _q=_wrap(var, order, ring, q, i_max),
                          m=m)


def solve_threeregular(order: int, i_max: int, var: str = "g") -> SystemSolution:
    """Solve the 3-regular system (r_i, s_i) to the given order."""
    if order < 0 or i_max < 1:
        raise ValueError("need order >= 0 and i_max >= 1")
    ring: tuple[str, ...] = ()
    zero = PolyCoeff.zero(ring)
    i_top = i_max + order + 1
    r = {i: [PolyCoeff.const(ring, i)] + [zero] * order for i in range(0, i_top + 1)}
    r[0] = [zero] * (order + 1)
    s = {i: [zero] * (order + 1) for i in range(0, i_top + 1)}
    for n in range(1, order + 1):
        bound = i_top - n
        for i in range(0, bound + 1):
            # [g^n] s_i = [g^{n-1}] (r_{i+1} + r_i + s_i^2)
            acc = r[i + 1][n - 1] + r[i][n - 1]
            acc = acc + _prod_at([s[i], s[i]], n - 1, ring)
            s[i][n] = acc
            if i >= 1:
                # [g^n] r_i = [g^{n-1}] r_i (s_i + s_{i-1}); reads s at orders < n only
                tot = zero
                for a in range(n):
                    sa = s[i][a] + s[i - 1][a]
                    if sa.terms and r[i][n - 1 - a].terms:
                        tot = tot + r[i][n - 1 - a] * sa
                r[i][n] = tot
    return SystemSolution(family="threeregular", var=var, order=order, i_max=i_max, ring=ring,
                          _r=_wrap(var, order, ring, r, i_max),
                          _s=tuple(TruncatedSeries(var, order, ring, s[i][: order + 1])
                                   for i in range(0, i_max + 1)))


# ---------------------------------------------------------------------------
# Identity verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityCheck:
    identity: str
    index: int
    ok: bool
    first_mismatch: Optional[int]


@dataclass(frozen=True)
class IdentityReport:
    family: str
    identity: str
    checks: tuple[IdentityCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.ok]


def _compare(identity, i, lhs: TruncatedSeries, rhs: TruncatedSeries) -> IdentityCheck:
    first = None
    for n in range(lhs.order + 1):
        if lhs.coeffs[n] != rhs.coeffs[n]:
            first = n
            break
    return IdentityCheck(identity, i, first is None, first)


def check_identity(sol: SystemSolution, identity: str,
                   indices: Optional[range] = None) -> IdentityReport:
    """Verify a differential identity coefficient by coefficient.

    Both sides are evaluated independently on the solved series; identities
    are stated in multiplied-through form so everything stays in the
    polynomial ring.  Supported names:

    * eulerian family: ``log_derivative`` (2t r_i' = r_i (r_{i+1}-r_{i-1}-2)),
      ``log_derivative_divided`` (same, divided by r_i via series inversion);
    * bipartite family: ``log_derivative`` (m g r_i' = r_i (q_{i+1}-q_{i-m+1})),
      ``q_derivative`` (m g q_i' = g (pi_i - pi_{i-1}), pi_i = prod r_{i..i+m-1});
    * threeregular family: ``log_derivative_r``
      (3g r_i' = r_i ((r_{i+1}-r_{i-1}-2) + (s_i^2 - s_{i-1}^2))) and
      ``derivative_s`` (3g^2 s_i' = (r_{i+1}-r_i-1) - g s_i).
    """
    checks = []
    fam = sol.family

    def default(lo, hi):
        if indices is not None:
            if indices.start < lo or indices.stop - 1 > hi:
                raise IndexError(f"indices {indices} outside materialized range [{lo}..{hi}]")
            return indices
        if hi < lo:
            raise IndexError(f"i_max={sol.i_max} too small for identity {identity!r}")
        return range(lo, hi + 1)

    if fam in ("eulerian",) and identity == "log_derivative":
        for i in default(1, sol.i_max - 1):
            lhs = sol.r(i).theta(2)
            rhs = sol.r(i) * (sol.r(i + 1) - sol.r(i - 1) - 2)
            checks.append(_compare(identity, i, lhs, rhs))
    elif fam in ("eulerian",) and identity == "log_derivative_divided":
        for i in default(1, sol.i_max - 1):
            lhs = sol.r(i).theta(2) * sol.r(i).invert()
            rhs = sol.r(i + 1) - sol.r(i - 1) - 2
            checks.append(_compare(identity, i, lhs, rhs))
    elif fam == "bipartite" and identity == "log_derivative":
        for i in default(1, sol.i_max - 1):
            lhs = sol.r(i).theta(sol.m)
            rhs = sol.r(i) * (sol.q(i + 1) - sol.q(i - sol.m + 1))
            checks.append(_compare(identity, i, lhs, rhs))
    elif fam == "bipartite" and identity == "q_derivative":
        m = sol.m
        for i in default(1, sol.i_max - m + 1):
            lhs = sol.q(i).theta(m)
            pi_i = _product([sol.r(i + a) for a in range(m)])
            pi_prev = _product([sol.r(i - 1 + a) for a in range(m)])
            rhs = (pi_i - pi_prev).shift(1)
            checks.append(_compare(identity, i, lhs, rhs))
    elif fam == "threeregular" and identity == "log_derivative_r":
        for i in default(1, sol.i_max - 1):
            lhs = sol.r(i).theta(3)
            rhs = sol.r(i) * ((sol.r(i + 1) - sol.r(i - 1) - 2)
                              + (sol.s(i) * sol.s(i) - sol.s(i - 1) * sol.s(i - 1)))
            checks.append(_compare(identity, i, lhs, rhs))
    elif fam == "threeregular" and identity == "derivative_s":
        for i in default(0, sol.i_max - 1):
            lhs = sol.s(i).theta(3).shift(1)
            rhs = (sol.r(i + 1) - sol.r(i) - 1) - sol.s(i).shift(1)
            checks.append(_compare(identity, i, lhs, rhs))
    else:
        raise ValueError(f"unknown identity {identity!r} for family {fam!r}")
    return IdentityReport(fam, identity, tuple(checks))


def _product(series_list):
    out = series_list[0]
    for t in series_list[1:]:
        out = out * t
    return out


# ---------------------------------------------------------------------------
# Face-colored series
# ---------------------------------------------------------------------------

def face_colored_T(sol: SystemSolution, N) -> TruncatedSeries:
    """Counting series of face-colored rooted maps with color set {1..N}.

    Computed by two independent routes -- the log-derivative form and the
    telescoped sum form -- which are asserted equal before returning.  With
    ``N="symbolic"`` the result has an extra indeterminate ``N`` obtained by
    exact Lagrange interpolation over enough integer color counts.
    """
    if N == "symbolic":
        pts = list(range(1, symbolic_point_count(sol) + 1))
        if sol.i_max < pts[-1]:
            raise IndexError(f"symbolic N needs i_max >= {pts[-1]}")
        samples = [face_colored_T(sol, n) for n in pts]
        coeffs = []
        for e in range(sol.order + 1):
            coeffs.append(interpolate_in("N", pts, [smp.coeffs[e] for smp in samples]))
        return TruncatedSeries(sol.var, sol.order, sol.ring + ("N",), coeffs)

    if not isinstance(N, int) or N < 1:
        raise ValueError("N must be a positive integer or 'symbolic'")
    if N > sol.i_max:
        raise IndexError(f"N={N} needs i_max >= N (have {sol.i_max})")

    if sol.family == "eulerian":
        via_log = (sol.r(1) - 1) * N
        for i in range(1, N + 1):
            via_log = via_log + sol.r(i).theta(2) * sol.r(i).invert() * (N - i)

        def S(x):
            acc = TruncatedSeries.zero(sol.var, sol.order, sol.ring)
            for i in range(1, x + 1):
                acc = acc + (sol.r(i) - i)
            return acc

        via_sum = S(N) + S(N - 1)
    elif sol.family == "bipartite":
        via_log = (sol.r(1) - 1) * N
        for i in range(1, N + 1):
            via_log = via_log + sol.r(i).theta(sol.m) * sol.r(i).invert() * (N - i)

        def S(x):
            acc = TruncatedSeries.zero(sol.var, sol.order, sol.ring)
            for i in range(1, x + 1):
                acc = acc + sol.q(i)
            return acc

        via_sum = TruncatedSeries.zero(sol.var, sol.order, sol.ring)
        for j in range(sol.m):
            via_sum = via_sum + S(N - j)
    else:
        raise ValueError(f"face-colored series not defined for family {sol.family!r}")

    if via_log != via_sum:
        raise InvariantViolation(
            f"face-colored formulas disagree for N={N}: {via_log.text()} vs {via_sum.text()}")
    return via_sum


def symbolic_point_count(sol: SystemSolution) -> int:
    """Sample points needed for exact interpolation of T in N.

    The coefficient of the E-th order term is a polynomial in N of degree at
    most the maximal face count, which is E+1 for the Eulerian family and
    n(m-2)+2 at n black vertices for the bipartite one.
    """
    if sol.family == "eulerian":
        return sol.order + 2
    if sol.family == "bipartite":
        return sol.order * (sol.m - 2) + 3
    raise ValueError(f"face-colored series not defined for family {sol.family!r}")


# ---------------------------------------------------------------------------
# Marked sequences and the shift bijection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightedSequence:
    """An integer sequence with u_{j+1} >= u_j - 1, optionally marked."""

    values: tuple[int, ...]
    mark: Optional[int] = None  # 0-based position

    def __post_init__(self):
        for a, b in zip(self.values, self.values[1:]):
            if b < a - 1:
                raise ValueError("not a valid sequence: requires u_{j+1} >= u_j - 1")
        if self.mark is not None and not 0 <= self.mark < len(self.values):
            raise ValueError("mark out of range")


def phi_bijection(u: WeightedSequence) -> WeightedSequence:
    """Shift the longest descending run ending at the mark down by one.

    The run (u_{m-l}, ..., u_m) = (u_m + l, ..., u_m) is replaced by
    (u_m + l - 1, ..., u_m - 1) and the mark moves to its first element.
    """
    if u.mark is None:
        raise ValueError("phi_bijection needs a marked sequence")
    m = u.mark
    ell = 0
    while m - ell - 1 >= 0 and u.values[m - ell - 1] == u.values[m] + ell + 1:
        ell += 1
    vals = list(u.values)
    for j in range(m - ell, m + 1):
        vals[j] -= 1
    return WeightedSequence(tuple(vals), m - ell)


def phi_inverse(u: WeightedSequence) -> WeightedSequence:
    """Inverse shift: raise the longest descending run starting at the mark."""
    if u.mark is None:
        raise ValueError("phi_inverse needs a marked sequence")
    m = u.mark
    ell = 0
    while m + ell + 1 < len(u.values) and u.values[m + ell + 1] == u.values[m] - ell - 1:
        ell += 1
    vals = list(u.values)
    for j in range(m, m + ell + 1):
        vals[j] += 1
    return WeightedSequence(tuple(vals), m + ell)


def sequence_weight(sol: SystemSolution, values) -> TruncatedSeries:
    """w(u) = prod_j r_{u_j}, with r_i = 0 for i <= 0."""
    out = TruncatedSeries.one(sol.var, sol.order, sol.ring)
    for v in values:
        out = out * sol.r(v)
    return out


def marked_weight_up(sol: SystemSolution, u: WeightedSequence) -> TruncatedSeries:
    """w^up: the marked element u_m contributes r_{u_m+1} r_{u_m}."""
    if u.mark is None:
        raise ValueError("needs a marked sequence")
    return sequence_weight(sol, u.values) * sol.r(u.values[u.mark] + 1)


def marked_weight_down(sol: SystemSolution, u: WeightedSequence) -> TruncatedSeries:
    """w^down: the marked element u_m contributes r_{u_m} r_{u_m-1}."""
    if u.mark is None:
        raise ValueError("needs a marked sequence")
    return sequence_weight(sol, u.values) * sol.r(u.values[u.mark] - 1)
