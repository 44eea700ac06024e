"""Exact truncated power series with multivariate polynomial coefficients.

Everything here is exact: coefficients are polynomials in a fixed tuple of
indeterminates (e.g. vertex weights ``g1, g2, ...``, a crossing weight ``q``,
a color-count symbol ``N``) with integer or rational values.  No floating
point is used anywhere.  Values are immutable after construction, so they can
be shared freely between callers.

A :class:`TruncatedSeries` is a dense array of :class:`PolyCoeff` in a single
counting variable, truncated (inclusively) at a fixed order.  Combining two
series with different variables, truncation orders or indeterminate tuples is
an error rather than an implicit re-truncation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]


class SeriesError(ValueError):
    """Structural mismatch (variable, order or indeterminates differ)."""


class NonInvertibleError(ValueError):
    """Constant term is not an invertible rational constant."""


def _norm(value) -> Scalar:
    """Normalize a coefficient value: Fractions with denominator 1 become int."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value)
        return value
    if isinstance(value, int):
        return value
    raise TypeError(f"exact scalar expected, got {type(value).__name__}")


class PolyCoeff:
    """A polynomial in a fixed tuple of indeterminates, exact coefficients.

    ``terms`` maps exponent vectors (tuples of nonnegative ints, one entry per
    indeterminate) to nonzero int/Fraction values.  Zero coefficients are
    never stored.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: tuple[str, ...], terms: Mapping[tuple[int, ...], Scalar]):
        clean = {}
        arity = len(ring)
        for expo, val in terms.items():
            if len(expo) != arity:
                raise SeriesError(f"exponent vector {expo} has wrong arity for ring {ring}")
            val = _norm(val)
            if val != 0:
                clean[tuple(expo)] = val
        object.__setattr__(self, "ring", tuple(ring))
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("PolyCoeff is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(ring: tuple[str, ...]) -> "PolyCoeff":
        return PolyCoeff(ring, {})

    @staticmethod
    def const(ring: tuple[str, ...], value: Scalar) -> "PolyCoeff":
        return PolyCoeff(ring, {(0,) * len(ring): value})

    @staticmethod
    def monomial(ring: tuple[str, ...], name: str, power: int = 1, coeff: Scalar = 1) -> "PolyCoeff":
        expo = [0] * len(ring)
        expo[ring.index(name)] = power
        return PolyCoeff(ring, {tuple(expo): coeff})

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        zero = (0,) * len(self.ring)
        return all(e == zero for e in self.terms)

    def constant_value(self) -> Scalar:
        return self.terms.get((0,) * len(self.ring), 0)

    # -- arithmetic ----------------------------------------------------

    def _check(self, other: "PolyCoeff"):
        if self.ring != other.ring:
            raise SeriesError(f"indeterminate mismatch: {self.ring} vs {other.ring}")

    def __add__(self, other) -> "PolyCoeff":
        if isinstance(other, (int, Fraction)):
            other = PolyCoeff.const(self.ring, other)
        self._check(other)
        out = dict(self.terms)
        for e, v in other.terms.items():
            w = out.get(e, 0) + v
            if w == 0:
                out.pop(e, None)
            else:
                out[e] = w
        return PolyCoeff(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "PolyCoeff":
        return PolyCoeff(self.ring, {e: -v for e, v in self.terms.items()})

    def __sub__(self, other) -> "PolyCoeff":
        if isinstance(other, (int, Fraction)):
            other = PolyCoeff.const(self.ring, other)
        return self + (-other)

    def __rsub__(self, other) -> "PolyCoeff":
        return (-self) + other

    def __mul__(self, other) -> "PolyCoeff":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        out: dict[tuple[int, ...], Scalar] = {}
        for e1, v1 in self.terms.items():
            for e2, v2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                w = out.get(e, 0) + v1 * v2
                if w == 0:
                    out.pop(e, None)
                else:
                    out[e] = w
        return PolyCoeff(self.ring, out)

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "PolyCoeff":
        if c == 0:
            return PolyCoeff.zero(self.ring)
        return PolyCoeff(self.ring, {e: v * c for e, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return isinstance(other, PolyCoeff) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def substitute(self, values: Mapping[str, Scalar]) -> "PolyCoeff":
        """Evaluate some indeterminates at exact values, keeping the others."""
        keep = tuple(n for n in self.ring if n not in values)
        out: dict[tuple[int, ...], Scalar] = {}
        for e, v in self.terms.items():
            factor: Scalar = 1
            new_expo = []
            for name, power in zip(self.ring, e):
                if name in values:
                    factor *= values[name] ** power
                else:
                    new_expo.append(power)
            key = tuple(new_expo)
            w = out.get(key, 0) + v * factor
            if w == 0:
                out.pop(key, None)
            else:
                out[key] = w
        return PolyCoeff(keep, out)

    # -- rendering -----------------------------------------------------

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Scalar]]:
        return sorted(self.terms.items())

    def text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for expo, val in self.sorted_terms():
            frac = Fraction(val)
            mono = [f"{n}^{p}" if p > 1 else n for n, p in zip(self.ring, expo) if p]
            coef = str(frac) if (frac != 1 or not mono) else ""
            if frac == -1 and mono:
                coef = "-"
            body = "*".join(mono)
            if coef and body:
                piece = f"{coef}*{body}" if coef != "-" else f"-{body}"
            else:
                piece = coef or body
            parts.append(piece)
        out = parts[0]
        for piece in parts[1:]:
            out += piece if piece.startswith("-") else "+" + piece
        return out

    def __repr__(self):
        return f"PolyCoeff({self.text()!r})"


class TruncatedSeries:
    """Formal power series in one variable, truncated at a fixed order."""

    __slots__ = ("var", "order", "ring", "coeffs")

    def __init__(self, var: str, order: int, ring: tuple[str, ...], coeffs: Iterable[PolyCoeff]):
        coeffs = tuple(coeffs)
        if order < 0:
            raise SeriesError("truncation order must be >= 0")
        if len(coeffs) != order + 1:
            raise SeriesError(f"need {order + 1} coefficients, got {len(coeffs)}")
        for c in coeffs:
            if c.ring != tuple(ring):
                raise SeriesError("coefficient ring mismatch")
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "ring", tuple(ring))
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *a):
        raise AttributeError("TruncatedSeries is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(var: str, order: int, ring: tuple[str, ...] = ()) -> "TruncatedSeries":
        z = PolyCoeff.zero(ring)
        return TruncatedSeries(var, order, ring, [z] * (order + 1))

    @staticmethod
    def const(var: str, order: int, value, ring: tuple[str, ...] = ()) -> "TruncatedSeries":
        if isinstance(value, PolyCoeff):
            ring = value.ring
            c0 = value
        else:
            c0 = PolyCoeff.const(ring, value)
        z = PolyCoeff.zero(ring)
        return TruncatedSeries(var, order, ring, [c0] + [z] * order)

    @staticmethod
    def one(var: str, order: int, ring: tuple[str, ...] = ()) -> "TruncatedSeries":
        return TruncatedSeries.const(var, order, 1, ring)

    @staticmethod
    def variable(var: str, order: int, ring: tuple[str, ...] = ()) -> "TruncatedSeries":
        """The series equal to the counting variable itself."""
        if order < 1:
            return TruncatedSeries.zero(var, order, ring)
        z = PolyCoeff.zero(ring)
        cs = [z] * (order + 1)
        cs[1] = PolyCoeff.const(ring, 1)
        return TruncatedSeries(var, order, ring, cs)

    @staticmethod
    def from_scalars(var: str, values: Iterable[Scalar], ring: tuple[str, ...] = ()) -> "TruncatedSeries":
        vals = list(values)
        return TruncatedSeries(var, len(vals) - 1, ring, [PolyCoeff.const(ring, v) for v in vals])

    # -- access ---------------------------------------------------------

    def coefficient(self, n: int) -> PolyCoeff:
        if not 0 <= n <= self.order:
            raise IndexError(f"exponent {n} outside truncation order {self.order}")
        return self.coeffs[n]

    def __getitem__(self, n: int) -> PolyCoeff:
        return self.coefficient(n)

    def _check(self, other: "TruncatedSeries"):
        if not isinstance(other, TruncatedSeries):
            raise SeriesError("expected a TruncatedSeries")
        if self.var != other.var or self.order != other.order or self.ring != other.ring:
            raise SeriesError(
                f"series mismatch: ({self.var},{self.order},{self.ring}) vs "
                f"({other.var},{other.order},{other.ring})"
            )

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction, PolyCoeff)):
            other = TruncatedSeries.const(self.var, self.order, other, self.ring)
        self._check(other)
        return TruncatedSeries(self.var, self.order, self.ring,
                               [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.var, self.order, self.ring, [-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, PolyCoeff)):
            other = TruncatedSeries.const(self.var, self.order, other, self.ring)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(self.var, self.order, self.ring,
                                   [c.scale(other) for c in self.coeffs])
        if isinstance(other, PolyCoeff):
            return TruncatedSeries(self.var, self.order, self.ring,
                                   [c * other for c in self.coeffs])
        self._check(other)
        out = []
        for n in range(self.order + 1):
            acc = PolyCoeff.zero(self.ring)
            for j in range(n + 1):
                a = self.coeffs[j]
                b = other.coeffs[n - j]
                if a.terms and b.terms:
                    acc = acc + a * b
            out.append(acc)
        return TruncatedSeries(self.var, self.order, self.ring, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (isinstance(other, TruncatedSeries) and self.var == other.var
                and self.order == other.order and self.ring == other.ring
                and self.coeffs == other.coeffs)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def invert(self) -> "TruncatedSeries":
        """Multiplicative inverse up to the truncation order.

        Requires the constant coefficient to be a nonzero rational constant;
        the result then satisfies ``a * a.invert() == 1`` exactly.
        """
        c0 = self.coeffs[0]
        if not c0.is_constant() or c0.constant_value() == 0:
            raise NonInvertibleError(f"constant term {c0.text()} is not an invertible constant")
        inv0 = Fraction(1, 1) / Fraction(c0.constant_value())
        out = [PolyCoeff.const(self.ring, inv0)]
        for n in range(1, self.order + 1):
            acc = PolyCoeff.zero(self.ring)
            for j in range(1, n + 1):
                if self.coeffs[j].terms:
                    acc = acc + self.coeffs[j] * out[n - j]
            out.append(acc.scale(-inv0))
        return TruncatedSeries(self.var, self.order, self.ring, out)

    def theta(self, c: Scalar = 1) -> "TruncatedSeries":
        """The scaled Euler operator c*x*d/dx: coefficient of x^n gets multiplied by c*n."""
        return TruncatedSeries(self.var, self.order, self.ring,
                               [co.scale(c * n) for n, co in enumerate(self.coeffs)])

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by var^k (k >= 0); top coefficients fall off the truncation."""
        if k < 0:
            raise SeriesError("shift exponent must be >= 0")
        z = PolyCoeff.zero(self.ring)
        cs = [z] * min(k, self.order + 1) + list(self.coeffs[: max(self.order + 1 - k, 0)])
        return TruncatedSeries(self.var, self.order, self.ring, cs)

    def substitute(self, values: Mapping[str, Scalar]) -> "TruncatedSeries":
        keep = tuple(n for n in self.ring if n not in values)
        return TruncatedSeries(self.var, self.order, keep,
                               [c.substitute(values) for c in self.coeffs])

    # -- canonical output -------------------------------------------------

    def text(self) -> str:
        parts = []
        for n, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            if n == 0:
                parts.append(c.text())
                continue
            xs = self.var if n == 1 else f"{self.var}^{n}"
            if c == 1:
                parts.append(xs)
            elif len(c.terms) == 1 and not c.text().startswith("-"):
                parts.append(f"{c.text()}*{xs}")
            elif len(c.terms) == 1:
                parts.append(f"{c.text()}*{xs}")
            else:
                parts.append(f"({c.text()})*{xs}")
        if not parts:
            return "0"
        out = parts[0]
        for piece in parts[1:]:
            out += piece if piece.startswith("-") else "+" + piece
        return out

    def to_json_dict(self) -> dict:
        """Canonical JSON form: sparse list of (exponent, sorted monomials)."""
        coeffs = []
        for n, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            monos = []
            for expo, val in c.sorted_terms():
                frac = Fraction(val)
                monos.append([list(expo), str(frac.numerator), str(frac.denominator)])
            coeffs.append([n, monos])
        return {
            "var": self.var,
            "order": self.order,
            "indeterminates": list(self.ring),
            "coefficients": coeffs,
        }

    def __repr__(self):
        return f"TruncatedSeries({self.text()!r})"


def conv_coeff(factors: list[TruncatedSeries], n: int) -> PolyCoeff:
    """Coefficient of x^n in the product of the given series (not truncation-bound)."""
    ring = factors[0].ring
    if n < 0:
        return PolyCoeff.zero(ring)
    cur = [PolyCoeff.const(ring, 1)] + [PolyCoeff.zero(ring)] * n
    for f in factors:
        nxt = [PolyCoeff.zero(ring) for _ in range(n + 1)]
        for a in range(n + 1):
            if not cur[a].terms:
                continue
            top = min(n - a, f.order)
            for b in range(top + 1):
                fb = f.coeffs[b]
                if fb.terms:
                    nxt[a + b] = nxt[a + b] + cur[a] * fb
        cur = nxt
    return cur[n]


def interpolate_in(name: str, points: list[int], values: list[PolyCoeff]) -> PolyCoeff:
    """Exact Lagrange interpolation: the unique polynomial in ``name`` (degree
    < len(points)) over the values' ring that passes through the given points.

    The values share a common ring; the result lives in ring + (name,).
    """
    if len(points) != len(values) or not points:
        raise ValueError("need matching, nonempty points and values")
    base = values[0].ring
    ring = base + (name,)
    result = PolyCoeff.zero(ring)
    for k, (xk, vk) in enumerate(zip(points, values)):
        # basis polynomial prod_{j != k} (name - x_j) as dense Fraction coefficients
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(points):
            if j == k:
                continue
            denom *= Fraction(xk - xj)
            new = [Fraction(0)] * (len(basis) + 1)
            for d, c in enumerate(basis):
                new[d + 1] += c
                new[d] -= c * xj
            basis = new
        for d, c in enumerate(basis):
            if c == 0:
                continue
            lifted = PolyCoeff(ring, {e + (d,): v for e, v in vk.terms.items()})
            result = result + lifted.scale(c / denom)
    return result
