"""Exact scalars, truncated power series and integer polynomials in sigma.

Every exact value in the package is a :class:`fractions.Fraction`, which is
always held in lowest terms with a positive denominator.  Floats are refused
at the boundary so nothing inexact leaks into the series algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

RationalScalar = Fraction


class SeriesError(ValueError):
    """Incompatible or malformed series operands."""


class SingularSeriesError(SeriesError):
    """The series has no multiplicative inverse (zero constant term)."""


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: ``0.1`` is not the rational 1/10.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(c in text for c in ".eE"):
            raise ValueError(f"not a rational literal: {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {value!r}") from exc
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def format_rational(q: Fraction) -> str:
    """``p/q`` text, with the denominator omitted when it is 1."""
    q = as_rational(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational_list(text: str) -> list[Fraction]:
    """Parse ``"1,1/2, 3"`` (commas and/or whitespace) into Fractions."""
    parts = [p for p in text.replace(",", " ").split() if p]
    if not parts:
        raise ValueError("empty sequence")
    return [as_rational(p) for p in parts]


def format_rational_list(values: Iterable[Fraction]) -> str:
    return ",".join(format_rational(v) for v in values)


class SeriesKind(Enum):
    GF = "gf"            # ordinary generating-function coefficients mu_n
    MOMENTS = "moments"  # exponential coefficients m_n = n! mu_n


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients c_0..c_N of a formal power series in x.

    Only the prefix is known; every operation returns a result no longer
    than its inputs justify.
    """

    coeffs: tuple[Fraction, ...]
    kind: SeriesKind = SeriesKind.GF

    def __post_init__(self):
        coeffs = tuple(as_rational(c) for c in self.coeffs)
        if not coeffs:
            raise SeriesError("a truncated series needs at least one coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def of(cls, *values, kind: SeriesKind = SeriesKind.GF) -> "TruncatedSeries":
        return cls(tuple(values), kind)

    @property
    def order(self) -> int:
        """Highest power of x whose coefficient is known."""
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, index):
        return self.coeffs[index]

    def truncate(self, order: int) -> "TruncatedSeries":
        if order < 0 or order > self.order:
            raise SeriesError(f"cannot truncate order-{self.order} series to order {order}")
        return TruncatedSeries(self.coeffs[: order + 1], self.kind)

    def shift_left(self) -> "TruncatedSeries":
        """Drop c_0: the series (f(x) - f(0)) / x."""
        if self.order < 1:
            raise SeriesError("series too short to shift")
        return TruncatedSeries(self.coeffs[1:], self.kind)

    def negate_variable(self) -> "TruncatedSeries":
        """f(-x)."""
        return TruncatedSeries(
            tuple(c if n % 2 == 0 else -c for n, c in enumerate(self.coeffs)), self.kind
        )

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def __str__(self):
        return format_rational_list(self.coeffs)


def gf_series(values: Sequence) -> TruncatedSeries:
    return TruncatedSeries(tuple(values), SeriesKind.GF)


def one_series(order: int) -> TruncatedSeries:
    return gf_series([1] + [0] * order)


def _check_kinds(a: TruncatedSeries, b: TruncatedSeries):
    if a.kind is not b.kind:
        raise SeriesError(f"series kinds differ: {a.kind.value} vs {b.kind.value}")


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    _check_kinds(a, b)
    n = min(len(a), len(b))
    return TruncatedSeries(tuple(a[i] + b[i] for i in range(n)), a.kind)


def series_sub(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    _check_kinds(a, b)
    n = min(len(a), len(b))
    return TruncatedSeries(tuple(a[i] - b[i] for i in range(n)), a.kind)


def series_scale(a: TruncatedSeries, c) -> TruncatedSeries:
    c = as_rational(c)
    return TruncatedSeries(tuple(c * v for v in a), a.kind)


def series_mul(a: TruncatedSeries, b: TruncatedSeries, order: int | None = None) -> TruncatedSeries:
    """Cauchy product, truncated to ``order`` (default: the shorter operand)."""
    _check_kinds(a, b)
    if a.kind is not SeriesKind.GF:
        raise SeriesError("Cauchy product is defined on GF coefficients only")
    top = min(a.order, b.order) if order is None else order
    if top > min(a.order, b.order):
        raise SeriesError("requested order exceeds the operands' known coefficients")
    out = []
    for n in range(top + 1):
        out.append(sum((a[k] * b[n - k] for k in range(n + 1)), Fraction(0)))
    return TruncatedSeries(tuple(out), a.kind)


def series_reciprocal(a: TruncatedSeries, order: int | None = None) -> TruncatedSeries:
    """1/a to ``order`` (default: a.order)."""
    top = a.order if order is None else order
    if top > a.order:
        raise SeriesError("requested order exceeds the operand's known coefficients")
    a0 = a[0]
    if a0 == 0:
        raise SingularSeriesError("constant term is zero; series is not invertible")
    inv0 = 1 / a0
    out = [inv0]
    for n in range(1, top + 1):
        acc = sum((a[k] * out[n - k] for k in range(1, n + 1)), Fraction(0))
        out.append(-acc * inv0)
    return TruncatedSeries(tuple(out), a.kind)


def series_div(a: TruncatedSeries, b: TruncatedSeries, order: int | None = None) -> TruncatedSeries:
    top = min(a.order, b.order) if order is None else order
    return series_mul(a, series_reciprocal(b, top), top)


@dataclass(frozen=True)
class SigmaPolynomial:
    """Integer polynomial in sigma; ``coeffs[k]`` multiplies sigma**k."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = [int(c) for c in self.coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, sigma) -> Fraction:
        return sigma_poly_eval(self, sigma)

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                power = "sigma" if k == 1 else f"sigma^{k}"
                body = power if mag == 1 else f"{mag}*{power}"
            terms.append(("-" if c < 0 else "+", body))
        first_sign, first_body = terms[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


def sigma_poly_eval(p: SigmaPolynomial, sigma) -> Fraction:
    sigma = as_rational(sigma)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * sigma + c
    return acc
