"""Operators on probability distributions, acting on moment sequences.

A nonnegative random variable Z with mgf phi(x) = E[exp(xZ)] carries two
coefficient sequences: the moments m_n = E[Z^n] (exponential coefficients)
and mu_n = m_n / n! (ordinary coefficients, the "mixing moments" when the
density is an exponential mixture).  The operators below act on whichever
of the two makes the operator simplest.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .ratcore import (
    SeriesError,
    SeriesKind,
    TruncatedSeries,
    as_rational,
    format_rational_list,
    series_mul,
    series_reciprocal,
)


class MomentError(ValueError):
    """Operator precondition violated (e.g. nonpositive mean)."""


@dataclass(frozen=True)
class MomentSequence:
    """Moments m_0..m_N of a nonnegative random variable, m_0 = 1."""

    m: tuple[Fraction, ...]

    def __post_init__(self):
        m = tuple(as_rational(v) for v in self.m)
        if not m:
            raise MomentError("empty moment sequence")
        if m[0] != 1:
            raise MomentError(f"m_0 must be 1, got {m[0]}")
        object.__setattr__(self, "m", m)

    @classmethod
    def of(cls, *values) -> "MomentSequence":
        return cls(tuple(values))

    @property
    def order(self) -> int:
        return len(self.m) - 1

    @property
    def mean(self) -> Fraction:
        if self.order < 1:
            raise MomentError("sequence has no first moment")
        return self.m[1]

    def __len__(self):
        return len(self.m)

    def __iter__(self):
        return iter(self.m)

    def __getitem__(self, index):
        return self.m[index]

    def as_series(self) -> TruncatedSeries:
        return TruncatedSeries(self.m, SeriesKind.MOMENTS)

    def __str__(self):
        return format_rational_list(self.m)


def hankel_2x2_nonnegative(m: MomentSequence) -> bool:
    """m_0 m_2 - m_1^2 >= 0, i.e. the variance is nonnegative."""
    return m[0] * m[2] - m[1] ** 2 >= 0


def moments_to_gf(m: MomentSequence) -> TruncatedSeries:
    return TruncatedSeries(
        tuple(v / factorial(n) for n, v in enumerate(m)), SeriesKind.GF
    )


def gf_to_moments(s: TruncatedSeries) -> MomentSequence:
    if s.kind is not SeriesKind.GF:
        raise SeriesError("gf_to_moments expects GF coefficients")
    return MomentSequence(tuple(v * factorial(n) for n, v in enumerate(s)))


def _positive_mean(m: MomentSequence) -> Fraction:
    if m.order < 1:
        raise MomentError("need at least m_0 and m_1")
    if m[1] <= 0:
        raise MomentError(f"mean must be positive, got {m[1]}")
    return m[1]


def stationary_excess(m: MomentSequence) -> MomentSequence:
    """Moments of the equilibrium residual: m_{k+1} / ((k+1) m_1).

    The result is one term shorter than the input.
    """
    m1 = _positive_mean(m)
    return MomentSequence(tuple(m[k + 1] / ((k + 1) * m1) for k in range(m.order)))


def stationary_lifetime(m: MomentSequence) -> MomentSequence:
    """Moments of the length-biased density t f(t) / m_1: m_{k+1} / m_1."""
    m1 = _positive_mean(m)
    return MomentSequence(tuple(m[k + 1] / m1 for k in range(m.order)))


def _require_normalized_gf(phi: TruncatedSeries):
    if phi.kind is not SeriesKind.GF:
        raise SeriesError("expected GF coefficients")
    if phi[0] != 1:
        raise MomentError(f"GF must have constant term 1, got {phi[0]}")


def exp_mixture(phi: TruncatedSeries) -> TruncatedSeries:
    """1 / (1 - x phi(x)), the mgf form of (1 + s f(s))^-1."""
    _require_normalized_gf(phi)
    denom = [Fraction(1)] + [-c for c in phi.coeffs[:-1]]
    return series_reciprocal(TruncatedSeries(tuple(denom)))


def inverse_exp_mixture(psi: TruncatedSeries) -> TruncatedSeries:
    """phi = (psi - 1) / (x psi); one order shorter than ``psi``."""
    _require_normalized_gf(psi)
    if psi.order < 1:
        raise MomentError("need at least psi_0 and psi_1")
    top = psi.order - 1
    numer = TruncatedSeries(psi.coeffs[1:])
    phi = series_mul(numer, series_reciprocal(psi, top), top)
    if phi[0] != 1:
        raise MomentError(
            f"psi_1 = {psi[1]}: psi is not the exponential mixture of a normalized GF"
        )
    return phi


def invert_operator(phi: TruncatedSeries) -> TruncatedSeries:
    """phi / (1 - x phi): the excess of the exponential mixture."""
    _require_normalized_gf(phi)
    return series_mul(phi, exp_mixture(phi))


def binomial_convolution(a: MomentSequence, b: MomentSequence) -> MomentSequence:
    """Moments of the sum of independent variables: sum_k C(n,k) a_k b_{n-k}."""
    top = min(a.order, b.order)
    out = []
    for n in range(top + 1):
        out.append(sum((comb(n, k) * a[k] * b[n - k] for k in range(n + 1)), Fraction(0)))
    return MomentSequence(tuple(out))


def scale_moments(m: MomentSequence, c) -> MomentSequence:
    """Moments of c Z."""
    c = as_rational(c)
    if c <= 0:
        raise MomentError(f"scale factor must be positive, got {c}")
    return MomentSequence(tuple(c**n * v for n, v in enumerate(m)))


def moment_sequence(values: Sequence) -> MomentSequence:
    return MomentSequence(tuple(values))
