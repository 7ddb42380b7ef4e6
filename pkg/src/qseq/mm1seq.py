"""M/M/1 sequence families in the sigma = rho / (1 - rho) parametrization.

Three mean-normalized mgfs, all power series in x with coefficients that are
polynomials in sigma:

* busy period          b(x; sigma)   = sum b_n x^n
* its stationary excess b_e(x; sigma) = (b - 1) / x, so b_{e,n} = b_{n+1}
* equilibrium time to emptiness p(x; sigma), p_n = sigma b_{n+1} / (1 + sigma)

For integer sigma all three are integer sequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .momentops import MomentSequence, binomial_convolution, gf_to_moments
from .ratcore import SigmaPolynomial, TruncatedSeries, as_rational, gf_series


@dataclass(frozen=True)
class SigmaParameter:
    """sigma > 0, the mean steady-state number in system."""

    sigma: Fraction

    def __post_init__(self):
        s = as_rational(self.sigma)
        if s <= 0:
            raise ValueError(f"sigma must be positive, got {s}")
        object.__setattr__(self, "sigma", s)

    @property
    def rho(self) -> Fraction:
        return self.sigma / (1 + self.sigma)

    @classmethod
    def from_rho(cls, rho) -> "SigmaParameter":
        rho = as_rational(rho)
        if not 0 < rho < 1:
            raise ValueError(f"rho must lie in (0, 1), got {rho}")
        return cls(rho / (1 - rho))


def _sigma(value) -> Fraction:
    if isinstance(value, SigmaParameter):
        return value.sigma
    return SigmaParameter(value).sigma


class FamilyTag(Enum):
    BUSY = "busy"
    BUSY_EXCESS = "busy-excess"
    EMPTINESS = "emptiness"


@lru_cache(maxsize=None)
def catalan(n: int) -> int:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return comb(2 * n, n) // (n + 1)


def busy_coefficient(n: int, sigma) -> Fraction:
    """b_n(sigma) = sum_{k<n} C(n-1+k, n-1-k) C_k sigma^k, with b_0 = 1."""
    s = _sigma(sigma)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return Fraction(1)
    m = n - 1
    return sum((comb(m + k, m - k) * catalan(k) * s**k for k in range(m + 1)), Fraction(0))


def busy_coefficient_rec(N: int, sigma) -> list[Fraction]:
    """b_0..b_N by (n+1) b_{n+1} = (2n-1)(1+2 sigma) b_n - (n-2) b_{n-1}."""
    s = _sigma(sigma)
    if N < 0:
        raise ValueError("N must be nonnegative")
    b = [Fraction(1), Fraction(1)]
    for n in range(1, N):
        b.append(((2 * n - 1) * (1 + 2 * s) * b[n] - (n - 2) * b[n - 1]) / (n + 1))
    return b[: N + 1]


def busy_poly(n: int) -> SigmaPolynomial:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return SigmaPolynomial((1,))
    m = n - 1
    return SigmaPolynomial(tuple(comb(m + k, m - k) * catalan(k) for k in range(m + 1)))


def excess_coefficient(n: int, sigma) -> Fraction:
    """b_{e,n} = b_{n+1} (and b_{e,0} = 1, which b_1 already is)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return busy_coefficient(n + 1, sigma)


def emptiness_coefficient(n: int, sigma) -> Fraction:
    """p_n = sigma b_{n+1} / (1 + sigma) for n >= 1; p_0 = 1."""
    s = _sigma(sigma)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return Fraction(1)
    return s * busy_coefficient(n + 1, s) / (1 + s)


def emptiness_coefficient_alternating(n: int, sigma) -> Fraction:
    """p_n = sum_k (-1)^(n+k) C(n+k, n-k) C_k (1+sigma)^k, all n >= 0."""
    s = _sigma(sigma)
    if n < 0:
        raise ValueError("n must be nonnegative")
    return sum(
        ((-1) ** (n + k) * comb(n + k, n - k) * catalan(k) * (1 + s) ** k for k in range(n + 1)),
        Fraction(0),
    )


def emptiness_coefficient_rec(N: int, sigma) -> list[Fraction]:
    """p_0..p_N by (n+2) p_{n+1} = (2n+1)(1+2 sigma) p_n - (n-1) p_{n-1}."""
    s = _sigma(sigma)
    if N < 0:
        raise ValueError("N must be nonnegative")
    p = [Fraction(1), s]
    for n in range(1, N):
        p.append(((2 * n + 1) * (1 + 2 * s) * p[n] - (n - 1) * p[n - 1]) / (n + 2))
    return p[: N + 1]


def emptiness_poly(n: int) -> SigmaPolynomial:
    """p_n as an integer polynomial in sigma (expanded alternating sum)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    coeffs = [0] * (n + 1)
    for k in range(n + 1):
        outer = (-1) ** (n + k) * comb(n + k, n - k) * catalan(k)
        for j in range(k + 1):
            coeffs[j] += outer * comb(k, j)
    return SigmaPolynomial(tuple(coeffs))


def family_coefficients(tag: FamilyTag, sigma, N: int) -> list[Fraction]:
    if tag is FamilyTag.BUSY:
        return busy_coefficient_rec(N, sigma)
    if tag is FamilyTag.BUSY_EXCESS:
        return busy_coefficient_rec(N + 1, sigma)[1:]
    if tag is FamilyTag.EMPTINESS:
        return emptiness_coefficient_rec(N, sigma)
    raise ValueError(f"unknown family {tag!r}")


def family_series(tag: FamilyTag, sigma, N: int) -> TruncatedSeries:
    return gf_series(family_coefficients(tag, sigma, N))


def family_poly(tag: FamilyTag, n: int) -> SigmaPolynomial:
    if tag is FamilyTag.BUSY:
        return busy_poly(n)
    if tag is FamilyTag.BUSY_EXCESS:
        return busy_poly(n + 1)
    return emptiness_poly(n)


def catalan_series(N: int) -> TruncatedSeries:
    return gf_series([catalan(n) for n in range(N + 1)])


def _nu(n: int) -> int:
    return n * (n + 1) // 2


def hankel_closed_form(tag: FamilyTag, sigma, n: int) -> Fraction:
    """Even Hankel determinant H_{2n} of the family's coefficients."""
    s = _sigma(sigma)
    if n < 0:
        raise ValueError("n must be nonnegative")
    nu = _nu(n)
    if tag is FamilyTag.BUSY:
        return s**nu * (1 + s) ** (nu - n)
    return (s + s * s) ** nu


def kfold_busy_moments(k: int, sigma, N: int) -> MomentSequence:
    """Moments of the sum of k independent scaled busy periods."""
    if k < 1:
        raise ValueError("k must be at least 1")
    single = gf_to_moments(family_series(FamilyTag.BUSY, sigma, N))
    return kfold_moments(single, k)


def kfold_moments(single: MomentSequence, k: int) -> MomentSequence:
    if k < 1:
        raise ValueError("k must be at least 1")
    total = single
    for _ in range(k - 1):
        total = binomial_convolution(total, single)
    return total


def heavy_traffic_ratio(n: int, sigma) -> Fraction:
    """b_{e,n}(sigma) / sigma^n, which tends to C_n as sigma grows."""
    s = _sigma(sigma)
    return excess_coefficient(n, s) / s**n


def moment_coefficients(tag: FamilyTag, sigma, N: int) -> list[Fraction]:
    """n! times the GF coefficients."""
    return [factorial(n) * c for n, c in enumerate(family_coefficients(tag, sigma, N))]
