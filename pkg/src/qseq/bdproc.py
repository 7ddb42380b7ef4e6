"""Return-probability transform of a birth-death process.

With z = 1/s the Laplace transform of P_00(t) is

    z / (1 + lambda_0 z / (1 + mu_1 z / (1 + lambda_1 z / (1 + mu_2 z / ...))))

The coefficients are stored positive, in this 1/(1 + .) convention.  The
S-fraction machinery in :mod:`qseq.cfhankel` uses 1/(1 - .), so the bracket
is that fraction evaluated at -z.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Mapping

from .cfhankel import SFraction, sfraction_to_series
from .mm1seq import SigmaParameter, emptiness_coefficient_rec
from .ratcore import TruncatedSeries, as_rational, one_series, series_reciprocal


class RateError(ValueError):
    pass


@dataclass(frozen=True)
class BDRates:
    """Birth rates lambda_k (k >= 0) and death rates mu_k (k >= 1)."""

    birth: Callable[[int], Fraction]
    death: Callable[[int], Fraction]

    def lam(self, k: int) -> Fraction:
        value = as_rational(self.birth(k))
        if value <= 0:
            raise RateError(f"birth rate lambda_{k} = {value} is not positive")
        return value

    def mu(self, k: int) -> Fraction:
        if k < 1:
            raise RateError("death rates are indexed from k = 1")
        value = as_rational(self.death(k))
        if value <= 0:
            raise RateError(f"death rate mu_{k} = {value} is not positive")
        return value

    @classmethod
    def mm1(cls, sigma) -> "BDRates":
        """Scaled M/M/1: lambda_k = sigma, mu_k = 1 + sigma."""
        s = sigma.sigma if isinstance(sigma, SigmaParameter) else SigmaParameter(sigma).sigma
        return cls(lambda k: s, lambda k: 1 + s)

    @classmethod
    def from_tables(cls, births: Mapping[int, Fraction], deaths: Mapping[int, Fraction]) -> "BDRates":
        def lookup(table, label):
            def rate(k):
                try:
                    return table[k]
                except KeyError:
                    raise RateError(f"{label}_{k} not supplied") from None
            return rate

        return cls(lookup(dict(births), "lambda"), lookup(dict(deaths), "mu"))

    @classmethod
    def from_file(cls, path) -> "BDRates":
        """Read ``k lambda_k mu_k`` lines; ``#`` starts a comment."""
        births, deaths = {}, {}
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise RateError(f"{path}:{lineno}: expected 'k lambda_k mu_k'")
            try:
                k = int(parts[0])
                births[k] = as_rational(parts[1])
                deaths[k] = as_rational(parts[2])
            except (TypeError, ValueError) as exc:
                raise RateError(f"{path}:{lineno}: {exc}") from None
        return cls.from_tables(births, deaths)


def p00_sfraction(rates: BDRates, K: int) -> SFraction:
    """(lambda_0, mu_1, lambda_1, mu_2, ...) truncated to K terms."""
    if K < 1:
        raise ValueError("K must be at least 1")
    h = []
    for i in range(K):
        k = i // 2
        h.append(rates.lam(k) if i % 2 == 0 else rates.mu(k + 1))
    return SFraction(tuple(h))


def p00_series(rates: BDRates, N: int) -> TruncatedSeries:
    """Coefficients (1, -p_1, p_2, ...) of P_00 / z as a series in z."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    if N == 0:
        return one_series(0)
    # N fraction coefficients fix the series through z^N
    return sfraction_to_series(p00_sfraction(rates, N), N).negate_variable()


def p00_series_direct(rates: BDRates, N: int) -> TruncatedSeries:
    """Same series, evaluated bottom-up in the native 1/(1 + .) form."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    tail = one_series(N)
    if N == 0:
        return tail
    coeffs = p00_sfraction(rates, N).h
    for c in reversed(coeffs):
        denom = [Fraction(1)] + [c * t for t in tail.coeffs[:-1]]
        tail = series_reciprocal(TruncatedSeries(tuple(denom)))
    return tail


def alternates_in_sign(series: TruncatedSeries) -> bool:
    """Coefficient n is nonzero with sign (-1)^n."""
    return all(c != 0 and (c > 0) == (n % 2 == 0) for n, c in enumerate(series))


def mm1_consistency(sigma, N: int, rates: BDRates | None = None) -> bool:
    """P_00 series coefficients equal (-1)^n p_n(sigma) through order N."""
    rates = BDRates.mm1(sigma) if rates is None else rates
    series = p00_series(rates, N)
    expected = emptiness_coefficient_rec(N, sigma)
    return all(series[n] == (-1) ** n * expected[n] for n in range(N + 1))
