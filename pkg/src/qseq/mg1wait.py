"""Steady-state M/G/1 waiting-time moments (unit mean service time).

With sigma = rho / (1 - rho) the moments obey the Takacs recursion

    E[W^{n-1}] = (sigma / n) * sum_{k=2}^{n} C(n, k) g_k E[W^{n-k}],   E[W^0] = 1,

where g_k = E[S^k].  Equivalently the waiting-time mgf is
1 / (1 + sigma - sigma g_e(x)) with g_e the mgf of the service excess.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Sequence

from .momentops import MomentSequence, moments_to_gf, stationary_excess
from .mm1seq import SigmaParameter, catalan
from .ratcore import TruncatedSeries, as_rational, format_rational_list, gf_series, series_reciprocal


class MissingMomentError(ValueError):
    pass


class ServiceKind(Enum):
    EXPONENTIAL = "exponential"
    DETERMINISTIC = "deterministic"
    CATALAN_H1 = "catalan-h1"
    CUSTOM = "custom"


@dataclass(frozen=True)
class ServiceMoments:
    """Service-time moment model with g_0 = g_1 = 1.

    ``moment(k)`` returns E[S^k]; CUSTOM models hold an explicit finite list
    and raise :class:`MissingMomentError` past its end.
    """

    kind: ServiceKind
    values: tuple[Fraction, ...] = ()
    _rule: Callable[[int], Fraction] | None = field(default=None, repr=False, compare=False)

    @classmethod
    def exponential(cls) -> "ServiceMoments":
        return cls(ServiceKind.EXPONENTIAL, _rule=lambda k: Fraction(factorial(k)))

    @classmethod
    def deterministic(cls) -> "ServiceMoments":
        return cls(ServiceKind.DETERMINISTIC, _rule=lambda k: Fraction(1))

    @classmethod
    def catalan_h1(cls) -> "ServiceMoments":
        # GF coefficients of h_1 are C_k, so E[S^k] = k! C_k
        return cls(ServiceKind.CATALAN_H1, _rule=lambda k: Fraction(factorial(k) * catalan(k)))

    @classmethod
    def custom(cls, values: Sequence) -> "ServiceMoments":
        vals = tuple(as_rational(v) for v in values)
        if len(vals) < 2 or vals[0] != 1 or vals[1] != 1:
            raise ValueError("custom service moments must start g_0 = 1, g_1 = 1")
        return cls(ServiceKind.CUSTOM, values=vals)

    @classmethod
    def named(cls, name: str, values: Sequence | None = None) -> "ServiceMoments":
        kind = ServiceKind(name)
        if kind is ServiceKind.CUSTOM:
            if values is None:
                raise ValueError("custom service needs explicit moments")
            return cls.custom(values)
        return {
            ServiceKind.EXPONENTIAL: cls.exponential,
            ServiceKind.DETERMINISTIC: cls.deterministic,
            ServiceKind.CATALAN_H1: cls.catalan_h1,
        }[kind]()

    def moment(self, k: int) -> Fraction:
        if k < 0:
            raise ValueError("moment index must be nonnegative")
        if self._rule is not None:
            return self._rule(k)
        if k >= len(self.values):
            raise MissingMomentError(f"service moment g_{k} not supplied")
        return self.values[k]

    def moments(self, N: int) -> MomentSequence:
        return MomentSequence(tuple(self.moment(k) for k in range(N + 1)))


@dataclass(frozen=True)
class WaitingMoments:
    E: tuple[Fraction, ...]

    def __post_init__(self):
        E = tuple(as_rational(v) for v in self.E)
        if not E or E[0] != 1:
            raise ValueError("E[W^0] must be 1")
        object.__setattr__(self, "E", E)

    @property
    def w(self) -> tuple[Fraction, ...]:
        """Mixing moments w_n = E[W^n] / n!."""
        return tuple(v / factorial(n) for n, v in enumerate(self.E))

    def __str__(self):
        return format_rational_list(self.E)


def _sigma(value) -> Fraction:
    return value.sigma if isinstance(value, SigmaParameter) else SigmaParameter(value).sigma


def takacs_moments(service: ServiceMoments, sigma, N: int) -> WaitingMoments:
    """E[W^0..W^N]; uses service moments g_2..g_{N+1}."""
    s = _sigma(sigma)
    if N < 0:
        raise ValueError("N must be nonnegative")
    E = [Fraction(1)]
    for n in range(2, N + 2):
        acc = sum((comb(n, k) * service.moment(k) * E[n - k] for k in range(2, n + 1)), Fraction(0))
        E.append(s * acc / n)
    return WaitingMoments(tuple(E))


def catalan_waiting_moments(sigma, N: int) -> WaitingMoments:
    """E[W^{n-1}] = sigma sum_k (n-1)!/(n-k)! C_k E[W^{n-k}] for Catalan service."""
    s = _sigma(sigma)
    if N < 0:
        raise ValueError("N must be nonnegative")
    E = [Fraction(1)]
    for n in range(2, N + 2):
        acc = sum(
            (factorial(n - 1) // factorial(n - k) * catalan(k) * E[n - k] for k in range(2, n + 1)),
            Fraction(0),
        )
        E.append(s * acc)
    return WaitingMoments(tuple(E))


def catalan_mixing_recursion(sigma, N: int) -> list[Fraction]:
    """w_{n-1} = sigma sum_{k=2}^{n} C_k w_{n-k}."""
    s = _sigma(sigma)
    if N < 0:
        raise ValueError("N must be nonnegative")
    w = [Fraction(1)]
    for n in range(2, N + 2):
        w.append(s * sum((catalan(k) * w[n - k] for k in range(2, n + 1)), Fraction(0)))
    return w


def pk_waiting_series(service: ServiceMoments, sigma, N: int) -> TruncatedSeries:
    """GF of W to order N: 1 / (1 + sigma - sigma g_e(x))."""
    s = _sigma(sigma)
    if N < 0:
        raise ValueError("N must be nonnegative")
    excess_gf = moments_to_gf(stationary_excess(service.moments(N + 1)))
    denom = gf_series([1 + s - s * excess_gf[0]] + [-s * c for c in excess_gf.coeffs[1:]])
    return series_reciprocal(denom)
