"""Floating-point checks of the exact results against analytic densities.

Densities covered:

* BUSY_PDF(rho):   b(t) = exp(-(1+rho) t) I_1(2 t sqrt(rho)) / (t sqrt(rho)),  t > 0
* MIXING_BE(sigma): sqrt((tau - y)(y - 1/tau)) / (2 sigma pi y),  1/tau < y < tau
* MIXING_H1:        sqrt(4 - y) / (2 pi sqrt(y)),  0 < y < 4

Integrals use adaptive Gauss-Legendre panels.  The two mixing densities are
integrated in theta with y = a + (b - a) sin^2(theta), which removes the
square-root behaviour at both edges of the support.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable

import numpy as np

from .mm1seq import catalan

BESSEL_SERIES_MAX = 50.0

_GL_LOW = np.polynomial.legendre.leggauss(10)
_GL_HIGH = np.polynomial.legendre.leggauss(21)


class NumericError(ValueError):
    pass


class QuadratureError(NumericError):
    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(f"{message} (estimate {estimate!r}, error {error:.3g})")
        self.estimate = estimate
        self.error = error


def _bessel_terms_log(order: int, t: float):
    """Log of the ascending-series terms of I_order(t), until negligible."""
    half = 0.5 * t
    log_half = math.log(half)
    log_term = order * log_half - math.lgamma(order + 1)
    peak = log_term
    j = 0
    while True:
        yield log_term
        j += 1
        log_term += 2 * log_half - math.log(j * (j + order))
        peak = max(peak, log_term)
        if j > half and log_term < peak - 40.0:
            return


def _bessel_scaled(order: int, t: float, shift: float) -> float:
    """exp(-shift) * I_order(t) from the ascending series, for any t >= 0."""
    if order not in (0, 1):
        raise NumericError("only orders 0 and 1 are supported")
    if t < 0:
        raise NumericError("argument must be nonnegative")
    if t == 0.0:
        return math.exp(-shift) if order == 0 else 0.0
    return math.fsum(math.exp(lt - shift) for lt in _bessel_terms_log(order, t))


def bessel_i(order: int, t: float) -> float:
    """Modified Bessel function I_0 or I_1 for 0 <= t <= 50 by its power series."""
    if not 0.0 <= t <= BESSEL_SERIES_MAX:
        raise NumericError(f"bessel_i argument {t} outside [0, {BESSEL_SERIES_MAX}]")
    return _bessel_scaled(order, float(t), 0.0)


class DensityKind(Enum):
    BUSY_PDF = "busy-pdf"
    MIXING_BE = "mixing-be"
    MIXING_H1 = "mixing-h1"


@dataclass(frozen=True)
class DensitySpec:
    kind: DensityKind
    param: float | None = None

    def __post_init__(self):
        if self.kind is DensityKind.BUSY_PDF and not (self.param is not None and 0 < self.param < 1):
            raise NumericError(f"busy pdf needs 0 < rho < 1, got {self.param}")
        if self.kind is DensityKind.MIXING_BE and not (self.param is not None and self.param > 0):
            raise NumericError(f"b_e mixing density needs sigma > 0, got {self.param}")

    @classmethod
    def busy_pdf(cls, rho) -> "DensitySpec":
        return cls(DensityKind.BUSY_PDF, float(rho))

    @classmethod
    def mixing_be(cls, sigma) -> "DensitySpec":
        return cls(DensityKind.MIXING_BE, float(sigma))

    @classmethod
    def mixing_h1(cls) -> "DensitySpec":
        return cls(DensityKind.MIXING_H1)

    @property
    def tau(self) -> float:
        s = self.param
        return 1 + 2 * s + 2 * math.sqrt(s * (1 + s))

    @property
    def support(self) -> tuple[float, float]:
        if self.kind is DensityKind.BUSY_PDF:
            return (0.0, math.inf)
        if self.kind is DensityKind.MIXING_BE:
            return (1 / self.tau, self.tau)
        return (0.0, 4.0)


def _busy_pdf(rho: float, t: float) -> float:
    r = math.sqrt(rho)
    z = 2 * t * r
    return _bessel_scaled(1, z, (1 + rho) * t) / (t * r)


def density_eval(spec: DensitySpec, t: float) -> float:
    lo, hi = spec.support
    if not lo < t < hi:
        raise NumericError(f"{t} is outside the open support ({lo}, {hi})")
    if spec.kind is DensityKind.BUSY_PDF:
        return _busy_pdf(spec.param, t)
    if spec.kind is DensityKind.MIXING_BE:
        tau = spec.tau
        return math.sqrt((tau - t) * (t - 1 / tau)) / (2 * spec.param * math.pi * t)
    return math.sqrt(4 - t) / (2 * math.pi * math.sqrt(t))


def _panel(f: Callable[[float], float], a: float, b: float) -> tuple[float, float]:
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    lo = half * math.fsum(w * f(mid + half * x) for x, w in zip(*_GL_LOW))
    hi = half * math.fsum(w * f(mid + half * x) for x, w in zip(*_GL_HIGH))
    return hi, abs(hi - lo)


def adaptive_integrate(
    f: Callable[[float], float],
    breakpoints: list[float],
    tol: float = 1e-12,
    max_panels: int = 4000,
) -> float:
    """Integrate f over consecutive breakpoints, bisecting the worst panel.

    Stops once the summed error estimate is below ``tol * max(1, |I|)``.
    The final sum is taken in left-to-right panel order, so results do not
    depend on the refinement history.
    """
    heap = []
    for a, b in zip(breakpoints, breakpoints[1:]):
        value, err = _panel(f, a, b)
        heapq.heappush(heap, (-err, a, b, value))
    while True:
        total = math.fsum(item[3] for item in heap)
        err_total = math.fsum(-item[0] for item in heap)
        if err_total <= tol * max(1.0, abs(total)):
            return math.fsum(item[3] for item in sorted(heap, key=lambda it: it[1]))
        if len(heap) >= max_panels:
            raise QuadratureError("panel budget exhausted", total, err_total)
        _, a, b, _ = heapq.heappop(heap)
        m = 0.5 * (a + b)
        for lo, hi in ((a, m), (m, b)):
            value, err = _panel(f, lo, hi)
            heapq.heappush(heap, (-err, lo, hi, value))


def _busy_tail_end(integrand: Callable[[float], float]) -> float:
    """First power-of-two point past the peak where the integrand is < 1e-16."""
    t = 1.0
    prev = integrand(t)
    while True:
        t *= 2
        cur = integrand(t)
        if cur < 1e-16 and cur <= prev:
            return t
        if t > 1e6:
            raise NumericError("busy-period integrand does not decay")
        prev = cur


def _busy_integral(rho: float, weight: Callable[[float], float], tol: float) -> float:
    def integrand(t):
        return weight(t) * _busy_pdf(rho, t)

    end = _busy_tail_end(integrand)
    points = [0.0, 0.5]
    while points[-1] < end:
        points.append(points[-1] * 2)
    return adaptive_integrate(integrand, points, tol)


def quad_moment(spec: DensitySpec, n: int, tol: float = 1e-12) -> float:
    """n-th moment of the density, 0 <= n <= 8."""
    if not 0 <= n <= 8:
        raise NumericError("moment order must be between 0 and 8")
    if tol < 1e-14:
        raise NumericError("tolerance below what double precision can deliver")
    if spec.kind is DensityKind.BUSY_PDF:
        return _busy_integral(spec.param, lambda t: t**n, tol)
    a, b = spec.support
    width = b - a

    def integrand(theta):
        s, c = math.sin(theta), math.cos(theta)
        y = a + width * s * s
        return y**n * density_eval(spec, y) * 2 * width * s * c

    return adaptive_integrate(integrand, [0.0, math.pi / 4, math.pi / 2], tol)


def busy_mgf_quadrature(rho: float, x: float, tol: float = 1e-12) -> float:
    """E[exp(x X_rho)] by quadrature of the busy-period density."""
    return _busy_integral(rho, lambda t: math.exp(x * t), tol)


def busy_lt_closed_form(rho: float, s: float) -> float:
    """Laplace transform of the busy-period density."""
    a = 1 + rho + s
    return (a - math.sqrt(a * a - 4 * rho)) / (2 * rho)


def catalan_egf(x: float) -> float:
    """sum C_n x^n / n! = exp(2x) (I_0(2x) - I_1(2x)), 0 <= x <= 10."""
    if not 0.0 <= x <= 10.0:
        raise NumericError(f"catalan_egf defined here for 0 <= x <= 10, got {x}")
    z = 2.0 * x
    return math.exp(z) * (bessel_i(0, z) - bessel_i(1, z))


def catalan_egf_partial_sum(x, terms: int) -> Fraction:
    """Exact sum_{n<terms} C_n x^n / n! for rational x."""
    x = Fraction(x)
    total = Fraction(0)
    power_over_fact = Fraction(1)
    for n in range(terms):
        total += catalan(n) * power_over_fact
        power_over_fact = power_over_fact * x / (n + 1)
    return total
