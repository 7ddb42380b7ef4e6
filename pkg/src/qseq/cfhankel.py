"""S-fractions and Hankel transforms.

An S-fraction with coefficients h_1, h_2, ... is

    phi(x) = 1 / (1 - h_1 x / (1 - h_2 x / (1 - ...)))

and the even Hankel determinants of phi's coefficients are running products
of the h's: H_{2n} = (h_1 ... h_{2n}) H_{2n-2}.  ``hankel_determinant_oracle``
computes the same numbers straight from the Hankel matrix, independently.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ratcore import (
    SeriesError,
    SeriesKind,
    TruncatedSeries,
    as_rational,
    format_rational_list,
    one_series,
    series_reciprocal,
)


class HankelError(ValueError):
    pass


@dataclass(frozen=True)
class SFraction:
    h: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "h", tuple(as_rational(v) for v in self.h))

    @classmethod
    def of(cls, *values) -> "SFraction":
        return cls(tuple(values))

    def __len__(self):
        return len(self.h)

    def __iter__(self):
        return iter(self.h)

    def __getitem__(self, index):
        return self.h[index]

    def is_stieltjes(self) -> bool:
        """All coefficients strictly positive (completely monotone density)."""
        return all(v > 0 for v in self.h)

    def __str__(self):
        return format_rational_list(self.h)


@dataclass(frozen=True)
class TerminatingCF(SFraction):
    """Expansion stopped because the next coefficient was zero.

    ``h`` holds the coefficients found before the zero.  ``exact`` is True
    when the remaining tail is identically 1 over the known order, i.e.
    the series is the finite fraction itself.
    """

    exact: bool = True


@dataclass(frozen=True)
class HankelSequence:
    """H_0, H_2, H_4, ... (``H[n]`` is H_{2n})."""

    H: tuple[Fraction, ...]

    def __post_init__(self):
        H = tuple(as_rational(v) for v in self.H)
        if not H or H[0] != 1:
            raise HankelError("a Hankel transform starts with H_0 = 1")
        object.__setattr__(self, "H", H)

    def __len__(self):
        return len(self.H)

    def __iter__(self):
        return iter(self.H)

    def __getitem__(self, index):
        return self.H[index]

    def __str__(self):
        return format_rational_list(self.H)


def series_to_sfraction(phi: TruncatedSeries, K: int) -> SFraction:
    """First K S-fraction coefficients of ``phi`` (needs K <= phi.order).

    psi_0 = phi; theta = (1 - 1/psi_{k-1}) / x; h_k = theta(0);
    psi_k = theta / h_k.  Each step consumes one order of the series.
    """
    if phi.kind is not SeriesKind.GF:
        raise SeriesError("expected GF coefficients")
    if phi[0] != 1:
        raise SeriesError(f"constant term must be 1, got {phi[0]}")
    if K > phi.order:
        raise SeriesError(f"{K} coefficients need order {K}, series has order {phi.order}")
    h = []
    psi = phi
    for _ in range(K):
        inv = series_reciprocal(psi)
        theta = TruncatedSeries(tuple(-c for c in inv.coeffs[1:]))
        hk = theta[0]
        if hk == 0:
            return TerminatingCF(tuple(h), exact=all(c == 0 for c in theta))
        h.append(hk)
        psi = TruncatedSeries(tuple(c / hk for c in theta))
    return SFraction(tuple(h))


def sfraction_to_series(cf: SFraction, N: int) -> TruncatedSeries:
    """Coefficients 0..N of the finite fraction, evaluated bottom-up."""
    if N < 0:
        raise SeriesError("order must be nonnegative")
    tail = one_series(N)
    for hk in reversed(cf.h):
        denom = [Fraction(1)] + [-hk * c for c in tail.coeffs[:-1]]
        tail = series_reciprocal(TruncatedSeries(tuple(denom)))
    return tail


def hankel_from_sfraction(cf: SFraction, n_max: int) -> HankelSequence:
    if len(cf) < 2 * n_max:
        raise HankelError(f"H_{2 * n_max} needs {2 * n_max} CF coefficients, have {len(cf)}")
    H = [Fraction(1)]
    prod = Fraction(1)
    for n in range(1, n_max + 1):
        prod *= cf[2 * n - 2] * cf[2 * n - 1]
        H.append(prod * H[-1])
    return HankelSequence(tuple(H))


def exact_determinant(matrix: list[list[Fraction]]) -> Fraction:
    """Determinant by Gaussian elimination over the rationals."""
    a = [[as_rational(v) for v in row] for row in matrix]
    size = len(a)
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for r in range(col + 1, size):
            f = a[r][col] / p
            if f:
                for c in range(col, size):
                    a[r][c] -= f * a[col][c]
    return det


def hankel_determinant_oracle(seq: TruncatedSeries, n: int) -> Fraction:
    """det [omega_{i+j}]_{0<=i,j<=n}."""
    if seq.order < 2 * n:
        raise HankelError(f"H_{2 * n} needs omega_0..omega_{2 * n}, have order {seq.order}")
    return exact_determinant([[seq[i + j] for j in range(n + 1)] for i in range(n + 1)])


def hankel_transform(seq: TruncatedSeries, n_max: int) -> HankelSequence:
    """H_0..H_{2 n_max} by determinants."""
    return HankelSequence(tuple(hankel_determinant_oracle(seq, n) for n in range(n_max + 1)))
