"""Special functions and combinatorial kernels.

Everything here is a pure function of its arguments. Integer-argument Gamma
values, binomials and the EGC ``c`` coefficients are exact; the partial
fraction routine works in exact rational arithmetic (floats are converted
to the rationals they represent) so repeated-pole coefficients never rely
on numerical differencing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Sequence

import numpy as np

from .errors import DomainError, PreconditionError

__all__ = [
    "gamma_int",
    "binomial",
    "c_coeff",
    "c_coeff_exact",
    "bessel_j",
    "PoleTerm",
    "RationalPoleSum",
    "partial_fractions",
    "inverse_power_series",
]


def _check_int(name: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, Rational)):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    if isinstance(value, Rational) and value != int(value):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    return int(value)


def gamma_int(n: int) -> float:
    """Gamma(n) = (n-1)! for positive integer ``n``.

    Exact through n = 21 (20! fits in a double); correctly rounded beyond.
    """
    n = _check_int("n", n)
    if n <= 0:
        raise DomainError(f"gamma_int is defined for positive integers only, got {n}")
    return float(math.factorial(n - 1))


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient C(n, k) for 0 <= k <= n."""
    n = _check_int("n", n)
    k = _check_int("k", k)
    if n < 0 or k < 0:
        raise DomainError(f"binomial needs non-negative arguments, got ({n}, {k})")
    if k > n:
        raise DomainError(f"binomial needs k <= n, got ({n}, {k})")
    return math.comb(n, k)


@lru_cache(maxsize=None)
def c_coeff_exact(v1: int, U: int) -> Fraction:
    """EGC series coefficient as an exact rational.

    ``c_{v1} = (1/v1!) * sum_{v2=0}^{U-v1-1} C(2U-1, v2)``.
    """
    v1 = _check_int("v1", v1)
    U = _check_int("U", U)
    if U < 1:
        raise DomainError(f"U must be positive, got {U}")
    if not 0 <= v1 <= U - 1:
        raise DomainError(f"v1 must lie in [0, U-1] = [0, {U - 1}], got {v1}")
    total = sum(math.comb(2 * U - 1, v2) for v2 in range(U - v1))
    return Fraction(total, math.factorial(v1))


def c_coeff(v1: int, U: int) -> float:
    return float(c_coeff_exact(v1, U))


# Bessel functions of the first kind, integer order.

_SERIES_LIMIT = 6.0


def _bessel_series(n: int, x: float) -> float:
    # ascending series; terms are bounded by I_n(x) so |x| <= 6 keeps
    # cancellation below ~1e-14
    half = 0.5 * x
    log_t0 = n * math.log(half) - math.lgamma(n + 1)
    if log_t0 < -745.0:
        return 0.0
    term = math.exp(log_t0)
    total = term
    q = -half * half
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + n))
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total


def _bessel_miller(n: int, x: float) -> float:
    # downward recurrence normalised by J_0 + 2 * sum_k J_2k = 1
    top = max(n, int(math.ceil(x)))
    start = 2 * ((top + 30 + int(math.sqrt(160.0 * top))) // 2)
    j_next, j_cur = 0.0, 1e-300
    norm_sum = 0.0
    result = 0.0
    for k in range(start, 0, -1):
        j_prev = (2.0 * k / x) * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        if abs(j_cur) > 1e250:
            j_cur *= 1e-250
            j_next *= 1e-250
            result *= 1e-250
            norm_sum *= 1e-250
        order = k - 1
        if order == n:
            result = j_cur
        if order > 0 and order % 2 == 0:
            norm_sum += 2.0 * j_cur
    norm_sum += j_cur
    return result / norm_sum


def bessel_j(l: int, x: float) -> float:
    """Bessel function of the first kind J_l(x) for integer order ``l``.

    Absolute error is below 1e-12 for |x| <= 100; negative orders and
    arguments use J_{-l}(x) = (-1)^l J_l(x) and J_l(-x) = (-1)^l J_l(x).
    """
    l = _check_int("l", l)
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"bessel_j needs a finite argument, got {x}")
    if abs(x) >= 1e6:
        raise DomainError(f"bessel_j supports |x| < 1e6, got {x}")
    sign = 1.0
    if l < 0:
        l = -l
        if l % 2:
            sign = -sign
    if x < 0:
        x = -x
        if l % 2:
            sign = -sign
    if x == 0.0:
        return sign * (1.0 if l == 0 else 0.0)
    if x <= _SERIES_LIMIT:
        return sign * _bessel_series(l, x)
    return sign * _bessel_miller(l, x)


# Partial fractions of products of real poles.


@dataclass(frozen=True)
class PoleTerm:
    pole: float | Fraction
    order: int
    coeff: float | Fraction


@dataclass(frozen=True)
class RationalPoleSum:
    """``scale * sum coeff / (pole - z)**order`` over ``terms``."""

    terms: tuple[PoleTerm, ...]
    scale: float | Fraction = 1

    @property
    def exact(self) -> bool:
        values = [self.scale] + [v for t in self.terms for v in (t.pole, t.coeff)]
        return all(isinstance(v, (int, Fraction)) for v in values)

    def __call__(self, z):
        """Evaluate at z; exact (rational) sums are evaluated without rounding before the final cast."""
        if self.exact:
            if isinstance(z, Fraction):
                return self._exact_at(z, Fraction(0))[0]
            zs = np.asarray(z, dtype=complex)
            out = np.array([complex(*map(float, self._exact_at(Fraction(c.real), Fraction(c.imag)))) for c in zs.ravel()])
            out = out.reshape(zs.shape)
            return complex(out) if out.ndim == 0 else out
        total = 0
        for t in self.terms:
            total = total + t.coeff / (t.pole - z) ** t.order
        return self.scale * total

    def _exact_at(self, x: Fraction, y: Fraction) -> tuple[Fraction, Fraction]:
        # (p - x - j y)^-r = (p - x + j y)^r / ((p - x)^2 + y^2)^r
        re_total = im_total = Fraction(0)
        for t in self.terms:
            a, b = t.pole - x, y
            norm = (a * a + b * b) ** t.order
            re, im = Fraction(1), Fraction(0)
            for _ in range(t.order):
                re, im = re * a - im * b, re * b + im * a
            re_total += t.coeff * re / norm
            im_total += t.coeff * im / norm
        return self.scale * re_total, self.scale * im_total

    def gamma_mixture(self) -> list[tuple[int, float, float]]:
        """Read the sum as a mixture of Gamma laws.

        Each term ``coeff/(p - z)**r`` is the transform of
        ``coeff * x**(r-1) exp(-p x) / Gamma(r)``, i.e. a Gamma(shape=r,
        rate=p) density with weight ``scale * coeff / p**r``. Returns
        ``(shape, rate, weight)`` triples; weights sum to the value at z=0.
        """
        out = []
        for t in self.terms:
            if t.pole <= 0:
                raise DomainError("gamma_mixture needs strictly positive poles")
            out.append((t.order, float(t.pole), float(self.scale * t.coeff / t.pole**t.order)))
        return out


def inverse_power_series(a, b, n: int, length: int) -> list:
    """First ``length`` Taylor coefficients of ``(a + b*t)**(-n)`` around t=0.

    Works for any field type (float, Fraction, complex).
    """
    if length <= 0:
        return []
    ratio = -b / a
    out = [a ** (-n)]
    for j in range(1, length):
        # C(n+j-1, j) / C(n+j-2, j-1) = (n+j-1)/j
        out.append(out[-1] * ratio * (n + j - 1) / j)
    return out


def _series_mul(p: list, q: list, length: int) -> list:
    out = [0] * length
    for i, pi in enumerate(p[:length]):
        if pi == 0:
            continue
        for j in range(min(len(q), length - i)):
            out[i + j] += pi * q[j]
    return out


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def partial_fractions(
    poles: Sequence[tuple[float, int]], exact: bool | None = None
) -> RationalPoleSum:
    """Partial-fraction expansion of ``prod_i (p_i - z)**(-m_i)``.

    Returns coefficients ``A_ij`` with

        prod_i (p_i - z)^(-m_i) = sum_i sum_{j=1..m_i} A_ij / (p_i - z)^(m_i - j + 1)

    ``A_ij`` is the (j-1)-th Taylor coefficient, in ``t = p_i - z``, of the
    product with the i-th factor removed. Each remaining factor
    ``(p_k - p_i + t)^(-m_k)`` has a closed-form binomial series, so the
    derivatives are exact series products.

    Arithmetic is exact rational throughout. With ``exact=None`` the
    coefficients come back as ``Fraction`` when every pole is an int or
    Fraction and as floats (correctly rounded) otherwise; ``exact=True``
    always returns fractions.
    """
    if not poles:
        raise PreconditionError("partial_fractions needs at least one pole")
    locs = []
    mults = []
    for entry in poles:
        p, mult = entry
        mult = _check_int("multiplicity", mult)
        if mult < 1:
            raise DomainError(f"pole multiplicity must be positive, got {mult}")
        if not p > 0:
            raise DomainError(f"pole locations must be strictly positive, got {p}")
        locs.append(p)
        mults.append(mult)
    fracs = [_as_fraction(p) for p in locs]
    if len(set(fracs)) != len(fracs):
        raise PreconditionError(
            "duplicate pole locations: merge them into one entry with summed multiplicity"
        )
    if exact is None:
        exact = all(isinstance(p, (int, Fraction)) for p in locs)

    terms = []
    for i, (pi, mi) in enumerate(zip(fracs, mults)):
        series = [Fraction(1)] + [Fraction(0)] * (mi - 1)
        for k, (pk, mk) in enumerate(zip(fracs, mults)):
            if k == i:
                continue
            series = _series_mul(series, inverse_power_series(pk - pi, 1, mk, mi), mi)
        for j in range(1, mi + 1):
            coeff = series[j - 1]
            terms.append(
                PoleTerm(
                    pole=locs[i] if not exact else fracs[i],
                    order=mi - j + 1,
                    coeff=coeff if exact else float(coeff),
                )
            )
    return RationalPoleSum(terms=tuple(terms), scale=Fraction(1) if exact else 1.0)
