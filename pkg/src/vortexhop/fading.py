"""Nakagami-m SINR statistics for the EGC decision variable.

Every hop's instantaneous SNR/SINR is Gamma distributed with shape m and
its own mean: zeta on clear hops, delta_bar_v on jammed hops. The combined
SINR is their sum, so its characteristic function is a product of
``(m / (m - j w mean))**m`` factors.

Variable convention: with z = j*w each factor is ``(p / (p - z))**m`` with
pole p = m / mean. Partial fractions are taken in z, and a term
``c / (p - z)**r`` inverts to ``c * x**(r-1) * exp(-p x) / Gamma(r)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import special

from .errors import DomainError, PreconditionError
from .hopping import JamProfile, pn_generator
from .specfun import RationalPoleSum, partial_fractions

__all__ = [
    "SinrModel",
    "RationalPoleSum",
    "check_m",
    "hop_means",
    "pole_groups",
    "nakagami_pdf",
    "sample_power_gain",
    "sample_power_gains",
    "char_fn",
    "char_fn_z",
    "decompose_cf",
    "simple_pole_weights",
    "pdf_combined",
    "cdf_combined",
]


def check_m(m) -> int:
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise DomainError(f"Nakagami m must be a positive integer, got {m!r}")
    return int(m)


@dataclass(frozen=True)
class SinrModel:
    """Average per-hop SNR/SINRs feeding the combined-SINR law.

    ``delta_bar`` holds one average SINR per jammed hop, in the order of the
    active profile's ``D``. ``delta_bar_L`` is the shared value of the hops
    whose interferer count is L; when given it is checked against
    ``delta_bar``.
    """

    m: int
    zeta: float
    delta_bar: tuple[float, ...] = ()
    delta_bar_L: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "m", check_m(self.m))
        object.__setattr__(self, "delta_bar", tuple(float(d) for d in self.delta_bar))
        if not self.zeta > 0:
            raise DomainError(f"average SNR must be positive, got {self.zeta}")
        if any(not d > 0 for d in self.delta_bar):
            raise DomainError(f"average SINRs must be positive, got {self.delta_bar}")
        if self.delta_bar_L is not None and not self.delta_bar_L > 0:
            raise DomainError(f"delta_bar_L must be positive, got {self.delta_bar_L}")


def hop_means(model: SinrModel, profile: JamProfile) -> list[float]:
    """Mean SINR of every hop: U-V clear hops at zeta, then the jammed hops."""
    if len(model.delta_bar) != profile.V:
        raise PreconditionError(
            f"model carries {len(model.delta_bar)} jammed-hop SINRs but the profile has V={profile.V}"
        )
    if model.delta_bar_L is not None and profile.a:
        for d, mean in zip(profile.D, model.delta_bar):
            if d == profile.L and mean != model.delta_bar_L:
                raise PreconditionError("delta_bar entries for the L-count hops must equal delta_bar_L")
    return [model.zeta] * (profile.U - profile.V) + list(model.delta_bar)


def pole_groups(model: SinrModel, profile: JamProfile) -> list[tuple[float, int]]:
    """Distinct hop means with their Gamma shape totals (m per hop).

    Hops with exactly equal means are merged, which is what turns equal
    averages into a repeated pole.
    """
    groups: dict[float, int] = {}
    for mean in hop_means(model, profile):
        groups[mean] = groups.get(mean, 0) + model.m
    return list(groups.items())


def nakagami_pdf(m: int, mean: float, gamma):
    """Gamma density of a Nakagami-m power/SNR with the given mean."""
    m = check_m(m)
    if not mean > 0:
        raise DomainError(f"mean must be positive, got {mean}")
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0):
        raise DomainError("the SNR argument must be non-negative")
    logpdf = m * math.log(m / mean) - math.lgamma(m) - m * g / mean
    if m > 1:
        with np.errstate(divide="ignore"):
            logpdf = logpdf + (m - 1) * np.log(g)
    out = np.exp(logpdf)
    return float(out) if out.ndim == 0 else out


def sample_power_gains(m: int, mean: float, size: int, seed: int) -> np.ndarray:
    """``size`` Gamma(shape=m, scale=mean/m) draws from the seeded PN source."""
    m = check_m(m)
    if not mean > 0:
        raise DomainError(f"mean must be positive, got {mean}")
    return pn_generator(seed).gamma(m, mean / m, size=size)


def sample_power_gain(m: int, mean: float, seed: int) -> float:
    return float(sample_power_gains(m, mean, 1, seed)[0])


def char_fn_z(model: SinrModel, profile: JamProfile, z):
    """Characteristic function evaluated at z = j*w (any complex z off the poles)."""
    z = np.asarray(z, dtype=complex)
    out = np.ones_like(z)
    m = model.m
    for mean in hop_means(model, profile):
        out = out * (m / (m - z * mean)) ** m
    return complex(out) if out.ndim == 0 else out


def char_fn(model: SinrModel, profile: JamProfile, w):
    """E[exp(j w gamma_s)] for the combined SINR."""
    return char_fn_z(model, profile, 1j * np.asarray(w, dtype=float))


def decompose_cf(model: SinrModel, profile: JamProfile, exact: bool = False) -> RationalPoleSum:
    """Partial-fraction form of the combined characteristic function in z = j*w.

    Poles sit at m/zeta and m/delta_bar_v; ``scale`` is the product of
    p**order over the distinct poles so the sum equals ``char_fn_z``.
    ``exact=True`` keeps every pole and coefficient as a Fraction.
    """
    groups = pole_groups(model, profile)
    if exact:
        poles = [(model.m / Fraction(mean), n) for mean, n in groups]
        scale = Fraction(1)
    else:
        poles = [(model.m / mean, n) for mean, n in groups]
        scale = 1.0
    for p, n in poles:
        scale *= p**n
    base = partial_fractions(poles, exact=exact)
    return RationalPoleSum(terms=base.terms, scale=scale)


def simple_pole_weights(delta_bars) -> list[float]:
    """Mixture weights prod_{i != v} delta_v / (delta_v - delta_i) for m = 1.

    Valid only for pairwise-distinct averages.
    """
    deltas = [float(d) for d in delta_bars]
    if len(set(deltas)) != len(deltas):
        raise PreconditionError("simple-pole weights need pairwise-distinct averages")
    return [
        math.prod(dv / (dv - di) for i, di in enumerate(deltas) if i != v)
        for v, dv in enumerate(deltas)
    ]


def _mixture(model: SinrModel, profile: JamProfile):
    return decompose_cf(model, profile).gamma_mixture()


def pdf_combined(model: SinrModel, profile: JamProfile, gamma_s):
    """Density of the EGC output SINR, as the Gamma mixture read off the pole sum."""
    g = np.asarray(gamma_s, dtype=float)
    if np.any(g < 0):
        raise DomainError("gamma_s must be non-negative")
    out = np.zeros_like(g)
    for shape, rate, weight in _mixture(model, profile):
        out = out + weight * rate**shape / math.factorial(shape - 1) * g ** (shape - 1) * np.exp(-rate * g)
    return float(out) if out.ndim == 0 else out


def cdf_combined(model: SinrModel, profile: JamProfile, gamma_s):
    g = np.asarray(gamma_s, dtype=float)
    out = np.zeros_like(g)
    for shape, rate, weight in _mixture(model, profile):
        out = out + weight * special.gammainc(shape, rate * g)
    return float(out) if out.ndim == 0 else out
