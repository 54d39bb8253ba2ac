"""Closed-form BER engine for MH, FH and MFH with EGC over U hops.

The conditional BER of binary DPSK (mu=1) or noncoherent FSK (mu=1/2) with
U-branch EGC is

    P_b(g) = 2^(1-2U) exp(-mu g) sum_{v1<U} c_{v1} (mu g)^v1.

For FSK this is the DPSK curve at half the SINR. ``Modulation(0.5,
printed_fsk=True)`` selects the variant with g^v1 in the polynomial, which
exceeds 1/2 near g = 0 once U >= 5 but reproduces the published FSK curves.

and every average BER here is E[P_b(gamma_s)] for a combined SINR that is
a sum of independent Gamma variables. Three evaluations are provided for a
fixed jam profile:

* ``"integral"``: partial fractions of the characteristic function, then
  term-by-term Gamma integrals, in exact rational arithmetic;
* ``"literal"``: the grouped P/Q/W Gamma-ratio sum (clear hops, the a hops
  sharing count L, the remaining V-a hops) in exact rational arithmetic;
* ``"series"``: E[g^k e^(-mu g)] / k! read off the power series of
  E[exp(-(mu - s) g)], whose coefficients are all positive, so nothing
  cancels however close the averages are.

Averages over jam states use the fact that hops are i.i.d.: the per-hop
Laplace transform is a (1-P)^K-weighted mixture over the interferer count,
and the U-hop transform is its U-th power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError, NumericalDiagnostic, PreconditionError
from .fading import SinrModel, decompose_cf, pole_groups, simple_pole_weights
from .hopping import (
    JamProfile,
    enumerate_profile_classes,
    hop_count_distribution,
    p_clear,
)
from .specfun import c_coeff_exact
from .system import SystemConfig, scheme_link

__all__ = [
    "Modulation",
    "DPSK",
    "FSK",
    "MfhGain",
    "conditional_ber",
    "egc_weights",
    "theorem2_ber",
    "theorem1_ber",
    "theorem1_ber_literal",
    "theorem1_ber_integral",
    "theorem1_ber_series",
    "reduced_ber",
    "average_ber",
    "average_ber_mh",
    "average_ber_fh",
    "average_ber_mfh",
    "mfh_map_sinr",
    "mfh_single_ber",
    "mfh_theorem_ber",
]


@dataclass(frozen=True)
class Modulation:
    mu: float
    printed_fsk: bool = False

    def __post_init__(self):
        if float(self.mu) not in (1.0, 0.5):
            raise DomainError(f"mu must be 1 (DPSK) or 0.5 (FSK), got {self.mu!r}")
        object.__setattr__(self, "mu", float(self.mu))

    @property
    def name(self) -> str:
        return "DPSK" if self.mu == 1.0 else "FSK"

    @property
    def poly_scale(self) -> float:
        """Factor s in the polynomial term c_{v1} (s g)^v1."""
        return 1.0 if self.printed_fsk else self.mu

    def poly_coeffs_exact(self, U: int) -> list[Fraction]:
        s = Fraction(self.poly_scale)
        return [c_coeff_exact(v1, U) * s**v1 for v1 in range(U)]

    def poly_coeffs(self, U: int) -> list[float]:
        return [float(c) for c in self.poly_coeffs_exact(U)]


DPSK = Modulation(1.0)
FSK = Modulation(0.5)


@dataclass(frozen=True)
class MfhGain:
    """FH-stage processing gain; the usual approximation is G = Q."""

    Q: int
    G: float | None = None

    def __post_init__(self):
        if int(self.Q) != self.Q or self.Q < 1:
            raise DomainError(f"Q must be a positive integer, got {self.Q}")
        if self.G is None:
            object.__setattr__(self, "G", float(self.Q))
        if not self.G >= 1:
            raise DomainError(f"G must be >= 1, got {self.G}")


def _mod(mod) -> Modulation:
    return mod if isinstance(mod, Modulation) else Modulation(mod)


def _check_U(U) -> int:
    if int(U) != U or U < 1:
        raise DomainError(f"U must be a positive integer, got {U}")
    return int(U)


def egc_weights(U: int) -> list[int]:
    """Integers c_{v1} * v1! for v1 = 0..U-1."""
    U = _check_U(U)
    return [sum(math.comb(2 * U - 1, v2) for v2 in range(U - v1)) for v1 in range(U)]


def conditional_ber(gamma_s, U: int, mod=DPSK):
    """BER given the EGC output SINR ``gamma_s`` (scalar or array)."""
    U = _check_U(U)
    mod = _mod(mod)
    g = np.asarray(gamma_s, dtype=float)
    poly = np.zeros_like(g)
    for c in reversed(mod.poly_coeffs(U)):
        poly = poly * g + c
    out = 2.0 ** (1 - 2 * U) * np.exp(-mod.mu * g) * poly
    return float(out) if out.ndim == 0 else out


def theorem2_ber(model: SinrModel, U: int, mod=DPSK) -> float:
    """Average BER with no collisions (single-user equivalent).

    2^(1-2U)/Gamma(mU) (m/(m+mu zeta))^(mU) sum c_{v1} Gamma(mU+v1) (s zeta/(m+mu zeta))^v1,
    with s the polynomial scale of ``mod``, accumulated in the log domain.
    """
    U = _check_U(U)
    mod = _mod(mod)
    mu = mod.mu
    m, zeta = model.m, model.zeta
    mU = m * U
    log_lead = (1 - 2 * U) * math.log(2.0) - math.lgamma(mU) + mU * (math.log(m) - math.log(m + mu * zeta))
    log_ratio = math.log(zeta) - math.log(m + mu * zeta)
    total = 0.0
    for v1, c in enumerate(mod.poly_coeffs(U)):
        total += math.exp(log_lead + math.log(c) + math.lgamma(mU + v1) + v1 * log_ratio)
    return total


def _laplace_coeffs(rate: float, shape: int, mu: float, length: int) -> tuple[float, list[float]]:
    """(log a, [C(shape+j-1, j) r^j]) for a Gamma(shape, rate) factor at mu."""
    r = 1.0 / (rate + mu)
    log_a = shape * (math.log(rate) - math.log(rate + mu))
    coeffs = [1.0]
    for j in range(1, length):
        coeffs.append(coeffs[-1] * r * (shape + j - 1) / j)
    return log_a, coeffs


def _truncated_mul(p: list[float], q: list[float], length: int) -> list[float]:
    out = [0 * p[0]] * length
    for i in range(length):
        pi = p[i]
        if pi == 0.0:
            continue
        for j in range(length - i):
            out[i + j] += pi * q[j]
    return out


def _moment_weights(U: int, mod: Modulation) -> list[float]:
    # polynomial coefficient times k!, since the series yields E[g^k e^(-mu g)] / k!
    return [float(c * math.factorial(k)) for k, c in enumerate(mod.poly_coeffs_exact(U))]


def _gamma_sum_ber(factors: Sequence[tuple[float, int]], U: int, mod: Modulation) -> float:
    """BER for a sum of independent Gamma(shape, rate) SINRs, given as (rate, shape)."""
    series = [1.0] + [0.0] * (U - 1)
    log_lead = 0.0
    for rate, shape in factors:
        log_a, coeffs = _laplace_coeffs(rate, shape, mod.mu, U)
        log_lead += log_a
        series = _truncated_mul(series, coeffs, U)
    total = sum(w * t for w, t in zip(_moment_weights(U, mod), series))
    return math.exp(log_lead + (1 - 2 * U) * math.log(2.0)) * total


def theorem1_ber_series(model: SinrModel, profile: JamProfile, mod=DPSK) -> float:
    factors = [(model.m / mean, n) for mean, n in pole_groups(model, profile)]
    return _gamma_sum_ber(factors, profile.U, _mod(mod))


def theorem1_ber_integral(model: SinrModel, profile: JamProfile, mod=DPSK) -> float:
    """Exact term-by-term Gamma integrals of the conditional BER against the pole-sum PDF.

    A term c/(p - z)^r is the density c x^(r-1) e^(-p x)/Gamma(r); against
    2^(1-2U) c_{v1} x^v1 e^(-mu x) it integrates to
    c 2^(1-2U) c_{v1} Gamma(r+v1) / (Gamma(r) (mu + p)^(r+v1)).
    """
    U = profile.U
    mod = _mod(mod)
    mu = Fraction(mod.mu)
    poly = mod.poly_coeffs_exact(U)
    pole_sum = decompose_cf(model, profile, exact=True)
    total = Fraction(0)
    for term in pole_sum.terms:
        r = term.order
        base = mu + term.pole
        for v1 in range(U):
            total += (
                term.coeff
                * poly[v1]
                * math.factorial(r + v1 - 1)
                / (math.factorial(r - 1) * base ** (r + v1))
            )
    return float(pole_sum.scale * total * Fraction(1, 2 ** (2 * U - 1)))


def _literal_groups(model: SinrModel, profile: JamProfile) -> list[tuple[float, int]]:
    """(average, multiplicity) for the clear, shared-count and remaining groups."""
    if not profile.conforming:
        raise PreconditionError(
            "profile does not fit the shared-count structure (a hops at L, the rest distinct); "
            "use the integral or series route"
        )
    m, U, V = model.m, profile.U, profile.V
    if len(model.delta_bar) != V:
        raise PreconditionError(f"model carries {len(model.delta_bar)} SINRs for V={V}")
    groups = []
    if U - V:
        groups.append((model.zeta, m * (U - V)))
    if profile.a:
        shared = {dbar for d, dbar in zip(profile.D, model.delta_bar) if d == profile.L}
        if len(shared) != 1:
            raise PreconditionError("hops sharing the count L must share one average SINR")
        delta_L = shared.pop()
        if model.delta_bar_L is not None and model.delta_bar_L != delta_L:
            raise PreconditionError("delta_bar_L disagrees with the per-hop averages")
        groups.append((delta_L, m * profile.a))
    for d, dbar in zip(profile.D, model.delta_bar):
        if profile.a == 0 or d != profile.L:
            groups.append((dbar, m))
    averages = [g for g, _ in groups]
    if len(set(averages)) != len(averages):
        raise PreconditionError("group averages coincide; the grouped form needs distinct poles")
    return groups


def _grouped_coefficients(groups: list[tuple[Fraction, int]], m: int) -> list[list[Fraction]]:
    # coefficient of (m - z delta_g)^-(n_g - u + 1): the (u-1)-th Taylor
    # coefficient in z of the deflated product at z = m/delta_g, times the
    # chain-rule factor (-delta_g)^-(u-1) for differentiating in (m - z delta_g)
    out = []
    for g, (delta_g, n_g) in enumerate(groups):
        z0 = m / delta_g
        taylor = [Fraction(1)] + [Fraction(0)] * (n_g - 1)
        for h, (delta_h, n_h) in enumerate(groups):
            if h == g:
                continue
            base = m - z0 * delta_h
            # (base - delta_h eps)^-n_h = sum_j C(n_h+j-1, j) delta_h^j base^-(n_h+j) eps^j
            factor = [math.comb(n_h + j - 1, j) * delta_h**j / base ** (n_h + j) for j in range(n_g)]
            taylor = _truncated_mul(taylor, factor, n_g)
        out.append([taylor[u - 1] / (-delta_g) ** (u - 1) for u in range(1, n_g + 1)])
    return out


def theorem1_ber_literal(model: SinrModel, profile: JamProfile, mod=DPSK) -> float:
    """Grouped Gamma-ratio form of the jammed-profile BER.

    m^(mU) 2^(1-2U) sum_{v1<U} c_{v1} sum_groups sum_u X_u Gamma(r+v1)
        / (delta^r Gamma(r) (mu + m/delta)^(r+v1)),   r = n - u + 1,

    with X_u the partial-fraction coefficients of prod (m - z delta)^(-n).
    The X_u alternate in sign and grow like inverse powers of the gaps
    between group averages, so the sum is carried out in exact rational
    arithmetic on the (exactly represented) float inputs.
    """
    U, m = profile.U, model.m
    mod = _mod(mod)
    mu = Fraction(mod.mu)
    poly = mod.poly_coeffs_exact(U)
    groups = [(Fraction(delta), n) for delta, n in _literal_groups(model, profile)]
    coeffs = _grouped_coefficients(groups, m)
    total = Fraction(0)
    for (delta, n), xs in zip(groups, coeffs):
        for u, x in enumerate(xs, start=1):
            r = n - u + 1
            if r < 1:
                raise NumericalDiagnostic(f"non-positive Gamma argument r={r}")
            for v1 in range(U):
                gamma_ratio = math.factorial(r + v1 - 1) // math.factorial(r - 1)
                total += x * poly[v1] * gamma_ratio / (delta**r * (mu + m / delta) ** (r + v1))
    return float(Fraction(m) ** (m * U) * total / 2 ** (2 * U - 1))


_THEOREM1_ROUTES = {
    "integral": theorem1_ber_integral,
    "literal": theorem1_ber_literal,
    "series": theorem1_ber_series,
}


def theorem1_ber(model: SinrModel, profile: JamProfile, mod=DPSK, method: str = "integral") -> float:
    """Average BER given a jam profile (V hops hit by D_v interferers)."""
    try:
        route = _THEOREM1_ROUTES[method]
    except KeyError:
        raise DomainError(f"unknown method {method!r}; expected one of {sorted(_THEOREM1_ROUTES)}") from None
    return route(model, profile, mod)


def reduced_ber(delta_bars: Sequence[float], mod=DPSK) -> float:
    """All U hops jammed with pairwise-distinct averages and m = 1.

    2^(1-2U) sum_v sum_{v1<U} M_v Gamma(v1+1) c_{v1} / delta_v * (delta_v/(1+mu delta_v))^(v1+1)
    """
    deltas = [float(d) for d in delta_bars]
    U = _check_U(len(deltas))
    mod = _mod(mod)
    mu = mod.mu
    poly = mod.poly_coeffs(U)
    if len(set(deltas)) != U:
        raise PreconditionError("reduced form needs pairwise-distinct averages; use theorem1_ber")
    weights = simple_pole_weights(deltas)
    total = 0.0
    for M, d in zip(weights, deltas):
        ratio = d / (1.0 + mu * d)
        for v1 in range(U):
            total += M * math.factorial(v1) * poly[v1] / d * ratio ** (v1 + 1)
    return 2.0 ** (1 - 2 * U) * total


# MFH mapping


def mfh_map_sinr(model: SinrModel, gain: MfhGain, profile: JamProfile, noise_fraction) -> SinrModel:
    """Scale clear-hop SNR by G and map jammed hops to delta (1 + (G-1) f).

    ``noise_fraction`` is E[noise / (noise + interference)] per jammed hop:
    a scalar, or a sequence aligned with ``profile.D``.
    """
    G = gain.G
    if np.ndim(noise_fraction) == 0:
        fractions = [float(noise_fraction)] * profile.V
    else:
        fractions = [float(f) for f in noise_fraction]
    if len(fractions) != profile.V or len(model.delta_bar) != profile.V:
        raise PreconditionError("need one average SINR and one noise fraction per jammed hop")
    if any(not 0.0 <= f <= 1.0 for f in fractions):
        raise DomainError("noise fractions must lie in [0, 1]")
    mapped = tuple(d * (1.0 + (G - 1.0) * f) for d, f in zip(model.delta_bar, fractions))
    mapped_L = None
    if model.delta_bar_L is not None and profile.a:
        mapped_L = next(x for d, x in zip(profile.D, mapped) if d == profile.L)
    return SinrModel(m=model.m, zeta=G * model.zeta, delta_bar=mapped, delta_bar_L=mapped_L)


def mfh_single_ber(model: SinrModel, gain: MfhGain, U: int, mod=DPSK) -> float:
    return theorem2_ber(replace(model, zeta=gain.G * model.zeta, delta_bar=(), delta_bar_L=None), U, mod)


def mfh_theorem_ber(
    model: SinrModel, gain: MfhGain, profile: JamProfile, noise_fraction, mod=DPSK, method: str = "integral"
) -> float:
    return theorem1_ber(mfh_map_sinr(model, gain, profile, noise_fraction), profile, mod, method)


# Averages over jam states


def _mixture_ber(P: float, K: int, U: int, m: int, mod: Modulation, clear_mean: float, jammed_means) -> float:
    # per-hop transform: sum_D w_D a_D (1 - s r_D)^-m, then raised to the U-th power
    if K == 0 or P == 0.0:
        return theorem2_ber(SinrModel(m=m, zeta=clear_mean), U, mod)
    mu = mod.mu
    w = hop_count_distribution(K, P)
    means = (clear_mean,) + tuple(jammed_means)
    hop = [0.0] * U
    for weight, mean in zip(w, means):
        if weight == 0.0:
            continue
        log_a, coeffs = _laplace_coeffs(m / mean, m, mu, U)
        scale = weight * math.exp(log_a)
        for j in range(U):
            hop[j] += scale * coeffs[j]
    total = [1.0] + [0.0] * (U - 1)
    for _ in range(U):
        total = _truncated_mul(total, hop, U)
    return 2.0 ** (1 - 2 * U) * float(sum(wt * t for wt, t in zip(_moment_weights(U, mod), total)))


def _enumerated_ber(system: SystemConfig, scheme: str, profile_method: str) -> float:
    link = scheme_link(system, scheme)
    cm = system.collision_model(scheme)
    mod = Modulation(system.mu, system.printed_fsk)
    clear = SinrModel(m=system.m, zeta=link.clear_mean)
    total = p_clear(cm, link.P) * theorem2_ber(clear, system.U, mod)
    for V in range(1, system.U + 1):
        if system.K == 0:
            break
        for profile, prob in enumerate_profile_classes(cm, V, link.P):
            if prob == 0.0:
                continue
            model = SinrModel(
                m=system.m,
                zeta=link.clear_mean,
                delta_bar=tuple(link.jammed_means[d - 1] for d in profile.D),
            )
            total += prob * theorem1_ber(model, profile, mod, method=profile_method)
    return total


def average_ber(system: SystemConfig, scheme: str, method: str = "series", profile_method: str = "series") -> float:
    """Average BER over all jam states for ``scheme`` in {MH, FH, MFH}.

    ``method="series"`` uses the i.i.d.-hop mixture transform;
    ``method="enumerate"`` sums p(U) P_e(U) + sum_V sum_profiles p P_e over
    every multiset of interferer counts, each profile evaluated with
    ``profile_method``.
    """
    scheme = scheme.upper()
    if scheme == "FH":
        return average_ber_fh(system, method, profile_method)
    if method == "series":
        link = scheme_link(system, scheme)
        mod = Modulation(system.mu, system.printed_fsk)
        return _mixture_ber(link.P, system.K, system.U, system.m, mod, link.clear_mean, link.jammed_means)
    if method == "enumerate":
        return _enumerated_ber(system, scheme, profile_method)
    raise DomainError(f"unknown averaging method {method!r}")


def average_ber_mh(system: SystemConfig, method: str = "series", profile_method: str = "series") -> float:
    return average_ber(system, "MH", method, profile_method)


def average_ber_fh(system: SystemConfig, method: str = "series", profile_method: str = "series") -> float:
    """FH is the MH computation with the band count in place of the mode count."""
    return average_ber_mh(replace(system, N=system.fh_bands or system.N), method, profile_method)


def average_ber_mfh(system: SystemConfig, method: str = "series", profile_method: str = "series") -> float:
    return average_ber(system, "MFH", method, profile_method)
