"""Scenario parameters shared by the analytic engine, Monte Carlo and CLI."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

from .errors import DomainError
from .fading import check_m
from .hopping import SCHEMES, CollisionModel, collision_prob

__all__ = ["SystemConfig", "LinkStats", "scheme_link", "db_to_linear", "linear_to_db"]

MODULATIONS = {1.0: "DPSK", 0.5: "FSK"}


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class SystemConfig:
    """One link scenario.

    ``zeta`` is the linear per-hop average SNR of a clear hop. A hop hit by
    D interferers has average SINR ``zeta / (1 + D * jsr * zeta)``, where
    ``jsr`` is each interferer's received power relative to the desired
    signal, unless ``sinr_table`` lists the averages for D = 1..K directly.
    ``noise_fraction_table`` likewise overrides E[noise / (noise +
    interference)] used by the MFH SINR mapping. ``G`` defaults to Q. FH
    hops over ``fh_bands`` channels, defaulting to N so FH and MH are
    compared at matched hop counts. ``printed_fsk`` selects the FSK
    conditional BER variant without mu inside the polynomial.
    """

    N: int = 10
    Q: int = 1
    U: int = 1
    K: int = 0
    m: int = 1
    mu: float = 1.0
    zeta: float = 10.0
    G: float | None = None
    jsr: float = 1.0
    sinr_table: tuple[float, ...] | None = None
    noise_fraction_table: tuple[float, ...] | None = None
    fh_bands: int | None = None
    printed_fsk: bool = False

    def __post_init__(self):
        for name, low in (("N", 1), ("Q", 1), ("U", 1), ("K", 0)):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < low:
                raise DomainError(f"{name} must be an integer >= {low}, got {value!r}")
            object.__setattr__(self, name, int(value))
        object.__setattr__(self, "m", check_m(self.m))
        if float(self.mu) not in MODULATIONS:
            raise DomainError(f"mu must be 1 (DPSK) or 0.5 (FSK), got {self.mu!r}")
        object.__setattr__(self, "mu", float(self.mu))
        if not self.zeta > 0:
            raise DomainError(f"zeta must be positive, got {self.zeta}")
        if self.G is not None and not self.G >= 1:
            raise DomainError(f"processing gain G must be >= 1, got {self.G}")
        if not self.jsr >= 0:
            raise DomainError(f"jsr must be non-negative, got {self.jsr}")
        if self.fh_bands is not None and (int(self.fh_bands) != self.fh_bands or self.fh_bands < 1):
            raise DomainError(f"fh_bands must be a positive integer, got {self.fh_bands}")
        for name in ("sinr_table", "noise_fraction_table"):
            table = getattr(self, name)
            if table is None:
                continue
            table = tuple(float(x) for x in table)
            object.__setattr__(self, name, table)
            if len(table) < self.K:
                raise DomainError(f"{name} needs an entry for every D = 1..K (K={self.K})")
        if self.sinr_table is not None and any(not x > 0 for x in self.sinr_table):
            raise DomainError("sinr_table entries must be positive")
        if self.noise_fraction_table is not None and any(not 0 <= x <= 1 for x in self.noise_fraction_table):
            raise DomainError("noise_fraction_table entries must lie in [0, 1]")

    @property
    def gain(self) -> float:
        return float(self.Q) if self.G is None else float(self.G)

    @property
    def modulation(self) -> str:
        return MODULATIONS[self.mu]

    def delta_bar(self, D: int) -> float:
        """Average SINR of a hop jammed by D interferers."""
        if D < 1:
            raise DomainError(f"D must be >= 1, got {D}")
        if self.sinr_table is not None:
            return self.sinr_table[D - 1]
        return self.zeta / (1.0 + D * self.jsr * self.zeta)

    def noise_fraction(self, D: int) -> float:
        if self.noise_fraction_table is not None:
            return self.noise_fraction_table[D - 1]
        return 1.0 / (1.0 + D * self.jsr * self.zeta)

    def mfh_delta_bar(self, D: int) -> float:
        """Jammed-hop SINR after FH despreading: delta + (G-1) * E[noise fraction] * delta."""
        delta = self.delta_bar(D)
        return delta * (1.0 + (self.gain - 1.0) * self.noise_fraction(D))

    def collision_model(self, scheme: str) -> CollisionModel:
        scheme = scheme.upper()
        if scheme == "FH":
            return CollisionModel(N=1, Q=self.fh_bands or self.N, K=self.K, U=self.U)
        return CollisionModel(N=self.N, Q=self.Q, K=self.K, U=self.U)

    def with_(self, **changes) -> "SystemConfig":
        return replace(self, **changes)


class LinkStats(NamedTuple):
    """Per-hop statistics a scheme induces: collision prob, clear mean, jammed means for D=1..K."""

    P: float
    clear_mean: float
    jammed_means: tuple[float, ...]


def scheme_link(system: SystemConfig, scheme: str) -> LinkStats:
    scheme = scheme.upper()
    if scheme not in SCHEMES:
        raise DomainError(f"unknown hopping scheme {scheme!r}")
    P = collision_prob(system.collision_model(scheme), scheme)
    Ks = range(1, system.K + 1)
    if scheme == "MFH":
        return LinkStats(P, system.gain * system.zeta, tuple(system.mfh_delta_bar(D) for D in Ks))
    return LinkStats(P, system.zeta, tuple(system.delta_bar(D) for D in Ks))
