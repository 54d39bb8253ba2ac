"""Hop-pattern generation and jamming combinatorics.

Interferers are assumed to pick their mode (and band) i.i.d. uniformly on
every hop, independently of each other and of the desired user. Under that
assumption a single interferer lands on the desired user's resource with
probability 1/N (MH), 1/Q (FH) or 1/(NQ) (MFH), and the number of
interferers on a hop is Binomial(K, P).

The PN generator is Philox-4x64-10 (numpy's ``Philox``) keyed by the seed,
so any stream can be reproduced from the seed alone.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .channel import admissible_modes
from .errors import DomainError, EnumerationLimitError

__all__ = [
    "SCHEMES",
    "CollisionModel",
    "HopPattern",
    "JamProfile",
    "pn_generator",
    "gen_pattern",
    "dump_pattern",
    "parse_pattern",
    "collision_prob",
    "hop_count_distribution",
    "p_clear",
    "p_jam_given",
    "p_jam_given_literal",
    "enumerate_profiles",
    "enumerate_profile_classes",
    "classify_mfh_case",
]

SCHEMES = ("MH", "FH", "MFH")

ENUMERATION_LIMIT = 10**7


def _check_scheme(scheme: str) -> str:
    s = scheme.upper()
    if s not in SCHEMES:
        raise DomainError(f"unknown hopping scheme {scheme!r}; expected one of {SCHEMES}")
    return s


@dataclass(frozen=True)
class CollisionModel:
    N: int
    Q: int = 1
    K: int = 0
    U: int = 1

    def __post_init__(self):
        for name, low in (("N", 1), ("Q", 1), ("K", 0), ("U", 1)):
            value = getattr(self, name)
            if int(value) != value or value < low:
                raise DomainError(f"{name} must be an integer >= {low}, got {value}")


@dataclass(frozen=True)
class HopPattern:
    """Per-hop resource assignment. ``modes`` is None for FH, ``bands`` None for MH."""

    modes: tuple[int, ...] | None
    bands: tuple[int, ...] | None
    hop_duration: float = 1.0

    def __post_init__(self):
        if self.modes is None and self.bands is None:
            raise DomainError("a hop pattern needs modes, bands or both")
        if self.modes is not None and self.bands is not None and len(self.modes) != len(self.bands):
            raise DomainError("modes and bands must have one entry per hop")

    def __len__(self) -> int:
        return len(self.modes if self.modes is not None else self.bands)

    @property
    def hops(self) -> list[tuple[int | None, int | None]]:
        n = len(self)
        modes = self.modes if self.modes is not None else (None,) * n
        bands = self.bands if self.bands is not None else (None,) * n
        return list(zip(modes, bands))


def pn_generator(seed: int) -> np.random.Generator:
    """Seeded counter-based PN source (Philox-4x64-10 keyed by ``seed``)."""
    return np.random.Generator(np.random.Philox(key=int(seed) & (2**64 - 1)))


def gen_pattern(seed: int, scheme: str, model: CollisionModel, U: int | None = None) -> HopPattern:
    """Deterministic hop pattern for ``seed``.

    Modes are uniform over the N admissible values -N/2 < l <= N/2, bands
    uniform over 1..Q. MH patterns carry no bands and FH patterns no modes.
    """
    scheme = _check_scheme(scheme)
    U = model.U if U is None else U
    if U < 1:
        raise DomainError(f"U must be positive, got {U}")
    rng = pn_generator(seed)
    modes = bands = None
    if scheme in ("MH", "MFH"):
        lowest = admissible_modes(model.N)[0]
        modes = tuple(int(v) for v in rng.integers(0, model.N, size=U) + lowest)
    if scheme in ("FH", "MFH"):
        bands = tuple(int(v) for v in rng.integers(1, model.Q + 1, size=U))
    return HopPattern(modes=modes, bands=bands)


def dump_pattern(pattern: HopPattern) -> str:
    """One hop per line: ``u,l_u[,q_u]``; FH hops leave the mode field empty."""
    lines = []
    for u, (l, q) in enumerate(pattern.hops, start=1):
        mode = "" if l is None else str(l)
        lines.append(f"{u},{mode}" if q is None else f"{u},{mode},{q}")
    return "\n".join(lines) + "\n"


def parse_pattern(text: str) -> HopPattern:
    modes, bands = [], []
    for lineno, line in enumerate(text.strip().splitlines(), start=1):
        parts = line.strip().split(",")
        if len(parts) not in (2, 3) or int(parts[0]) != lineno:
            raise DomainError(f"malformed pattern line {lineno}: {line!r}")
        modes.append(int(parts[1]) if parts[1] else None)
        bands.append(int(parts[2]) if len(parts) == 3 else None)
    has_modes = all(m is not None for m in modes)
    has_bands = all(b is not None for b in bands)
    return HopPattern(
        modes=tuple(modes) if has_modes else None,
        bands=tuple(bands) if has_bands else None,
    )


def classify_mfh_case(desired: tuple[int, int], interferer: tuple[int, int]) -> int:
    """MFH interference case for one interferer on one hop.

    1: mode and band differ; 2: same band, different mode; 3: same mode,
    different band; 4: same mode and band. Only case 4 survives mode
    decomposition and low-pass filtering.
    """
    (l, q), (lk, qk) = desired, interferer
    if lk != l:
        return 2 if qk == q else 1
    return 4 if qk == q else 3


def collision_prob(model: CollisionModel, scheme: str) -> float:
    """Per-hop probability that one interferer hits the desired resource."""
    scheme = _check_scheme(scheme)
    if scheme == "MH":
        return 1.0 / model.N
    if scheme == "FH":
        return 1.0 / model.Q
    return 1.0 / (model.N * model.Q)


def _check_prob(P: float) -> float:
    if not 0.0 <= P <= 1.0:
        raise DomainError(f"collision probability must lie in [0, 1], got {P}")
    return float(P)


def hop_count_distribution(K: int, P: float) -> np.ndarray:
    """Probability of D = 0..K interferers landing on one hop."""
    P = _check_prob(P)
    return np.array([math.comb(K, D) * P**D * (1.0 - P) ** (K - D) for D in range(K + 1)])


def p_clear(model: CollisionModel, P: float) -> float:
    """Probability that none of the U hops is hit: (1-P)^(K U)."""
    P = _check_prob(P)
    return (1.0 - P) ** (model.K * model.U)


def _check_V(model: CollisionModel, V: int) -> int:
    if int(V) != V or not 1 <= V <= model.U:
        raise DomainError(f"V must lie in [1, U={model.U}], got {V}")
    return int(V)


def p_jam_given(model: CollisionModel, V: int, P: float) -> float:
    """Probability that exactly V of the U hops are jammed (closed form).

    C(U,V) (1-P)^(K(U-V)) [1-(1-P)^K]^V, i.e. the V-fold sum over D_v with
    every inner binomial series summed.
    """
    V = _check_V(model, V)
    P = _check_prob(P)
    K, U = model.K, model.U
    hit = 1.0 - (1.0 - P) ** K
    return math.comb(U, V) * (1.0 - P) ** (K * (U - V)) * hit**V


def p_jam_given_literal(model: CollisionModel, V: int, P: float) -> float:
    """Same probability as the literal V-fold sum over D_1..D_V in [1, K]."""
    V = _check_V(model, V)
    P = _check_prob(P)
    K, U = model.K, model.U
    if K == 0:
        return 0.0
    if K**V > ENUMERATION_LIMIT:
        raise EnumerationLimitError(f"K^V = {K}^{V} exceeds the enumeration limit")
    per_hop = hop_count_distribution(K, P)[1:]
    grid = np.ones((1,) * V)
    for axis in range(V):
        shape = [1] * V
        shape[axis] = K
        grid = grid * per_hop.reshape(shape)
    return math.comb(U, V) * (1.0 - P) ** (K * (U - V)) * float(grid.sum())


@dataclass(frozen=True)
class JamProfile:
    """Which hops are jammed and by how many interferers.

    ``D`` lists the interferer counts of the V jammed hops. ``a`` hops share
    the count ``L``; the remaining V-a counts are pairwise distinct and
    differ from L when the profile is ``conforming``. ``L`` is None when
    a = 0.
    """

    U: int
    D: tuple[int, ...] = ()
    a: int = 0
    L: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "D", tuple(int(d) for d in self.D))
        if self.U < 1:
            raise DomainError(f"U must be positive, got {self.U}")
        if len(self.D) > self.U:
            raise DomainError(f"V={len(self.D)} exceeds U={self.U}")
        if any(d < 1 for d in self.D):
            raise DomainError(f"interferer counts must be >= 1, got {self.D}")
        if not 0 <= self.a <= len(self.D):
            raise DomainError(f"a must lie in [0, V], got {self.a}")
        if self.a == 0:
            if self.L is not None and self.L in self.D:
                raise DomainError("with a=0, L must not appear in D")
        elif self.L is None or sum(1 for d in self.D if d == self.L) != self.a:
            raise DomainError(f"a={self.a} must count the entries of D equal to L={self.L}")

    @property
    def V(self) -> int:
        return len(self.D)

    @property
    def others(self) -> tuple[int, ...]:
        """Counts of the V-a hops outside the shared-count group."""
        if self.a == 0:
            return self.D
        return tuple(d for d in self.D if d != self.L)

    @property
    def conforming(self) -> bool:
        rest = self.others
        return len(set(rest)) == len(rest)

    @classmethod
    def from_counts(cls, U: int, D: Iterable[int]) -> "JamProfile":
        """Canonical (a, L): L is the most frequent count, ties go to the larger count."""
        D = tuple(int(d) for d in D)
        if not D:
            return cls(U=U)
        counts = Counter(D)
        L = max(counts, key=lambda d: (counts[d], d))
        return cls(U=U, D=D, a=counts[L], L=L)


def enumerate_profiles(
    model: CollisionModel, V: int, P: float, conditional: bool = False
) -> list[tuple[JamProfile, float]]:
    """Every ordered assignment (D_1..D_V) with its probability.

    Probabilities are joint with "exactly these V hops-worth of counts",
    so they sum to ``p_jam_given(V)`` (``p_clear`` for V=0). With
    ``conditional=True`` they are normalised to sum to one.
    """
    P = _check_prob(P)
    K, U = model.K, model.U
    if V == 0:
        return [(JamProfile(U=U), 1.0 if conditional else p_clear(model, P))]
    V = _check_V(model, V)
    if K**V > ENUMERATION_LIMIT:
        raise EnumerationLimitError(f"K^V = {K}^{V} exceeds the enumeration limit")
    per_hop = hop_count_distribution(K, P)
    lead = math.comb(U, V) * (1.0 - P) ** (K * (U - V))
    out = []
    for D in itertools.product(range(1, K + 1), repeat=V):
        prob = lead * math.prod(per_hop[d] for d in D)
        out.append((JamProfile.from_counts(U, D), prob))
    if conditional:
        total = sum(p for _, p in out)
        out = [(prof, p / total) for prof, p in out]
    return out


def enumerate_profile_classes(model: CollisionModel, V: int, P: float) -> Iterator[tuple[JamProfile, float]]:
    """Profiles up to hop order: one entry per multiset of counts.

    The probability of a multiset aggregates its V!/prod(mult!) orderings,
    so the entries sum to ``p_jam_given(V)`` like ``enumerate_profiles``.
    """
    P = _check_prob(P)
    K, U = model.K, model.U
    if V == 0:
        yield JamProfile(U=U), p_clear(model, P)
        return
    V = _check_V(model, V)
    per_hop = hop_count_distribution(K, P)
    lead = math.comb(U, V) * (1.0 - P) ** (K * (U - V))
    for D in itertools.combinations_with_replacement(range(1, K + 1), V):
        orderings = math.factorial(V)
        for mult in Counter(D).values():
            orderings //= math.factorial(mult)
        yield JamProfile.from_counts(U, D), lead * orderings * math.prod(per_hop[d] for d in D)
