"""Monte Carlo BER estimation.

MODEL fidelity draws, per hop, the interferer count from Binomial(K, P) and
a Gamma(m, mean/m) SINR whose mean is the clear SNR or the jammed average,
sums the hops and flags an error with probability ``conditional_ber``.
PHYSICAL fidelity instead draws the desired and every interferer power gain
and forms the instantaneous SINR ratio, which is not Gamma distributed; the
gap between the two measures how much the Gamma-SINR assumption matters.

Random words come from a Philox-4x64 stream keyed by the seed. Trial t owns
a fixed block of counter values, so any split of the trials into batches or
threads reproduces the same error count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .ber import Modulation, conditional_ber
from .errors import ConfigError, DomainError
from .hopping import hop_count_distribution, pn_generator
from .system import SystemConfig, scheme_link

__all__ = [
    "Fidelity",
    "McConfig",
    "BerEstimate",
    "Scenario",
    "GapReport",
    "thread_count",
    "trial_layout",
    "simulate_symbol",
    "simulate_block",
    "estimate_ber",
    "estimate_avg_sinr",
    "estimate_noise_fraction",
    "physical_gap_report",
    "dpsk_waveform_ber",
]

_U64 = 2**64
_TO_UNIT = 2.0**-53
_CHUNK_WORDS = 2**22


class Fidelity(str, Enum):
    MODEL = "MODEL"
    PHYSICAL = "PHYSICAL"


@dataclass(frozen=True)
class McConfig:
    trials: int
    seed: int = 0
    fidelity: Fidelity = Fidelity.MODEL
    batch: int | None = None

    def __post_init__(self):
        if isinstance(self.trials, bool) or int(self.trials) != self.trials:
            raise ConfigError("mc.trials", f"must be an integer, got {self.trials!r}")
        if self.trials < 1000:
            raise ConfigError("mc.trials", f"must be at least 1000, got {self.trials}")
        object.__setattr__(self, "trials", int(self.trials))
        if int(self.seed) != self.seed or not 0 <= self.seed < _U64:
            raise ConfigError("mc.seed", f"must be an integer in [0, 2^64), got {self.seed!r}")
        object.__setattr__(self, "seed", int(self.seed))
        try:
            object.__setattr__(self, "fidelity", Fidelity(str(getattr(self.fidelity, "value", self.fidelity)).upper()))
        except ValueError:
            raise ConfigError("mc.fidelity", f"must be MODEL or PHYSICAL, got {self.fidelity!r}") from None
        batch = self.trials if self.batch is None else self.batch
        if int(batch) != batch or batch < 1:
            raise ConfigError("mc.batch", f"must be a positive integer, got {batch!r}")
        if self.trials % int(batch):
            raise ConfigError("mc.batch", f"{batch} does not divide trials={self.trials}")
        object.__setattr__(self, "batch", int(batch))

    @property
    def n_batches(self) -> int:
        return self.trials // self.batch


class BerEstimate(NamedTuple):
    errors: int
    trials: int

    @property
    def p_hat(self) -> float:
        return self.errors / self.trials

    @property
    def stderr(self) -> float:
        p = self.p_hat
        return math.sqrt(p * (1.0 - p) / self.trials)


@dataclass(frozen=True)
class Scenario:
    scheme: str
    system: SystemConfig

    def __post_init__(self):
        object.__setattr__(self, "scheme", self.scheme.upper())
        scheme_link(self.system, self.scheme)


class GapReport(NamedTuple):
    model: BerEstimate
    physical: BerEstimate
    gap: float


def thread_count() -> int:
    """Worker cap from VORTEXHOP_THREADS, else the CPU count."""
    raw = os.environ.get("VORTEXHOP_THREADS")
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ConfigError("VORTEXHOP_THREADS", f"must be a positive integer, got {raw!r}") from None
        if value < 1:
            raise ConfigError("VORTEXHOP_THREADS", f"must be a positive integer, got {raw!r}")
        return value
    return os.cpu_count() or 1


def trial_layout(system: SystemConfig, fidelity: Fidelity) -> tuple[int, int]:
    """(words used, words reserved) per trial; the reservation is a multiple of 4.

    Word 0 decides the error; each hop then uses one word for the
    interferer count and m words for its Gamma draw. PHYSICAL appends K*m
    words per hop for the interferer gains.
    """
    used = 1 + system.U * (1 + system.m)
    if Fidelity(fidelity) is Fidelity.PHYSICAL:
        used += system.U * system.K * system.m
    return used, -(-used // 4) * 4


def _uniforms(seed: int, first_trial: int, n_trials: int, stride: int) -> np.ndarray:
    bitgen = np.random.Philox(key=seed, counter=[first_trial * stride // 4, 0, 0, 0])
    raw = bitgen.random_raw(n_trials * stride).reshape(n_trials, stride)
    return (raw >> np.uint64(11)).astype(np.float64) * _TO_UNIT


def _unit_gamma(u: np.ndarray, m: int) -> np.ndarray:
    # sum of m unit exponentials scaled to mean 1, over the last axis
    return -np.log1p(-u).sum(axis=-1) / m


def simulate_block(scenario: Scenario, fidelity: Fidelity, seed: int, first_trial: int, n_trials: int) -> int:
    """Error count over trials [first_trial, first_trial + n_trials)."""
    system = scenario.system
    U, K, m = system.U, system.K, system.m
    link = scheme_link(system, scenario.scheme)
    fidelity = Fidelity(fidelity)
    _, stride = trial_layout(system, fidelity)
    u = _uniforms(seed, first_trial, n_trials, stride)
    hop_words = u[:, 1 : 1 + U * (1 + m)].reshape(n_trials, U, 1 + m)
    cdf = np.cumsum(hop_count_distribution(K, link.P))[:-1]
    D = np.searchsorted(cdf, hop_words[:, :, 0], side="right")
    g = _unit_gamma(hop_words[:, :, 1:], m)
    if fidelity is Fidelity.MODEL:
        means = np.array((link.clear_mean,) + link.jammed_means)
        sinr = means[D] * g
    else:
        sinr = _physical_sinr(system, link, u, D, g, scenario.scheme == "MFH")
    gamma_s = sinr.sum(axis=1)
    mod = Modulation(system.mu, system.printed_fsk)
    return int(np.count_nonzero(u[:, 0] < conditional_ber(gamma_s, U, mod)))


def _physical_sinr(system: SystemConfig, link, u: np.ndarray, D: np.ndarray, g: np.ndarray, mfh: bool) -> np.ndarray:
    U, K, m, zeta = system.U, system.K, system.m, system.zeta
    if K == 0:
        return link.clear_mean * g
    base = 1 + U * (1 + m)
    words = u[:, base : base + U * K * m].reshape(u.shape[0], U, K, m)
    gains = _unit_gamma(words, m)
    active = np.arange(1, K + 1) <= D[:, :, None]
    interference = system.jsr * zeta * np.where(active, gains, 0.0).sum(axis=2)
    noise_fraction = 1.0 / (1.0 + interference)
    level = zeta * noise_fraction
    if mfh:
        # despreading lifts the noise share of the disturbance by G
        level = level * (1.0 + (system.gain - 1.0) * noise_fraction)
    # unjammed hops use the clear-hop mean exactly, as in MODEL fidelity
    return np.where(D == 0, link.clear_mean, level) * g


def simulate_symbol(scenario: Scenario, rng: np.random.Generator) -> int:
    """One MODEL-fidelity symbol from a caller-supplied generator; returns 1 on a bit error."""
    system = scenario.system
    link = scheme_link(system, scenario.scheme)
    gamma_s = 0.0
    for _ in range(system.U):
        D = int(rng.binomial(system.K, link.P)) if system.K else 0
        mean = link.clear_mean if D == 0 else link.jammed_means[D - 1]
        gamma_s += rng.gamma(system.m, mean / system.m)
    return int(rng.random() < conditional_ber(gamma_s, system.U, Modulation(system.mu, system.printed_fsk)))


def _work_items(config: McConfig, chunk: int) -> list[tuple[int, int, int]]:
    items = []
    for b in range(config.n_batches):
        start = b * config.batch
        stop = start + config.batch
        for first in range(start, stop, chunk):
            items.append((b, first, min(chunk, stop - first)))
    return items


def estimate_ber(config: McConfig, scenario: Scenario, threads: int | None = None) -> BerEstimate:
    """Deterministic BER estimate; identical for any batch size or thread count."""
    _, stride = trial_layout(scenario.system, config.fidelity)
    chunk = max(1024, _CHUNK_WORDS // stride)
    items = _work_items(config, chunk)
    workers = min(threads or thread_count(), len(items))

    def run(item):
        _, first, n = item
        return simulate_block(scenario, config.fidelity, config.seed, first, n)

    if workers <= 1:
        counts = [run(item) for item in items]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(run, items))
    return BerEstimate(errors=sum(counts), trials=config.trials)


def batch_error_counts(config: McConfig, scenario: Scenario) -> list[int]:
    """Per-batch error counts; they sum to ``estimate_ber(...).errors``."""
    _, stride = trial_layout(scenario.system, config.fidelity)
    chunk = max(1024, _CHUNK_WORDS // stride)
    counts = [0] * config.n_batches
    for b, first, n in _work_items(config, chunk):
        counts[b] += simulate_block(scenario, config.fidelity, config.seed, first, n)
    return counts


def _interference_draws(system: SystemConfig, D: int, trials: int, seed: int, m: int | None):
    if int(D) != D or not 0 <= D:
        raise DomainError(f"D must be a non-negative integer, got {D}")
    if trials < 10_000:
        raise DomainError(f"need at least 10^4 trials, got {trials}")
    m = system.m if m is None else m
    rng = pn_generator(seed)
    chunk = 1 << 20
    for start in range(0, trials, chunk):
        n = min(chunk, trials - start)
        desired = rng.gamma(m, 1.0 / m, size=n)
        interferers = rng.gamma(m, 1.0 / m, size=(n, D)).sum(axis=1) if D else np.zeros(n)
        yield desired, system.jsr * system.zeta * interferers


def estimate_avg_sinr(system: SystemConfig, D: int, trials: int = 10**6, seed: int = 0, m: int | None = None) -> float:
    """Sample mean of zeta*g / (1 + jsr*zeta*sum_{k<=D} g_k) over Nakagami-m power gains."""
    total = 0.0
    for desired, interference in _interference_draws(system, D, trials, seed, m):
        total += float((system.zeta * desired / (1.0 + interference)).sum())
    return total / trials


def estimate_noise_fraction(system: SystemConfig, D: int, trials: int = 10**6, seed: int = 0, m: int | None = None) -> float:
    """Sample mean of noise / (noise + interference) on a hop with D interferers."""
    total = 0.0
    for _, interference in _interference_draws(system, D, trials, seed, m):
        total += float((1.0 / (1.0 + interference)).sum())
    return total / trials


def physical_gap_report(scenario: Scenario, trials: int, seed: int = 0) -> GapReport:
    """Run MODEL and PHYSICAL fidelity on the same words; gap is (physical - model) / model."""
    model = estimate_ber(McConfig(trials, seed, Fidelity.MODEL), scenario)
    physical = estimate_ber(McConfig(trials, seed, Fidelity.PHYSICAL), scenario)
    if model.errors == physical.errors:
        gap = 0.0
    elif model.errors == 0:
        gap = math.inf
    else:
        gap = (physical.errors - model.errors) / model.errors
    return GapReport(model, physical, gap)


def dpsk_waveform_ber(gamma: float, symbols: int, seed: int = 0) -> BerEstimate:
    """Two-symbol differential detector over complex Gaussian noise at SNR ``gamma``.

    Each symbol pair is (1, +-1) scaled by sqrt(gamma) plus CN(0, 1) noise;
    the bit is decided by the sign of Re(r1 * conj(r0)). The exact error
    rate is exp(-gamma) / 2.
    """
    if not gamma >= 0:
        raise DomainError(f"gamma must be non-negative, got {gamma}")
    rng = pn_generator(seed)
    errors = 0
    chunk = 1 << 20
    amp = math.sqrt(gamma)
    for start in range(0, symbols, chunk):
        n = min(chunk, symbols - start)
        bits = rng.integers(0, 2, size=n)
        noise = (rng.standard_normal((2, n)) + 1j * rng.standard_normal((2, n))) * math.sqrt(0.5)
        r0 = amp + noise[0]
        r1 = amp * (1 - 2 * bits) + noise[1]
        decided = (r1 * np.conj(r0)).real < 0
        errors += int(np.count_nonzero(decided != bits.astype(bool)))
    return BerEstimate(errors=errors, trials=symbols)
