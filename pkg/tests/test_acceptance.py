"""Acceptance criteria, each checked at its stated tolerance.

Run under pytest for one test per criterion plus a PASS/FAIL summary, or
directly with ``python3 tests/test_acceptance.py`` for the summary lines
alone.
"""

from __future__ import annotations

import math
import random
import time

import numpy as np
from scipy import integrate

from vortexhop.ber import (
    FSK,
    DPSK,
    average_ber,
    conditional_ber,
    reduced_ber,
    theorem1_ber,
    theorem2_ber,
)
from vortexhop.channel import UcaGeometry, gain_closed, gain_direct
from vortexhop.fading import SinrModel, char_fn, decompose_cf, pdf_combined
from vortexhop.hopping import (
    CollisionModel,
    JamProfile,
    collision_prob,
    p_clear,
    p_jam_given,
    p_jam_given_literal,
)
from vortexhop.mc import McConfig, Scenario, dpsk_waveform_ber, estimate_ber
from vortexhop.system import SystemConfig, db_to_linear

RESULTS: dict[str, tuple[bool, str]] = {}


def record(key: str, title: str, ok: bool, detail: str) -> bool:
    RESULTS[key] = (ok, f"{title}: {detail}")
    return ok


# 1. single-user anchors

ANCHORS = {(4, 5): 5.4e-3, (4, 10): 1.3e-4, (2, 5): 4.0e-2, (2, 10): 6.0e-3}


def criterion_1():
    start = time.perf_counter()
    worst = 0.0
    parts = []
    for (U, db), quoted in ANCHORS.items():
        value = average_ber(SystemConfig(N=10, U=U, K=0, m=1, zeta=db_to_linear(db)), "MH")
        err = abs(value - quoted) / quoted
        worst = max(worst, err)
        parts.append(f"U={U}@{db}dB {value:.3e}")
    elapsed = time.perf_counter() - start
    ok = worst <= 0.20 and elapsed < 1.0
    return record("C1", "anchor values", ok, f"{', '.join(parts)}; worst rel err {worst:.3f} (tol 0.20), {elapsed * 1e3:.1f} ms")


# 2. MC against analytic on random scenarios


def random_scenarios(count=30, seed=20240611):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        system = SystemConfig(
            N=rng.randint(2, 16),
            Q=rng.randint(1, 8),
            U=rng.randint(1, 4),
            K=rng.randint(0, 10),
            m=rng.choice([1, 2]),
            mu=rng.choice([1.0, 0.5]),
            zeta=db_to_linear(rng.uniform(0.0, 20.0)),
        )
        out.append(Scenario(rng.choice(["MH", "FH", "MFH"]), system))
    return out


def criterion_2(trials=10**7):
    start = time.perf_counter()
    checked = skipped = 0
    worst = 0.0
    failures = []
    for i, scenario in enumerate(random_scenarios()):
        analytic = average_ber(scenario.system, scenario.scheme)
        if analytic < 1e-5:
            skipped += 1
            continue
        est = estimate_ber(McConfig(trials, seed=1000 + i), scenario)
        z = abs(est.p_hat - analytic) / est.stderr
        worst = max(worst, z)
        checked += 1
        if z > 3.0:
            failures.append(f"#{i} {scenario.scheme} z={z:.2f}")
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 300.0
    detail = f"{checked} checked, {skipped} below 1e-5; max |z| {worst:.2f} (tol 3); {elapsed:.0f} s (limit 300)"
    if failures:
        detail += "; failures: " + ", ".join(failures)
    return record("C2", "MC vs analytic", ok, detail)


# 3. probability normalisation


def criterion_3():
    worst_total = worst_literal = 0.0
    cases = 0
    for N in range(1, 17):
        for Q in range(1, 9):
            for K in range(0, 7):
                for U in range(1, 7):
                    cm = CollisionModel(N=N, Q=Q, K=K, U=U)
                    for scheme in ("MH", "FH", "MFH"):
                        P = collision_prob(cm, scheme)
                        jams = [p_jam_given(cm, V, P) for V in range(1, U + 1)]
                        worst_total = max(worst_total, abs(p_clear(cm, P) + sum(jams) - 1.0))
                        for V, closed in enumerate(jams, start=1):
                            worst_literal = max(worst_literal, abs(p_jam_given_literal(cm, V, P) - closed))
                        cases += 1
    ok = worst_total <= 1e-12 and worst_literal <= 1e-12
    return record(
        "C3",
        "probability normalisation",
        ok,
        f"{cases} grid cases; max |sum - 1| {worst_total:.1e}, max |literal - closed| {worst_literal:.1e} (tol 1e-12)",
    )


# 4. reduction identities


def criterion_4():
    rng = random.Random(7)
    worst_reduced = 0.0
    for _ in range(200):
        U = rng.randint(1, 6)
        deltas = rng.sample([round(rng.uniform(0.1, 40.0), 6) for _ in range(3 * U)], U)
        if len(set(deltas)) < U:
            continue
        mod = rng.choice([DPSK, FSK])
        profile = JamProfile(U=U, D=tuple(range(1, U + 1)))
        grouped = theorem1_ber(SinrModel(1, 100.0, tuple(deltas)), profile, mod, method="literal")
        worst_reduced = max(worst_reduced, abs(grouped - reduced_ber(deltas, mod)))
    worst_single = max(
        abs(theorem2_ber(SinrModel(1, z), 1, DPSK) - 1.0 / (2.0 * (1.0 + z))) for z in np.logspace(-3, 4, 200)
    )
    identical = all(
        average_ber(s, "MFH") == average_ber(s, "MH")
        for s in (
            SystemConfig(N=N, Q=1, G=1.0, U=U, K=K, m=m, mu=mu, zeta=z)
            for N in (2, 7, 16)
            for U in (1, 3, 5)
            for K in (0, 1, 6, 10)
            for m in (1, 2)
            for mu in (1.0, 0.5)
            for z in (0.5, 10.0, 300.0)
        )
    )
    ok = worst_reduced <= 1e-10 and worst_single <= 1e-12 and identical
    return record(
        "C4",
        "reduction identities",
        ok,
        f"grouped vs reduced {worst_reduced:.1e} (tol 1e-10); one-hop form {worst_single:.1e} (tol 1e-12); "
        f"MFH(G=Q=1) == MH bitwise: {identical}",
    )


# 5. partial fractions and the combined density


def density_scenarios(count=5, seed=11):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        m = rng.choice([1, 2])
        U = rng.randint(2, 4)
        V = rng.randint(1, U)
        zeta = db_to_linear(rng.uniform(0, 20))
        counts = rng.sample(range(1, 11), V)
        deltas = tuple(zeta / (1 + d * zeta) for d in counts)
        out.append((SinrModel(m, zeta, deltas), JamProfile.from_counts(U, counts)))
    return out


def criterion_5():
    rng = np.random.default_rng(5)
    worst_cf = 0.0
    for _ in range(100):
        m = int(rng.integers(1, 4))
        U = int(rng.integers(1, 5))
        V = int(rng.integers(0, U + 1))
        model = SinrModel(m, float(rng.uniform(0.1, 100)), tuple(rng.uniform(0.01, 50, size=V)))
        profile = JamProfile.from_counts(U, range(1, V + 1))
        w = float(rng.uniform(-10, 10))
        pf = decompose_cf(model, profile, exact=True)
        worst_cf = max(worst_cf, abs(pf(1j * w) - char_fn(model, profile, w)))
    worst_mass = worst_mean = worst_dual = 0.0
    for model, profile in density_scenarios():
        pdf = lambda g: pdf_combined(model, profile, g)
        mass = integrate.quad(pdf, 0, np.inf, limit=400, epsabs=1e-13)[0]
        mean = integrate.quad(lambda g: g * pdf(g), 0, np.inf, limit=400, epsabs=1e-13)[0]
        expected = (profile.U - profile.V) * model.zeta + sum(model.delta_bar)
        worst_mass = max(worst_mass, abs(mass - 1.0))
        worst_mean = max(worst_mean, abs(mean - expected))
    dual_model, dual_profile = density_scenarios()[0]
    scale = 1.0 / ((dual_profile.U - dual_profile.V) * dual_model.zeta + sum(dual_model.delta_bar))
    for w in np.linspace(-5, 5, 20) * scale:
        f = lambda g, fn: pdf_combined(dual_model, dual_profile, g) * fn(w * g)
        re = integrate.quad(f, 0, np.inf, args=(math.cos,), limit=800, epsabs=1e-12)[0]
        im = integrate.quad(f, 0, np.inf, args=(math.sin,), limit=800, epsabs=1e-12)[0]
        worst_dual = max(worst_dual, abs(complex(re, im) - char_fn(dual_model, dual_profile, w)))
    ok = worst_cf < 1e-8 and worst_mass <= 1e-6 and worst_mean <= 1e-6 and worst_dual < 1e-6
    return record(
        "C5",
        "partial fractions / density",
        ok,
        f"CF rebuild {worst_cf:.1e} (tol 1e-8); mass {worst_mass:.1e}, mean {worst_mean:.1e} (tol 1e-6); "
        f"CF<->PDF {worst_dual:.1e} (tol 1e-6)",
    )


# 6. channel convergence


def criterion_6():
    rng = random.Random(6)
    worst = 0.0
    for _ in range(20):
        wavelength = rng.uniform(0.01, 0.3)
        R = rng.uniform(0.05, 1.0)
        # keep 2 pi R sin(theta) / lambda <= 5
        smax = min(1.0, 5.0 * wavelength / (2 * math.pi * R))
        theta = math.asin(rng.uniform(0.0, smax * 0.999))
        geom = UcaGeometry(N=4096, R=R, d=rng.uniform(10 * R, 1000.0), theta=theta, wavelength=wavelength)
        l = rng.randint(-8, 8)
        h = gain_closed(geom, l)
        worst = max(worst, abs(gain_direct(geom, l) - h) / abs(h))
    ortho = 0.0
    for N in (8, 64, 512, 4096):
        geom = UcaGeometry(N=N, R=0.5, d=100.0, theta=0.0, wavelength=0.1)
        for l in range(-min(10, (N - 1) // 2), min(10, N // 2) + 1):
            if l:
                ortho = max(ortho, abs(gain_direct(geom, l)) / N)
    ok = worst < 1e-3 and ortho < 1e-12
    return record("C6", "channel convergence", ok, f"max rel err {worst:.1e} (tol 1e-3); boresight |h|/N {ortho:.1e} (tol 1e-12)")


# 7. qualitative orderings


def criterion_7():
    issues = []
    snr_grid = np.linspace(0, 30, 40)
    for scheme in ("MH", "FH", "MFH"):
        for U in (1, 2, 4, 8):
            for K in (0, 5, 10):
                for mu in (1.0, 0.5):
                    ys = [average_ber(SystemConfig(N=10, Q=5, U=U, K=K, mu=mu, zeta=db_to_linear(x)), scheme) for x in snr_grid]
                    if not all(b < a for a, b in zip(ys, ys[1:])):
                        issues.append(f"zeta {scheme} U={U} K={K} mu={mu}")
    for U in (1, 2, 4):
        for K in (1, 10):
            ys = [average_ber(SystemConfig(N=N, Q=5, U=U, K=K, zeta=10.0), "MH") for N in range(2, 42)]
            if not all(b < a for a, b in zip(ys, ys[1:])):
                issues.append(f"N*Q via N, U={U} K={K}")
            ys = [average_ber(SystemConfig(N=10, Q=Q, U=U, K=K, zeta=10.0), "MFH") for Q in range(1, 41)]
            if not all(b < a for a, b in zip(ys, ys[1:])):
                issues.append(f"N*Q via Q, U={U} K={K}")
        for scheme in ("MH", "FH", "MFH"):
            ys = [average_ber(SystemConfig(N=10, Q=5, U=U, K=K, zeta=10.0), scheme) for K in range(0, 40)]
            if not all(b > a for a, b in zip(ys, ys[1:])):
                issues.append(f"K {scheme} U={U}")
    pairs = 0
    for U in (1, 2, 4, 8):
        for K in (0, 3, 10):
            for Q in (2, 5, 8):
                for x in np.linspace(0, 30, 16):
                    s = SystemConfig(N=10, Q=Q, U=U, K=K, zeta=db_to_linear(x))
                    pairs += 1
                    if not average_ber(s, "MFH") <= average_ber(s, "MH"):
                        issues.append(f"MFH>MH U={U} K={K} Q={Q} {x:.1f}dB")
                    for scheme in ("MH", "MFH"):
                        if not average_ber(s, scheme) <= average_ber(s.with_(mu=0.5), scheme):
                            issues.append(f"DPSK>FSK {scheme} U={U} K={K} Q={Q} {x:.1f}dB")
    ok = not issues
    detail = f"40-point grids in zeta, N*Q and K; {pairs} MFH/MH and DPSK/FSK pairs"
    if issues:
        detail += "; violations: " + "; ".join(issues[:6])
    return record("C7", "monotonicity and ordering", ok, detail)


# 8. zero-SINR value and waveform sanity


def criterion_8():
    worst = max(abs(conditional_ber(0.0, U) - 0.5) for U in range(1, 9))
    gamma = 1.0
    est = dpsk_waveform_ber(gamma, 10**6, seed=8)
    z = abs(est.p_hat - 0.5 * math.exp(-gamma)) / est.stderr
    ok = worst <= 1e-12 and z <= 3.0
    return record("C8", "zero-SINR BER and waveform DPSK", ok, f"max |P_b(0) - 1/2| {worst:.1e}; waveform p_hat {est.p_hat:.5f} vs {0.5 * math.exp(-gamma):.5f}, |z| {z:.2f}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


def test_criterion_1_anchor_values():
    assert criterion_1(), RESULTS["C1"][1]


def test_criterion_2_mc_agreement():
    assert criterion_2(), RESULTS["C2"][1]


def test_criterion_3_probability_normalisation():
    assert criterion_3(), RESULTS["C3"][1]


def test_criterion_4_reduction_identities():
    assert criterion_4(), RESULTS["C4"][1]


def test_criterion_5_partial_fractions_and_density():
    assert criterion_5(), RESULTS["C5"][1]


def test_criterion_6_channel_convergence():
    assert criterion_6(), RESULTS["C6"][1]


def test_criterion_7_orderings():
    assert criterion_7(), RESULTS["C7"][1]


def test_criterion_8_zero_sinr_and_waveform():
    assert criterion_8(), RESULTS["C8"][1]


def summary_lines() -> list[str]:
    return [f"[{'PASS' if ok else 'FAIL'}] {key} {text}" for key, (ok, text) in sorted(RESULTS.items())]


if __name__ == "__main__":
    for index, check in enumerate(CRITERIA, start=1):
        check()
        ok, text = RESULTS[f"C{index}"]
        print(f"[{'PASS' if ok else 'FAIL'}] C{index} {text}", flush=True)
