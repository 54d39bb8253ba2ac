"""Config-driven BER sweeps: parsing, validation, evaluation and CSV output.

A config is an INI file with sections ``[experiment]``, ``[system]``,
``[mc]`` and ``[output]``; the annotated presets under
``vortexhop/presets`` document every key.
"""

from __future__ import annotations

import configparser
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import NamedTuple, Sequence

from .ber import average_ber
from .errors import ConfigError, DomainError, NumericalDiagnostic
from .hopping import SCHEMES
from .mc import BerEstimate, McConfig, Scenario, estimate_ber, thread_count
from .system import SystemConfig, db_to_linear

__all__ = [
    "AXES",
    "PRESETS",
    "ExperimentSpec",
    "Row",
    "parse_grid",
    "load_spec",
    "parse_spec",
    "run_experiment",
    "emit_csv",
    "format_csv",
    "preset_paths",
    "row_seed",
]

AXES = ("SNR_dB", "SINR_dB", "K", "N", "Q")
INTEGER_AXES = ("K", "N", "Q")
CSV_HEADER = "scheme,U,axis,value,ber_analytic,ber_mc,mc_stderr"
MODULATION_NAMES = {"DPSK": 1.0, "FSK": 0.5}

PRESETS = {
    "fig3": ("fig3.cfg",),
    "fig4": ("fig4.cfg",),
    "fig5": ("fig5.cfg",),
    "fig6": ("fig6.cfg",),
    "fig7": ("fig7_5dB.cfg", "fig7_10dB.cfg"),
    "fig8": ("fig8.cfg",),
    "fig9": ("fig9.cfg",),
}

_GOLDEN = 0x9E3779B97F4A7C15


@dataclass(frozen=True)
class ExperimentSpec:
    """One sweep. ``base`` fixes every parameter not on an axis; its U is replaced per hop count."""

    name: str
    schemes: tuple[str, ...]
    axis: str
    grid: tuple[float, ...]
    hops: tuple[int, ...]
    base: SystemConfig
    mus: tuple[float, ...] = (1.0,)
    axis2: str | None = None
    grid2: tuple[float, ...] = ()
    mc: McConfig | None = None
    csv: str | None = None
    plot: str | None = None
    source: Path | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.schemes:
            raise ConfigError("experiment.schemes", "at least one scheme is required")
        for s in self.schemes:
            if s not in SCHEMES:
                raise ConfigError("experiment.schemes", f"unknown scheme {s!r}; expected {', '.join(SCHEMES)}")
        if self.axis not in AXES:
            raise ConfigError("experiment.axis", f"unknown axis {self.axis!r}; expected one of {', '.join(AXES)}")
        if not self.grid:
            raise ConfigError("experiment.grid", "grid is empty")
        if not self.hops:
            raise ConfigError("experiment.hops", "at least one hop count is required")
        for U in self.hops:
            if int(U) != U or U < 1:
                raise ConfigError("experiment.hops", f"hop counts must be positive integers, got {U!r}")
        for mu in self.mus:
            if mu not in (1.0, 0.5):
                raise ConfigError("system.mu", f"mu must be 1 (DPSK) or 0.5 (FSK), got {mu!r}")
        if self.axis2 is not None:
            if self.axis2 not in AXES:
                raise ConfigError("experiment.axis2", f"unknown axis {self.axis2!r}")
            if self.axis2 == self.axis or {self.axis, self.axis2} <= {"SNR_dB", "SINR_dB"}:
                raise ConfigError("experiment.axis2", "the second axis must sweep a different parameter")
            if not self.grid2:
                raise ConfigError("experiment.grid2", "grid is empty")
        for key, axis, grid in (("grid", self.axis, self.grid), ("grid2", self.axis2, self.grid2)):
            if axis in INTEGER_AXES:
                low = 0 if axis == "K" else 1
                if any(int(v) != v or v < low for v in grid):
                    raise ConfigError(f"experiment.{key}", f"{axis} values must be integers >= {low}")
        # every grid point must give a valid system
        for U in self.hops:
            for v in self.grid:
                for v2 in self.grid2 or (None,):
                    try:
                        self.system_at(U, v, v2)
                    except DomainError as exc:
                        raise ConfigError("system", str(exc)) from None

    def system_at(self, U: int, value: float, value2: float | None = None, mu: float | None = None) -> SystemConfig:
        changes = {"U": int(U)}
        if mu is not None:
            changes["mu"] = mu
        for axis, v in ((self.axis, value), (self.axis2, value2)):
            if axis is None:
                continue
            if axis in INTEGER_AXES:
                changes[axis] = int(v)
            else:
                changes["zeta"] = db_to_linear(v)
        return replace(self.base, **changes)


class Row(NamedTuple):
    scheme: str
    U: int
    axis: str
    value: float
    ber_analytic: float
    ber_mc: float | None = None
    mc_stderr: float | None = None


# parsing


def parse_grid(text: str, key: str = "experiment.grid") -> tuple[float, ...]:
    """``start:stop:step`` (stop included) or a comma-separated list."""
    text = text.strip()
    if not text:
        raise ConfigError(key, "grid is empty")
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise ValueError
            start, stop, step = parts
            if not step > 0 or stop < start:
                raise ConfigError(key, "range needs step > 0 and stop >= start")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return tuple(start + i * step for i in range(count))
        return tuple(float(p) for p in text.split(","))
    except ValueError:
        raise ConfigError(key, f"cannot parse {text!r}; use start:stop:step or a comma list") from None


def _split(text: str) -> list[str]:
    return [p.strip() for p in text.split(",") if p.strip()]


def _int(section, key, path, default=None):
    raw = section.get(key)
    if raw is None or not raw.strip():
        if default is None:
            raise ConfigError(path, "required")
        return default
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(path, f"expected an integer, got {raw!r}") from None
    if value != int(value):
        raise ConfigError(path, f"expected an integer, got {raw!r}")
    return int(value)


def _float(section, key, path, default=None):
    raw = section.get(key)
    if raw is None or not raw.strip():
        return default
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(path, f"expected a number, got {raw!r}") from None


def _floats(section, key, path):
    raw = section.get(key)
    if raw is None or not raw.strip():
        return None
    try:
        return tuple(float(p) for p in _split(raw))
    except ValueError:
        raise ConfigError(path, f"expected a comma list of numbers, got {raw!r}") from None


def _mus(raw: str) -> tuple[float, ...]:
    out = []
    for item in _split(raw):
        name = item.upper()
        if name in MODULATION_NAMES:
            out.append(MODULATION_NAMES[name])
            continue
        try:
            mu = float(item)
        except ValueError:
            raise ConfigError("system.mu", f"expected DPSK, FSK, 1 or 0.5, got {item!r}") from None
        if mu not in (1.0, 0.5):
            raise ConfigError("system.mu", f"mu must be 1 (DPSK) or 0.5 (FSK), got {item!r}")
        out.append(mu)
    if not out:
        raise ConfigError("system.mu", "at least one modulation is required")
    return tuple(dict.fromkeys(out))


_KEYS = {
    "experiment": {"name", "schemes", "axis", "grid", "hops", "axis2", "grid2"},
    "system": {
        "n", "q", "k", "m", "mu", "fsk_polynomial", "snr_db", "g", "jsr",
        "sinr_table", "noise_fraction_table", "fh_bands",
    },
    "mc": {"trials", "seed", "fidelity", "batch"},
    "output": {"csv", "plot"},
}


def parse_spec(text: str, source: Path | None = None) -> ExperimentSpec:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError("file", str(exc).splitlines()[0]) from None
    for name in parser.sections():
        if name not in _KEYS:
            raise ConfigError(name, f"unknown section; expected {', '.join(_KEYS)}")
        for key in parser[name]:
            if key not in _KEYS[name]:
                raise ConfigError(f"{name}.{key}", "unknown key")
    if "experiment" not in parser:
        raise ConfigError("experiment", "section is required")
    exp = parser["experiment"]
    sysc = parser["system"] if "system" in parser else {}
    mcs = parser["mc"] if "mc" in parser else {}
    out = parser["output"] if "output" in parser else {}

    axis = exp.get("axis", "").strip()
    hops_raw = exp.get("hops", "")
    try:
        hops = tuple(int(h) for h in _split(hops_raw))
    except ValueError:
        raise ConfigError("experiment.hops", f"expected a comma list of integers, got {hops_raw!r}") from None
    snr_db = _float(sysc, "snr_db", "system.snr_db", 10.0)
    m_raw = sysc.get("m", "1")
    try:
        m_value = float(m_raw)
    except ValueError:
        raise ConfigError("system.m", f"expected a positive integer, got {m_raw!r}") from None
    if m_value != int(m_value) or m_value < 1:
        raise ConfigError("system.m", f"Nakagami m must be a positive integer, got {m_raw!r}")
    mus = _mus(sysc.get("mu", "DPSK"))
    fsk_polynomial = sysc.get("fsk_polynomial", "scaled").strip().lower()
    if fsk_polynomial not in ("scaled", "printed"):
        raise ConfigError("system.fsk_polynomial", f"expected scaled or printed, got {fsk_polynomial!r}")
    try:
        base = SystemConfig(
            N=_int(sysc, "n", "system.N", 10),
            Q=_int(sysc, "q", "system.Q", 1),
            K=_int(sysc, "k", "system.K", 0),
            m=int(m_value),
            mu=mus[0],
            zeta=db_to_linear(snr_db),
            G=_float(sysc, "g", "system.G"),
            jsr=_float(sysc, "jsr", "system.jsr", 1.0),
            sinr_table=_floats(sysc, "sinr_table", "system.sinr_table"),
            noise_fraction_table=_floats(sysc, "noise_fraction_table", "system.noise_fraction_table"),
            fh_bands=_int(sysc, "fh_bands", "system.fh_bands", 0) or None,
            printed_fsk=fsk_polynomial == "printed",
        )
    except DomainError as exc:
        raise ConfigError("system", str(exc)) from None

    mc = None
    trials = _int(mcs, "trials", "mc.trials", 0)
    if trials:
        mc = McConfig(
            trials=trials,
            seed=_int(mcs, "seed", "mc.seed", 0),
            fidelity=mcs.get("fidelity", "MODEL").strip(),
            batch=_int(mcs, "batch", "mc.batch", 0) or None,
        )
    axis2 = exp.get("axis2", "").strip() or None
    return ExperimentSpec(
        name=exp.get("name", "experiment").strip(),
        schemes=tuple(s.upper() for s in _split(exp.get("schemes", ""))),
        axis=axis,
        grid=parse_grid(exp.get("grid", "")),
        hops=hops,
        base=base,
        mus=mus,
        axis2=axis2,
        grid2=parse_grid(exp.get("grid2", ""), "experiment.grid2") if axis2 else (),
        mc=mc,
        csv=out.get("csv", "").strip() or None,
        plot=out.get("plot", "").strip() or None,
        source=source,
    )


def load_spec(path) -> ExperimentSpec:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError("file", f"cannot read {path}: {exc.strerror}") from None
    return parse_spec(text, source=path)


def preset_paths(preset: str) -> list[Path]:
    if preset not in PRESETS:
        raise ConfigError("preset", f"unknown preset {preset!r}; expected one of {', '.join(PRESETS)}")
    root = resources.files("vortexhop") / "presets"
    return [Path(str(root / name)) for name in PRESETS[preset]]


# evaluation


def _base_label(spec: ExperimentSpec, scheme: str, mu: float) -> str:
    if len(spec.mus) > 1:
        return scheme + ("-DPSK" if mu == 1.0 else "-FSK")
    return scheme


def row_seed(seed: int, index: int) -> int:
    """Per-row MC seed; rows stay independent and reproducible."""
    return (seed + (index + 1) * _GOLDEN) % 2**64


class _Point(NamedTuple):
    key: tuple
    scheme: str
    label: str
    U: int
    value: float
    system: SystemConfig


def _points(spec: ExperimentSpec) -> list[_Point]:
    points = []
    for scheme in spec.schemes:
        for mu in spec.mus:
            base = _base_label(spec, scheme, mu)
            for value2 in spec.grid2 or (None,):
                label = base if value2 is None else f"{base}@{spec.axis2}={value2:g}"
                for U in spec.hops:
                    for value in spec.grid:
                        system = spec.system_at(U, value, value2, mu)
                        key = (base, 0.0 if value2 is None else value2, U, value)
                        points.append(_Point(key, scheme, label, U, value, system))
    points.sort(key=lambda p: p.key)
    return points


def _analytic(point: _Point) -> float:
    value = average_ber(point.system, point.scheme)
    if not (math.isfinite(value) and -1e-15 <= value <= 0.5 + 1e-12):
        raise NumericalDiagnostic(
            f"{point.label} U={point.U} at {point.value}: BER {value!r} outside [0, 1/2]"
        )
    return max(value, 0.0)


def run_experiment(spec: ExperimentSpec, threads: int | None = None) -> list[Row]:
    """One row per (scheme, modulation, second-axis value, U, grid value), in CSV order."""
    points = _points(spec)
    workers = max(1, min(threads or thread_count(), len(points)))
    if workers == 1:
        analytic = [_analytic(p) for p in points]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            analytic = list(pool.map(_analytic, points))
    rows = []
    for index, (point, ber) in enumerate(zip(points, analytic)):
        mc_value = mc_err = None
        if spec.mc is not None:
            cfg = replace(spec.mc, seed=row_seed(spec.mc.seed, index))
            est: BerEstimate = estimate_ber(cfg, Scenario(point.scheme, point.system), threads=threads)
            mc_value, mc_err = est.p_hat, est.stderr
        rows.append(Row(point.label, point.U, spec.axis, point.value, ber, mc_value, mc_err))
    return rows


def _fmt(x) -> str:
    return "" if x is None else f"{float(x):.17e}"


def format_csv(rows: Sequence[Row]) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join([r.scheme, str(r.U), r.axis, _fmt(r.value), _fmt(r.ber_analytic), _fmt(r.ber_mc), _fmt(r.mc_stderr)])
        )
    return "\n".join(lines) + "\n"


def emit_csv(rows: Sequence[Row], path) -> Path:
    if not rows:
        raise DomainError("refusing to write an empty table")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_csv(rows))
    return path


def read_csv(path) -> list[Row]:
    rows = []
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise DomainError(f"{path} is not a sweep CSV")
    for line in lines[1:]:
        scheme, U, axis, value, ber, mc, err = line.split(",")
        rows.append(
            Row(scheme, int(U), axis, float(value), float(ber), float(mc) if mc else None, float(err) if err else None)
        )
    return rows
