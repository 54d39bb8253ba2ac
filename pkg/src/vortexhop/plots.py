"""Render sweep CSVs as BER curves (one axis) or surfaces (two axes)."""

from __future__ import annotations

import re
from collections import defaultdict
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .experiment import Row  # noqa: E402

__all__ = ["plot_rows"]

_SECOND_AXIS = re.compile(r"^(?P<base>[^@]+)@(?P<axis>[^=]+)=(?P<value>.+)$")


def _axis_label(axis: str) -> str:
    return {"SNR_dB": "SNR (dB)", "SINR_dB": "SINR (dB)"}.get(axis, axis)


def plot_rows(rows: Sequence[Row], path, title: str | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if any("@" in r.scheme for r in rows):
        fig = _surface(rows)
    else:
        fig = _curves(rows)
    if title:
        fig.suptitle(title)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def _curves(rows):
    fig, ax = plt.subplots(figsize=(7, 5))
    series = defaultdict(list)
    for r in rows:
        series[(r.scheme, r.U)].append(r)
    for (scheme, U), pts in series.items():
        x = [p.value for p in pts]
        (line,) = ax.semilogy(x, [max(p.ber_analytic, 1e-300) for p in pts], label=f"{scheme}, U={U}")
        mc = [(p.value, p.ber_mc) for p in pts if p.ber_mc]
        if mc:
            ax.semilogy(*zip(*mc), "o", ms=3, color=line.get_color(), alpha=0.6)
    ax.set_xlabel(_axis_label(rows[0].axis))
    ax.set_ylabel("BER")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=7, ncol=2)
    return fig


def _surface(rows):
    groups = defaultdict(dict)
    second = None
    for r in rows:
        match = _SECOND_AXIS.match(r.scheme)
        second = match["axis"]
        groups[(match["base"], r.U)][(r.value, float(match["value"]))] = r.ber_analytic
    fig = plt.figure(figsize=(6 * len(groups), 5))
    for i, ((base, U), table) in enumerate(sorted(groups.items()), start=1):
        xs = sorted({k[0] for k in table})
        ys = sorted({k[1] for k in table})
        X, Y = np.meshgrid(xs, ys)
        Z = np.array([[np.log10(max(table[(x, y)], 1e-300)) for x in xs] for y in ys])
        ax = fig.add_subplot(1, len(groups), i, projection="3d")
        ax.plot_surface(X, Y, Z, cmap="viridis")
        ax.set_xlabel(_axis_label(rows[0].axis))
        ax.set_ylabel(second)
        ax.set_zlabel("log10 BER")
        ax.set_title(f"{base}, U={U}")
    return fig
