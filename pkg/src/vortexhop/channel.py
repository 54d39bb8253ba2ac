"""UCA-to-UCA OAM channel amplitude gain.

Two evaluations of the same far-field model are provided: the finite sum
over the N array elements (``gain_direct``) and its N -> infinity Bessel
closed form (``gain_closed``). Element n sits at azimuth 2*pi*(n-1)/N on a
circle of radius R; the receiver azimuth is fixed to 0, which only
contributes a unit-modulus factor to every gain.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .specfun import bessel_j

__all__ = [
    "UcaGeometry",
    "check_mode",
    "admissible_modes",
    "pathloss_element",
    "gain_direct",
    "gain_closed",
]


@dataclass(frozen=True)
class UcaGeometry:
    """Transmit UCA and link geometry (SI units, radians)."""

    N: int
    R: float
    d: float
    theta: float
    wavelength: float
    beta: complex = 1.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise DomainError(f"N must be an integer >= 2, got {self.N}")
        if not self.R > 0:
            raise DomainError(f"R must be positive, got {self.R}")
        if not self.wavelength > 0:
            raise DomainError(f"wavelength must be positive, got {self.wavelength}")
        if not self.d >= 10.0 * self.R:
            raise DomainError(f"far field needs d >= 10 R (d={self.d}, R={self.R})")
        if not 0.0 <= self.theta < math.pi / 2:
            raise DomainError(f"theta must lie in [0, pi/2), got {self.theta}")

    @property
    def bessel_arg(self) -> float:
        """2*pi*R*sin(theta)/lambda, the argument of J_l in the closed form."""
        return 2.0 * math.pi * self.R * math.sin(self.theta) / self.wavelength

    def element_azimuths(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.N) / self.N


def admissible_modes(N: int) -> range:
    """OAM modes l with -N/2 < l <= N/2."""
    return range(-((N - 1) // 2), N // 2 + 1)


def check_mode(l: int, N: int) -> int:
    if int(l) != l:
        raise DomainError(f"OAM mode must be an integer, got {l}")
    if not -N / 2 < l <= N / 2:
        raise DomainError(f"OAM mode {l} outside (-N/2, N/2] for N={N}")
    return int(l)


def pathloss_element(geom: UcaGeometry, n: int, phase_position: float | None = None) -> complex:
    """Free-space pathloss from element ``n`` (1-based) to the receiver.

    ``phase_position`` is the element azimuth; it defaults to
    2*pi*(n-1)/N. Amplitude uses |d - r_n| ~ d, phase uses
    |d - r_n| ~ d - R sin(theta) cos(azimuth).
    """
    if int(n) != n or not 1 <= n <= geom.N:
        raise DomainError(f"element index must lie in [1, {geom.N}], got {n}")
    if phase_position is None:
        phase_position = 2.0 * math.pi * (n - 1) / geom.N
    projection = geom.R * math.sin(geom.theta) * math.cos(phase_position)
    path = geom.d - projection
    amp = geom.beta * geom.wavelength / (4.0 * math.pi * geom.d)
    return amp * cmath.exp(-2j * math.pi * path / geom.wavelength)


def gain_direct(geom: UcaGeometry, l: int) -> complex:
    """Finite-N sum of element pathlosses weighted by exp(j*2*pi*(n-1)*l/N)."""
    l = check_mode(l, geom.N)
    az = geom.element_azimuths()
    projection = geom.R * math.sin(geom.theta) * np.cos(az)
    amp = geom.beta * geom.wavelength / (4.0 * math.pi * geom.d)
    common = amp * cmath.exp(-2j * math.pi * geom.d / geom.wavelength)
    phases = 2.0 * np.pi * projection / geom.wavelength + l * az
    return complex(common * np.exp(1j * phases).sum())


def gain_closed(geom: UcaGeometry, l: int, convention: str = "consistent") -> complex:
    """Bessel closed form of the mode-l gain (includes the factor N).

    The element sum with weights exp(+j l phi_n) converges to
    N * j**l * J_l(x); ``convention="consistent"`` (default) uses that
    phase so the closed form is the limit of ``gain_direct``.
    ``convention="printed"`` uses j**(-l), which has the same magnitude
    and differs by (-1)**l.
    """
    l = check_mode(l, geom.N)
    if convention == "consistent":
        mode_phase = 1j**l
    elif convention == "printed":
        mode_phase = 1j ** (-l)
    else:
        raise DomainError(f"unknown phase convention {convention!r}")
    amp = geom.beta * geom.wavelength * geom.N / (4.0 * math.pi * geom.d)
    carrier = cmath.exp(-2j * math.pi * geom.d / geom.wavelength)
    return complex(amp * carrier * mode_phase * bessel_j(l, geom.bessel_arg))
