import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vortexhop.channel import (
    UcaGeometry,
    admissible_modes,
    check_mode,
    gain_closed,
    gain_direct,
    pathloss_element,
)
from vortexhop.errors import DomainError


def geometry(N=512, R=0.5, d=100.0, theta=0.05, wavelength=0.1):
    return UcaGeometry(N=N, R=R, d=d, theta=theta, wavelength=wavelength)


def test_admissible_modes():
    assert list(admissible_modes(4)) == [-1, 0, 1, 2]
    assert list(admissible_modes(5)) == [-2, -1, 0, 1, 2]
    assert check_mode(2, 4) == 2
    with pytest.raises(DomainError):
        check_mode(-2, 4)


@pytest.mark.parametrize(
    "kwargs",
    [dict(N=1), dict(R=0.0), dict(d=1.0), dict(theta=math.pi / 2), dict(wavelength=-1.0)],
)
def test_geometry_validation(kwargs):
    with pytest.raises(DomainError):
        geometry(**kwargs)


def test_direct_gain_is_sum_of_weighted_pathlosses():
    g = geometry(N=8)
    l = 2
    total = sum(pathloss_element(g, n) * complex(math.cos(2 * math.pi * (n - 1) * l / 8), math.sin(2 * math.pi * (n - 1) * l / 8)) for n in range(1, 9))
    assert gain_direct(g, l) == pytest.approx(total, rel=1e-12)


@pytest.mark.parametrize("l", [-3, -1, 0, 1, 2, 4])
def test_closed_form_is_large_n_limit(l):
    g = geometry(N=256)
    h = gain_closed(g, l)
    assert abs(gain_direct(g, l) - h) <= 1e-12 * abs(h)


def test_printed_convention_differs_by_sign_only():
    g = geometry(N=64)
    for l in (-2, 1, 3):
        assert gain_closed(g, l, "printed") == pytest.approx((-1) ** l * gain_closed(g, l), rel=1e-14)
    with pytest.raises(DomainError):
        gain_closed(g, 0, "other")


@given(st.integers(-20, 20).filter(lambda l: l != 0), st.integers(6, 10))
def test_boresight_orthogonality(l, log_n):
    N = 2**log_n
    g = geometry(N=N, theta=0.0)
    assert abs(gain_direct(g, l)) < 1e-12 * N
    assert gain_closed(g, l) == 0.0


def test_boresight_zero_mode_carries_all_power():
    g = geometry(N=64, theta=0.0)
    amp = g.wavelength * g.N / (4 * math.pi * g.d)
    assert abs(gain_direct(g, 0)) == pytest.approx(amp, rel=1e-12)
