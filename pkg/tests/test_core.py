import math

import numpy as np
import pytest
from hypothesis import given
from numpy.testing import assert_allclose

from conftest import loop_params
from solwave.core import (
    EquilibriumKind,
    HomoclinicOrbit,
    ModelParams,
    classify_equilibrium,
    equilibria,
    first_integral,
    orbit_phi,
    orbit_y,
    planar_field,
    profile_residual,
    solitary_wave,
)
from solwave.errors import DegenerateSystem, InvalidArgument, NotAnEquilibrium


def test_params_reject_nonpositive_speed():
    with pytest.raises(InvalidArgument):
        ModelParams(0.0, 0.0)
    with pytest.raises(InvalidArgument):
        ModelParams(1.0, 0.0, tau=-0.1)


def test_degenerate_discriminant():
    with pytest.raises(DegenerateSystem):
        equilibria(ModelParams(1.0, 0.0))
    with pytest.raises(DegenerateSystem):
        HomoclinicOrbit(ModelParams(1.0, -0.1))


@pytest.mark.parametrize(
    "c, g, expected",
    [
        (0.5, 0.0, (0.25, -1.0, 0.0, 0.5)),
        (2.0, -0.375, (0.25, 0.5, 1.5, 2.0)),
    ],
)
def test_equilibria_values(c, g, expected):
    eq = equilibria(ModelParams(c, g))
    assert_allclose((eq.delta, eq.phi1, eq.phi2, eq.phi_r), expected, atol=1e-15)
    # both roots of (c-1) phi - phi^2/2 + g
    for phi in (eq.phi1, eq.phi2):
        assert abs((c - 1) * phi - phi**2 / 2 + g) < 1e-12


@given(loop_params())
def test_equilibrium_invariants(cg):
    c, g = cg
    p = ModelParams(c, g)
    eq = equilibria(p)
    assert eq.phi1 < eq.phi2 < eq.phi_r
    assert math.isclose(eq.phi_r - eq.phi1, 3 * math.sqrt(eq.delta), rel_tol=1e-12)
    scale = max(1.0, abs(eq.phi1), abs(eq.phi2)) ** 2
    for phi in (eq.phi1, eq.phi2):
        assert abs((c - 1) * phi - phi**2 / 2 + g) <= 1e-12 * scale
    assert eq.h1 == first_integral(p, eq.phi1, 0.0)
    assert eq.h2 == first_integral(p, eq.phi2, 0.0)


def test_first_integral_values():
    p = ModelParams(0.5, 0.0)
    assert first_integral(p, 0.0, 0.0) == 0.0
    # -(1/c)[(c-1)/2 - (-1)/6] at phi = -1: -2 * (-1/4 + 1/6) = 1/6
    assert math.isclose(first_integral(p, -1.0, 0.0), 1.0 / 6.0, rel_tol=1e-15)
    # phi_r lies on the saddle level set
    assert math.isclose(first_integral(p, 0.5, 0.0), first_integral(p, -1.0, 0.0), rel_tol=1e-14)


@given(loop_params())
def test_first_integral_is_conserved_by_planar_field(cg):
    # dH/dxi = H_phi * phi' + H_y * y' vanishes identically
    c, g = cg
    p = ModelParams(c, g)
    phi, y = np.linspace(-2, 2, 7), np.linspace(-1, 1, 7)
    dphi, dy = planar_field(p, phi, y)
    h_phi = -((c - 1) * phi - phi**2 / 2 + g) / c
    assert_allclose(h_phi * dphi + y * dy, 0.0, atol=1e-12)


def test_classification():
    p = ModelParams(0.5, 0.0)
    assert classify_equilibrium(p, -1.0) is EquilibriumKind.SADDLE
    assert classify_equilibrium(p, 0.0) is EquilibriumKind.CENTER
    with pytest.raises(NotAnEquilibrium):
        classify_equilibrium(p, 0.3)


@given(loop_params())
def test_classification_matches_roots(cg):
    p = ModelParams(*cg)
    eq = equilibria(p)
    assert classify_equilibrium(p, eq.phi1) is EquilibriumKind.SADDLE
    assert classify_equilibrium(p, eq.phi2) is EquilibriumKind.CENTER


def test_orbit_limits_and_peak():
    orbit = HomoclinicOrbit(ModelParams(0.5, 0.0))
    assert orbit_phi(orbit, 0.0) == orbit.eq.phi_r
    assert orbit_y(orbit, 0.0) == 0.0
    assert abs(orbit_phi(orbit, 200.0) - orbit.eq.phi1) < 1e-15
    assert orbit.width == 0.5 * math.sqrt(1.5 / 1.5)


def test_orbit_point_on_level_set():
    p = ModelParams(0.5, 0.0)
    orbit = HomoclinicOrbit(p)
    v = orbit_phi(orbit, 1.0)
    assert abs(first_integral(p, v, orbit_y(orbit, 1.0)) - orbit.eq.h1) < 1e-12


def test_orbit_y_is_finite_difference_of_phi():
    orbit = HomoclinicOrbit(ModelParams(0.5, 0.0))
    h = 1e-6
    fd = (orbit_phi(orbit, 1.0 + h) - orbit_phi(orbit, 1.0 - h)) / (2 * h)
    assert abs(fd - orbit_y(orbit, 1.0)) < 1e-8


def test_orbit_phi_xx_is_finite_difference_of_y():
    orbit = HomoclinicOrbit(ModelParams(1.5, -0.1))
    xi = np.linspace(-6, 6, 25)
    h = 1e-5
    fd = (orbit.y(xi + h) - orbit.y(xi - h)) / (2 * h)
    assert_allclose(orbit.phi_xx(xi), fd, atol=1e-8)


@given(loop_params())
def test_orbit_symmetry_and_sign(cg):
    orbit = HomoclinicOrbit(ModelParams(*cg))
    xi = np.linspace(0.05, 8.0, 50) / orbit.width
    assert_allclose(orbit.phi(xi), orbit.phi(-xi), rtol=0, atol=0)
    assert_allclose(orbit.y(xi), -orbit.y(-xi), rtol=0, atol=0)
    assert np.all(orbit.y(-xi) > 0) and np.all(orbit.y(xi) < 0)


@given(loop_params())
def test_level_set_membership(cg):
    p = ModelParams(*cg)
    orbit = HomoclinicOrbit(p)
    xi = np.linspace(-30, 30, 10_000)
    h = first_integral(p, orbit.phi(xi), orbit.y(xi))
    assert np.max(np.abs(h - orbit.eq.h1)) <= 1e-10 * max(1.0, abs(orbit.eq.h1))


@pytest.mark.parametrize("c, g", [(0.5, 0.0), (2.0, 0.0), (1.5, -0.1), (0.3, 2.0)])
def test_profile_solves_travelling_wave_ode(c, g):
    res = profile_residual(ModelParams(c, g), np.linspace(-20, 20, 4001))
    assert np.max(np.abs(res)) <= 1e-9


def test_solitary_wave_travels_at_speed_c():
    p = ModelParams(0.5, 0.0)
    for t in (0.0, 1.3, 7.0):
        assert math.isclose(solitary_wave(p, p.c * t, t), 0.5, rel_tol=0, abs_tol=1e-15)
    x, t, dt = 0.7, 2.0, 3.1
    assert math.isclose(solitary_wave(p, x, t), solitary_wave(p, x + p.c * dt, t + dt), abs_tol=1e-14)
