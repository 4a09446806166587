import math

import numpy as np
import pytest

from solwave.core import ModelParams, equilibria, first_integral
from solwave.errors import InvalidArgument
from solwave.melnikov import KS, ME, find_c_star, melnikov_function
from solwave.persistence import default_span, full_orbit, homoclinic_return_metric


@pytest.mark.parametrize("kind", [KS, ME])
@pytest.mark.parametrize("c,g", [(0.5, 0.0), (1.8, 0.5), (0.3, -0.1)])
def test_unperturbed_closest_approach(kind, c, g):
    # near the saddle H - h1 ~ (y^2 - lam^2 x^2)/2, so a level just inside the
    # loop passes the saddle at distance sqrt(2|dH|)/lam
    p = ModelParams(c, g, 0.0)
    eq = equilibria(p)
    eps0 = 1e-4
    d_h = first_integral(p, eq.phi_r - eps0, 0.0) - eq.h1
    lam = math.sqrt(math.sqrt(p.delta) / c)
    m = homoclinic_return_metric(kind, p, epsilon0=eps0)
    assert math.isclose(m.min_saddle_distance, math.sqrt(2 * abs(d_h)) / lam, rel_tol=0.1)
    assert m.loop_closure_gap <= 1e-6
    assert abs(m.energy_split) <= 1e-10


@pytest.mark.parametrize("kind", [KS, ME])
@pytest.mark.parametrize("c,g", [(0.8, 0.0), (0.3, 0.0), (1.5, 1.0)])
def test_energy_split_tracks_melnikov(kind, c, g):
    p = ModelParams(c, g, 0.01)
    m = homoclinic_return_metric(kind, p)
    expected = p.tau * melnikov_function(kind, p)
    assert abs(m.energy_split - expected) <= 0.01 * abs(expected) + 1e-5


@pytest.mark.parametrize("kind", ["ks", "me"])
def test_near_closed_at_persistent_speed(kind):
    c_star = find_c_star(kind, 0.0).c_star
    m = homoclinic_return_metric(kind, ModelParams(c_star + 1e-4, 0.0, 0.01))
    assert m.near_closed


def test_control_speed_gap_is_much_larger():
    c_star = find_c_star(KS, 0.0).c_star
    at_root = homoclinic_return_metric(KS, ModelParams(c_star + 1e-4, 0.0, 0.01))
    control = homoclinic_return_metric(KS, ModelParams(0.8, 0.0, 0.01))
    assert control.loop_closure_gap >= 10 * at_root.loop_closure_gap
    assert not control.near_closed


def test_full_orbit_is_ordered():
    m = homoclinic_return_metric(KS, ModelParams(0.5, 0.0, 0.01))
    xi, states = full_orbit(m)
    assert np.all(np.diff(xi) > 0)
    assert len(xi) == len(m.forward.xi) + len(m.backward.xi) - 1
    assert default_span(ModelParams(0.5, 0.0)) > 0


def test_argument_validation():
    p = ModelParams(0.5, 0.0, 0.01)
    with pytest.raises(InvalidArgument):
        homoclinic_return_metric(KS, p, epsilon0=0.0)
    with pytest.raises(InvalidArgument):
        homoclinic_return_metric(KS, p, epsilon0=10.0)
    with pytest.raises(InvalidArgument):
        homoclinic_return_metric(KS, p, span=-1.0)
