"""Near-homoclinic diagnostics for the reduced (slow-manifold) planar flow.

A trajectory is launched from (phi_r - eps0, 0), just inside the unperturbed
loop, and followed forward and backward in xi. Each leg is cut where it makes
its closest approach to the saddle (phi1, 0), i.e. where d|s - saddle|^2/dxi
changes sign. That locus is the transversal section through the saddle region.

* ``min_saddle_distance``: distance of the forward cut point from the saddle;
* ``loop_closure_gap``: distance between the forward cut point and the mirror
  image (phi, -y) of the backward one. The unperturbed loop is symmetric under
  y -> -y, so the gap measures how far the perturbed legs fail to match;
* ``energy_split``: H(forward cut) - H(backward cut), which to first order is
  tau times the Melnikov function.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import HomoclinicOrbit, ModelParams, equilibria, first_integral
from .errors import InvalidArgument
from .odeint import RK45, IntegratorConfig, Trajectory, detect_event, integrate
from .slowfast import PerturbationKind, reduced_field

SPAN_FACTOR = 4.0
CLOSE_FRACTION = 0.05
ESCAPE_FACTOR = 4.0


@dataclass(frozen=True)
class ReturnMetric:
    min_saddle_distance: float
    loop_closure_gap: float
    energy_split: float
    threshold: float
    forward: Trajectory
    backward: Trajectory
    forward_cut: np.ndarray
    backward_cut: np.ndarray

    @property
    def near_closed(self) -> bool:
        return self.min_saddle_distance < self.threshold


def default_span(params: ModelParams) -> float:
    """Four transit lengths 1/width of the unperturbed pulse."""
    return SPAN_FACTOR / HomoclinicOrbit(params).width


def _closest_approach(traj: Trajectory, field, saddle: float) -> np.ndarray:
    sign = traj.direction

    def approach_rate(s):
        ds = field(0.0, s)
        return sign * ((s[0] - saddle) * ds[0] + s[1] * ds[1])

    for hit in detect_event(traj, approach_rate, refine_steps=3):
        if hit.rising:
            return hit.state
    # still approaching at the end of the span: fall back to the nearest sample
    dist = np.hypot(traj.states[:, 0] - saddle, traj.states[:, 1])
    return traj.states[int(dist.argmin())]


def homoclinic_return_metric(
    kind,
    params: ModelParams,
    epsilon0: float = 1e-4,
    span: Optional[float] = None,
    atol: float = 1e-10,
    rtol: float = 1e-10,
) -> ReturnMetric:
    kind = PerturbationKind.parse(kind)
    eq = equilibria(params)
    if not 0 < epsilon0 < eq.loop_width:
        raise InvalidArgument("epsilon0 must lie in (0, phi_r - phi1)")
    span = default_span(params) if span is None else float(span)
    if not span > 0:
        raise InvalidArgument("span must be positive")
    field = reduced_field(kind, params)
    width = eq.loop_width
    center = 0.5 * (eq.phi1 + eq.phi_r)

    def escaped(xi, s):
        return abs(s[0] - center) > ESCAPE_FACTOR * width or abs(s[1]) > ESCAPE_FACTOR * width

    s0 = (eq.phi_r - epsilon0, 0.0)
    h0 = min(1e-3, 0.01 * span)
    meta = {"kind": kind.value, "c": params.c, "g": params.g, "tau": params.tau, "eps0": epsilon0}
    forward, backward = (
        integrate(
            field,
            s0,
            IntegratorConfig(RK45, (0.0, end), atol=atol, rtol=rtol, h_init=h0, h_max=0.05 * span),
            stop=escaped,
            meta=meta,
        )
        for end in (span, -span)
    )
    p_f = _closest_approach(forward, field, eq.phi1)
    p_b = _closest_approach(backward, field, eq.phi1)
    return ReturnMetric(
        min_saddle_distance=float(math.hypot(p_f[0] - eq.phi1, p_f[1])),
        loop_closure_gap=float(math.hypot(p_f[0] - p_b[0], p_f[1] + p_b[1])),
        energy_split=float(first_integral(params, *p_f) - first_integral(params, *p_b)),
        threshold=CLOSE_FRACTION * width,
        forward=forward,
        backward=backward,
        forward_cut=p_f,
        backward_cut=p_b,
    )


def full_orbit(metric: ReturnMetric) -> tuple[np.ndarray, np.ndarray]:
    """Backward and forward legs joined into one xi-ordered (xi, states) pair."""
    b, f = metric.backward, metric.forward
    xi = np.concatenate([b.xi[:0:-1], f.xi])
    states = np.concatenate([b.states[:0:-1], f.states])
    return xi, states
