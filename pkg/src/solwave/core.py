"""Unperturbed travelling-wave system of the regularized long-wave equation.

With u(x, t) = phi(xi), xi = x - c t, the unperturbed equation integrates to

    (1 - c) phi + phi^2 / 2 + c phi'' = g,

equivalently the planar system phi' = y, y' = [(c-1) phi - phi^2/2 + g] / c,
which is Hamiltonian with first integral

    H(phi, y) = y^2/2 - [(c-1)/2 phi^2 - phi^3/6 + g phi] / c.

For Delta = (c-1)^2 + 2g > 0 the saddle (phi1, 0) carries a homoclinic loop
around the center (phi2, 0) that reaches phi_r on the right. The loop is the
tanh^2 pulse returned by :func:`orbit_phi`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSystem, InvalidArgument, NotAnEquilibrium

EQUILIBRIUM_TOL = 1e-9


@dataclass(frozen=True)
class ModelParams:
    """Wave speed ``c``, integration constant ``g`` and perturbation size ``tau``."""

    c: float
    g: float = 0.0
    tau: float = 0.0

    def __post_init__(self):
        if not self.c > 0:
            raise InvalidArgument(f"wave speed must be positive, got c={self.c!r}")
        if not self.tau >= 0:
            raise InvalidArgument(f"tau must be non-negative, got {self.tau!r}")

    @property
    def delta(self) -> float:
        return (self.c - 1.0) ** 2 + 2.0 * self.g

    def with_(self, **changes) -> "ModelParams":
        values = {"c": self.c, "g": self.g, "tau": self.tau}
        values.update(changes)
        return ModelParams(**values)


@dataclass(frozen=True)
class EquilibriumSet:
    delta: float
    phi1: float
    phi2: float
    phi_r: float
    h1: float
    h2: float

    @property
    def loop_width(self) -> float:
        """phi_r - phi1, the amplitude of the pulse above its background."""
        return self.phi_r - self.phi1


class EquilibriumKind(enum.Enum):
    SADDLE = "saddle"
    CENTER = "center"


def require_loop(params: ModelParams) -> float:
    """Return sqrt(Delta), raising DegenerateSystem when the loop does not exist."""
    delta = params.delta
    if not delta > 0:
        raise DegenerateSystem(
            f"Delta = (c-1)^2 + 2g = {delta:.6g} <= 0 for c={params.c}, g={params.g}; "
            "no saddle-center pair"
        )
    return math.sqrt(delta)


def equilibrium_residual(params: ModelParams, phi):
    return (params.c - 1.0) * phi - 0.5 * phi * phi + params.g


def planar_field(params: ModelParams, phi, y):
    """Unperturbed planar vector field (phi', y')."""
    return y, equilibrium_residual(params, phi) / params.c


def first_integral(params: ModelParams, phi, y):
    c, g = params.c, params.g
    return 0.5 * y * y - ((c - 1.0) / 2.0 * phi * phi - phi**3 / 6.0 + g * phi) / c


def equilibria(params: ModelParams) -> EquilibriumSet:
    root = require_loop(params)
    shift = params.c - 1.0
    phi1 = shift - root
    phi2 = shift + root
    return EquilibriumSet(
        delta=params.delta,
        phi1=phi1,
        phi2=phi2,
        phi_r=shift + 2.0 * root,
        h1=float(first_integral(params, phi1, 0.0)),
        h2=float(first_integral(params, phi2, 0.0)),
    )


def classify_equilibrium(params: ModelParams, phi: float) -> EquilibriumKind:
    """Saddle or center, from the sign of det of the planar linearization.

    The Jacobian is [[0, 1], [(c-1-phi)/c, 0]], so det = -(c-1-phi)/c and the
    point is a saddle exactly when (c-1-phi)/c > 0.
    """
    if abs(equilibrium_residual(params, phi)) > EQUILIBRIUM_TOL:
        raise NotAnEquilibrium(f"phi={phi!r} does not solve (c-1)phi - phi^2/2 + g = 0")
    det = -(params.c - 1.0 - phi) / params.c
    if det < 0:
        return EquilibriumKind.SADDLE
    if det > 0:
        return EquilibriumKind.CENTER
    raise DegenerateSystem("degenerate equilibrium (Delta = 0)")


@dataclass(frozen=True)
class HomoclinicOrbit:
    """Closed-form homoclinic loop phi(xi) = phi_r - (phi_r - phi1) tanh^2(width xi)."""

    params: ModelParams
    eq: EquilibriumSet = field(init=False)
    width: float = field(init=False)

    def __post_init__(self):
        eq = equilibria(self.params)
        object.__setattr__(self, "eq", eq)
        object.__setattr__(self, "width", 0.5 * math.sqrt(eq.loop_width / (3.0 * self.params.c)))

    def phi(self, xi):
        return orbit_phi(self, xi)

    def y(self, xi):
        return orbit_y(self, xi)

    def phi_xx(self, xi):
        """Analytic second derivative of the profile."""
        k, amp = self.width, self.eq.loop_width
        t = np.tanh(k * np.asarray(xi, dtype=float))
        sech2 = 1.0 - t * t
        return -2.0 * k * k * amp * sech2 * (sech2 - 2.0 * t * t)


def orbit_phi(orbit: HomoclinicOrbit, xi):
    t = np.tanh(orbit.width * np.asarray(xi, dtype=float))
    out = orbit.eq.phi_r - orbit.eq.loop_width * t * t
    return float(out) if out.ndim == 0 else out


def orbit_y(orbit: HomoclinicOrbit, xi):
    # y > 0 for xi < 0, y < 0 for xi > 0
    k = orbit.width
    t = np.tanh(k * np.asarray(xi, dtype=float))
    out = -2.0 * k * orbit.eq.loop_width * t * (1.0 - t * t)
    return float(out) if out.ndim == 0 else out


def solitary_wave(params: ModelParams, x, t):
    """Bright solitary wave u(x, t) of the unperturbed equation."""
    return orbit_phi(HomoclinicOrbit(params), np.asarray(x, dtype=float) - params.c * np.asarray(t, dtype=float))


def profile_residual(params: ModelParams, xi):
    """Residual (1-c) phi + phi^2/2 + c phi'' - g of the closed-form profile."""
    orbit = HomoclinicOrbit(params)
    phi = np.asarray(orbit_phi(orbit, xi))
    return (1.0 - params.c) * phi + 0.5 * phi * phi + params.c * orbit.phi_xx(xi) - params.g
