"""Strong generic delay kernel f(t) = (4t/tau^2) exp(-2t/tau) and its convolution.

The kernel has unit mass and mean delay tau. As tau -> 0 the history average
(f*u)(x, t) collapses onto u(x, t); :func:`convergence_check` measures the rate.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.laguerre import laggauss
from scipy import integrate

from .errors import InvalidArgument, QuadratureFailure

# Tail mass beyond WINDOW*tau is (1 + 2*WINDOW) exp(-2*WINDOW) ~ 1.7e-16.
WINDOW = 20.0
QUAD_TOL = 1e-12


@dataclass(frozen=True)
class DelayKernel:
    tau: float

    def __post_init__(self):
        if not self.tau > 0:
            raise InvalidArgument(f"kernel delay must be positive, got tau={self.tau!r}")

    def __call__(self, t):
        return kernel_eval(self, t)

    @property
    def peak(self) -> float:
        return 0.5 * self.tau


def kernel_eval(k: DelayKernel, t):
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise InvalidArgument("kernel is only defined for t >= 0")
    out = 4.0 * t_arr / k.tau**2 * np.exp(-2.0 * t_arr / k.tau)
    return float(out) if out.ndim == 0 else out


def kernel_moments(k: DelayKernel, quad_points: int = 64) -> tuple[float, float]:
    """Mass and mean of the kernel by Gauss-Laguerre quadrature.

    With s = 2t/tau the integrals become int s e^-s ds and (tau/2) int s^2 e^-s ds,
    so ``quad_points`` Laguerre nodes integrate both exactly up to rounding.
    """
    if quad_points < 64:
        raise InvalidArgument("kernel_moments needs at least 64 quadrature points")
    nodes, weights = laggauss(quad_points)
    # f(t) dt = s e^-s ds; the Laguerre weight carries e^-s
    mass = math.fsum(weights * nodes)
    mean = 0.5 * k.tau * math.fsum(weights * nodes * nodes)
    return mass, mean


def _quad(fn, a, b, what):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, err = integrate.quad(fn, a, b, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
        except integrate.IntegrationWarning as exc:
            raise QuadratureFailure(f"{what}: {exc}") from exc
    return value


def convolve(k: DelayKernel, u, x: float, t: float) -> float:
    """History integral (f*u)(x, t) = int_{-inf}^t f(t - s) u(x, s) ds.

    ``u`` is a callable u(x, s). The history is truncated at t - WINDOW*tau.
    """
    tau = k.tau

    def integrand(s):
        lag = t - s
        return 4.0 * lag / tau**2 * math.exp(-2.0 * lag / tau) * u(x, s)

    return _quad(integrand, t - WINDOW * tau, t, "delay convolution")


def convergence_check(u, x: float, t: float, taus) -> list[float]:
    """|(f*u)(x,t) - u(x,t)| for each tau in ``taus``."""
    taus = [float(v) for v in taus]
    if any(v <= 0 for v in taus):
        raise InvalidArgument("taus must be positive")
    if any(b >= a for a, b in zip(taus, taus[1:])):
        raise InvalidArgument("taus must be strictly decreasing")
    target = u(x, t)
    return [abs(convolve(DelayKernel(tau), u, x, t) - target) for tau in taus]


def convergence_slope(taus, errors) -> float:
    """Least-squares slope of log(error) against log(tau)."""
    slope, _ = np.polyfit(np.log(taus), np.log(errors), 1)
    return float(slope)
