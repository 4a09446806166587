"""Slow and fast forms of the delayed, perturbed travelling-wave system.

The delay enters through two linear-chain variables psi, zeta and the nonlocal
term F = int_{-inf}^xi psi phi' ds. F is carried as a sixth state with
F' = psi * y, which makes the system local. State ordering is

    (phi, y, z, psi, zeta, F)

The slow system (derivatives in xi) is

    phi' = y
    y'   = z
    tau z'     = (c-1) phi - F - c z + g - tau (y [+ phi y for ME])
    c tau psi'  = 2 psi - zeta
    c tau zeta' = 2 (zeta - 2 phi)
    F'   = psi y

and the fast system is the same field multiplied by tau (fast variable xi/tau).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.sparse.csgraph import connected_components

from .core import ModelParams, require_loop
from .errors import InvalidArgument


class PerturbationKind(enum.Enum):
    """KS: u_xx + u_xxxx.  ME: u_xx + (u u_x)_x + u_xxxx."""

    KS = "ks"
    ME = "me"

    @classmethod
    def parse(cls, value) -> "PerturbationKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidArgument(f"unknown perturbation kind {value!r}; use 'ks' or 'me'") from None


class AugmentedState(NamedTuple):
    phi: float
    y: float
    z: float
    psi: float
    zeta: float
    F: float


def _perturbation(kind: PerturbationKind, phi, y):
    if kind is PerturbationKind.ME:
        return y + phi * y
    return y


def _layer_rhs(kind, params, s):
    phi, y, z, psi, zeta, F = s
    c, g, tau = params.c, params.g, params.tau
    return (
        (c - 1.0) * phi - F - c * z + g - tau * _perturbation(kind, phi, y),
        (2.0 * psi - zeta) / c,
        2.0 * (zeta - 2.0 * phi) / c,
    )


def slow_vector_field(kind: PerturbationKind, params: ModelParams, s) -> np.ndarray:
    if not params.tau > 0:
        raise InvalidArgument("the slow system needs tau > 0")
    s = np.asarray(s, dtype=float)
    dz, dpsi, dzeta = _layer_rhs(kind, params, s)
    tau = params.tau
    return np.array([s[1], s[2], dz / tau, dpsi / tau, dzeta / tau, s[3] * s[1]])


def fast_vector_field(kind: PerturbationKind, params: ModelParams, s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    dz, dpsi, dzeta = _layer_rhs(kind, params, s)
    tau = params.tau
    return np.array([tau * s[1], tau * s[2], dz, dpsi, dzeta, tau * s[3] * s[1]])


def critical_manifold_point(params: ModelParams, phi: float, y: float) -> AugmentedState:
    """Point of M0 above (phi, y): psi = phi, zeta = 2 phi, F = phi^2/2."""
    c, g = params.c, params.g
    z = ((c - 1.0) * phi - 0.5 * phi * phi + g) / c
    return AugmentedState(phi, y, z, phi, 2.0 * phi, 0.5 * phi * phi)


def layer_jacobian(params: ModelParams, phi: float) -> np.ndarray:
    """Linearization of the tau = 0 fast field on M0, in (phi, y, z, psi, zeta).

    F is eliminated through its on-manifold value phi^2/2, which puts
    (c - 1 - phi) in the dz/dphi slot.
    """
    c = params.c
    a = np.zeros((5, 5))
    a[2, 0] = c - 1.0 - phi
    a[2, 2] = -c
    a[3, 3] = 2.0 / c
    a[3, 4] = -1.0 / c
    a[4, 0] = -4.0 / c
    a[4, 4] = 2.0 / c
    return a


def block_eigenvalues(a: np.ndarray) -> np.ndarray:
    """Eigenvalues of a matrix that is block triangular up to a permutation.

    Strongly connected components of the sparsity graph are the diagonal
    blocks; 1x1 blocks contribute their diagonal entry exactly, larger blocks
    go to the dense eigensolver.
    """
    a = np.asarray(a, dtype=float)
    n_comp, labels = connected_components(a != 0, directed=True, connection="strong")
    eigs = []
    for comp in range(n_comp):
        idx = np.flatnonzero(labels == comp)
        if idx.size == 1:
            eigs.append(complex(a[idx[0], idx[0]]))
        else:
            eigs.extend(np.linalg.eigvals(a[np.ix_(idx, idx)]))
    eigs = np.array(eigs)
    if np.all(eigs.imag == 0):
        eigs = eigs.real
    return np.sort_complex(eigs) if np.iscomplexobj(eigs) else np.sort(eigs)


def layer_spectrum(params: ModelParams, phi: float = 0.0) -> np.ndarray:
    return block_eigenvalues(layer_jacobian(params, phi))


@dataclass(frozen=True)
class SlowManifoldExpansion:
    """First-order graph of the slow manifold over (phi, y).

    psi = phi + tau p1, zeta = 2 phi + tau q1, c z = (c-1) phi - phi^2/2 + g - tau w1

    ``p1_factor`` is the coefficient k in p1 = k y. Substituting the graph into
    the psi and zeta equations forces k = c. ``halved_psi`` selects k = c/2,
    which leaves an O(tau) defect in the psi equation.
    """

    kind: PerturbationKind
    c: float
    p1_factor: float

    @classmethod
    def for_params(cls, kind, params: ModelParams, halved_psi: bool = False):
        c = params.c
        return cls(kind, c, c / 2.0 if halved_psi else c)

    def p1(self, phi, y):
        return self.p1_factor * y

    def q1(self, phi, y):
        return self.c * y

    def omega1(self, phi, y):
        c = self.c
        w = (c - 1.0) / c * y - phi * y / c + y
        if self.kind is PerturbationKind.ME:
            w = w + phi * y
        return w

    def omega1_grad(self, phi, y):
        """(d omega1/d phi, d omega1/d y)."""
        c = self.c
        dphi, dy = -y / c, (c - 1.0) / c - phi / c + 1.0
        if self.kind is PerturbationKind.ME:
            dphi, dy = dphi + y, dy + phi
        return dphi, dy


def manifold_point(kind, params: ModelParams, phi: float, y: float, halved_psi: bool = False):
    """AugmentedState on the first-order slow manifold, with F = phi^2/2."""
    exp = SlowManifoldExpansion.for_params(kind, params, halved_psi)
    c, g, tau = params.c, params.g, params.tau
    z = ((c - 1.0) * phi - 0.5 * phi * phi + g - tau * exp.omega1(phi, y)) / c
    return AugmentedState(
        phi, y, z, phi + tau * exp.p1(phi, y), 2.0 * phi + tau * exp.q1(phi, y), 0.5 * phi * phi
    )


def expansion_defects(kind, params: ModelParams, phi: float, y: float, halved_psi: bool = False):
    """Signed invariance defects of the first-order manifold in the z, psi, zeta equations.

    Each defect is (tau-scaled derivative of the graph along the flow) minus
    (right-hand side), in the form the equations are written above. The F
    equation is not part of the graph and is excluded.
    """
    exp = SlowManifoldExpansion.for_params(kind, params, halved_psi)
    s = manifold_point(kind, params, phi, y, halved_psi)
    c, tau = params.c, params.tau
    z = s.z
    rhs_z, rhs_psi, rhs_zeta = _layer_rhs(kind, params, s)
    # graph derivatives along phi' = y, y' = z
    w_phi, w_y = exp.omega1_grad(phi, y)
    dz = ((c - 1.0) * y - phi * y - tau * (w_phi * y + w_y * z)) / c
    dpsi = y + tau * exp.p1_factor * z
    dzeta = 2.0 * y + tau * c * z
    return (
        tau * dz - rhs_z,
        c * (tau * dpsi - rhs_psi),
        c * (tau * dzeta - rhs_zeta),
    )


def expansion_residual(kind, params: ModelParams, phi: float, y: float, halved_psi: bool = False) -> float:
    """Largest absolute invariance defect; O(tau^2) for a correct expansion."""
    require_loop(params)
    return max(abs(d) for d in expansion_defects(kind, params, phi, y, halved_psi))


def reduced_vector_field(kind: PerturbationKind, params: ModelParams, phi, y):
    """Planar flow on the slow manifold with O(tau^2) terms dropped."""
    c, g, tau = params.c, params.g, params.tau
    base = ((c - 1.0) * phi - 0.5 * phi * phi + g) / c
    if kind is PerturbationKind.ME:
        damping = (2.0 * c - 1.0) / c * y + (c - 1.0) / c * phi * y
    else:
        damping = (2.0 * c - 1.0) / c * y - phi * y / c
    return y, base - tau / c * damping


def reduced_field(kind: PerturbationKind, params: ModelParams):
    """``reduced_vector_field`` as an array callable f(xi, state) for the integrators."""

    def field(xi, s):
        dphi, dy = reduced_vector_field(kind, params, s[0], s[1])
        return np.array([dphi, dy])

    return field
