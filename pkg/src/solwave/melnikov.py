"""Abelian integrals, Melnikov functions and the persistent wave speed c*(g).

Both perturbations reduce to a planar flow whose O(tau) damping is a linear
combination of y and phi*y, so the Melnikov function is a combination of

    I1 = loop integral of y^2 dxi,   I2 = loop integral of phi y^2 dxi,

taken with the orientation phi_r -> phi1 (both come out with the sign of the
closed forms below). Factoring out the positive size term leaves

    KS:  M* = (5/7) sqrt(Delta) - c
    ME:  M* = (5/7)(c - 1) sqrt(Delta) + c^2

whose simple zeros in c pick the speed at which the solitary wave persists.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy import integrate

from .core import ModelParams, equilibria, require_loop
from .errors import BracketFailure, InvalidArgument, NoRoot, QuadratureFailure
from .slowfast import PerturbationKind

KS = PerturbationKind.KS
ME = PerturbationKind.ME


def _delta(c, g):
    return (c - 1.0) ** 2 + 2.0 * g


def abelian_I1(params: ModelParams) -> float:
    root = require_loop(params)
    return -24.0 / 5.0 * math.sqrt(1.0 / params.c) * root**2.5


def abelian_I2(params: ModelParams) -> float:
    root = require_loop(params)
    c = params.c
    return -8.0 / 35.0 * math.sqrt(1.0 / c) * (15.0 * root + 21.0 * c - 21.0) * root**2.5


def abelian_oracle(params: ModelParams, which: str, n_points: int = 200) -> float:
    """Loop integral by adaptive quadrature in the phi variable.

    On the loop y^2 = (phi_r - phi)(phi - phi1)^2 / (3c), so the loop integral
    of w(phi) y dphi is 2 sqrt(1/(3c)) int_{phi_r}^{phi1} w (phi - phi1) sqrt(phi_r - phi) dphi.
    Substituting phi = phi_r - u^2 removes the square-root endpoint. ``n_points``
    caps the number of adaptive subintervals.
    """
    if which not in ("I1", "I2"):
        raise InvalidArgument("which must be 'I1' or 'I2'")
    eq = equilibria(params)
    phi_r, phi1, width = eq.phi_r, eq.phi1, eq.loop_width
    weight = (lambda p: 1.0) if which == "I1" else (lambda p: p)

    def integrand(u):
        phi = phi_r - u * u
        return weight(phi) * (phi - phi1) * u * u

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, _ = integrate.quad(
                integrand, 0.0, math.sqrt(width), epsabs=0.0, epsrel=1e-11, limit=n_points
            )
        except integrate.IntegrationWarning as exc:
            raise QuadratureFailure(str(exc)) from exc
    # dphi = -2u du and the limits phi_r -> phi1 map to u: 0 -> sqrt(width)
    return -2.0 * 2.0 * math.sqrt(1.0 / (3.0 * params.c)) * value


def prefactor(kind: PerturbationKind, params: ModelParams) -> float:
    """Positive size term (24 / 5c^2) sqrt(1/c) Delta^(5/4), negated for ME."""
    root = require_loop(params)
    c = params.c
    size = 24.0 / (5.0 * c * c) * math.sqrt(1.0 / c) * root**2.5
    return size if kind is KS else -size


def m_star(kind: PerturbationKind, c: float, g: float) -> float:
    """Reduced Melnikov factor. Delta is clamped at 0 so bracket endpoints evaluate."""
    root = math.sqrt(max(_delta(c, g), 0.0))
    if kind is KS:
        return 5.0 / 7.0 * root - c
    return 5.0 * (c - 1.0) / 7.0 * root + c * c


def melnikov_function(kind: PerturbationKind, params: ModelParams, I1=None, I2=None) -> float:
    c = params.c
    I1 = abelian_I1(params) if I1 is None else I1
    I2 = abelian_I2(params) if I2 is None else I2
    if kind is KS:
        return (2.0 * c - 1.0) / (c * c) * I1 - I2 / (c * c)
    return (2.0 * c - 1.0) / (c * c) * I1 + (c - 1.0) / (c * c) * I2


@dataclass(frozen=True)
class MelnikovEval:
    kind: PerturbationKind
    I1: float
    I2: float
    M: float
    M_star: float
    prefactor: float


def melnikov(kind: PerturbationKind, params: ModelParams) -> MelnikovEval:
    I1, I2 = abelian_I1(params), abelian_I2(params)
    M = melnikov_function(kind, params, I1, I2)
    pre = prefactor(kind, params)
    ms = m_star(kind, params.c, params.g)
    factored = pre * ms
    # cancellation in M is bounded by the size of its two summands
    c = params.c
    scale = abs((2.0 * c - 1.0) * I1) / (c * c) + abs((1.0 if kind is KS else c - 1.0) * I2) / (c * c)
    if abs(M - factored) > 1e-12 * scale:
        raise ArithmeticError(f"M={M!r} disagrees with prefactor*M*={factored!r}")
    return MelnikovEval(kind, I1, I2, M, ms, pre)


def melnikov_dc(kind: PerturbationKind, params: ModelParams) -> float:
    """dM*/dc in closed form."""
    root = require_loop(params)
    c, g = params.c, params.g
    if kind is KS:
        return 5.0 * (c - 1.0) / (7.0 * root) - 1.0
    return 2.0 / 7.0 * (7.0 * c * root + 5.0 * (c - 1.0) ** 2 + 5.0 * g) / root


# -- zero existence ---------------------------------------------------------


@dataclass(frozen=True)
class UniqueZeroIn:
    lo: float
    hi: float


@dataclass(frozen=True)
class NoZero:
    reason: str


BRACKET_CAP = 1e6


def _expand_hi(kind, g, start=1.0):
    lo_sign = math.copysign(1.0, m_star(kind, 0.0, g))
    hi = start
    while math.copysign(1.0, m_star(kind, hi, g)) == lo_sign:
        hi *= 2.0
        if hi > BRACKET_CAP:
            raise BracketFailure(f"no sign change of M* on (0, {BRACKET_CAP:g}] for g={g}")
    return hi


def zero_existence(kind, g: float, branch: str = "low"):
    """Case analysis of the zeros of M*(., g) on an admissible branch of c.

    For g < 0 admissibility (c-1)^2 > -2g splits c > 0 into a low branch
    (0, 1 - sqrt(-2g)) and a high branch (1 + sqrt(-2g), inf). For g >= 0 the
    whole half-line is one branch and ``branch`` is ignored.
    """
    kind = PerturbationKind.parse(kind)
    if branch not in ("low", "high"):
        raise InvalidArgument("branch must be 'low' or 'high'")
    if g >= 0:
        return UniqueZeroIn(0.0, _expand_hi(kind, g))
    gap = math.sqrt(-2.0 * g)
    if branch == "high":
        if kind is KS:
            # M* peaks at c = 1 + (7/6) sqrt(-3g) with value -(4 sqrt3/7) sqrt(-g) - 1
            return NoZero("KS high branch: max M* = -(4*sqrt(3)/7)*sqrt(-g) - 1 < 0")
        return NoZero("ME high branch: M* increasing from (1 + sqrt(-2g))^2 > 0")
    if gap >= 1.0:
        return NoZero("g <= -1/2 leaves no admissible low branch")
    return UniqueZeroIn(0.0, 1.0 - gap)


def ks_high_branch_peak(g: float) -> tuple[float, float]:
    """Maximizer and maximum of the KS M* on the high branch (g < 0)."""
    if not g < 0:
        raise InvalidArgument("the high branch only exists for g < 0")
    c_peak = 1.0 + 7.0 / 6.0 * math.sqrt(-3.0 * g)
    return c_peak, -4.0 * math.sqrt(3.0) / 7.0 * math.sqrt(-g) - 1.0


# -- root finding -----------------------------------------------------------


@dataclass(frozen=True)
class RootResult:
    c_star: float
    bracket: tuple[float, float]
    iterations: int
    residual: float
    derivative: float


def bisect_secant(fn, lo, hi, width=1e-10, secant_steps=3, max_iter=200):
    """Bisection down to ``width``, then a few secant steps kept inside the bracket.

    Returns (root, iterations).
    """
    f_lo, f_hi = fn(lo), fn(hi)
    if f_lo == 0:
        return lo, 0
    if f_hi == 0:
        return hi, 0
    if f_lo * f_hi > 0:
        raise BracketFailure(f"no sign change on [{lo!r}, {hi!r}]")
    it = 0
    while hi - lo > width and it < max_iter:
        mid = 0.5 * (lo + hi)
        f_mid = fn(mid)
        it += 1
        if f_mid == 0:
            return mid, it
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    x0, f0, x1, f1 = lo, f_lo, hi, f_hi
    best = (x0, f0) if abs(f0) < abs(f1) else (x1, f1)
    for _ in range(secant_steps):
        if f1 == f0:
            break
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        if not lo <= x2 <= hi:
            break
        f2 = fn(x2)
        it += 1
        if abs(f2) < abs(best[1]):
            best = (x2, f2)
        if f2 == 0:
            break
        x0, f0, x1, f1 = x1, f1, x2, f2
    return best[0], it


def find_c_star(kind, g: float, branch: str = "low") -> RootResult:
    kind = PerturbationKind.parse(kind)
    case = zero_existence(kind, g, branch)
    if isinstance(case, NoZero):
        raise NoRoot(case.reason)
    fn = lambda c: m_star(kind, c, g)  # noqa: E731
    root, iterations = bisect_secant(fn, case.lo, case.hi)
    residual = abs(fn(root))
    deriv = melnikov_dc(kind, ModelParams(root, g))
    if residual > 1e-12:
        raise BracketFailure(f"root polish stalled: |M*| = {residual:.3e}")
    if abs(deriv) <= 1e-6:
        raise BracketFailure(f"zero at c={root!r} is not simple (dM*/dc = {deriv:.3e})")
    return RootResult(root, (case.lo, case.hi), iterations, residual, deriv)
