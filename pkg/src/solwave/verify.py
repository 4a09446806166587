"""Property checks run by ``solwave verify``.

Every check returns a :class:`CheckResult`; the CLI prints them as a table and
exits non-zero if any fails. ``fault`` injects a known defect so the suite can
be shown to catch it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import core, kernel, melnikov, slowfast
from .core import ModelParams
from .odeint import RK4, RK45, IntegratorConfig, integrate
from .slowfast import PerturbationKind

FAULTS = ("i2-sign",)

REFERENCE_ROOTS = {
    ("ks", -0.2): 0.2660295689,
    ("ks", 0.0): 0.4166666667,
    ("ks", 2.0): 1.466998871,
    ("me", -0.2): 0.3286393802,
    ("me", 0.0): 0.4580398915,
    ("me", 2.0): 0.6801960271,
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def oracle_grid(n=20, c_range=(0.1, 5.0), g_range=(-0.4, 3.0)):
    """(c, g) points of an n x n grid with Delta > 0."""
    pts = []
    for c in np.linspace(*c_range, n):
        for g in np.linspace(*g_range, n):
            if (c - 1.0) ** 2 + 2.0 * g > 0:
                pts.append((float(c), float(g)))
    return pts


def check_abelian_oracle(fault=None, rel_tol=1e-8) -> CheckResult:
    closed_I2 = melnikov.abelian_I2
    if fault == "i2-sign":
        closed_I2 = lambda p: -melnikov.abelian_I2(p)  # noqa: E731
    worst = 0.0
    pts = oracle_grid()
    for c, g in pts:
        p = ModelParams(c, g)
        for closed, which in ((melnikov.abelian_I1, "I1"), (closed_I2, "I2")):
            ref = melnikov.abelian_oracle(p, which)
            worst = max(worst, abs(closed(p) - ref) / abs(ref))
    return CheckResult("abelian closed form vs quadrature", worst <= rel_tol,
                       f"max rel err {worst:.2e} over {len(pts)} points (tol {rel_tol:g})")


def check_layer_spectrum(tol=1e-10) -> CheckResult:
    worst = 0.0
    for c in (0.25, 0.5, 1.0, 2.0, 5.0):
        eig = slowfast.layer_spectrum(ModelParams(c, 0.0), phi=0.3)
        expected = np.sort([0.0, 0.0, -c, 2.0 / c, 2.0 / c])
        worst = max(worst, float(np.max(np.abs(eig - expected))))
    return CheckResult("layer spectrum {0,0,-c,2/c,2/c}", worst <= tol, f"max err {worst:.2e}")


def expansion_slope(kind, params: ModelParams, taus=None, halved_psi=False) -> float:
    """Log-log slope of the worst-case manifold defect over a box around the loop."""
    taus = np.geomspace(1e-4, 1e-2, 7) if taus is None else np.asarray(taus)
    eq = core.equilibria(params)
    orbit = core.HomoclinicOrbit(params)
    xis = np.linspace(-3.0 / orbit.width, 3.0 / orbit.width, 41)
    pts = list(zip(orbit.phi(xis), orbit.y(xis))) + [(eq.phi2, 0.1), (0.5 * (eq.phi1 + eq.phi2), -0.2)]
    res = []
    for tau in taus:
        p = params.with_(tau=float(tau))
        res.append(max(slowfast.expansion_residual(kind, p, float(a), float(b), halved_psi) for a, b in pts))
    slope, _ = np.polyfit(np.log(taus), np.log(res), 1)
    return float(slope)


def check_expansion_order() -> CheckResult:
    slopes = {k.value: expansion_slope(k, ModelParams(0.5, 0.0)) for k in PerturbationKind}
    ok = all(abs(s - 2.0) <= 0.1 for s in slopes.values())
    return CheckResult("slow-manifold defect is O(tau^2)", ok,
                       ", ".join(f"{k}: slope {s:.3f}" for k, s in slopes.items()))


def check_kernel() -> CheckResult:
    worst = 0.0
    for tau in (1e-3, 1e-2, 0.1, 1.0, 2.0):
        mass, mean = kernel.kernel_moments(kernel.DelayKernel(tau))
        worst = max(worst, abs(mass - 1.0), abs(mean - tau))
    taus = [0.1, 0.05, 0.025, 0.0125]
    errs = kernel.convergence_check(lambda x, s: math.sin(s) + 0.5 * math.cos(2 * s), 0.0, 0.0, taus)
    slope = kernel.convergence_slope(taus, errs)
    ok = worst <= 1e-10 and 0.8 <= slope <= 1.2
    return CheckResult("kernel moments and tau -> 0 limit", ok,
                       f"moment err {worst:.2e}, convergence slope {slope:.3f}")


def check_roots(tol=1e-6) -> CheckResult:
    worst = 0.0
    certified = True
    for (kind, g), expected in REFERENCE_ROOTS.items():
        r = melnikov.find_c_star(kind, g)
        worst = max(worst, abs(r.c_star - expected))
        k = PerturbationKind.parse(kind)
        lo, hi = melnikov.m_star(k, r.c_star - 1e-9, g), melnikov.m_star(k, r.c_star + 1e-9, g)
        certified &= lo * hi < 0 and abs(r.derivative) > 1e-6
    return CheckResult("wave-speed roots and certificates", worst <= tol and certified,
                       f"max |c* - reference| {worst:.2e}, sign-change certificates {'ok' if certified else 'FAILED'}")


def check_orbit(tol=1e-10) -> CheckResult:
    worst_h = worst_res = 0.0
    for c, g in ((0.5, 0.0), (2.0, 0.0), (1.5, -0.1)):
        p = ModelParams(c, g)
        orbit = core.HomoclinicOrbit(p)
        xi = np.linspace(-30.0, 30.0, 10_000)
        h = core.first_integral(p, orbit.phi(xi), orbit.y(xi))
        worst_h = max(worst_h, float(np.max(np.abs(h - orbit.eq.h1))) / max(1.0, abs(orbit.eq.h1)))
        worst_res = max(worst_res, float(np.max(np.abs(core.profile_residual(p, np.linspace(-20, 20, 4001))))))
    ok = worst_h <= tol and worst_res <= 1e-9
    return CheckResult("closed-form orbit on H = h1 and solves the ODE", ok,
                       f"level-set err {worst_h:.2e}, ODE residual {worst_res:.2e}")


def check_conservation() -> CheckResult:
    p = ModelParams(0.5, 0.0)
    eq = core.equilibria(p)
    start = np.array([0.5 * (eq.phi2 + eq.phi_r), 0.0])

    def field(xi, s):
        return np.array(core.planar_field(p, s[0], s[1]))

    traj = integrate(field, start, IntegratorConfig(RK4, (0.0, 50.0), h=1e-3))
    drift = float(np.max(np.abs(core.first_integral(p, traj.states[:, 0], traj.states[:, 1])
                                - core.first_integral(p, *start))))
    lin = integrate(lambda x, s: -s, [1.0], IntegratorConfig(RK45, (0.0, 1.0), atol=1e-10, rtol=1e-10))
    err45 = abs(lin.final[0] - math.exp(-1.0))
    ok = drift <= 1e-8 and err45 <= 1e-9
    return CheckResult("integrator accuracy", bool(ok), f"RK4 energy drift {drift:.2e}, RK45 exp(-1) err {err45:.2e}")


def check_cases() -> CheckResult:
    ok = True
    for g in (-0.4, -0.2, -0.05):
        c_peak, peak = melnikov.ks_high_branch_peak(g)
        ok &= math.isclose(melnikov.m_star(melnikov.KS, c_peak, g), peak, rel_tol=1e-12, abs_tol=1e-12) and peak < 0
        for kind in PerturbationKind:
            ok &= isinstance(melnikov.zero_existence(kind, g, "high"), melnikov.NoZero)
            ok &= isinstance(melnikov.zero_existence(kind, g, "low"), melnikov.UniqueZeroIn)
    for kind in PerturbationKind:
        ok &= isinstance(melnikov.zero_existence(kind, 2.0), melnikov.UniqueZeroIn)
        ok &= isinstance(melnikov.zero_existence(kind, -0.6, "low"), melnikov.NoZero)
    return CheckResult("case analysis of Melnikov zeros", bool(ok), "KS/ME cases for g<0 and g>=0")


def check_derivatives(seed=0, n=100, tol=1e-6) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    done = 0
    while done < n:
        c, g = rng.uniform(0.05, 4.0), rng.uniform(-0.45, 3.0)
        if (c - 1.0) ** 2 + 2.0 * g < 1e-2:
            continue
        kind = PerturbationKind.KS if done % 2 else PerturbationKind.ME
        h = 1e-6
        fd = (melnikov.m_star(kind, c + h, g) - melnikov.m_star(kind, c - h, g)) / (2 * h)
        worst = max(worst, abs(fd - melnikov.melnikov_dc(kind, ModelParams(c, g))))
        done += 1
    return CheckResult("dM*/dc vs finite differences", worst <= tol, f"max err {worst:.2e} at {n} points")


def run_all(fault=None, seed=0) -> list[CheckResult]:
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}")
    checks: list[Callable[[], CheckResult]] = [
        lambda: check_abelian_oracle(fault),
        check_layer_spectrum,
        check_expansion_order,
        check_kernel,
        check_roots,
        lambda: check_derivatives(seed),
        check_orbit,
        check_conservation,
        check_cases,
    ]
    return [chk() for chk in checks]
