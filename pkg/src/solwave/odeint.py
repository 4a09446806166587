"""Small-dimension ODE integration: fixed-step RK4, Dormand-Prince 5(4), events.

Fields have the signature ``f(xi, state) -> ndarray``. Integration runs in
either direction of xi; a Trajectory always stores samples in integration
order together with the field values, which give a cubic Hermite dense output.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import InvalidArgument, MaxStepsExceeded, NonFiniteState, StepUnderflow

RK4 = "RK4"
RK45 = "RK45"


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = RK45
    xi_span: tuple[float, float] = (0.0, 1.0)
    h: float = 1e-3
    atol: float = 1e-10
    rtol: float = 1e-10
    h_init: float = 1e-3
    h_min: float = 1e-12
    h_max: float = 0.5
    max_steps: int = 1_000_000

    def __post_init__(self):
        if self.method not in (RK4, RK45):
            raise InvalidArgument(f"unknown method {self.method!r}")
        if self.method == RK4 and not self.h > 0:
            raise InvalidArgument("RK4 step must be positive")
        if self.method == RK45:
            if not (self.atol > 0 and self.rtol > 0):
                raise InvalidArgument("tolerances must be positive")
            if not (0 < self.h_min <= self.h_init <= self.h_max):
                raise InvalidArgument("need 0 < h_min <= h_init <= h_max")


@dataclass
class Trajectory:
    xi: np.ndarray
    states: np.ndarray
    derivs: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def direction(self) -> float:
        return 1.0 if len(self.xi) < 2 or self.xi[-1] >= self.xi[0] else -1.0

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def dense(self, i: int, theta: float) -> np.ndarray:
        """Cubic Hermite interpolant on step i at fraction theta in [0, 1]."""
        h = self.xi[i + 1] - self.xi[i]
        y0, y1 = self.states[i], self.states[i + 1]
        f0, f1 = self.derivs[i], self.derivs[i + 1]
        t2, t3 = theta * theta, theta**3
        return (
            (2 * t3 - 3 * t2 + 1) * y0
            + (t3 - 2 * t2 + theta) * h * f0
            + (-2 * t3 + 3 * t2) * y1
            + (t3 - t2) * h * f1
        )

    def __call__(self, xi: float) -> np.ndarray:
        s = self.direction
        keys = s * self.xi
        i = int(np.searchsorted(keys, s * xi, side="right")) - 1
        i = min(max(i, 0), len(self.xi) - 2)
        h = self.xi[i + 1] - self.xi[i]
        return self.dense(i, (xi - self.xi[i]) / h)


def _check_finite(xi, y):
    if not np.all(np.isfinite(y)):
        raise NonFiniteState(f"non-finite state at xi={xi!r}")


def _rk4(fn, y0, cfg, stop):
    xi0, xi1 = cfg.xi_span
    span = xi1 - xi0
    n = max(1, int(math.ceil(abs(span) / cfg.h - 1e-9)))
    if n > cfg.max_steps:
        raise MaxStepsExceeded(f"RK4 needs {n} steps, limit {cfg.max_steps}")
    h = span / n
    xs, ys, fs = [xi0], [y0], [fn(xi0, y0)]
    y, f = y0, fs[0]
    for k in range(n):
        x = xi0 + k * h
        k1 = f
        k2 = fn(x + h / 2, y + h / 2 * k1)
        k3 = fn(x + h / 2, y + h / 2 * k2)
        k4 = fn(x + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        x = xi0 + (k + 1) * h
        _check_finite(x, y)
        f = fn(x, y)
        xs.append(x)
        ys.append(y)
        fs.append(f)
        if stop is not None and stop(x, y):
            break
    return xs, ys, fs, {"steps": len(xs) - 1, "rejected": 0}


# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


def _rk45(fn, y0, cfg, stop):
    xi0, xi1 = cfg.xi_span
    direction = 1.0 if xi1 >= xi0 else -1.0
    x, y = xi0, y0
    f = fn(x, y)
    xs, ys, fs = [x], [y], [f]
    h = cfg.h_init
    rejected = 0
    steps = 0
    k = np.empty((7,) + y0.shape)
    while direction * (xi1 - x) > 0:
        if steps >= cfg.max_steps:
            raise MaxStepsExceeded(f"more than {cfg.max_steps} steps before xi={xi1!r}")
        h = min(h, cfg.h_max, abs(xi1 - x))
        while True:
            hs = direction * h
            k[0] = f
            for i in range(1, 7):
                k[i] = fn(x + _C[i] * hs, y + hs * np.dot(_A[i], k[:i]))
            y_new = y + hs * np.dot(_B5, k)
            err = hs * np.dot(_E, k)
            scale = cfg.atol + cfg.rtol * np.maximum(np.abs(y), np.abs(y_new))
            err_norm = float(np.max(np.abs(err) / scale)) if np.all(np.isfinite(y_new)) else math.inf
            if err_norm <= 1.0:
                break
            rejected += 1
            factor = 0.2 if not math.isfinite(err_norm) else max(0.2, 0.9 * err_norm**-0.2)
            h *= factor
            if h < cfg.h_min:
                raise StepUnderflow(f"step {h:.3e} below h_min at xi={x!r}")
        last = abs(xi1 - x) <= h * (1 + 1e-12)
        x = xi1 if last else x + hs
        y = y_new
        _check_finite(x, y)
        f = k[6].copy()  # FSAL
        xs.append(x)
        ys.append(y)
        fs.append(f)
        steps += 1
        if stop is not None and stop(x, y):
            break
        grow = 5.0 if err_norm == 0 else min(5.0, max(0.2, 0.9 * err_norm**-0.2))
        h *= grow
    return xs, ys, fs, {"steps": steps, "rejected": rejected}


def integrate(
    fn: Callable,
    s0,
    cfg: IntegratorConfig,
    stop: Optional[Callable[[float, np.ndarray], bool]] = None,
    meta: Optional[dict] = None,
) -> Trajectory:
    """Integrate ``fn`` from ``s0`` over ``cfg.xi_span``.

    ``stop(xi, state)`` may end the run early, e.g. when a trajectory leaves
    the region of interest.
    """
    y0 = np.array(s0, dtype=float)
    _check_finite(cfg.xi_span[0], y0)
    runner = _rk4 if cfg.method == RK4 else _rk45
    xs, ys, fs, stats = runner(fn, y0, cfg, stop)
    info = {"method": cfg.method, **stats}
    if meta:
        info.update(meta)
    return Trajectory(np.array(xs), np.array(ys), np.array(fs), info)


@dataclass(frozen=True)
class Crossing:
    xi: float
    state: np.ndarray
    rising: bool


def detect_event(traj: Trajectory, event: Callable[[np.ndarray], float], refine_steps: int = 1) -> list[Crossing]:
    """Sign changes of ``event(state)`` along a trajectory.

    Each crossing is located by linear interpolation between samples, then
    polished with ``refine_steps`` secant steps on the Hermite dense output.
    """
    values = np.array([event(s) for s in traj.states])
    out = []
    for i in range(len(values) - 1):
        e0, e1 = values[i], values[i + 1]
        if e0 == 0 or e0 * e1 >= 0:
            if e1 == 0 and e0 != 0:
                out.append(Crossing(float(traj.xi[i + 1]), traj.states[i + 1].copy(), e0 < 0))
            continue
        t_a, v_a, t_b, v_b = 0.0, e0, 1.0, e1
        theta = e0 / (e0 - e1)
        for _ in range(refine_steps):
            v = event(traj.dense(i, theta))
            if v == 0:
                break
            # keep the bracket that still changes sign
            if (v < 0) == (v_a < 0):
                t_a, v_a = theta, v
            else:
                t_b, v_b = theta, v
            theta = t_a - v_a * (t_b - t_a) / (v_b - v_a)
        h = traj.xi[i + 1] - traj.xi[i]
        out.append(Crossing(float(traj.xi[i] + theta * h), traj.dense(i, theta), e0 < 0))
    return out
