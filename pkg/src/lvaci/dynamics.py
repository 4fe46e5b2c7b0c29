"""Floating-point checks: RK4 trajectories, conserved quantities, the
closed-form solution of the a - b + c = 0 family, series-vs-flow agreement
near a pole, and the Lax pair of the periodic Kac-van Moerbeke system.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np

from .exactmath import matmul, matsub, to_fraction
from .lv_core import LVSystem, hamiltonian, log_casimir, vector_field

DEFAULT_CEILING = 1e12


class BlowUp(RuntimeError):
    def __init__(self, t_last: float, trajectory: "Trajectory"):
        super().__init__(f"solution left the ceiling after t = {t_last:.6g}")
        self.t_last = t_last
        self.trajectory = trajectory


class NonFinite(RuntimeError):
    pass


class PoleAt(ZeroDivisionError):
    pass


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (len(times), 3)
    step: float
    method: str = "rk4"

    @property
    def final(self) -> tuple:
        return tuple(float(v) for v in self.states[-1])


def _field(a: float, b: float, c: float, x: np.ndarray) -> np.ndarray:
    x1, x2, x3 = x
    return np.array(
        [a * x1 * x2 + b * x1 * x3, -a * x1 * x2 + c * x2 * x3, -b * x1 * x3 - c * x2 * x3]
    )


def rk4_increment(coeffs: tuple, x: np.ndarray, h: float) -> np.ndarray:
    a, b, c = coeffs
    k1 = _field(a, b, c, x)
    k2 = _field(a, b, c, x + 0.5 * h * k1)
    k3 = _field(a, b, c, x + 0.5 * h * k2)
    k4 = _field(a, b, c, x + h * k3)
    return (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def rk4_step(coeffs: tuple, x: np.ndarray, h: float) -> np.ndarray:
    return x + rk4_increment(coeffs, x, h)


def integrate(
    s: LVSystem,
    x0: Sequence[float],
    t_end: float,
    h: float,
    *,
    t0: float = 0.0,
    ceiling: float = DEFAULT_CEILING,
) -> Trajectory:
    """Classical fixed-step RK4 from ``t0`` to ``t_end``.

    The last step is shortened to land exactly on ``t_end``. Increments are
    accumulated with Kahan compensation so that over 10^4+ steps the
    rounding floor stays below the truncation error being measured. Raises
    :class:`BlowUp` once any component exceeds ``ceiling`` in magnitude.
    """
    if h <= 0:
        raise ValueError("step must be positive")
    if t_end <= t0:
        raise ValueError("t_end must exceed the start time")
    coeffs = s.as_floats()
    n = int(math.ceil((t_end - t0) / h - 1e-9))
    times = np.empty(n + 1)
    states = np.empty((n + 1, 3))
    times[0] = t0
    states[0] = np.asarray(x0, dtype=float)
    x = states[0]
    comp = np.zeros(3)
    for i in range(1, n + 1):
        step = h if i < n else (t_end - t0) - (n - 1) * h
        inc = rk4_increment(coeffs, x, step) - comp
        new = x + inc
        comp = (new - x) - inc
        x = new
        times[i] = t0 + (i - 1) * h + step
        if not np.all(np.isfinite(x)):
            partial = Trajectory(times[:i], states[:i], h)
            if np.any(np.isinf(x)) or np.max(np.abs(states[i - 1])) > 1e-3 * ceiling:
                raise BlowUp(float(times[i - 1]), partial)
            raise NonFinite(f"non-finite state at t = {times[i]:.6g}")
        if np.max(np.abs(x)) > ceiling:
            raise BlowUp(float(times[i - 1]), Trajectory(times[:i], states[:i], h))
        states[i] = x
    return Trajectory(times, states, h)


def richardson_error(s: LVSystem, x0: Sequence[float], t_end: float, h: float) -> float:
    """Error estimate of the step-h endpoint from a half-step rerun."""
    coarse = integrate(s, x0, t_end, h).states[-1]
    fine = integrate(s, x0, t_end, h / 2).states[-1]
    return float(np.max(np.abs(coarse - fine))) * 16.0 / 15.0


@dataclass
class DriftReport:
    h_drift: float
    f_drift: Optional[float]
    valid_region: bool

    def within(self, tol: float) -> bool:
        return self.h_drift < tol and (self.f_drift is None or self.f_drift < tol)

    def to_dict(self) -> dict:
        return {"h_drift": self.h_drift, "f_drift": self.f_drift, "valid_region": self.valid_region}


def _relative_drift(values: np.ndarray) -> float:
    ref = values[0]
    scale = abs(ref) if ref != 0 else 1.0
    return float(np.max(np.abs(values - ref)) / scale)


def drift_report(s: LVSystem, traj: Trajectory) -> DriftReport:
    H = traj.states.sum(axis=1)
    h_drift = _relative_drift(H)
    positive = np.all(traj.states > 0, axis=1)
    valid = bool(np.all(positive))
    # F only on the leading stretch that stays in the open positive orthant
    stop = len(positive) if valid else int(np.argmin(positive))
    if stop == 0:
        return DriftReport(h_drift, None, False)
    logs = np.array([log_casimir(s, tuple(float(v) for v in x)) for x in traj.states[:stop]])
    f_drift = float(np.max(np.abs(np.expm1(logs - logs[0]))))
    return DriftReport(h_drift, f_drift, valid)


def invariant_drift(traj: Trajectory, fn) -> float:
    return _relative_drift(np.array([fn(x) for x in traj.states]))


def h3_km(x) -> float:
    """Cubic invariant 1 + x1 x2 x3 of the periodic KM system."""
    return 1.0 + x[0] * x[1] * x[2]


# --------------------------------------------------------------------------
# closed form for b = a + c
# --------------------------------------------------------------------------

def closed_form_denominator(a, c, k, C1, C2, t) -> float:
    return C1 * math.exp(a * k * t) + a * math.exp(-c * k * t) - C2


def closed_form_solution(a: float, c: float, k: float, C1: float, C2: float, t: float) -> tuple:
    """Solution of the system (a, a + c, c) on the level set H = k."""
    if k == 0:
        raise ValueError("the closed form needs a nonzero level k")
    e1 = C1 * math.exp(a * k * t)
    e2 = a * math.exp(-c * k * t)
    den = e1 + e2 - C2
    if abs(den) <= 1e-13 * (abs(e1) + abs(e2) + abs(C2)):
        raise PoleAt(f"denominator vanishes at t = {t}")
    x1 = k * e1 / den
    x3 = k * e2 / den
    x2 = -k * C2 / den
    return (x1, x2, x3)


def closed_form_constants(a: float, c: float, x0: Sequence[float]) -> tuple[float, float, float]:
    """(k, C1, C2) of the closed form through ``x0`` at t = 0."""
    x1, x2, x3 = (float(v) for v in x0)
    k = x1 + x2 + x3
    # at t = 0: x1 : x2 : x3 = C1 : -C2 : a
    if x3 == 0:
        raise ValueError("x3(0) = 0 is outside the closed-form chart")
    C1 = a * x1 / x3
    C2 = -a * x2 / x3
    return k, C1, C2


def closed_form_residual(a, c, k, C1, C2, t, dt=1e-5) -> float:
    """Max relative residual |x' - f(x)| by a fourth-order central difference."""
    s = LVSystem(Fraction(a).limit_denominator(10**6), Fraction(a + c).limit_denominator(10**6), Fraction(c).limit_denominator(10**6))
    xs = [np.array(closed_form_solution(a, c, k, C1, C2, t + j * dt)) for j in (-2, -1, 1, 2)]
    deriv = (xs[0] - 8 * xs[1] + 8 * xs[2] - xs[3]) / (12 * dt)
    x = closed_form_solution(a, c, k, C1, C2, t)
    f = np.array(vector_field(s, tuple(float(v) for v in x)))
    scale = max(1.0, float(np.max(np.abs(f))))
    return float(np.max(np.abs(deriv - f)) / scale)


# --------------------------------------------------------------------------
# Laurent series vs numerics
# --------------------------------------------------------------------------

def evaluate_series(coefficients: Sequence[Sequence[Fraction]], t: float, order: int | None = None) -> np.ndarray:
    """x(t) = t^-1 sum_{k <= order} x^(k) t^k in floating point."""
    order = len(coefficients) - 1 if order is None else order
    acc = np.zeros(3)
    for k in range(order, -1, -1):
        acc = acc * t + np.array([float(v) for v in coefficients[k]])
    return acc / t


def _flow_between(s: LVSystem, x: np.ndarray, t_from: float, t_to: float, steps_per_decade: int) -> np.ndarray:
    # geometric sub-intervals keep h proportional to the distance from the pole
    n_seg = max(1, int(math.ceil(abs(math.log10(t_to / t_from)) * 8)))
    grid = np.geomspace(t_from, t_to, n_seg + 1)
    coeffs = s.as_floats()
    for lo, hi in zip(grid[:-1], grid[1:]):
        n = max(1, int(math.ceil(steps_per_decade / 8)))
        h = (hi - lo) / n
        for _ in range(n):
            x = rk4_step(coeffs, x, h)
    return x


def laurent_vs_numeric(
    s: LVSystem,
    bal,
    t_offsets: Sequence[float],
    values: Mapping[int, Fraction] | None = None,
    *,
    order: int | None = None,
    steps_per_decade: int = 4000,
) -> float:
    """Largest relative gap between the truncated series and the RK4 flow.

    The flow starts from the series at the smallest offset, where the
    truncation error is smallest, and is carried to each larger offset.
    """
    if not bal.unobstructed:
        raise ValueError("balance is obstructed")
    if values is None:
        values = bal.random_values(random.Random(7), bound=3)
    coeffs = bal.instantiate(values)
    offsets = sorted(float(t) for t in t_offsets)
    t_start = offsets[0]
    x = evaluate_series(coeffs, t_start, order)
    worst = 0.0
    t_cur = t_start
    for t in offsets[1:]:
        x = _flow_between(s, x, t_cur, t, steps_per_decade)
        t_cur = t
        ref = evaluate_series(coeffs, t, order)
        worst = max(worst, float(np.linalg.norm(x - ref) / np.linalg.norm(ref)))
    return worst


def pole_order_estimate(times: np.ndarray, values: np.ndarray, t_star: float) -> float:
    """Slope of log|x| against log|t* - t|; a diagnostic only."""
    d = np.log(np.abs(t_star - times))
    v = np.log(np.abs(values))
    slope = np.polyfit(d, v, 1)[0]
    return float(-slope)


# --------------------------------------------------------------------------
# periodic KM Lax pair
# --------------------------------------------------------------------------

KM_PERIODIC = LVSystem(-1, 1, -1)


def lax_pair_km(x) -> tuple[tuple, tuple]:
    x1, x2, x3 = x
    one, zero = x1 - x1 + 1, x1 - x1
    L = ((zero, x1, one), (one, zero, x2), (x3, one, zero))
    B = ((zero, zero, x1 * x2), (x2 * x3, zero, zero), (zero, x1 * x3, zero))
    return L, B


def lax_residual_km(x) -> tuple:
    """L' - [L, B] for the periodic KM system; the zero matrix identically."""
    x = tuple(to_fraction(v) for v in x)
    L, B = lax_pair_km(x)
    xdot = vector_field(KM_PERIODIC, x)
    zero = Fraction(0)
    Ldot = ((zero, xdot[0], zero), (zero, zero, xdot[1]), (xdot[2], zero, zero))
    comm = matsub(matmul(L, B), matmul(B, L))
    return matsub(Ldot, comm)


def trace_powers_km(x, kmax: int = 3) -> list:
    L, _ = lax_pair_km(x)
    out, P = [], L
    for _ in range(kmax):
        out.append(sum(P[i][i] for i in range(3)))
        P = matmul(P, L)
    return out
