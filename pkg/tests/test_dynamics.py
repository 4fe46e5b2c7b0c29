import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

from lvaci import balances as bl
from lvaci import dynamics as dy
from lvaci import laurent as lr
from lvaci.lv_core import LVSystem

KM = LVSystem(1, -1, 1)


def test_equilibria_stay_put():
    for s, x0 in [(LVSystem(3, -2, 5), (0.0, 0.0, 0.0)), (KM, (1.0, 1.0, 1.0))]:
        traj = dy.integrate(s, x0, 2.0, 0.01)
        assert np.all(traj.states == np.array(x0))
        assert dy.drift_report(s, traj).h_drift == 0


def test_trajectory_shape_and_endpoint():
    traj = dy.integrate(KM, (1.0, 2.0, 3.0), 1.05, 0.1)
    assert len(traj.times) == len(traj.states) == 12
    assert traj.times[-1] == pytest.approx(1.05, abs=1e-15)
    assert np.all(np.diff(traj.times) > 0)


def test_bad_arguments():
    with pytest.raises(ValueError):
        dy.integrate(KM, (1.0, 1.0, 1.0), 1.0, 0.0)
    with pytest.raises(ValueError):
        dy.integrate(KM, (1.0, 1.0, 1.0), -1.0, 0.1)


def test_blow_up_reports_time():
    # x1' = x1 x2 with x2 > 0 dominant: finite-time blow-up off the positive orthant
    with pytest.raises(dy.BlowUp) as info:
        dy.integrate(LVSystem(1, 1, 1), (1.0, -2.0, 3.0), 10.0, 1e-3)
    assert 0 < info.value.t_last < 10
    assert len(info.value.trajectory.times) > 1


def test_drift_km():
    traj = dy.integrate(KM, (1.0, 2.0, 3.0), 10.0, 1e-3)
    rep = dy.drift_report(KM, traj)
    assert rep.valid_region
    assert rep.h_drift < 1e-8 and rep.f_drift < 1e-8
    assert rep.within(1e-8)


def test_fourth_order_on_casimir():
    drifts = []
    for h in (4e-3, 2e-3, 1e-3):
        drifts.append(dy.drift_report(KM, dy.integrate(KM, (1.0, 2.0, 3.0), 10.0, h)).f_drift)
    for coarse, fine in zip(drifts, drifts[1:]):
        assert 12 < coarse / fine < 20


def test_richardson_error_is_fourth_order():
    s = LVSystem(1, -1, 2)
    e1 = dy.richardson_error(s, (1.0, 2.0, 3.0), 2.0, 0.02)
    e2 = dy.richardson_error(s, (1.0, 2.0, 3.0), 2.0, 0.01)
    assert 12 < e1 / e2 < 20


def test_f_only_on_positive_stretch():
    # (1, 0, 1): x2' = -x1 x2 + x2 x3 keeps sign, start x1 < 0
    s = LVSystem(1, 0, 1)
    traj = dy.integrate(s, (-1.0, 2.0, 3.0), 0.1, 1e-3)
    rep = dy.drift_report(s, traj)
    assert not rep.valid_region and rep.f_drift is None


def test_closed_form_residual_random():
    rng = random.Random(5)
    worst = 0.0
    n = 0
    while n < 100:
        a, c = rng.choice([(1, 2), (2, 1), (1, -1), (F(1, 2), 3)])
        k = rng.uniform(0.2, 2.0)
        C1, C2 = rng.uniform(0.1, 3.0), -rng.uniform(0.1, 3.0)
        t = rng.uniform(0.0, 2.0)
        a_, c_ = float(a), float(c)
        x = dy.closed_form_solution(a_, c_, k, C1, C2, t)
        assert sum(x) == pytest.approx(k, rel=1e-14)
        worst = max(worst, dy.closed_form_residual(a_, c_, k, C1, C2, t))
        n += 1
    assert worst < 1e-10


def test_closed_form_pole():
    a, c, k, C2 = 1.0, 2.0, 1.0, 5.0
    # choose C1 so that the denominator vanishes at t* = 0.3
    t_star = 0.3
    C1 = (C2 - a * math.exp(-c * k * t_star)) / math.exp(a * k * t_star)
    with pytest.raises(dy.PoleAt):
        dy.closed_form_solution(a, c, k, C1, C2, t_star)
    with pytest.raises(ValueError):
        dy.closed_form_solution(a, c, 0.0, 1.0, 1.0, 0.1)


def test_rk4_matches_closed_form_at_fourth_order():
    s = LVSystem(1, 3, 2)
    x0 = (1.0, 2.0, 3.0)
    k, C1, C2 = dy.closed_form_constants(1.0, 2.0, x0)
    exact = np.array(dy.closed_form_solution(1.0, 2.0, k, C1, C2, 1.0))
    errs = [np.max(np.abs(dy.integrate(s, x0, 1.0, h).states[-1] - exact)) for h in (0.02, 0.01)]
    assert 12 < errs[0] / errs[1] < 20


def test_closed_form_fit_leaves_k_and_time_shift():
    # refitting at a later time only moves C1 / C2 along the flow
    a, c = 1.0, 2.0
    s = LVSystem(1, 3, 2)
    x0 = (1.0, 2.0, 3.0)
    k, C1, C2 = dy.closed_form_constants(a, c, x0)
    t1 = 0.4
    x1 = dy.integrate(s, x0, t1, 1e-4).final
    k2, C1b, C2b = dy.closed_form_constants(a, c, x1)
    assert k2 == pytest.approx(k, rel=1e-13)
    scale = math.exp(c * k * t1)
    assert C1b == pytest.approx(C1 * math.exp(a * k * t1) * scale, rel=1e-8)
    assert C2b == pytest.approx(C2 * scale, rel=1e-8)


def test_closed_form_chart():
    with pytest.raises(ValueError):
        dy.closed_form_constants(1.0, 2.0, (1.0, 1.0, 0.0))


def _balance(order=8):
    comp = next(c for c in bl.nontrivial_components(KM) if c.label == "x13")
    return lr.expand(KM, comp, order)


def test_series_leading_term():
    bal = _balance()
    coeffs = bal.instantiate(bal.random_values(random.Random(7), 3))
    for t in (1e-3, 1e-5):
        x = dy.evaluate_series(coeffs, t)
        assert np.allclose(x * t, [float(v) for v in coeffs[0]], atol=10 * t)


def test_laurent_vs_numeric_order_six():
    bal = _balance(8)
    assert dy.laurent_vs_numeric(KM, bal, [1e-3, 1e-2], order=6) < 1e-4


def test_laurent_truncation_scaling():
    bal = _balance(10)
    t = 0.1
    errs = [dy.laurent_vs_numeric(KM, bal, [1e-3, t], order=n) for n in (4, 6, 8)]
    for e_n, e_n2 in zip(errs, errs[1:]):
        ratio = e_n2 / e_n
        assert t**2 / 10 < ratio < 10 * t**2


def test_laurent_needs_unobstructed():
    bal = _balance()
    bal.obstructed_at = 3
    with pytest.raises(ValueError):
        dy.laurent_vs_numeric(KM, bal, [1e-3, 1e-2])


def test_lax_examples():
    zero = ((0,) * 3,) * 3
    assert dy.lax_residual_km((1, 1, 1)) == zero
    assert dy.lax_residual_km((2, -1, F(1, 3))) == zero


def test_h3_and_traces_conserved():
    km = dy.KM_PERIODIC
    traj = dy.integrate(km, (1.0, 2.0, 3.0), 10.0, 1e-3)
    assert dy.invariant_drift(traj, dy.h3_km) < 1e-8
    t0 = dy.trace_powers_km(tuple(traj.states[0]))
    t1 = dy.trace_powers_km(tuple(traj.states[-1]))
    assert np.allclose(t0, t1, rtol=1e-8)
    # trace(L^3) = 3 H3
    x = (F(2), F(-1), F(1, 3))
    assert dy.trace_powers_km(x)[2] == 3 * (1 + x[0] * x[1] * x[2])


def test_pole_order_estimate_on_simple_pole():
    t_star = 1.0
    times = np.linspace(0.5, 0.999, 50)
    vals = 1.0 / (t_star - times)
    assert dy.pole_order_estimate(times, vals, t_star) == pytest.approx(1.0, abs=1e-9)
