import cmath
import math

import numpy as np
import pytest

import schwarzian_sl as s
from schwarzian_sl.integrate import StopReason


def oscillator_system():
    return s.OdeSystem(1, lambda x, y, lam: (1j * y[0],))


def test_exponential_rotation():
    tr = s.integrate(oscillator_system(), 0.0, math.pi, (1 + 0j,))
    assert abs(tr.y_end[0] - (-1.0)) < 1e-8
    assert tr.stop_reason is StopReason.REACHED_END


def test_logistic_decay():
    sys = s.OdeSystem(1, lambda x, y, lam: (-y[0] * y[0],))
    tr = s.integrate(sys, 0.0, 1.0, (1 + 0j,))
    assert abs(tr.y_end[0] - 0.5) < 1e-8


def test_riccati_constant_coefficients():
    # p = 1, q = 1: F' = -F^2 - 1 with F(0) = 0 has F(x) = -tan(x)
    sys = s.OdeSystem(1, lambda x, y, lam: (-y[0] * y[0] - 1.0,))
    tr = s.integrate(sys, 0.0, 1.0, (0j,))
    assert abs(tr.y_end[0] - (-math.tan(1.0))) < 1e-8


def test_backward_integration():
    tr = s.integrate(oscillator_system(), 0.0, -math.pi, (1 + 0j,))
    assert abs(tr.y_end[0] - (-1.0)) < 1e-8
    assert np.all(np.diff(tr.xs) < 0)


def test_bidirectional_trivial():
    sys = s.OdeSystem(2, lambda x, y, lam: (0j, 0j))
    y0 = (1 + 2j, -3j)
    low, high = s.integrate_bidirectional(sys, 0.0, (-2.0, 5.0), y0)
    assert low.terminal == (-2.0, y0)
    assert high.terminal == (5.0, y0)


def test_bidirectional_requires_straddle():
    sys = s.OdeSystem(1, lambda x, y, lam: (0j,))
    with pytest.raises(ValueError):
        s.integrate_bidirectional(sys, 0.0, (1.0, 5.0), (0j,))


def test_morse_phi_legs_reach_or_fire(morse_problem):
    launch = s.default_initial_state(morse_problem, 0.0, 18.75)
    low, high = s.integrate_bidirectional(
        s.phi_system(morse_problem), 0.0, (-7.0, 15.0), launch, 18.75
    )
    for tr in (low, high):
        assert tr.stop_reason in (StopReason.REACHED_END, StopReason.EVENT_FIRED)


def test_decay_event_fires_before_cut(harmonic_problem):
    # ground state: F2 ~ 1/f1^2 decays through 1e-12 well inside the cut
    launch = s.default_initial_state(harmonic_problem, 0.0, 0.5)
    event = lambda x, y: abs(y[1]) < 1e-12
    tr = s.integrate(
        s.phi_system(harmonic_problem), 0.0, 6.0, launch, 0.5, event=event
    )
    assert tr.stop_reason is StopReason.EVENT_FIRED
    assert tr.x_end < 6.0
    assert abs(tr.y_end[1]) < 1e-12


def test_dimension_mismatch():
    sys = s.OdeSystem(2, lambda x, y, lam: (0j, 0j))
    with pytest.raises(s.DimensionMismatch):
        s.integrate(sys, 0.0, 1.0, (0j,))


def test_rhs_length_checked():
    sys = s.OdeSystem(2, lambda x, y, lam: (0j,))
    with pytest.raises(s.DimensionMismatch):
        s.integrate(sys, 0.0, 1.0, (0j, 0j))


def test_non_finite_rhs_at_launch():
    sys = s.OdeSystem(1, lambda x, y, lam: (complex("nan"),))
    with pytest.raises(s.NonFiniteRhs):
        s.integrate(sys, 0.0, 1.0, (1 + 0j,))


def test_deterministic_bitwise(morse_problem):
    launch = s.default_initial_state(morse_problem, 0.0, 12.0)
    runs = [
        s.integrate(s.phi_system(morse_problem), 0.0, 15.0, launch, 12.0)
        for _ in range(2)
    ]
    assert np.array_equal(runs[0].xs, runs[1].xs)
    assert np.array_equal(runs[0].ys, runs[1].ys)


def test_tolerance_halving_self_consistency():
    sys = s.OdeSystem(1, lambda x, y, lam: (1j * y[0],))
    coarse_tol = s.Tolerances(rel=1e-6, abs=1e-8)
    fine_tol = s.Tolerances(rel=5e-7, abs=5e-9)
    coarse = s.integrate(sys, 0.0, 10.0, (1 + 0j,), tol=coarse_tol)
    fine = s.integrate(sys, 0.0, 10.0, (1 + 0j,), tol=fine_tol)
    change = abs(fine.y_end[0] - coarse.y_end[0])
    assert change < coarse.error_estimate[0]


def test_blowup_gives_step_failure_not_nan():
    # y' = y^2 from y(0)=1 blows up at x=1; the stepper must stop cleanly
    sys = s.OdeSystem(1, lambda x, y, lam: (y[0] * y[0],))
    tr = s.integrate(sys, 0.0, 2.0, (1 + 0j,))
    assert tr.stop_reason is StopReason.STEP_FAILURE
    assert np.all(np.isfinite(tr.ys.real)) and np.all(np.isfinite(tr.ys.imag))
    assert 0.9 < tr.x_end < 1.1


def test_jet_riccati_pole_passage(cohn_model):
    # real omega puts a genuine pole of Y inside the jet; never silent NaN
    eq = cohn_model.equilibrium()
    sys = s.y_riccati_system(eq, 0, math.pi)
    tr = s.integrate(sys, 0.9, 0.1, (0.05 + 0j,), 8.0 + 0j)
    assert tr.stop_reason in (StopReason.STEP_FAILURE, StopReason.REACHED_END)
    assert np.all(np.isfinite(tr.ys.real)) and np.all(np.isfinite(tr.ys.imag))


def test_max_steps_exhaustion():
    sys = s.OdeSystem(1, lambda x, y, lam: (1j * y[0],))
    tol = s.Tolerances(rel=1e-10, abs=1e-12, max_steps=5)
    tr = s.integrate(sys, 0.0, 100.0, (1 + 0j,), tol=tol)
    assert tr.stop_reason is StopReason.STEP_FAILURE
    assert len(tr.xs) <= 6


def test_checkpoints_match_direct_run():
    sys = s.OdeSystem(1, lambda x, y, lam: (1j * y[0],))
    states = s.integrate_checkpoints(sys, 0.0, (1 + 0j,), [0.5, 1.0, 2.0])
    direct = s.integrate(sys, 0.0, 2.0, (1 + 0j,))
    assert abs(states[-1][0] - direct.y_end[0]) < 1e-9
    assert abs(states[0][0] - cmath.exp(0.5j)) < 1e-9


def test_monotone_xs_and_matching_rows():
    tr = s.integrate(oscillator_system(), 0.0, 3.0, (1 + 0j,))
    assert np.all(np.diff(tr.xs) > 0)
    assert tr.ys.shape == (len(tr.xs), 1)
