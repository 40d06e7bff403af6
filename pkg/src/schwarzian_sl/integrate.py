"""Adaptive integration of complex-valued first-order ODE systems.

The engine is an embedded Dormand-Prince 5(4) pair with PI step-size
control, operating on tuples of Python complex scalars (the systems here
have dimension <= 4, where scalar arithmetic beats array overhead).
Integration runs along a real independent variable in either direction.

Stopping semantics:

* ``ReachedEnd``   -- the target abscissa was reached.
* ``EventFired``   -- a user predicate became true at an accepted step.
* ``StepFailure``  -- the step size underflowed ``min_step`` (typically
  while fighting a pole of the right-hand side) or the step budget ran
  out; the last accepted state is returned, never NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

ComplexVector = tuple[complex, ...]
RhsFunction = Callable[[float, ComplexVector, complex], Sequence[complex]]
EventPredicate = Callable[[float, ComplexVector], bool]


class DimensionMismatch(ValueError):
    """State or rhs output length disagrees with the declared dimension."""


class NonFiniteRhs(ValueError):
    """The right-hand side is NaN/inf already at the launch point."""


class StopReason(Enum):
    REACHED_END = "ReachedEnd"
    EVENT_FIRED = "EventFired"
    STEP_FAILURE = "StepFailure"


@dataclass(frozen=True)
class Tolerances:
    """Local error control: per step, error <= abs + rel*|y| componentwise."""

    rel: float = 1e-8
    abs: float = 1e-10
    max_steps: int = 100_000
    min_step: float = 1e-12

    def __post_init__(self) -> None:
        if self.rel <= 0.0 or self.abs <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")


@dataclass(frozen=True)
class OdeSystem:
    dimension: int
    rhs: RhsFunction


@dataclass
class Trajectory:
    """Accepted-step samples of one integration leg.

    ``xs`` is strictly monotone in the direction of integration and
    ``ys[k]`` is the state at ``xs[k]``; ``error_estimate`` accumulates the
    magnitudes of the local error estimates of the accepted steps (a crude
    but usable bound on the global error).
    """

    xs: np.ndarray
    ys: np.ndarray
    terminal: tuple[float, ComplexVector]
    stop_reason: StopReason
    error_estimate: np.ndarray

    @property
    def x_end(self) -> float:
        return self.terminal[0]

    @property
    def y_end(self) -> ComplexVector:
        return self.terminal[1]


# Dormand-Prince 5(4) tableau.
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = (
    9017 / 3168,
    -355 / 33,
    46732 / 5247,
    49 / 176,
    -5103 / 18656,
)
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71 / 57600,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)

# Hairer-style PI controller.
_SAFETY = 0.9
_BETA = 0.04
_EXPO = 0.2 - 0.75 * _BETA
_MIN_FACTOR = 0.2  # strongest shrink per step
_MAX_FACTOR = 10.0  # strongest growth per step

_ARITHMETIC_ERRORS = (OverflowError, ZeroDivisionError, FloatingPointError)


def _finite(z: complex) -> bool:
    # inf - inf and nan - nan are both NaN, so this rejects inf and NaN.
    return z.real - z.real == 0.0 and z.imag - z.imag == 0.0


def _rms(values: list[float]) -> float:
    return math.sqrt(sum(v * v for v in values) / len(values))


def _initial_step(
    rhs: RhsFunction,
    x0: float,
    y0: ComplexVector,
    f0: ComplexVector,
    lam: complex,
    direction: float,
    span: float,
    tol: Tolerances,
) -> float:
    scale = [tol.abs + tol.rel * abs(v) for v in y0]
    d0 = _rms([abs(y0[i]) / scale[i] for i in range(len(y0))])
    d1 = _rms([abs(f0[i]) / scale[i] for i in range(len(y0))])
    h0 = 1e-6 * span if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, span)
    try:
        y1 = tuple(y0[i] + direction * h0 * f0[i] for i in range(len(y0)))
        f1 = tuple(rhs(x0 + direction * h0, y1, lam))
        d2 = _rms([abs(f1[i] - f0[i]) / scale[i] for i in range(len(y0))]) / h0
    except _ARITHMETIC_ERRORS:
        d2 = 0.0
    d_max = max(d1, d2)
    h1 = (0.01 / d_max) ** 0.2 if d_max > 1e-15 else max(1e-6 * span, h0 * 1e3)
    return min(100.0 * h0, h1, span)


def integrate(
    sys: OdeSystem,
    x0: float,
    x1: float,
    y0: Sequence[complex],
    lam: complex = 0j,
    tol: Tolerances = Tolerances(),
    event: EventPredicate | None = None,
    store_path: bool = True,
) -> Trajectory:
    """Integrate ``sys`` from x0 to x1 starting at state ``y0``.

    Stops early when ``event`` becomes true at an accepted step endpoint
    (no sub-step localization) or when the controller cannot keep the local
    error within tolerance without shrinking below ``tol.min_step``.
    """
    if x0 == x1:
        raise ValueError("x0 and x1 must differ")
    n = sys.dimension
    if len(y0) != n:
        raise DimensionMismatch(f"state has length {len(y0)}, system dimension {n}")
    rhs = sys.rhs
    y = tuple(complex(v) for v in y0)
    f = tuple(complex(v) for v in rhs(x0, y, lam))
    if len(f) != n:
        raise DimensionMismatch(f"rhs returned length {len(f)}, expected {n}")
    if not all(_finite(v) for v in f):
        raise NonFiniteRhs(f"rhs is not finite at x={x0}")

    direction = 1.0 if x1 > x0 else -1.0
    span = abs(x1 - x0)
    h = _initial_step(rhs, x0, y, f, lam, direction, span, tol)

    xs = [x0]
    ys = [y]
    err_acc = [0.0] * n
    x = x0
    fac_old = 1e-4
    reason = StopReason.STEP_FAILURE
    indices = range(n)

    steps = 0
    while steps < tol.max_steps:
        steps += 1
        remaining = abs(x1 - x)
        last = h >= remaining
        if last:
            h = remaining
        hd = direction * h

        try:
            k1 = f
            y2 = tuple(y[i] + hd * (_A21 * k1[i]) for i in indices)
            k2 = rhs(x + _C2 * hd, y2, lam)
            y3 = tuple(y[i] + hd * (_A31 * k1[i] + _A32 * k2[i]) for i in indices)
            k3 = rhs(x + _C3 * hd, y3, lam)
            y4 = tuple(
                y[i] + hd * (_A41 * k1[i] + _A42 * k2[i] + _A43 * k3[i])
                for i in indices
            )
            k4 = rhs(x + _C4 * hd, y4, lam)
            y5 = tuple(
                y[i]
                + hd * (_A51 * k1[i] + _A52 * k2[i] + _A53 * k3[i] + _A54 * k4[i])
                for i in indices
            )
            k5 = rhs(x + _C5 * hd, y5, lam)
            y6 = tuple(
                y[i]
                + hd
                * (
                    _A61 * k1[i]
                    + _A62 * k2[i]
                    + _A63 * k3[i]
                    + _A64 * k4[i]
                    + _A65 * k5[i]
                )
                for i in indices
            )
            k6 = rhs(x + hd, y6, lam)
            y_new = tuple(
                y[i]
                + hd
                * (
                    _B1 * k1[i]
                    + _B3 * k3[i]
                    + _B4 * k4[i]
                    + _B5 * k5[i]
                    + _B6 * k6[i]
                )
                for i in indices
            )
            x_new = x1 if last else x + hd
            k7 = rhs(x_new, y_new, lam)
            err = tuple(
                hd
                * (
                    _E1 * k1[i]
                    + _E3 * k3[i]
                    + _E4 * k4[i]
                    + _E5 * k5[i]
                    + _E6 * k6[i]
                    + _E7 * k7[i]
                )
                for i in indices
            )
            bad = not all(_finite(v) for v in y_new) or not all(
                _finite(v) for v in err
            )
        except _ARITHMETIC_ERRORS:
            bad = True

        if bad:
            h *= 0.1
            if h < tol.min_step:
                reason = StopReason.STEP_FAILURE
                break
            continue

        err_norm = _rms(
            [
                abs(err[i]) / (tol.abs + tol.rel * max(abs(y[i]), abs(y_new[i])))
                for i in indices
            ]
        )

        if err_norm <= 1.0:
            x = x_new
            y = y_new
            f = tuple(k7)  # FSAL
            if store_path:
                xs.append(x)
                ys.append(y)
            for i in indices:
                err_acc[i] += abs(err[i])
            if event is not None and event(x, y):
                reason = StopReason.EVENT_FIRED
                break
            if last:
                reason = StopReason.REACHED_END
                break
            fac11 = max(err_norm, 1e-10) ** _EXPO
            factor = fac11 / fac_old**_BETA / _SAFETY
            factor = max(1.0 / _MAX_FACTOR, min(1.0 / _MIN_FACTOR, factor))
            h = h / factor
            fac_old = max(err_norm, 1e-4)
        else:
            fac11 = err_norm**_EXPO
            h = h / min(1.0 / _MIN_FACTOR, fac11 / _SAFETY)
            if h < tol.min_step:
                reason = StopReason.STEP_FAILURE
                break

    if not store_path:
        xs = [x0, x] if x != x0 else [x0]
        ys = [ys[0], y] if x != x0 else [ys[0]]
    return Trajectory(
        xs=np.asarray(xs, dtype=float),
        ys=np.asarray(ys, dtype=complex),
        terminal=(x, y),
        stop_reason=reason,
        error_estimate=np.asarray(err_acc, dtype=float),
    )


def integrate_bidirectional(
    sys: OdeSystem,
    start: float,
    cuts: tuple[float, float],
    y0: Sequence[complex],
    lam: complex = 0j,
    tol: Tolerances = Tolerances(),
    event: EventPredicate | None = None,
    store_path: bool = True,
) -> tuple[Trajectory, Trajectory]:
    """Launch the same initial state from ``start`` toward both cuts.

    Returns (toward cuts[0], toward cuts[1]); the terminal states carry the
    asymptotic values used by the quantization conditions.
    """
    lo, hi = cuts
    if not lo < start < hi:
        raise ValueError(f"cuts {cuts} must straddle the start point {start}")
    low = integrate(sys, start, lo, y0, lam, tol, event, store_path)
    high = integrate(sys, start, hi, y0, lam, tol, event, store_path)
    return low, high


def integrate_checkpoints(
    sys: OdeSystem,
    x0: float,
    y0: Sequence[complex],
    checkpoints: Sequence[float],
    lam: complex = 0j,
    tol: Tolerances = Tolerances(),
) -> np.ndarray:
    """Chain integration legs so the state is sampled exactly at the
    requested abscissae (which must be strictly monotone away from x0)."""
    states = []
    x = x0
    y: Sequence[complex] = tuple(complex(v) for v in y0)
    for target in checkpoints:
        if target == x:
            states.append(tuple(y))
            continue
        leg = integrate(sys, x, target, y, lam, tol, store_path=False)
        if leg.stop_reason is not StopReason.REACHED_END:
            raise RuntimeError(
                f"checkpoint integration stalled at x={leg.x_end} ({leg.stop_reason})"
            )
        x, y = leg.terminal
        states.append(tuple(y))
    return np.asarray(states, dtype=complex)
