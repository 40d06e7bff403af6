"""First-order reformulation F = p f'/f and its trigonometric substitution.

The Riccati form F' = -F^2/p - q halves the integration state but F runs
through infinities wherever f = 0.  Substituting
F = F1(x) + F2(x) cot(Phi/2) with gauge functions F1, F2 of our choice
turns those infinities into ordinary points of Phi (zeros of f sit at
Phi = 2 n pi) and the phase obeys a first-order equation in Phi alone.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable

from .core import Coefficients, SLProblem, ZeroCoefficient, default_fd_step
from .integrate import OdeSystem, StopReason, Tolerances, Trajectory, integrate

GaugeFunction = Callable[[float], complex]

_F2_FLOOR = 1e-280


class ZeroGauge(ZeroCoefficient):
    """The gauge function F2 vanished where it must not."""


def _zero(x: float) -> complex:
    return 0j


def _one(x: float) -> complex:
    return 1 + 0j


@dataclass(frozen=True)
class PhiSubstitution:
    """Gauge functions for F = F1 + F2 cot(Phi/2); F2 must not vanish."""

    F1: GaugeFunction = _zero
    F2: GaugeFunction = _one
    F1_prime: GaugeFunction | None = None
    F2_prime: GaugeFunction | None = None

    def values(self, x: float, h: float | None = None) -> tuple[complex, ...]:
        """(F1, F2, F1', F2') at x, derivatives by central FD if not given."""
        if h is None:
            h = default_fd_step(x)
        f1 = self.F1(x)
        f2 = self.F2(x)
        if abs(f2) < _F2_FLOOR:
            raise ZeroGauge(f"F2({x}) = {f2}")
        d1 = (
            self.F1_prime(x)
            if self.F1_prime is not None
            else (self.F1(x + h) - self.F1(x - h)) / (2.0 * h)
        )
        d2 = (
            self.F2_prime(x)
            if self.F2_prime is not None
            else (self.F2(x + h) - self.F2(x - h)) / (2.0 * h)
        )
        return f1, f2, d1, d2


DEFAULT_GAUGE = PhiSubstitution()  # F1 = 0, F2 = 1, the simplest choice


def riccati_rhs(problem: SLProblem, x: float, F: complex, lam: complex) -> complex:
    """F' = -F^2/p - q."""
    c = problem.coefficients
    p = c.p_checked(x, lam)
    return -F * F / p - c.q(x, lam)


def riccati_system(problem: SLProblem) -> OdeSystem:
    def rhs(x: float, y: tuple[complex, ...], lam: complex) -> tuple[complex]:
        return (riccati_rhs(problem, x, y[0], lam),)

    return OdeSystem(dimension=1, rhs=rhs)


def phi_rhs(
    problem: SLProblem,
    sub: PhiSubstitution,
    x: float,
    phi: complex,
    lam: complex,
) -> complex:
    """Phase equation for the substituted variable:

    Phi' = (2 F1 F2 + p F2')/(p F2) sin(Phi)
         - (p q + p F1' + F1^2 - F2^2)/(p F2) cos(Phi)
         + (p q + p F1' + F1^2 + F2^2)/(p F2)

    which passes smoothly through the points where f = 0.
    """
    c = problem.coefficients
    p = c.p_checked(x, lam)
    q = c.q(x, lam)
    f1, f2, d1, d2 = sub.values(x)
    pf2 = p * f2
    base = p * q + p * d1 + f1 * f1
    a = (2.0 * f1 * f2 + p * d2) / pf2
    b = (base - f2 * f2) / pf2
    const = (base + f2 * f2) / pf2
    return a * cmath.sin(phi) - b * cmath.cos(phi) + const


def phase_system(problem: SLProblem, sub: PhiSubstitution = DEFAULT_GAUGE) -> OdeSystem:
    def rhs(x: float, y: tuple[complex, ...], lam: complex) -> tuple[complex]:
        return (phi_rhs(problem, sub, x, y[0], lam),)

    return OdeSystem(dimension=1, rhs=rhs)


def phi_from_ratio_bc(
    problem: SLProblem, sub: PhiSubstitution, x: float, f_bc: complex
) -> complex:
    """Convert a boundary value F = f_bc at x into a Phi value.

    F = infinity (f = 0 there) maps to Phi = 0 exactly; otherwise
    cot(Phi/2) = (F - F1)/F2 on the principal branch.
    """
    if cmath.isinf(f_bc):
        return 0j
    f1, f2, _, _ = sub.values(x)
    t = (f_bc - f1) / f2
    # arccot on the principal branch
    return 2.0 * cmath.atan(1.0 / t)


def solve_finite_interval(
    problem: SLProblem,
    sub: PhiSubstitution = DEFAULT_GAUGE,
    lam: complex = 0j,
    tol: Tolerances = Tolerances(),
    phi_start: complex | None = None,
) -> complex:
    """Integrate the phase from the lower to the upper end and return
    Phi(upper); the eigenvalue condition (e.g. Phi(upper) = 2 n pi) is
    applied by the caller.

    Both ends must be finite.  The starting phase defaults to the value
    implied by the lower RatioValue boundary.
    """
    d = problem.domain
    if not (abs(d.lower) < float("inf") and abs(d.upper) < float("inf")):
        raise ValueError("solve_finite_interval needs a finite interval")
    if phi_start is None:
        spec = problem.boundaries[0]
        if spec.f_bc is None:
            raise ValueError("lower boundary does not define a starting phase")
        phi_start = phi_from_ratio_bc(problem, sub, d.lower, spec.f_bc)
    traj = integrate(
        phase_system(problem, sub),
        d.lower,
        d.upper,
        (phi_start,),
        lam,
        tol,
        store_path=False,
    )
    if traj.stop_reason is not StopReason.REACHED_END:
        raise RuntimeError(
            f"phase integration stopped early at x={traj.x_end} ({traj.stop_reason})"
        )
    return traj.y_end[0]


def phase_trajectory(
    problem: SLProblem,
    sub: PhiSubstitution = DEFAULT_GAUGE,
    lam: complex = 0j,
    tol: Tolerances = Tolerances(),
    phi_start: complex | None = None,
) -> Trajectory:
    """Like solve_finite_interval but keeping the accepted-step path."""
    d = problem.domain
    if phi_start is None:
        spec = problem.boundaries[0]
        if spec.f_bc is None:
            raise ValueError("lower boundary does not define a starting phase")
        phi_start = phi_from_ratio_bc(problem, sub, d.lower, spec.f_bc)
    return integrate(
        phase_system(problem, sub), d.lower, d.upper, (phi_start,), lam, tol
    )
