"""Eigenvalue location.

Real spectra: sample the winding value of the quantization condition on a
grid, bracket its crossings through integers and refine by bisection.

Complex spectra (stability): map Psi = Arg[quantization function] on a
rectangular grid of the eigenvalue plane -- the Spectral Web.  Roots of the
quantization function appear as positive unit charges (Psi increases
counterclockwise around them), poles as negative charges; charges are
detected by summing wrapped phase differences around grid plaquettes and
then polished by complex secant iteration.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .core import SchwarzianSLError

QuantizationFunction = Callable[[complex], complex]

_TWO_PI = 2.0 * math.pi


class NoConvergence(SchwarzianSLError):
    """Secant refinement ran out of iterations."""

    def __init__(self, message: str, last: complex, residual: float):
        super().__init__(message)
        self.last = last
        self.residual = residual


@dataclass(frozen=True)
class Crossing:
    bracket: tuple[float, float]
    n: int
    eigenvalue: float


@dataclass
class RealScan:
    grid: np.ndarray
    values: np.ndarray
    crossings: list[Crossing]
    failures: list[tuple[float, str]] = field(default_factory=list)

    @property
    def eigenvalues(self) -> list[float]:
        return [c.eigenvalue for c in self.crossings]


def scan_real(
    qf: QuantizationFunction,
    lam_range: tuple[float, float],
    n_samples: int,
    rel_width: float = 1e-8,
) -> RealScan:
    """Bracket and refine every integer crossing of the winding value.

    The grid is cell-centered inside ``lam_range`` so open-interval ranges
    (for instance ones whose endpoint would degenerate the launch state)
    are sampled safely.  Failed samples are recorded and skipped.
    """
    lo, hi = lam_range
    if n_samples < 2:
        raise ValueError("need at least 2 samples")
    width = (hi - lo) / n_samples
    grid = lo + (np.arange(n_samples) + 0.5) * width
    values = np.full(n_samples, np.nan)
    failures: list[tuple[float, str]] = []
    for i, lam in enumerate(grid):
        try:
            values[i] = complex(qf(complex(lam))).real
        except SchwarzianSLError as exc:
            failures.append((float(lam), str(exc)))

    def winding(lam: float) -> float:
        return complex(qf(complex(lam))).real

    crossings: list[Crossing] = []
    for i in range(n_samples - 1):
        v0, v1 = values[i], values[i + 1]
        if math.isnan(v0) or math.isnan(v1):
            continue
        n_lo = math.floor(min(v0, v1)) + 1
        n_hi = math.ceil(max(v0, v1)) - 1
        for n in range(n_lo, n_hi + 1):
            a, b = float(grid[i]), float(grid[i + 1])
            fa, fb = v0 - n, v1 - n
            if fa == 0.0:
                crossings.append(Crossing((a, b), n, a))
                continue
            if fa * fb > 0.0:
                continue
            while b - a > rel_width * max(abs(a), abs(b), 1e-30):
                mid = 0.5 * (a + b)
                fm = winding(mid) - n
                if fa * fm <= 0.0:
                    b = mid
                else:
                    a, fa = mid, fm
            crossings.append(Crossing((float(grid[i]), float(grid[i + 1])), n, 0.5 * (a + b)))
    return RealScan(grid=grid, values=values, crossings=crossings, failures=failures)


@dataclass(frozen=True)
class Charge:
    location: complex
    winding: int


@dataclass
class SpectralWeb:
    region: tuple[float, float, float, float]  # re_min, re_max, im_min, im_max
    nx: int
    ny: int
    psi: np.ndarray  # shape (nx, ny), NaN where evaluation failed
    charges: list[Charge]
    failures: list[tuple[complex, str]] = field(default_factory=list)

    def grid_re(self) -> np.ndarray:
        return np.linspace(self.region[0], self.region[1], self.nx)

    def grid_im(self) -> np.ndarray:
        return np.linspace(self.region[2], self.region[3], self.ny)

    @property
    def cell_size(self) -> tuple[float, float]:
        return (
            (self.region[1] - self.region[0]) / (self.nx - 1),
            (self.region[3] - self.region[2]) / (self.ny - 1),
        )

    def total_winding(self) -> int:
        return sum(c.winding for c in self.charges)

    def boundary_winding(self) -> int:
        """Winding of Psi along the outer rectangle, counterclockwise.

        The discrete argument principle says this equals the sum of all
        plaquette windings.  Requires a failure-free boundary.
        """
        psi = self.psi
        path = (
            [psi[i, 0] for i in range(self.nx)]
            + [psi[self.nx - 1, j] for j in range(1, self.ny)]
            + [psi[i, self.ny - 1] for i in range(self.nx - 2, -1, -1)]
            + [psi[0, j] for j in range(self.ny - 2, -1, -1)]
        )
        if any(math.isnan(v) for v in path):
            raise ValueError("web boundary contains failed samples")
        total = 0.0
        for a, b in zip(path, path[1:] + path[:1]):
            total += _wrap(b - a)
        return round(total / _TWO_PI)


def _wrap(d: float) -> float:
    return (d + math.pi) % _TWO_PI - math.pi


def _eval_samples(
    qf: QuantizationFunction, samples: np.ndarray, workers: int
) -> list[complex | None]:
    if workers <= 1:
        out: list[complex | None] = []
        for w in samples:
            try:
                out.append(complex(qf(complex(w))))
            except SchwarzianSLError:
                out.append(None)
        return out
    chunk = max(16, len(samples) // (8 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_SampleJob(qf), samples.tolist(), chunksize=chunk))


class _SampleJob:
    """Picklable wrapper that maps evaluation failures to None."""

    def __init__(self, qf: QuantizationFunction):
        self.qf = qf

    def __call__(self, w: complex) -> complex | None:
        try:
            return complex(self.qf(w))
        except SchwarzianSLError:
            return None


def spectral_web(
    qf: QuantizationFunction,
    region: tuple[float, float, float, float],
    nx: int,
    ny: int,
    workers: int = 1,
) -> SpectralWeb:
    """Build the phase map and detect root/pole charges.

    A plaquette is charged when the wrapped phase differences around its
    four edges do not cancel (|sum| > pi); adjacent charged plaquettes of
    the same sign cluster into one charge at their centroid.  Plaquettes
    touching failed samples are excluded.
    """
    if nx < 8 or ny < 8:
        raise ValueError("web grid must be at least 8x8")
    re = np.linspace(region[0], region[1], nx)
    im = np.linspace(region[2], region[3], ny)
    ww = (re[:, None] + 1j * im[None, :]).ravel()
    raw = _eval_samples(qf, ww, workers)
    psi = np.full(nx * ny, np.nan)
    failures: list[tuple[complex, str]] = []
    for idx, value in enumerate(raw):
        if value is None:
            failures.append((complex(ww[idx]), "evaluation failed"))
        else:
            psi[idx] = math.atan2(value.imag, value.real)
    psi = psi.reshape(nx, ny)

    d_re = _wrap_array(np.diff(psi, axis=0))  # (nx-1, ny)
    d_im = _wrap_array(np.diff(psi, axis=1))  # (nx, ny-1)
    loop = d_re[:, :-1] + d_im[1:, :] - d_re[:, 1:] - d_im[:-1, :]
    winding = np.zeros_like(loop, dtype=int)
    valid = ~np.isnan(loop)
    winding[valid] = np.rint(loop[valid] / _TWO_PI).astype(int)

    charges = _cluster_charges(winding, re, im)
    return SpectralWeb(
        region=tuple(region),
        nx=nx,
        ny=ny,
        psi=psi,
        charges=charges,
        failures=failures,
    )


def _wrap_array(d: np.ndarray) -> np.ndarray:
    return (d + math.pi) % _TWO_PI - math.pi


def _cluster_charges(
    winding: np.ndarray, re: np.ndarray, im: np.ndarray
) -> list[Charge]:
    """4-adjacency connected components of same-sign charged plaquettes."""
    charges: list[Charge] = []
    charged = np.argwhere(winding != 0)
    seen: set[tuple[int, int]] = set()
    index = {(int(i), int(j)) for i, j in charged}
    for seed in sorted(index):
        if seed in seen:
            continue
        sign = np.sign(winding[seed])
        stack = [seed]
        members: list[tuple[int, int]] = []
        seen.add(seed)
        while stack:
            cell = stack.pop()
            members.append(cell)
            i, j = cell
            for nb in ((i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)):
                if nb in index and nb not in seen and np.sign(winding[nb]) == sign:
                    seen.add(nb)
                    stack.append(nb)
        total = int(sum(winding[m] for m in members))
        centers = [
            0.5 * (re[i] + re[i + 1]) + 0.5j * (im[j] + im[j + 1]) for i, j in members
        ]
        charges.append(Charge(location=complex(np.mean(centers)), winding=total))
    charges.sort(key=lambda c: (c.location.real, c.location.imag))
    return charges


def refine_complex_root(
    qf: QuantizationFunction,
    seed: complex,
    tol: float = 1e-10,
    max_iter: int = 50,
) -> complex:
    """Polish a web charge by secant iteration in the complex plane.

    Converged when |qf| has dropped below tol relative to the seed residual
    or the step underflows; raises NoConvergence (carrying the last iterate
    and residual) after ``max_iter`` iterations.
    """
    w0 = complex(seed)
    f0 = complex(qf(w0))
    target = tol * max(abs(f0), 1e-300)
    step_floor = 1e-10 * max(abs(seed), 1e-30)
    if abs(f0) == 0.0:
        return w0
    w1 = w0 + 1e-4 * max(1.0, abs(seed)) * (1.0 + 0.5j)
    f1 = complex(qf(w1))
    for _ in range(max_iter):
        if f1 == f0:
            break
        w2 = w1 - f1 * (w1 - w0) / (f1 - f0)
        w0, f0 = w1, f1
        w1 = w2
        f1 = complex(qf(w1))
        if abs(f1) < target or abs(w1 - w0) < step_floor:
            return w1
    raise NoConvergence(
        f"secant did not converge from seed {seed}: residual {abs(f1)}",
        last=w1,
        residual=abs(f1),
    )


@dataclass(frozen=True)
class DispersionPoint:
    k: float
    omega: complex | None  # None marks a gap (root lost at this k)
    method: str = "web"


def dispersion_scan(
    problem_family: Callable[[float], QuantizationFunction],
    k_grid: Sequence[float],
    region: tuple[float, float, float, float],
    nx: int = 64,
    ny: int = 64,
    workers: int = 1,
    refine_tol: float = 1e-10,
) -> list[DispersionPoint]:
    """Track the most unstable root along a wavenumber grid.

    The first grid point gets a full web over ``region``; afterwards the
    previous root seeds a secant continuation, falling back to a fresh web
    (recentered on the last root) when the continuation diverges.  Lost
    roots are recorded as gaps rather than aborting the scan.
    """
    points: list[DispersionPoint] = []
    previous: complex | None = None
    span_re = region[1] - region[0]
    span_im = region[3] - region[2]
    for k in k_grid:
        qf = problem_family(k)
        root: complex | None = None
        method = "web"
        if previous is not None:
            try:
                root = refine_complex_root(qf, previous, refine_tol)
                method = "continuation"
            except (NoConvergence, SchwarzianSLError):
                root = None
        if root is None:
            if previous is None:
                window = tuple(region)
            else:
                window = (
                    previous.real - span_re / 2.0,
                    previous.real + span_re / 2.0,
                    max(previous.imag - span_im / 2.0, 1e-3),
                    previous.imag + span_im / 2.0,
                )
            web = spectral_web(qf, window, nx, ny, workers)
            roots = [c for c in web.charges if c.winding > 0]
            if roots:
                seed = max(roots, key=lambda c: c.location.imag).location
                try:
                    root = refine_complex_root(qf, seed, refine_tol)
                    method = "web"
                except NoConvergence:
                    root = None
        points.append(DispersionPoint(k=float(k), omega=root, method=method))
        if root is not None:
            previous = root
    return points
