"""Command-line surface: problem selection, solving, spectral webs,
eigenfunction export and dispersion scans.

Exit codes: 0 success, 2 configuration/validation error, 3 numerical
failure.  A JSON config file (--config) provides defaults; explicit flags
win.  Web evaluation parallelizes over --threads workers (fallback: the
SCHWARZIAN_SL_THREADS environment variable, then the CPU count).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Any

import numpy as np

from . import __version__
from .catalog import CATALOG, StabilityConfig, get_entry
from .core import SchwarzianSLError, validate
from .io import complex_columns, write_csv, write_json
from .minimalist import solve_finite_interval
from .mhd import JetQuantizationFunction, eigenfunctions_y, jet_trajectories
from .rootfind import (
    NoConvergence,
    dispersion_scan,
    refine_complex_root,
    scan_real,
    spectral_web,
)
from .schwarzian import (
    Approach,
    eigenfunction_bidirectional,
    g_difference_value,
    phi_winding_value,
    solve_asymptotic,
    solve_constant_from_bc,
)
from .integrate import Tolerances

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_PARAM_ALIASES = {"lambda": "lambda_param"}

METHODS = ("minimalist", "schwarzian-g", "schwarzian-phi")


class ConfigError(ValueError):
    pass


def _parse_params(text: str | None) -> dict[str, Any]:
    if not text:
        return {}
    out: dict[str, Any] = {}
    for item in text.split(","):
        if not item:
            continue
        if "=" not in item:
            raise ConfigError(f"--param entries must be key=value, got {item!r}")
        key, raw = item.split("=", 1)
        key = _PARAM_ALIASES.get(key.strip(), key.strip())
        try:
            value: Any = int(raw)
        except ValueError:
            try:
                value = float(raw)
            except ValueError:
                try:
                    value = complex(raw)
                except ValueError:
                    value = raw
        out[key] = value
    return out


def _parse_floats(text: str, n: int, what: str) -> tuple[float, ...]:
    parts = text.split(",")
    if len(parts) != n:
        raise ConfigError(f"{what} needs {n} comma-separated numbers, got {text!r}")
    return tuple(float(p) for p in parts)


def _parse_grid(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise ConfigError(f"--grid must look like 200x200, got {text!r}")
    return int(parts[0]), int(parts[1])


def _resolve_threads(value: int | None) -> int:
    if value is not None:
        return max(1, value)
    env = os.environ.get("SCHWARZIAN_SL_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _approach(method: str) -> Approach:
    return Approach.PHI if method == "schwarzian-phi" else Approach.G


def _tolerances(args: argparse.Namespace) -> Tolerances:
    return Tolerances(rel=args.rel, abs=args.abs)


def _check_method(entry_kind: str, method: str, finite: bool) -> None:
    if method not in METHODS:
        raise ConfigError(f"unknown method {method!r}; choose from {METHODS}")
    if entry_kind == "stability" and method == "minimalist":
        raise ConfigError("stability problems require a schwarzian method")
    if method == "minimalist" and not finite:
        raise ConfigError("the minimalist method needs a finite interval")


_NON_CONFIG_KEYS = ("func", "config", "out", "scan_out")  # artifact location,
# not part of the computation => byte-identical outputs for identical configs


def _meta(args: argparse.Namespace, **extra: Any) -> dict[str, Any]:
    config = {
        key: value
        for key, value in sorted(vars(args).items())
        if key not in _NON_CONFIG_KEYS and value is not None
    }
    meta = {"config": config, **extra}
    problem = getattr(args, "problem", None)
    if problem and problem in CATALOG:
        targets = CATALOG[problem].paper_targets
        if targets:
            meta["targets"] = [
                {"value": t.value, "n": t.n, "provenance": t.provenance}
                for t in targets
            ]
    return meta


def _emit(args: argparse.Namespace, meta: dict, columns, payload) -> None:
    if not args.out:
        return
    if args.format == "json":
        write_json(args.out, meta, payload)
    else:
        write_csv(args.out, meta, columns)
    print(f"wrote {args.out}")


def cmd_list(args: argparse.Namespace) -> int:
    for name in sorted(CATALOG):
        entry = CATALOG[name]
        params = ", ".join(f"{k}={v}" for k, v in entry.default_params.items())
        print(f"{name} [{entry.kind}, default method {entry.default_method}]")
        print(f"  {entry.description}")
        if params:
            print(f"  defaults: {params}")
        for t in entry.paper_targets:
            tag = f" (n={t.n})" if t.n is not None else ""
            value = t.value if t.value.imag else t.value.real
            print(f"  target{tag}: {value}  [{t.provenance}]")
    return EXIT_OK


def _solve_sl(args: argparse.Namespace, problem, method: str) -> int:
    tol = _tolerances(args)
    lo, hi = _parse_floats(args.range, 2, "--range")
    if method == "minimalist":
        def winding(lam: complex) -> complex:
            return solve_finite_interval(problem, lam=lam, tol=tol) / (2 * math.pi)
    else:
        # brackets come from the phase winding; the g method then polishes
        # each root on its own quantization condition below
        def winding(lam: complex) -> complex:
            return phi_winding_value(problem, lam, tol)

    scan = scan_real(winding, (lo, hi), args.samples)
    eigenvalues: list[complex] = [complex(c.eigenvalue) for c in scan.crossings]
    ns = [c.n for c in scan.crossings]
    if method == "schwarzian-g":
        # bracket on the phase winding, then polish on the g condition
        polished = []
        for ev in eigenvalues:
            qf = lambda lam: g_difference_value(problem, lam, tol)
            polished.append(refine_complex_root(qf, ev, tol=1e-10))
        eigenvalues = polished

    print(f"{problem.label}: {len(eigenvalues)} eigenvalue(s) in ({lo}, {hi})")
    for n, ev in zip(ns, eigenvalues):
        print(f"  n={n}: {ev.real:.12g}" + (f" + {ev.imag:.3g}i" if ev.imag else ""))
    meta = _meta(args, label=problem.label)
    columns = [("n", ns)] + complex_columns("eigenvalue", eigenvalues)
    payload = {
        "label": problem.label,
        "eigenvalues": eigenvalues,
        "scan": {"grid": scan.grid, "winding": scan.values},
    }
    _emit(args, meta, columns, payload)
    if args.scan_out:
        write_csv(
            args.scan_out,
            meta,
            [("lambda", scan.grid.tolist()), ("winding", scan.values.tolist())],
        )
        print(f"wrote {args.scan_out}")
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    entry = get_entry(args.problem)
    params = _parse_params(args.param)
    built = entry.build(**params)
    method = args.method or entry.default_method
    if entry.kind == "stability":
        raise ConfigError("use the web/dispersion commands for stability problems")
    diagnostics = validate(built)
    if diagnostics:
        for d in diagnostics:
            print(d, file=sys.stderr)
        return EXIT_CONFIG
    finite = math.isfinite(built.domain.lower) and math.isfinite(built.domain.upper)
    _check_method(entry.kind, method, finite)
    return _solve_sl(args, built, method)


def _stability_qf(
    config: StabilityConfig, method: str, args: argparse.Namespace
) -> JetQuantizationFunction:
    cuts = (
        _parse_floats(args.cuts, 2, "--cuts")
        if args.cuts
        else (0.01, 10.0)
    )
    return JetQuantizationFunction(
        model=config.model,
        m=config.m,
        k=config.k,
        approach=_approach(method),
        cuts=cuts,
        rel_tol=args.rel,
        abs_tol=args.abs,
    )


def cmd_web(args: argparse.Namespace) -> int:
    entry = get_entry(args.problem)
    if entry.kind != "stability":
        raise ConfigError("the web command expects a stability problem")
    method = args.method or entry.default_method
    _check_method(entry.kind, method, finite=False)
    config = entry.build(**_parse_params(args.param))
    region = _parse_floats(args.region, 4, "--region")
    nx, ny = _parse_grid(args.grid)
    workers = _resolve_threads(args.threads)
    qf = _stability_qf(config, method, args)
    web = spectral_web(qf, region, nx, ny, workers=workers)
    print(f"web {nx}x{ny} over {region}: {len(web.charges)} charge(s), "
          f"{len(web.failures)} failed sample(s)")
    roots = []
    for charge in web.charges:
        print(f"  winding {charge.winding:+d} near {charge.location:.6g}")
        if charge.winding > 0 and args.refine:
            try:
                root = refine_complex_root(qf, charge.location, tol=1e-10)
                roots.append(root)
                print(f"    refined root: {root:.10g}")
            except NoConvergence as exc:
                print(f"    refinement failed: {exc}", file=sys.stderr)
    meta = _meta(args, m=config.m, k=config.k)
    re = np.repeat(web.grid_re(), ny)
    im = np.tile(web.grid_im(), nx)
    columns = [
        ("Re omega", re.tolist()),
        ("Im omega", im.tolist()),
        ("Psi", web.psi.ravel().tolist()),
    ]
    payload = {
        "region": web.region,
        "nx": nx,
        "ny": ny,
        "charges": [
            {"location": c.location, "winding": c.winding} for c in web.charges
        ],
        "roots": roots,
        "psi": web.psi.ravel(),
    }
    _emit(args, meta, columns, payload)
    return EXIT_OK


def cmd_eigenfunction(args: argparse.Namespace) -> int:
    entry = get_entry(args.problem)
    params = _parse_params(args.param)
    built = entry.build(**params)
    method = args.method or entry.default_method
    tol = _tolerances(args)
    eigenvalue = complex(args.eigenvalue)
    if entry.kind == "stability":
        _check_method(entry.kind, method, finite=False)
        approach = _approach(method)
        eq = built.model.equilibrium()
        inward, outward = jet_trajectories(
            eq, built.m, built.k, eigenvalue, approach,
            start=built.model.radius, tol=tol, augmented=True,
        )
        constant = -inward.y_end[2]
        samples = eigenfunctions_y((inward, outward), constant, approach)
        meta = _meta(args, eigenvalue=eigenvalue)
        columns = [("r", samples.rs.tolist())]
        for name, values in (("y1", samples.y1), ("y2", samples.y2), ("Y", samples.Y)):
            columns += complex_columns(name, values)
        payload = {"r": samples.rs, "y1": samples.y1, "y2": samples.y2, "Y": samples.Y}
        _emit(args, meta, columns, payload)
        return EXIT_OK
    if method == "minimalist":
        raise ConfigError("eigenfunction export needs a schwarzian method")
    approach = _approach(method)
    low, high, _ = solve_asymptotic(
        built, eigenvalue, approach, tol, store_path=True
    )
    constant = solve_constant_from_bc(
        low.y_end, complex(float("inf"), 0.0), approach
    )
    samples = eigenfunction_bidirectional(low, high, constant, approach, built)
    xs = np.concatenate([low.xs[::-1], high.xs[1:]])
    states = np.concatenate([low.ys[::-1], high.ys[1:]])
    meta = _meta(args, eigenvalue=eigenvalue, label=built.label)
    columns = [("x", xs.tolist())]
    names = ("F_p", "Lam", "g") if approach is Approach.G else ("F1", "F2", "Phi")
    for j, name in enumerate(names):
        columns += complex_columns(name, states[:, j])
    columns += complex_columns("f", samples.f)
    payload = {"x": xs, "state": {n: states[:, j] for j, n in enumerate(names)},
               "f": samples.f, "F": samples.F}
    _emit(args, meta, columns, payload)
    print(f"{built.label}: sampled eigenfunction at {eigenvalue:g} "
          f"({len(xs)} points)")
    return EXIT_OK


def cmd_dispersion(args: argparse.Namespace) -> int:
    entry = get_entry(args.problem)
    if entry.kind != "stability":
        raise ConfigError("the dispersion command expects a stability problem")
    method = args.method or entry.default_method
    _check_method(entry.kind, method, finite=False)
    params = _parse_params(args.param)
    lo, hi, n = _parse_floats(args.kgrid, 3, "--kgrid")
    k_grid = np.linspace(lo, hi, int(n))
    region = _parse_floats(args.region, 4, "--region")
    workers = _resolve_threads(args.threads)
    base = entry.build(**params)

    def family(k: float) -> JetQuantizationFunction:
        return JetQuantizationFunction(
            model=base.model, m=base.m, k=float(k),
            approach=_approach(method), rel_tol=args.rel, abs_tol=args.abs,
        )

    nx, ny = _parse_grid(args.grid)
    points = dispersion_scan(family, k_grid, region, nx, ny, workers=workers)
    gaps = [p.k for p in points if p.omega is None]
    for p in points:
        if p.omega is None:
            print(f"  k={p.k:.4g}: root lost")
        else:
            print(f"  k={p.k:.4g}: omega = {p.omega:.8g} [{p.method}]")
    if gaps:
        print(f"{len(gaps)} gap(s) at k = {gaps}", file=sys.stderr)
    meta = _meta(args, m=base.m)
    ks = [p.k for p in points]
    res = [p.omega.real if p.omega is not None else math.nan for p in points]
    ims = [p.omega.imag if p.omega is not None else math.nan for p in points]
    columns = [("k", ks), ("Re omega", res), ("Im omega", ims)]
    payload = [{"k": p.k, "omega": p.omega, "method": p.method} for p in points]
    _emit(args, meta, columns, payload)
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--problem", required=True, help="catalog problem name")
    p.add_argument("--param", help="comma-separated key=value parameter overrides")
    p.add_argument("--method", choices=METHODS, help="solution formulation")
    p.add_argument("--rel", type=float, default=1e-8, help="relative tolerance")
    p.add_argument("--abs", type=float, default=1e-10, help="absolute tolerance")
    p.add_argument("--out", help="output file path")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schwarzian-sl",
        description="Sturm-Liouville and MHD-stability eigenvalue solver "
        "(Riccati/Schwarzian formulations, spectral webs)",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", help="JSON file with default flag values")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="show the problem catalog")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("solve", help="locate real eigenvalues")
    _add_common(p)
    p.add_argument("--range", default="0,25", help="eigenvalue scan range lo,hi")
    p.add_argument("--samples", type=int, default=120, help="scan grid size")
    p.add_argument("--scan-out", help="also write the raw (lambda, winding) scan")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("web", help="spectral web over a complex region")
    _add_common(p)
    p.add_argument("--region", required=True, help="Re_min,Re_max,Im_min,Im_max")
    p.add_argument("--grid", default="200x200", help="web resolution NXxNY")
    p.add_argument("--threads", type=int, help="worker processes")
    p.add_argument("--cuts", help="integration window lo,hi")
    p.add_argument("--refine", action="store_true", default=True,
                   help="polish detected roots (default)")
    p.add_argument("--no-refine", dest="refine", action="store_false")
    p.set_defaults(func=cmd_web)

    p = sub.add_parser("eigenfunction", help="sample an eigenfunction")
    _add_common(p)
    p.add_argument("--eigenvalue", required=True,
                   help="eigenvalue (complex literals like 3.08+1.97j allowed)")
    p.set_defaults(func=cmd_eigenfunction)

    p = sub.add_parser("dispersion", help="trace a dispersion relation")
    _add_common(p)
    p.add_argument("--kgrid", required=True, help="wavenumber grid lo,hi,n")
    p.add_argument("--region", required=True, help="initial web region")
    p.add_argument("--grid", default="64x64", help="fallback web resolution")
    p.add_argument("--threads", type=int, help="worker processes")
    p.set_defaults(func=cmd_dispersion)

    return parser


def _apply_config(args: argparse.Namespace, argv: list[str]) -> None:
    if not args.config:
        return
    with open(args.config) as fh:
        defaults = json.load(fh)
    if not isinstance(defaults, dict):
        raise ConfigError("config file must hold a JSON object")
    provided = {a.split("=", 1)[0] for a in argv if a.startswith("--")}
    for key, value in defaults.items():
        flag = "--" + key.replace("_", "-")
        attr = key.replace("-", "_")
        if flag in provided or not hasattr(args, attr):
            continue
        setattr(args, attr, value)


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args, argv)
        return args.func(args)
    except (ConfigError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SchwarzianSLError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
