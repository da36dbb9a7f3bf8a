"""Command-line front end: ``bwh {medium,factorize,fieldmap,farfield,verify}``.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 physically degenerate input, 4 numerical tolerance failure.
Set ``BWH_LOG`` (DEBUG, INFO, WARNING, ...) to control log output on stderr.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import math
import os
import sys
import time
import warnings
from dataclasses import asdict
from importlib import metadata
from pathlib import Path

import numpy as np

from .config import ALL_CHECKS, RunConfig, load_config
from .exceptions import BWHError, ConfigError, DomainError, NumericalError, PhysicsError
from .farfield import FAR_METHODS, far_cut, field_map
from .incident import source_spec
from .kernel import KernelSpec, factorize, strip_validation_points
from .medium import MediumParams, derive_medium, propagation_context
from .solver import solve
from .verify import run_suite

log = logging.getLogger("bwh")

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_PHYSICS, EXIT_NUMERIC = 0, 1, 2, 3, 4
FAR_FIELD_FLOOR = 20.0


def _version():
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def _cplx(z):
    return [float(np.real(z)), float(np.imag(z))]


def _setup(cfg: RunConfig):
    m = derive_medium(MediumParams(cfg.epsilon, cfg.mu, cfg.alpha, cfg.beta, cfg.omega))
    ctx = propagation_context(m, cfg.ky, cfg.loss)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        src = source_spec(ctx, **cfg.source_kwargs())
    for w in caught:
        log.warning("%s", w.message)
    return m, ctx, src


def _kernel_spec(cfg: RunConfig, ctx):
    return KernelSpec(complex(ctx.kxz), complex(ctx.delta), cfg.strip_halfwidth, cfg.node_budget)


def _solve(cfg: RunConfig, ctx, src):
    return solve(ctx, src, kernel=factorize(_kernel_spec(cfg, ctx), tol=cfg.kernel_tol))


def derived_quantities(cfg: RunConfig):
    m, ctx, src = _setup(cfg)
    return {
        "k": m.k, "eta": m.eta, "gamma1": m.gamma1, "gamma2": m.gamma2, "eta1": m.eta1, "eta2": m.eta2,
        "k1xz": _cplx(ctx.k1xz), "k2xz": _cplx(ctx.k2xz), "delta": _cplx(ctx.delta),
        "c": _cplx(src.amplitude_c), "k1x": _cplx(src.k1x), "k1z": _cplx(src.k1z),
        "source": {"x0": src.x0, "z0": src.z0, "r0": src.r0, "phi0_deg": math.degrees(src.phi0)},
    }


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def write_csv(path: Path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _digest(path: Path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(out: Path, command, cfg, files, timings, extra=None):
    man = {"command": command, "tool_version": _version(), "config": cfg.to_dict(),
           "derived": derived_quantities(cfg), "timings_s": timings,
           "files": {p.name: _digest(p) for p in files}}
    if extra:
        man.update(extra)
    path = out / f"{command}_manifest.json"
    path.write_text(json.dumps(man, indent=2, default=_cplx) + "\n", encoding="utf-8")
    return path


# --- commands ---------------------------------------------------------------------

def cmd_medium(cfg: RunConfig, args=None):
    m, ctx, _ = _setup(cfg)
    info = {"medium": asdict(m), "context": {k: (_cplx(v) if isinstance(v, complex) else v)
                                              for k, v in asdict(ctx).items()}}
    info["derived"] = derived_quantities(cfg)
    print(json.dumps(info, indent=2))
    return EXIT_OK


def cmd_factorize(cfg: RunConfig, args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _, ctx, _ = _setup(cfg)
    t0 = time.perf_counter()
    spec = _kernel_spec(cfg, ctx)
    fk = factorize(spec, tol=cfg.kernel_tol)
    elapsed = time.perf_counter() - t0
    files = []
    nodes_csv = out / "kernel_nodes.csv"
    d = fk.diagnostics
    if fk.trivial:
        write_csv(nodes_csv, ["t", "re_log_L_lo", "im_log_L_lo", "re_log_L_hi", "im_log_L_hi"], [])
    else:
        write_csv(nodes_csv, ["t", "re_log_L_lo", "im_log_L_lo", "re_log_L_hi", "im_log_L_hi"],
                  ((t, a.real, a.imag, b.real, b.imag)
                   for t, a, b in zip(d["line_nodes"], d["log_kernel_lo"], d["log_kernel_hi"])))
    files.append(nodes_csv)
    pts = strip_validation_points(spec)
    err = np.abs(fk.plus_cauchy(pts) * fk.minus_cauchy(pts) / fk.L(pts) - 1)
    prod_csv = out / "product_error.csv"
    write_csv(prod_csv, ["re_xi", "im_xi", "product_error"], ((p.real, p.imag, e) for p, e in zip(pts, err)))
    files.append(prod_csv)
    write_manifest(out, "factorize", cfg, files, {"factorize": elapsed},
                   {"kernel": {"product_error": fk.product_error, "nu": _cplx(fk.nu), "log_c": _cplx(fk.log_c),
                               "node_count": fk.node_count, "strip_halfwidth": fk.w, "trivial": fk.trivial}})
    print(f"product error {fk.product_error:.3e} with {fk.node_count} nodes")
    return EXIT_OK


def cmd_fieldmap(cfg: RunConfig, args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _, ctx, src = _setup(cfg)
    xs, zs = cfg.grid(abs(ctx.kxz))
    t0 = time.perf_counter()
    grid = field_map(xs, zs, ctx, src, tol=cfg.quad_tol, workers=args.workers,
                     kernel_spec=_kernel_spec(cfg, ctx), kernel_tol=cfg.kernel_tol)
    elapsed = time.perf_counter() - t0
    path = out / "fieldmap.csv"
    write_csv(path, ["x", "z", "re", "im", "abs", "converged"], grid.to_rows())
    write_manifest(out, "fieldmap", cfg, [path], {"fieldmap": elapsed},
                   {"grid": {"nx": int(xs.size), "nz": int(zs.size),
                             "converged_fraction": grid.converged_fraction}})
    print(f"{grid.values.size} points, {100 * grid.converged_fraction:.2f}% converged")
    return EXIT_OK


def cmd_farfield(cfg: RunConfig, args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if cfg.far_method not in FAR_METHODS:
        raise ConfigError(f"[output] far_method must be one of {FAR_METHODS}")
    _, ctx, src = _setup(cfg)
    t0 = time.perf_counter()
    sol = _solve(cfg, ctx, src)
    thetas = np.radians(cfg.far_angles_deg)
    r = cfg.far_radius / abs(ctx.kxz)
    cut = far_cut(thetas, r, sol, cfg.far_method)
    elapsed = time.perf_counter() - t0
    notes = []
    if cfg.far_radius < FAR_FIELD_FLOOR:
        notes.append(f"far_radius |k1xz| r = {cfg.far_radius} is below the validity floor {FAR_FIELD_FLOOR}")
        log.warning(notes[-1])
    path = out / "farfield.csv"
    write_csv(path, ["theta_deg", "re_coeff", "im_coeff", "abs_coeff", "abs_field_at_r", "shadow_flag"],
              cut.to_rows(cfg.far_angles_deg))
    write_manifest(out, "farfield", cfg, [path], {"farfield": elapsed}, {"warnings": notes, "radius": r})
    print(f"{len(thetas)} angles, {int(cut.shadow_flags.sum())} flagged near shadow boundaries")
    return EXIT_OK


def cmd_verify(cfg: RunConfig, args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _, ctx, src = _setup(cfg)
    t0 = time.perf_counter()
    sol = _solve(cfg, ctx, src)
    reports = run_suite(sol, cfg.checks, seed=cfg.seed, quad_tol=min(cfg.quad_tol, 1e-10),
                        k_scale=getattr(args, "k_scale", 1.0))
    elapsed = time.perf_counter() - t0
    files = []
    for rep in reports:
        p = out / f"verify_{rep.check_name}.json"
        p.write_text(rep.to_json(indent=2) + "\n", encoding="utf-8")
        files.append(p)
    txt = out / "verify_report.txt"
    txt.write_text("\n".join(r.summary() for r in reports) + "\n", encoding="utf-8")
    files.append(txt)
    write_manifest(out, "verify", cfg, files, {"verify": elapsed},
                   {"passed": all(r.passed for r in reports)})
    for r in reports:
        print(r.summary())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY


COMMANDS = {"medium": cmd_medium, "factorize": cmd_factorize, "fieldmap": cmd_fieldmap,
            "farfield": cmd_farfield, "verify": cmd_verify}


def build_parser():
    p = argparse.ArgumentParser(
        prog="bwh",
        description="Line-source diffraction by a conducting half-plane in a bi-isotropic medium.",
        epilog="Config is INI: sections [medium] [propagation] [source] [kernel] [output] [verify]. "
               "Angles are in degrees; grid bounds and far_radius are in units of 1/|k1xz|. "
               f"Checks: {', '.join(ALL_CHECKS)}. Exit codes: 0 ok, 1 verification failed, "
               "2 config error, 3 degenerate physics, 4 numerical tolerance.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", help="INI configuration file (defaults are used when omitted)")
    p.add_argument("--out", help="output directory (overrides [output] dir)")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1, help="processes for field maps")
    p.add_argument("--seed", type=int, help="seed for sampled verification points (overrides [verify] seed)")
    p.add_argument("--tol", type=float, help="spectral quadrature tolerance in units of |c|")
    p.add_argument("--k-scale", type=float, default=1.0, dest="k_scale",
                   help="scale the wavenumber seen by the Helmholtz oracle (negative-control testing)")
    return p


def _configure_logging():
    level = os.environ.get("BWH_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        if args.out is not None:
            cfg.out_dir = args.out
        args.out = cfg.out_dir
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("--seed must be non-negative")
            cfg.seed = args.seed
        if args.tol is not None:
            if not args.tol > 0:
                raise ConfigError("--tol must be positive")
            cfg.quad_tol = args.tol
        if args.workers < 1:
            raise ConfigError("--workers must be >= 1")
        log.info("running %s", args.command)
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PhysicsError, DomainError) as exc:
        print(f"physics error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except BWHError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
