"""Command-line interface: ``r4bp <subcommand> ...``.

Exit codes: 0 success, 2 usage or validation error, 3 numerical failure.
Diagnostics go to standard error only.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import equilibria, hill, integrate, io, model, regions, stability
from .errors import DomainError, R4BPError

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3


class UsageError(Exception):
    pass


def _floats(text: str, n: int, name: str, cast=float):
    parts = text.split(",")
    if len(parts) != n:
        raise UsageError(f"{name}: expected {n} comma-separated values, got {text!r}")
    try:
        return [cast(p) for p in parts]
    except ValueError:
        raise UsageError(f"{name}: could not parse {text!r}") from None


def _check_mu(mu: float, name="--mu", open_left=False):
    ok = (0.0 < mu <= 0.5) if open_left else (0.0 <= mu <= 0.5)
    if not ok:
        raise UsageError(f"{name}: must lie in {'(0' if open_left else '[0'}, 1/2], got {mu}")


def _emit(text: str, path=None):
    if path:
        io.write_text(path, text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------ subcommands

def cmd_equilibria(args):
    _check_mu(args.mu)
    eq = equilibria.equilibrium_points(args.mu, require_all=False)
    rows = []
    for name, p in eq.points().items():
        rep = stability.classify(p, args.mu, label=name)
        gn = float(np.linalg.norm(hill.grad_omega(p.as_array(), args.mu)))
        rows.append({"name": name, "x": p.x, "y": p.y, "radius": float(np.hypot(p.x, p.y)),
                     "grad_norm": gn, "A": rep.coefficients.A, "B": rep.coefficients.B,
                     "D": rep.coefficients.D, "class": str(rep.stability_class)})
    if args.csv:
        import io as _stdio
        buf = _stdio.StringIO()
        io.write_csv(buf, io.EQUILIBRIA_HEADER, [[r[k] for k in io.EQUILIBRIA_HEADER] for r in rows])
        _emit(buf.getvalue(), args.out)
    elif args.json:
        _emit(io.dumps_json({"mu": args.mu, "provenance": eq.provenance, "points": rows}) + "\n", args.out)
    else:
        lines = [f"{'name':4} {'x':>22} {'y':>22} {'|L|':>22} {'|grad|':>10}"]
        for r in rows:
            lines.append(f"{r['name']:4} {io.fmt(r['x']):>22} {io.fmt(r['y']):>22} "
                         f"{io.fmt(r['radius']):>22} {r['grad_norm']:10.2e}")
        _emit("\n".join(lines) + "\n", args.out)


def cmd_stability(args):
    _check_mu(args.mu)
    reports = stability.classify_all(args.mu)
    names = list(reports) if args.point == "all" else [args.point]
    out = []
    for n in names:
        if n not in reports:
            raise DomainError(f"{n} does not exist at mu={args.mu} (lambda1 = 0)")
        r = reports[n]
        out.append({"name": n, "x": r.point.x, "y": r.point.y,
                    "A": r.coefficients.A, "B": r.coefficients.B, "D": r.coefficients.D,
                    "roots": [[z.real, z.imag] for z in r.roots],
                    "class": str(r.stability_class)})
    if args.json:
        _emit(io.dumps_json({"mu": args.mu, "points": out}) + "\n")
        return
    lines = []
    for o in out:
        roots = ", ".join(f"{re:+.12g}{im:+.12g}j" for re, im in o["roots"])
        lines.append(f"{o['name']}: class={o['class']} A={io.fmt(o['A'])} B={io.fmt(o['B'])} "
                     f"D={io.fmt(o['D'])}\n    roots: {roots}")
    _emit("\n".join(lines) + "\n")


def cmd_critical_mass(args):
    if args.tol < 1e-14:
        raise UsageError(f"--tol: must be >= 1e-14, got {args.tol}")
    cm = stability.critical_mass(args.tol)
    _emit(io.dumps_json({"mu0": cm.mu0, "bracket": list(cm.bracket),
                         "iterations": cm.iterations}) + "\n")


def cmd_integrate(args):
    cfg = io.RunConfig.load(args.config)
    if cfg.problem == "limit":
        field = integrate.limit_field(cfg.mu)
    else:
        field = integrate.full_field(model.MassConfig.from_mu(cfg.mu, cfg.m3))
    ic = cfg.integrate
    if "state0" not in ic:
        raise io.ConfigError("integrate.state0: required")
    t_span = ic.get("t_span", [0.0, 10.0])
    settings = integrate.IntegratorSettings(
        rel_tol=ic.get("rel_tol", 1e-12), abs_tol=ic.get("abs_tol", 1e-12),
        max_step=ic.get("max_step", np.inf), max_steps=ic.get("max_steps", 1_000_000))
    t_eval = np.linspace(*t_span, ic["samples"]) if "samples" in ic else None
    traj = integrate.propagate(field, ic["state0"], t_span, settings, t_eval=t_eval)
    rows = io.trajectory_rows(traj)
    target = cfg.output.get("trajectory")
    if target:
        io.write_csv(target, io.TRAJECTORY_HEADER, rows)
    else:
        io.write_csv(sys.stdout, io.TRAJECTORY_HEADER, rows)
    summary = {"problem": cfg.problem, "mu": cfg.mu, "m3": cfg.m3, "samples": len(traj),
               "steps": traj.n_steps, "rejected": traj.n_rejected,
               "jacobi_initial": float(traj.jacobi[0]),
               "jacobi_drift": integrate.jacobi_drift(traj)}
    text = io.dumps_json(summary) + "\n"
    if cfg.output.get("summary"):
        io.write_text(cfg.output["summary"], text)
    # keep stdout clean for CSV when no trajectory path is given
    (sys.stdout if target else sys.stderr).write(text)


def cmd_region(args):
    bounds = _floats(args.bounds, 4, "--bounds")
    nx, ny = _floats(args.n, 2, "--n", cast=int)
    if nx < 2 or ny < 2:
        raise UsageError(f"--n: resolution must be at least 2x2, got {nx}x{ny}")
    if not (bounds[1] > bounds[0] and bounds[3] > bounds[2]):
        raise UsageError(f"--bounds: intervals must be non-empty, got {args.bounds}")
    if args.problem == "limit":
        _check_mu(args.mu)
        params = args.mu
        if args.m3 is not None:
            raise UsageError("--m3: only valid with --problem full")
    else:
        _check_mu(args.mu, open_left=True)
        if args.m3 is None:
            raise UsageError("--m3: required with --problem full")
        try:
            params = model.MassConfig.from_mu(args.mu, args.m3)
        except DomainError as exc:
            raise UsageError(f"--m3: {exc}") from None
    if (args.c is None) == (args.level is None):
        raise UsageError("exactly one of --c or --level is required")
    if args.level is not None:
        if args.problem != "limit":
            raise UsageError("--level: only valid with --problem limit")
        p = getattr(equilibria.equilibrium_points(args.mu, require_all=args.level in ("L3", "L4")),
                    args.level)
        C = float(2.0 * hill.omega_limit(p.as_array(), args.mu))
    else:
        C = args.c
    grid = regions.region_grid(args.problem, params, C, bounds, nx, ny)
    rows = io.region_rows(grid)
    if args.out:
        io.write_csv(args.out, io.REGION_HEADER, rows)
    else:
        io.write_csv(sys.stdout, io.REGION_HEADER, rows)
    if args.svg:
        io.write_text(args.svg, io.contours_svg(regions.contours(grid), grid))


def cmd_limit_check(args):
    _check_mu(args.mu, open_left=True)
    if args.m3_decades < 1:
        raise UsageError(f"--m3-decades: must be >= 1, got {args.m3_decades}")
    if args.samples < 1:
        raise UsageError(f"--samples: must be >= 1, got {args.samples}")
    if not 0.0 < args.m3_max <= min(1e-2, args.mu):
        raise UsageError(f"--m3-max: must lie in (0, min(1e-2, mu)], got {args.m3_max}")
    m3s = args.m3_max * np.logspace(0, -args.m3_decades, args.m3_decades + 1)
    states = model.sample_scaled_states(args.samples, seed=args.seed)
    dev = model.limit_deviations(args.mu, m3s, states)
    slope = model.fit_order(m3s, dev)
    result = {"mu": args.mu, "samples": args.samples,
              "table": [{"m3": float(m), "deviation": float(d)} for m, d in zip(m3s, dev)],
              "slope": slope}
    if args.json:
        _emit(io.dumps_json(result) + "\n")
        return
    lines = [f"{'m3':>24} {'deviation':>24}"]
    lines += [f"{io.fmt(m):>24} {io.fmt(d):>24}" for m, d in zip(m3s, dev)]
    lines.append(f"slope {io.fmt(slope)}")
    _emit("\n".join(lines) + "\n")


def cmd_r4bp_equilibria(args):
    _check_mu(args.mu, open_left=True)
    if not 0.0 < args.m3 <= 1e-4:
        raise UsageError(f"--m3: must lie in (0, 1e-4], got {args.m3}")
    full = equilibria.r4bp_equilibria_near_m3(args.mu, args.m3)
    limit = equilibria.equilibrium_points(args.mu)
    pts = []
    for name, p in full.points().items():
        lp = getattr(limit, name)
        pts.append({"name": name, "x": p.x, "y": p.y,
                    "distance_to_limit": float(np.hypot(p.x - lp.x, p.y - lp.y))})
    _emit(io.dumps_json({"mu": args.mu, "m3": args.m3, "points": pts}) + "\n")


def cmd_sweep(args):
    if args.samples < 2:
        raise UsageError(f"--samples: must be >= 2, got {args.samples}")
    if not 0.0 <= args.mu_min < 0.5:
        raise UsageError(f"--mu-min: must lie in [0, 1/2), got {args.mu_min}")
    mus = np.linspace(args.mu_min, 0.5, args.samples)
    data = stability.coefficient_sweep(mus)
    if args.out:
        io.write_csv(args.out, io.SWEEP_HEADER, data)
    else:
        io.write_csv(sys.stdout, io.SWEEP_HEADER, data)


# ------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="r4bp", description="Restricted four-body problem and its Hill-type limit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("equilibria", help="libration points of the limit problem")
    s.add_argument("--mu", type=float, required=True)
    fmt = s.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    s.add_argument("--out", help="write to this path instead of stdout")
    s.set_defaults(func=cmd_equilibria)

    s = sub.add_parser("stability", help="linear stability of L1..L4")
    s.add_argument("--mu", type=float, required=True)
    s.add_argument("--point", choices=["L1", "L2", "L3", "L4", "all"], default="all")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_stability)

    s = sub.add_parser("critical-mass", help="mu0 where D(L3) changes sign")
    s.add_argument("--tol", type=float, default=1e-12)
    s.set_defaults(func=cmd_critical_mass)

    s = sub.add_parser("integrate", help="propagate a trajectory from a JSON config")
    s.add_argument("--config", required=True)
    s.set_defaults(func=cmd_integrate)

    s = sub.add_parser("region", help="Hill's region grid and zero-velocity contours")
    s.add_argument("--problem", choices=["limit", "full"], default="limit")
    s.add_argument("--mu", type=float, required=True)
    s.add_argument("--m3", type=float)
    s.add_argument("--c", type=float, help="Jacobi constant")
    s.add_argument("--level", choices=["L1", "L2", "L3", "L4"], help="use C = 2*Omega(L_i)")
    s.add_argument("--bounds", required=True, help="xmin,xmax,ymin,ymax")
    s.add_argument("--n", required=True, help="NX,NY")
    s.add_argument("--out", help="grid CSV path (default stdout)")
    s.add_argument("--svg")
    s.set_defaults(func=cmd_region)

    s = sub.add_parser("limit-check", help="convergence of the full problem to the limit")
    s.add_argument("--mu", type=float, required=True)
    s.add_argument("--m3-decades", type=int, default=6)
    s.add_argument("--m3-max", type=float, default=1e-3)
    s.add_argument("--samples", type=int, default=50)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_limit_check)

    s = sub.add_parser("r4bp-equilibria", help="full-problem equilibria near m3, scaled")
    s.add_argument("--mu", type=float, required=True)
    s.add_argument("--m3", type=float, required=True)
    s.set_defaults(func=cmd_r4bp_equilibria)

    s = sub.add_parser("sweep", help="A, B, D of L1 and L3 as functions of mu")
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--mu-min", type=float, default=0.0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)
    return p


def _attach_values(argv):
    # "--bounds -3,3,-3,3" would otherwise be read as an unknown option
    argv = list(sys.argv[1:] if argv is None else argv)
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--bounds" and i + 1 < len(argv):
            out.append(f"--bounds={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(_attach_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"r4bp {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (R4BPError, np.linalg.LinAlgError) as exc:
        print(f"r4bp {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the final flush
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
