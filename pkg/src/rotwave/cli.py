"""``rotwave`` command line: validate, dispersion, laminar, branch, inspect, check.

Exit codes: 0 ok, 2 inadmissible, 3 no bifurcation, 4 solver failure,
5 property failure, 64 config error, 65 data error.
"""

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from rotwave import config as cfgmod
from rotwave.checks import run_checks
from rotwave.continuation import SUMMARY_COLUMNS, branch_summary, continue_branch
from rotwave.dispersion import find_lambda_star
from rotwave.errors import NoBifurcationError, StagnationError
from rotwave.fields import (
    TAU_GEOM,
    bernoulli_surface_residual,
    nodal_pattern,
    reconstruct,
    surface_geometry,
)
from rotwave.heightpde import Grid, load_heightfield, save_heightfield
from rotwave.laminar import bernoulli_head, laminar_scan
from rotwave.vorticity import check_amplitude_condition

log = logging.getLogger("rotwave")

EXIT_OK, EXIT_INADMISSIBLE, EXIT_NO_BIFURCATION, EXIT_SOLVER = 0, 2, 3, 4
EXIT_PROPERTY, EXIT_CONFIG, EXIT_DATA = 5, 64, 65

FMT = "%.17g"


def _row(values):
    return ",".join(FMT % v if isinstance(v, float) else str(v) for v in values)


def write_csv(path, header, rows):
    with open(path, "w") as fh:
        fh.write("# " + ",".join(header) + "\n")
        for r in rows:
            fh.write(_row(r) + "\n")


def _gnuplot(path, csv_name, title, using="1:2"):
    with open(path, "w") as fh:
        fh.write("set datafile separator ','\nset title '%s'\nplot '%s' using %s with lines notitle\npause -1\n"
                 % (title, csv_name, using))


def cmd_validate(cfg, out=None):
    out = out or sys.stdout
    rep = check_amplitude_condition(cfg.vorticity, cfg.p0, cfg.g)
    print("Gamma_0        = " + FMT % rep.gamma0, file=out)
    print("Gamma_1        = " + FMT % rep.gamma1, file=out)
    print("condition lhs  = " + FMT % rep.condition_lhs, file=out)
    print("condition rhs  = " + FMT % rep.condition_rhs, file=out)
    print("admissible     = %s" % rep.admissible, file=out)
    print("favorable      = %s" % rep.favorable, file=out)
    return EXIT_OK if rep.admissible else EXIT_INADMISSIBLE


def cmd_dispersion(cfg, out_dir, emit_gnuplot=False, out=None):
    out = out or sys.stdout
    try:
        bp = find_lambda_star(cfg.vorticity, cfg.p0, cfg.g, cfg.shoot_np)
    except NoBifurcationError as exc:
        print("no bifurcation point: %s" % exc, file=out)
        return EXIT_NO_BIFURCATION
    print("lambda*  = " + FMT % bp.lambda_star, file=out)
    print("Q*       = " + FMT % bp.q_star, file=out)
    print("depth    = " + FMT % bp.depth, file=out)
    print("Q(lambda*) recheck = " + FMT % bernoulli_head(cfg.vorticity, bp.lambda_star, cfg.p0, cfg.g), file=out)
    os.makedirs(out_dir, exist_ok=True)
    p = np.linspace(cfg.p0, 0.0, cfg.np + 1)
    write_csv(os.path.join(out_dir, "dispersion_M.csv"), ("p", "M"),
              [(float(a), float(b)) for a, b in zip(p, bp.m_on(cfg.np))])
    if emit_gnuplot:
        _gnuplot(os.path.join(out_dir, "dispersion_M.gp"), "dispersion_M.csv", "M(p)")
    return EXIT_OK


def cmd_laminar(cfg, out_dir, emit_gnuplot=False, out=None):
    out = out or sys.stdout
    scan = cfg.laminar_scan
    rows = laminar_scan(cfg.vorticity, cfg.p0, cfg.g, scan.get("lambda_min"), scan.get("lambda_max"),
                        int(scan.get("n", 200)))
    os.makedirs(out_dir, exist_ok=True)
    write_csv(os.path.join(out_dir, "laminar.csv"), ("lambda", "Q", "d"), rows)
    if emit_gnuplot:
        _gnuplot(os.path.join(out_dir, "laminar.gp"), "laminar.csv", "Q(lambda)")
    print("wrote %d rows to %s" % (len(rows), os.path.join(out_dir, "laminar.csv")), file=out)
    return EXIT_OK


def run_branch(cfg, bp, nu, out_dir, emit_gnuplot=False):
    grid = Grid(cfg.nq, cfg.np, cfg.p0)
    branch = continue_branch(cfg.vorticity, cfg.g, bp, nu, cfg.continuation, grid)
    os.makedirs(out_dir, exist_ok=True)
    write_csv(os.path.join(out_dir, "summary.csv"), SUMMARY_COLUMNS, branch_summary(branch))
    snap_dir = os.path.join(out_dir, "snapshots")
    os.makedirs(snap_dir, exist_ok=True)
    stride = max(1, cfg.snapshot_stride)
    last = len(branch.points) - 1
    for k, pt in enumerate(branch.points):
        if k % stride == 0 or k == last:
            save_heightfield(os.path.join(snap_dir, "step_%05d.csv" % k), pt.h, pt.q_head, cfg.g,
                             cfg.vorticity, extra={"s": pt.s, "nu": branch.nu, "step": k})
    record = {"nu": branch.nu, "termination": branch.termination, "points": len(branch.points),
              "hp_cap": branch.hp_cap, "final_s": branch.points[-1].s,
              "final_Q": branch.points[-1].q_head, "lambda_star": bp.lambda_star, "Q_star": bp.q_star}
    with open(os.path.join(out_dir, "termination.json"), "w") as fh:
        json.dump(record, fh, indent=2, sort_keys=True)
    if emit_gnuplot:
        _gnuplot(os.path.join(out_dir, "summary.gp"), "summary.csv", "amplitude vs Q", using="2:3")
    return branch


def cmd_branch(cfg, nu="+", both=False, out_dir=None, emit_gnuplot=False, out=None):
    out = out or sys.stdout
    out_dir = out_dir or cfg.output_dir
    try:
        bp = find_lambda_star(cfg.vorticity, cfg.p0, cfg.g, cfg.shoot_np)
    except NoBifurcationError as exc:
        print("no bifurcation point: %s" % exc, file=out)
        return EXIT_NO_BIFURCATION
    nus = ["+", "-"] if both else [nu]
    dirs = {n: os.path.join(out_dir, "branch_plus" if n == "+" else "branch_minus") for n in nus}
    if both:
        with ThreadPoolExecutor(max_workers=2) as pool:
            futures = {n: pool.submit(run_branch, cfg, bp, n, dirs[n], emit_gnuplot) for n in nus}
            branches = {n: f.result() for n, f in futures.items()}
    else:
        branches = {nu: run_branch(cfg, bp, nu, dirs[nu], emit_gnuplot)}
    code = EXIT_OK
    for n, br in branches.items():
        print("K%s: %d points, termination=%s, output in %s" % (n, len(br.points), br.termination, dirs[n]),
              file=out)
        if br.termination == "solver_failure":
            code = EXIT_SOLVER
    return code


def inspect_snapshot(path, tau=TAU_GEOM, c=None):
    """GeometryReport-style dict for a saved snapshot, plus the reconstruction."""
    h, header, model = load_heightfield(path)
    ws = reconstruct(h, c=c)
    favorable = check_amplitude_condition(model, h.grid.p0, header["g"]).favorable
    geo = surface_geometry(ws, tau)
    nodal = nodal_pattern(h, tau)
    report = {"geometry": geo.to_dict(), "nodal": nodal, "favorable": favorable,
              "amplitude": ws.amplitude, "depth": ws.depth,
              "bernoulli_residual_max": float(np.max(np.abs(bernoulli_surface_residual(ws, header["g"], header["Q"]))))}
    if nodal["trivial"] or not geo.classifiable:
        report["status"] = "not applicable: trivial (laminar) wave"
        report["failures"] = []
        return report, ws
    checks = {
        "eta_monotone": geo.eta_monotone,
        "v_positive": geo.v_positive,
        "inflection_count_odd": geo.inflection_count % 2 == 1,
        "crest_concave": geo.crest_curvature < -tau,
        "trough_convex": geo.trough_curvature > tau,
        "nodal_hq": nodal["hq_negative_interior_top"],
        "nodal_hqp_bottom": nodal["hqp_negative_bottom"],
        "nodal_hqq_left": nodal["hqq_negative_left"],
        "nodal_hqq_right": nodal["hqq_positive_right"],
    }
    if favorable:
        checks["displacement_monotone"] = geo.displacement_monotone
    report["checks"] = checks
    report["failures"] = sorted(k for k, v in checks.items() if not v)
    report["status"] = "pass" if not report["failures"] else "fail"
    return report, ws


def cmd_inspect(snapshot, out_dir, c=None, emit_gnuplot=False, out=None):
    out = out or sys.stdout
    try:
        report, ws = inspect_snapshot(snapshot, c=c)
    except (OSError, ValueError, KeyError, StagnationError) as exc:
        print("cannot use snapshot %s: %s" % (snapshot, exc), file=out)
        return EXIT_DATA
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "geometry.json"), "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
    grid = ws.grid
    write_csv(os.path.join(out_dir, "eta.csv"), ("q", "eta"), [(float(a), float(b)) for a, b in zip(grid.q, ws.eta)])
    write_csv(os.path.join(out_dir, "displacement.csv"), ("p", "L"),
              [(float(a), float(b)) for a, b in zip(grid.p, ws.displacement)])
    levels = sorted(set(np.linspace(0, grid.np, min(grid.np, 8) + 1).round().astype(int)))
    with open(os.path.join(out_dir, "streamlines.csv"), "w") as fh:
        for j in levels:
            fh.write("# p = %s\n" % (FMT % grid.p[j]))
            for a, b in zip(grid.q, ws.streamlines[:, j]):
                fh.write(_row((float(a), float(b))) + "\n")
            fh.write("\n\n")
    if emit_gnuplot:
        _gnuplot(os.path.join(out_dir, "eta.gp"), "eta.csv", "eta(q)")
        _gnuplot(os.path.join(out_dir, "displacement.gp"), "displacement.csv", "L(p)")
        _gnuplot(os.path.join(out_dir, "streamlines.gp"), "streamlines.csv", "streamlines")
    print("status: %s" % report["status"], file=out)
    for name in report["failures"]:
        print("  failed: %s" % name, file=out)
    return EXIT_PROPERTY if report["failures"] else EXIT_OK


def cmd_check(cfg, out=None, **kwargs):
    out = out or sys.stdout
    results = run_checks(cfg, **kwargs)
    width = max(len(r.name) for r in results)
    for r in results:
        print("%-*s  %s  %s" % (width, r.name, "PASS" if r.passed else "FAIL", r.detail), file=out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_PROPERTY


def build_parser():
    ap = argparse.ArgumentParser(prog="rotwave", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=("validate", "dispersion", "laminar", "branch", "inspect", "check"))
    ap.add_argument("--config", help="run configuration (JSON)")
    ap.add_argument("--snapshot", help="height-field snapshot for 'inspect'")
    ap.add_argument("--nu", choices=("+", "-"), default="+")
    ap.add_argument("--both", action="store_true", help="trace both branches concurrently")
    ap.add_argument("--out", help="output directory (default: config outputs.directory)")
    ap.add_argument("--emit-gnuplot", action="store_true")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "inspect":
        if not args.snapshot:
            print("inspect needs --snapshot", file=sys.stderr)
            return EXIT_CONFIG
        c = None
        if args.config:
            try:
                c = cfgmod.load(args.config).c
            except (OSError, cfgmod.ConfigError) as exc:
                print("config error: %s" % exc, file=sys.stderr)
                return EXIT_CONFIG
        return cmd_inspect(args.snapshot, args.out or "inspect", c=c, emit_gnuplot=args.emit_gnuplot)
    if not args.config:
        print("%s needs --config" % args.command, file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = cfgmod.load(args.config)
    except (OSError, cfgmod.ConfigError) as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    out_dir = args.out or cfg.output_dir
    if args.command == "validate":
        return cmd_validate(cfg)
    if args.command == "dispersion":
        return cmd_dispersion(cfg, out_dir, args.emit_gnuplot)
    if args.command == "laminar":
        return cmd_laminar(cfg, out_dir, args.emit_gnuplot)
    if args.command == "branch":
        return cmd_branch(cfg, args.nu, args.both, out_dir, args.emit_gnuplot)
    return cmd_check(cfg)


if __name__ == "__main__":
    sys.exit(main())
