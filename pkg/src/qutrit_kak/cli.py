"""
Command-line front end.

    qutrit-kak tables  --out table.csv
    qutrit-kak curve   --family R12 --phi 0 --theta-min 0 --theta-max 1 --n-points 25 --out c.csv
    qutrit-kak solve   --gate Rx12 --theta 0.5 --phi 0 --out solve.json
    qutrit-kak solve   --gate QFT --all-phases --out qft.json
    qutrit-kak compile --gate QFT --phi 0.8333333333333334 --out qft

All angles on the command line are in units of pi. Exit codes: 0 success,
1 failed validation or no feasible point, 2 I/O error, 3 invalid range,
4 non-unitary input.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import analytic, pulse, solver
from .cartan import residual
from .errors import NoFeasiblePointFound, QutritKakError, UnknownCombination
from .gates import GateName, global_phases, make_gate
from .su3 import is_unitary

PI = math.pi
EXIT_OK, EXIT_FAIL, EXIT_IO, EXIT_RANGE, EXIT_NONUNITARY = 0, 1, 2, 3, 4
DEFAULT_OMEGAS = (10.0, 100.0, 1000.0, 10000.0)
SEED_ENV = "QUTRIT_KAK_SEED"


def _default_seed():
    return int(os.environ.get(SEED_ENV, "0"))


def _write_json(path, payload):
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _complex_to_json(u):
    u = np.asarray(u)
    return {"real": u.real.tolist(), "imag": u.imag.tolist()}


def load_unitary_json(path):
    """Read a 3x3 matrix stored as {"real": [[...]], "imag": [[...]]}."""
    with open(path, encoding="utf-8") as fh:
        d = json.load(fh)
    u = np.array(d["real"], dtype=float) + 1j * np.array(d.get("imag", np.zeros((3, 3))), dtype=float)
    if u.shape != (3, 3):
        raise ValueError("expected a 3x3 matrix, got shape %s" % (u.shape,))
    return u


def _report(args, command, results, residuals):
    return {
        "command": command,
        "argv": list(getattr(args, "argv", [])),
        "config": {k: v for k, v in vars(args).items() if k not in ("func", "argv")},
        "results": results,
        "residuals": residuals,
    }


def cmd_tables(args, table=None):
    table = analytic.TABLE if table is None else table
    checks = analytic.validate_table(analytic.DEFAULT_THETA_GRID, table)
    try:
        if args.out:
            Path(args.out).parent.mkdir(parents=True, exist_ok=True)
            analytic.write_table_csv(args.out, checks)
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_IO
    failed_rows = []
    for row in table:
        mine = [c for c in checks if c.row is row]
        worst = max(c.residual for c in mine)
        ok = all(c.passed for c in mine)
        if not ok:
            failed_rows.append(row.label)
        print("%-4s %-16s max residual %.2e" % ("PASS" if ok else "FAIL", row.label, worst))
    n_rot = sum(r.gate is not GateName.QFT for r in table)
    print("%d rotation rows + %d QFT rows, %d failed"
          % (n_rot, len(table) - n_rot, len(failed_rows)))
    for label in failed_rows:
        print("failed row: %s" % label, file=sys.stderr)
    return EXIT_FAIL if failed_rows else EXIT_OK


def cmd_curve(args):
    lo, hi = args.theta_min * PI, args.theta_max * PI
    if not (0 <= lo < hi <= PI) or args.n_points < 2:
        print("error: need 0 <= theta_min < theta_max <= 1 (units of pi) and n_points >= 2",
              file=sys.stderr)
        return EXIT_RANGE
    try:
        points = analytic.tmin_curve(args.family, args.phi * PI,
                                     analytic.theta_grid(lo, hi, args.n_points))
    except UnknownCombination as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_RANGE
    try:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("theta,Tmin\n")
            for th, t in points:
                fh.write("%r,%r\n" % (th, t))
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_IO
    print("wrote %d points for %s phi=%gpi to %s" % (len(points), args.family, args.phi, args.out))
    return EXIT_OK


def _target_from_args(args):
    """Return (label, unitary) or raise ValueError for a bad gate spec."""
    if args.unitary:
        return "custom", load_unitary_json(args.unitary)
    if not args.gate:
        raise ValueError("give --gate NAME or --unitary FILE")
    g = make_gate(args.gate, (args.theta or 0.0) * PI)
    return g.name.value, g.unitary


def _solver_config(args):
    kw = {"rng_seed": args.seed if args.seed is not None else _default_seed()}
    if args.grid_step is not None:
        kw["t_grid_step"] = args.grid_step * PI
    if args.restarts is not None:
        kw["n_restarts"] = args.restarts
    return solver.SolverConfig(**kw)


def cmd_solve(args):
    try:
        label, u = _target_from_args(args)
    except (OSError, ValueError, KeyError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_IO if isinstance(exc, OSError) else EXIT_RANGE
    if not is_unitary(u, 1e-8):
        print("error: target matrix is not unitary", file=sys.stderr)
        return EXIT_NONUNITARY
    config = _solver_config(args)
    t0 = time.perf_counter()
    try:
        if args.all_phases:
            per_phase = solver.solve_all_phases(u, config)
            feasible = {phi: r for phi, r in per_phase.items() if r is not None}
            if not feasible:
                raise NoFeasiblePointFound("no admissible phase reachable")
            phi_best, best = min(feasible.items(), key=lambda kv: kv[1].total_time)
            results = {
                "best_phi": phi_best,
                "best": best.to_dict(),
                "per_phase": [{"phi": phi, "result": None if r is None else r.to_dict()}
                              for phi, r in per_phase.items()],
            }
        else:
            phi = args.phi * PI if args.phi is not None else global_phases(u).phi0
            best = solver.find_tmin(u, phi, config)
            results = {"best_phi": phi, "best": best.to_dict()}
    except NoFeasiblePointFound as exc:
        print("no feasible point: %s" % exc, file=sys.stderr)
        return EXIT_FAIL
    check = residual(best.params, u, best.phi)
    report = _report(args, "solve", results, {"independent_check": check})
    report["target"] = {"gate": label, "unitary": _complex_to_json(u)}
    report["seed"] = config.rng_seed
    try:
        _write_json(args.out, report)
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_IO
    print("%s: phi=%.6f numerical T_min=%.9f residual=%.2e (%.2fs)"
          % (label, best.phi, best.total_time, check, time.perf_counter() - t0))
    return EXIT_OK


def _params_for(label, u, phi, theta, config):
    """Tabulated params when available, otherwise a solver run."""
    if label != "custom":
        try:
            return analytic.lookup_solution(label, theta, phi).params, "table"
        except QutritKakError:
            pass
    return solver.find_tmin(u, phi, config).params, "solver"


def cmd_compile(args):
    try:
        label, u = _target_from_args(args)
    except (OSError, ValueError, KeyError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_IO if isinstance(exc, OSError) else EXIT_RANGE
    if not is_unitary(u, 1e-8):
        print("error: target matrix is not unitary", file=sys.stderr)
        return EXIT_NONUNITARY
    phi = args.phi * PI if args.phi is not None else global_phases(u).phi0
    omegas = args.omega or list(DEFAULT_OMEGAS)
    try:
        params, source = _params_for(label, u, phi, (args.theta or 0.0) * PI,
                                     _solver_config(args))
        prog = pulse.compile_program(params, target_gate=label, phi=phi)
        target = np.exp(1j * phi) * u
        sweep = pulse.error_vs_amplitude(prog, target, omegas)
    except NoFeasiblePointFound as exc:
        print("no feasible point: %s" % exc, file=sys.stderr)
        return EXIT_FAIL
    except (QutritKakError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_RANGE
    ideal_res = float(np.linalg.norm(pulse.simulate_ideal(prog) - target))
    out = Path(args.out)
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        payload = prog.to_dict()
        payload["source"] = source
        payload["ideal_residual"] = ideal_res
        _write_json(str(out) + ".program.json", payload)
        pulse.write_sweep_csv(str(out) + ".sweep.csv", sweep)
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_IO
    print("%s phi=%.6f (%s): %d pulses, %d delays, total free time %.6f, ideal residual %.2e"
          % (label, phi, source, len(prog.pulses), len(prog.delays),
             prog.total_free_time, ideal_res))
    for omega, inf in sweep:
        print("  omega=%-10g infidelity=%.3e" % (omega, inf))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qutrit-kak",
        description="Time-optimal hard-pulse sequences for spin-1 qutrit gates. "
                    "Angles are given in units of pi.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tables", help="validate and export every tabulated solution")
    p.add_argument("--out", default="table.csv")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("curve", help="T_min versus rotation angle for one family and phase")
    p.add_argument("--family", choices=("R12", "R23", "R13"), required=True)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--theta-min", type=float, default=0.0)
    p.add_argument("--theta-max", type=float, default=1.0)
    p.add_argument("--n-points", type=int, default=49)
    p.add_argument("--out", default="curve.csv")
    p.set_defaults(func=cmd_curve)

    def target_args(p):
        p.add_argument("--gate", choices=[g.value for g in GateName])
        p.add_argument("--unitary", help="JSON file with a 3x3 matrix {real, imag}")
        p.add_argument("--theta", type=float, default=0.0)
        p.add_argument("--phi", type=float, default=None)
        p.add_argument("--grid-step", type=float, default=None)
        p.add_argument("--restarts", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("solve", help="numerical minimum-time search")
    target_args(p)
    p.add_argument("--all-phases", action="store_true")
    p.add_argument("--out", default="solve.json")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("compile", help="compile a pulse program and sweep the rf amplitude")
    target_args(p)
    p.add_argument("--omega", type=float, nargs="+", default=None)
    p.add_argument("--out", default="program")
    p.set_defaults(func=cmd_compile)
    return parser


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    args.argv = argv
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
