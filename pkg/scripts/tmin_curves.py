"""T_min versus rotation angle for every family and global phase, with
numerical solver points at theta = n pi / 4 overlaid.

Writes two CSV files: the dense closed-form curves and the solver points.
Pass --plot to also save a PNG (needs matplotlib).
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from qutrit_kak import analytic, solver
from qutrit_kak.gates import make_gate

PI = math.pi
FAMILIES = ("R12", "R23", "R13")
PHASES = (0.0, 2 * PI / 3, 4 * PI / 3)


@dataclass(frozen=True)
class CurveConfig:
    n_points: int = 181
    solver_thetas: tuple = (PI / 4, PI / 2, 3 * PI / 4, PI)
    solver: solver.SolverConfig = solver.SolverConfig()
    out_dir: Path = Path("results")


def dense_curves(cfg):
    grid = analytic.theta_grid(0.0, PI, cfg.n_points)
    rows = []
    for fam in FAMILIES:
        for k, phi in enumerate(PHASES):
            for th, t in analytic.tmin_curve(fam, phi, grid):
                rows.append((fam, k, th, t))
    return rows


def solver_points(cfg):
    rows = []
    for fam in FAMILIES:
        gate_name = "Rx" + fam[1:]
        for k, phi in enumerate(PHASES):
            for th in cfg.solver_thetas:
                t0 = time.perf_counter()
                res = solver.find_tmin(make_gate(gate_name, th), phi, cfg.solver)
                ref = analytic.lookup_solution(gate_name, th, phi).tmin
                rows.append((fam, k, th, res.total_time, ref, res.residual_value,
                             time.perf_counter() - t0))
    return rows


def plot(dense, points, path):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 3, figsize=(12, 3.8), sharey=True)
    styles = ("-", "--", ":")
    for ax, fam in zip(axes, FAMILIES):
        for k in range(3):
            xs = [th / PI for f, kk, th, _ in dense if f == fam and kk == k]
            ys = [t / PI for f, kk, _, t in dense if f == fam and kk == k]
            ax.plot(xs, ys, styles[k], color="k", label="phi = %d pi/3" % (2 * k))
            px = [th / PI for f, kk, th, *_ in points if f == fam and kk == k]
            py = [t / PI for f, kk, _, t, *_ in points if f == fam and kk == k]
            ax.plot(px, py, "x", color="C3")
        ax.set_title(fam)
        ax.set_xlabel("theta / pi")
    axes[0].set_ylabel("T_min / pi")
    axes[0].legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)


def main(argv=None):
    ap = argparse.ArgumentParser(description="closed-form T_min curves with solver cross-checks")
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--n-points", type=int, default=181)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--plot", action="store_true")
    args = ap.parse_args(argv)
    cfg = CurveConfig(n_points=args.n_points, solver=solver.SolverConfig(rng_seed=args.seed),
                      out_dir=Path(args.out_dir))
    cfg.out_dir.mkdir(parents=True, exist_ok=True)

    dense = dense_curves(cfg)
    with open(cfg.out_dir / "tmin_curves.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["family", "phi", "theta", "Tmin"])
        for fam, k, th, t in dense:
            w.writerow([fam, repr(PHASES[k]), repr(th), repr(t)])

    points = solver_points(cfg)
    worst = 0.0
    with open(cfg.out_dir / "solver_points.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["family", "phi", "theta", "T_numerical", "T_closed_form", "residual"])
        for fam, k, th, t, ref, res, secs in points:
            w.writerow([fam, repr(PHASES[k]), repr(th), repr(t), repr(ref), "%.3e" % res])
            worst = max(worst, abs(t - ref))
            print("%s phi=%d pi/3 theta=%.2f pi  T=%.6f  closed form %.6f  (%.2fs)"
                  % (fam, 2 * k, th / PI, t, ref, secs))
    print("max |T_numerical - T_closed_form| = %.2e" % worst)

    if args.plot:
        plot(dense, points, cfg.out_dir / "tmin_curves.png")
    return 0 if worst < 1e-3 else 1


if __name__ == "__main__":
    sys.exit(main())
