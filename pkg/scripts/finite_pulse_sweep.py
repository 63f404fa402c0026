"""Gate error of every tabulated pulse program versus rf amplitude.

For each program the infidelity against the ideal target is computed on a
log-spaced amplitude grid, and the log-log slope over the strong-pulse end
is reported.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from qutrit_kak import analytic, pulse
from qutrit_kak.gates import GateName, make_gate


@dataclass(frozen=True)
class SweepConfig:
    omegas: tuple = tuple(np.logspace(1, 4, 13))
    thetas: tuple = field(default=(np.pi / 4, np.pi / 2, 3 * np.pi / 4, np.pi))
    slope_from: float = 1e2


def programs(cfg):
    for row in analytic.TABLE:
        thetas = (0.0,) if row.gate is GateName.QFT else cfg.thetas
        for th in thetas:
            params, _ = analytic.evaluate_row(row, th)
            target = np.exp(1j * row.phi_value) * make_gate(row.gate, th).unitary
            yield row, th, pulse.compile_program(params, target_gate=row.gate.value,
                                                 phi=row.phi_value), target


def main(argv=None):
    ap = argparse.ArgumentParser(description="finite-amplitude error sweep")
    ap.add_argument("--out", default="results/finite_pulse_sweep.csv")
    args = ap.parse_args(argv)
    cfg = SweepConfig()
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)

    omegas = np.array(cfg.omegas)
    tail = omegas >= cfg.slope_from
    slopes = []
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["gate", "phi", "theta", "n_pulses", "omega", "infidelity"])
        for row, th, prog, target in programs(cfg):
            sweep = pulse.error_vs_amplitude(prog, target, omegas)
            inf = np.array([e for _, e in sweep])
            for om, e in sweep:
                w.writerow([row.gate.value, repr(row.phi_value), repr(th), len(prog.pulses),
                            repr(om), repr(e)])
            slope = np.polyfit(np.log(1 / omegas[tail]), np.log(inf[tail]), 1)[0]
            slopes.append(slope)
            print("%-16s theta=%.2f pi  pulses=%d  1-F(10)=%.2e  1-F(1e4)=%.2e  slope=%.3f"
                  % (row.label, th / np.pi, len(prog.pulses), inf[0], inf[-1], slope))
    print("slopes %.3f .. %.3f over %d programs -> %s" % (min(slopes), max(slopes), len(slopes), args.out))
    return 0


if __name__ == "__main__":
    sys.exit(main())
