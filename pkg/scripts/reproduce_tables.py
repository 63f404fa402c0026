"""Evaluate every tabulated sequence on the theta grid and export the results.

    python3 scripts/reproduce_tables.py --out results/tables.csv
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from qutrit_kak import analytic


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/tables.csv")
    args = ap.parse_args(argv)

    t0 = time.perf_counter()
    checks = analytic.validate_table()
    elapsed = time.perf_counter() - t0

    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    analytic.write_table_csv(args.out, checks)

    print("%-18s %8s %10s %10s" % ("row", "checks", "max res", "max dT"))
    for row in analytic.TABLE:
        mine = [c for c in checks if c.row is row]
        print("%-18s %8d %10.1e %10.1e" % (
            row.label, len(mine), max(c.residual for c in mine), max(c.time_error for c in mine)))
    n_bad = sum(not c.passed for c in checks)
    print("%d checks, %d failed, %.3fs -> %s" % (len(checks), n_bad, elapsed, args.out))
    return 1 if n_bad else 0


if __name__ == "__main__":
    sys.exit(main())
