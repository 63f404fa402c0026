"""Acceptance criteria, one test each, at their stated tolerances.

Each test records a PASS/FAIL line that is printed in the pytest terminal
summary under "acceptance criteria".
"""

import contextlib
import math
import time

import numpy as np
import pytest

from qutrit_kak.analytic import (
    DEFAULT_THETA_GRID,
    TABLE,
    evaluate_row,
    lookup_solution,
    small_angle_tmin,
    theta_grid,
    tmin_curve,
    validate_table,
)
from qutrit_kak.cartan import check_cartan_structure, generator_basis, sequence_unitary
from qutrit_kak.gates import GateName, make_gate
from qutrit_kak.pulse import compile_program, error_vs_amplitude, simulate_ideal
from qutrit_kak.solver import find_tmin
from qutrit_kak.su3 import commutator

from .conftest import ACCEPTANCE_LINES

PI = math.pi
PHASES = (0.0, 2 * PI / 3, 4 * PI / 3)
ROTATIONS = [g for g in GateName if g is not GateName.QFT]


@contextlib.contextmanager
def criterion(n, title):
    detail = {}
    try:
        yield detail
    except BaseException:
        ACCEPTANCE_LINES.append("FAIL  %d. %s  %s" % (n, title, detail.get("msg", "")))
        raise
    ACCEPTANCE_LINES.append("PASS  %d. %s  %s" % (n, title, detail.get("msg", "")))


def tmin_formula(name, phi_index, theta):
    # closed forms written out independently of the table module
    a = 6 * math.asin(math.sin(theta / 4) / math.sqrt(2))
    if make_gate(name, 0.0).name.family == "R13":
        return (1.5 * theta, PI, 2 * PI - 1.5 * theta)[phi_index]
    return (a, PI, 2 * PI - a)[phi_index]


def tabulated():
    for row in TABLE:
        thetas = (0.0,) if row.gate is GateName.QFT else DEFAULT_THETA_GRID
        for th in thetas:
            p, _ = evaluate_row(row, th)
            yield row, th, p


def test_1_table_reproduction():
    with criterion(1, "table reproduction") as d:
        t0 = time.perf_counter()
        checks = validate_table()
        elapsed = time.perf_counter() - t0
        res = max(c.residual for c in checks)
        terr = max(c.time_error for c in checks)
        d["msg"] = "(%d checks, max residual %.1e, max time error %.1e, %.3fs)" % (
            len(checks), res, terr, elapsed)
        assert len(checks) == 18 * 12 + 3
        assert res < 1e-9 and terr <= 1e-12
        assert elapsed < 1.0


def test_2_qft_minimum_times():
    with criterion(2, "QFT minimum times") as d:
        acf = math.acos(math.sqrt(2 / 3))
        expected = {9 * PI / 6: PI, 5 * PI / 6: 3 * acf, PI / 6: 2 * PI - 3 * acf}
        assert 3 * acf == pytest.approx(1.846439, abs=1e-6)
        assert 2 * PI - 3 * acf == pytest.approx(4.436746, abs=1e-6)
        got = {}
        for phi, t in expected.items():
            sol = lookup_solution("QFT", 0.0, phi)
            got[phi] = sol.params.total_time
            assert abs(sol.tmin - t) < 1e-6 and abs(sol.params.total_time - t) < 1e-6
        d["msg"] = "(%s)" % ", ".join("%.6f" % got[p] for p in sorted(got))


@pytest.mark.slow
def test_3_solver_cross_validation():
    with criterion(3, "solver cross-validation") as d:
        worst, slowest, n = 0.0, 0.0, 0
        for name in ROTATIONS:
            for k, phi in enumerate(PHASES):
                for m in (1, 2, 3, 4):
                    th = m * PI / 4
                    t0 = time.perf_counter()
                    res = find_tmin(make_gate(name, th), phi)
                    slowest = max(slowest, time.perf_counter() - t0)
                    worst = max(worst, abs(res.total_time - tmin_formula(name, k, th)))
                    n += 1
        d["msg"] = "(%d triples, max |T - T_formula| %.1e, slowest %.2fs)" % (n, worst, slowest)
        assert n == 72
        assert worst < 1e-3
        assert slowest <= 300


def test_4_phase_dependence():
    with criterion(4, "phase-dependence phenomena") as d:
        grid = theta_grid(PI / 400, PI, 400)
        for fam in ("R12", "R23", "R13"):
            flat = np.array([t for _, t in tmin_curve(fam, PHASES[1], grid)])
            up = np.array([t for _, t in tmin_curve(fam, PHASES[0], grid)])
            down = np.array([t for _, t in tmin_curve(fam, PHASES[2], grid)])
            assert np.max(np.abs(flat - PI)) < 1e-9
            assert np.all(np.diff(up) >= 0)
            assert np.all(np.diff(down) <= 0)
        a = tmin_curve("R13", PHASES[1], [2 * PI / 3])[0][1]
        b = tmin_curve("R13", PHASES[2], [2 * PI / 3])[0][1]
        assert abs(a - PI) < 1e-9 and abs(b - PI) < 1e-9
        d["msg"] = "(R13 crossing at 2pi/3: %.12f, %.12f)" % (a, b)


def test_5_small_angle():
    with criterion(5, "small-angle asymptotics") as d:
        th = 0.1
        exact = 3 * math.acos(math.cos(th / 4) ** 2)
        rel = abs(exact - small_angle_tmin(th)) / th
        d["msg"] = "(relative gap %.2e)" % rel
        assert rel < 1e-3


def test_6_cartan_structure():
    with criterion(6, "Cartan structure") as d:
        rep = check_cartan_structure(tol=1e-10)
        b = generator_basis()
        c7 = np.max(np.abs(commutator(b[4], b[7])))
        c8 = np.max(np.abs(commutator(b[4], b[8])))
        d["msg"] = "(max projection residual %.1e, [L4,L7] %.1e, [L4,L8] %.1e)" % (
            rep.max_residual, c7, c8)
        assert rep.ok
        assert c7 < 1e-12 and c8 < 1e-12


def test_7_round_trip():
    with criterion(7, "compile/simulate round trip") as d:
        worst, most_pulses, most_delays = 0.0, 0, 0
        for _, _, p in tabulated():
            prog = compile_program(p)
            worst = max(worst, np.linalg.norm(simulate_ideal(prog) - sequence_unitary(p)))
            most_pulses = max(most_pulses, len(prog.pulses))
            most_delays = max(most_delays, len(prog.delays))
        d["msg"] = "(max error %.1e, max %d pulses, max %d delays)" % (
            worst, most_pulses, most_delays)
        assert worst < 1e-12
        assert most_pulses <= 8 and most_delays <= 2


def test_8_finite_amplitude_convergence():
    with criterion(8, "finite-amplitude convergence") as d:
        omegas = [10.0, 1e2, 1e3, 1e4]
        slopes, worst_final = [], 0.0
        for row, th, p in tabulated():
            target = np.exp(1j * row.phi_value) * make_gate(row.gate, th).unitary
            inf = np.array([e for _, e in error_vs_amplitude(compile_program(p), target, omegas)])
            assert np.all(np.diff(inf) < 0), (row.label, th, inf)
            worst_final = max(worst_final, inf[-1])
            slope = np.polyfit(np.log(1 / np.array(omegas[1:])), np.log(inf[1:]), 1)[0]
            slopes.append(slope)
        d["msg"] = "(%d programs, max infidelity at 1e4 %.1e, slopes %.3f..%.3f)" % (
            len(slopes), worst_final, min(slopes), max(slopes))
        assert worst_final < 1e-4
        assert 0.8 <= min(slopes) and max(slopes) <= 2.2
