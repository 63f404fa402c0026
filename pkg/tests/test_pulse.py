import json
import math

import numpy as np
import pytest
from hypothesis import given, settings

from qutrit_kak.analytic import TABLE, evaluate_row, lookup_solution
from qutrit_kak.cartan import CartanPair, SequenceParams, sequence_unitary
from qutrit_kak.errors import NegativeTime, NonpositiveAmplitude
from qutrit_kak.gates import make_gate
from qutrit_kak.pulse import (
    EventKind,
    PulseEvent,
    PulseProgram,
    compile_program,
    error_vs_amplitude,
    finite_pulse_unitary,
    normalize_angle,
    read_program_json,
    simulate_finite,
    simulate_ideal,
    write_program_json,
    write_sweep_csv,
)
from qutrit_kak.su3 import IDENTITY, gate_fidelity

from .conftest import sequence_params

PI = math.pi


def table_programs():
    out = []
    for row in TABLE:
        for th in ((0.0,) if row.gate.family == "QFT" else (PI / 4, PI / 2, PI)):
            p, _ = evaluate_row(row, th)
            target = np.exp(1j * row.phi_value) * make_gate(row.gate, th).unitary
            out.append((row.label, th, compile_program(p), target))
    return out


PROGRAMS = table_programs()


def test_rx13_program_shape():
    th = PI / 2
    sol = lookup_solution("Rx13", th, 0.0)
    prog = compile_program(sol.params)
    assert prog.events == (
        PulseEvent.pulse("y", -PI / 2),
        PulseEvent.delay(th),
        PulseEvent.pulse("y", PI / 2),
        PulseEvent.delay(th / 2),
    )
    assert np.linalg.norm(simulate_ideal(prog) - make_gate("Rx13", th).unitary) < 1e-12


def test_identity_params_compile_to_nothing():
    prog = compile_program(SequenceParams())
    assert prog.events == () and prog.total_free_time == 0.0
    assert np.array_equal(simulate_ideal(prog), IDENTITY)
    assert np.array_equal(simulate_finite(prog, 3.0), IDENTITY)
    assert error_vs_amplitude(prog, IDENTITY, [1, 2]) == [(1.0, 0.0), (2.0, 0.0)]


def test_single_x_pi():
    prog = PulseProgram((PulseEvent.pulse("x", PI),), 0.0)
    expected = np.array([[0, 0, -1], [0, -1, 0], [-1, 0, 0]])
    assert np.allclose(simulate_ideal(prog), expected, atol=1e-15)
    inf = 1 - gate_fidelity(simulate_finite(prog, 20), expected)
    assert 1e-5 < inf < 1e-2


def test_qft_programs():
    for label, _, prog, target in PROGRAMS:
        if label.startswith("QFT"):
            assert len(prog.pulses) <= 8 and len(prog.delays) == 2
            assert np.linalg.norm(simulate_ideal(prog) - target) < 1e-10


def test_table_program_invariants():
    for label, _, prog, target in PROGRAMS:
        ev = prog.events
        for a, b in zip(ev, ev[1:]):
            assert not (a.kind is b.kind and a.axis == b.axis), label
        assert all(abs(e.angle) > 0 for e in prog.pulses)
        assert all(e.duration > 0 for e in prog.delays)
        assert all(-PI < e.angle <= PI for e in prog.pulses)
        assert sum(e.duration for e in prog.delays) == pytest.approx(prog.total_free_time)
        assert np.linalg.norm(simulate_ideal(prog) - sequence_unitary(prog.source_params)) < 1e-12


@given(sequence_params())
@settings(max_examples=60, deadline=None)
def test_round_trip_and_merge(p):
    merged = compile_program(p)
    raw = compile_program(p, merge=False)
    u = sequence_unitary(p)
    assert np.linalg.norm(simulate_ideal(merged) - u) < 1e-12
    assert np.linalg.norm(simulate_ideal(merged) - simulate_ideal(raw)) < 1e-13
    limit = 8 if p.cartan_pair is CartanPair.L4_L7 else 10
    assert len(merged.pulses) <= limit and len(merged.delays) <= 2


@given(sequence_params())
@settings(max_examples=20, deadline=None)
def test_json_round_trip(p):
    prog = compile_program(p, target_gate="custom", phi=0.5)
    back = PulseProgram.from_dict(json.loads(json.dumps(prog.to_dict())))
    assert back == prog


def test_json_file_and_schema(tmp_path):
    prog = PROGRAMS[0][2]
    path = tmp_path / "p.json"
    write_program_json(path, prog)
    d = json.loads(path.read_text())
    assert d["version"] == 1 and d["q_units"] is True
    first_pulse = next(e for e in d["events"] if e["kind"] == "HardPulse")
    assert set(first_pulse) == {"kind", "axis", "angle_rad"}
    assert read_program_json(path) == prog
    d["version"] = 2
    with pytest.raises(ValueError):
        PulseProgram.from_dict(d)


def test_normalize_angle():
    assert normalize_angle(-PI) == PI
    assert normalize_angle(3 * PI) == pytest.approx(PI)
    assert normalize_angle(PI / 2 + 4 * PI) == pytest.approx(PI / 2)


def test_negative_values_rejected():
    with pytest.raises(NegativeTime):
        PulseEvent.delay(-1.0)
    with pytest.raises(NonpositiveAmplitude):
        finite_pulse_unitary("x", 1.0, 0.0)
    with pytest.raises(NonpositiveAmplitude):
        simulate_finite(PROGRAMS[0][2], -5)
    with pytest.raises(ValueError):
        error_vs_amplitude(PROGRAMS[0][2], IDENTITY, [100, 10])


def test_negative_angle_is_phase_inverted_pulse():
    u = finite_pulse_unitary("y", -1.0, 40.0)
    v = finite_pulse_unitary("y", 1.0, 40.0)
    assert np.linalg.norm(u @ v - IDENTITY) > 1e-6  # not an exact inverse at finite amplitude
    assert gate_fidelity(u, finite_pulse_unitary("y", 1.0, 40.0).conj().T) > 1 - 1e-2


def test_strong_limit():
    for label, _, prog, _ in PROGRAMS:
        if not label.startswith("QFT"):
            assert gate_fidelity(simulate_finite(prog, 1e4), simulate_ideal(prog)) > 1 - 1e-6, label


def test_doubling_amplitude_helps():
    omegas = [10, 20, 40, 80, 160]
    for label, th, prog, target in PROGRAMS:
        inf = [e for _, e in error_vs_amplitude(prog, target, omegas)]
        for a, b in zip(inf, inf[1:]):
            assert b <= 1.05 * a, (label, th, inf)


def test_qft_at_1e3():
    prog = compile_program(lookup_solution("QFT", 0.0, 5 * PI / 6).params)
    target = np.exp(5j * PI / 6) * make_gate("QFT").unitary
    (_, inf), = error_vs_amplitude(prog, target, [1e3])
    assert inf < 1e-4


def test_sweep_csv(tmp_path):
    path = tmp_path / "s.csv"
    write_sweep_csv(path, [(10.0, 0.1), (100.0, 0.001)])
    assert path.read_text().splitlines() == ["omega,infidelity", "10.0,0.1", "100.0,0.001"]


def test_event_kinds():
    assert PulseEvent.delay(1.0).kind is EventKind.Delay
    assert PulseEvent.pulse("x", 1.0).kind is EventKind.HardPulse
