"""
Hard-pulse programs: compile a SequenceParams into time-ordered x/y pulses
and free-evolution delays, and simulate them ideally or at finite rf
amplitude.

Time order is the reverse of operator order: the right-most factor of the
sequence unitary is the first event. Each Cartan factor is expanded as a
framed free evolution,

    exp(-i t L7) = Ry(pi/2) exp(-i t Hq) Ry(-pi/2)
    exp(-i t L8) = Ry(-pi/2) Rx(pi/4) exp(-i t Hq) Rx(-pi/4) Ry(pi/2)

with R_a(phi) = exp(-i phi I_a).
"""

from __future__ import annotations

import csv
import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .cartan import CartanPair, SequenceParams, rotation
from .errors import NegativeTime, NonpositiveAmplitude
from .su3 import HQ, IDENTITY, IX, IY, gate_fidelity, herm_expm

PI = math.pi
SCHEMA_VERSION = 1
_ANGLE_EPS = 1e-14
_AXIS_OP = {"x": IX, "y": IY}


class EventKind(str, enum.Enum):
    HardPulse = "HardPulse"
    Delay = "Delay"


def normalize_angle(a):
    """Map to (-pi, pi]; exact for spin 1 since exp(-2 pi i I_a) = 1."""
    a = math.remainder(a, 2 * PI)
    return PI if a == -PI else a


@dataclass(frozen=True)
class PulseEvent:
    kind: EventKind
    axis: str | None = None
    angle: float = 0.0
    duration: float = 0.0

    @classmethod
    def pulse(cls, axis, angle):
        return cls(EventKind.HardPulse, axis, normalize_angle(angle))

    @classmethod
    def delay(cls, duration):
        if duration < 0:
            raise NegativeTime("delay %r < 0" % duration)
        return cls(EventKind.Delay, duration=float(duration))

    @property
    def is_pulse(self):
        return self.kind is EventKind.HardPulse

    def to_dict(self):
        if self.is_pulse:
            return {"kind": self.kind.value, "axis": self.axis, "angle_rad": self.angle}
        return {"kind": self.kind.value, "duration": self.duration}

    @classmethod
    def from_dict(cls, d):
        if d["kind"] == EventKind.HardPulse.value:
            return cls.pulse(d["axis"], float(d["angle_rad"]))
        return cls.delay(float(d["duration"]))

    def ideal_unitary(self):
        if self.is_pulse:
            return rotation(self.axis, self.angle)
        return herm_expm(HQ, self.duration)


@dataclass(frozen=True)
class PulseProgram:
    events: tuple
    total_free_time: float
    source_params: SequenceParams | None = None
    target_gate: str | None = None
    phi: float | None = None
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def pulses(self):
        return [e for e in self.events if e.is_pulse]

    @property
    def delays(self):
        return [e for e in self.events if not e.is_pulse]

    def to_dict(self):
        return {
            "version": SCHEMA_VERSION,
            "q_units": True,
            "events": [e.to_dict() for e in self.events],
            "total_free_time": self.total_free_time,
            "source_params": None if self.source_params is None else self.source_params.to_dict(),
            "target_gate": self.target_gate,
            "phi": self.phi,
        }

    @classmethod
    def from_dict(cls, d):
        if d.get("version") != SCHEMA_VERSION:
            raise ValueError("unsupported program schema version %r" % d.get("version"))
        if d.get("q_units") is not True:
            raise ValueError("program must be expressed in units of q")
        src = d.get("source_params")
        events = tuple(PulseEvent.from_dict(e) for e in d["events"])
        return cls(
            events,
            float(d.get("total_free_time", sum(e.duration for e in events))),
            None if src is None else SequenceParams.from_dict(src),
            d.get("target_gate"),
            d.get("phi"),
        )


def _operator_order(p):
    a, b, c = p.euler_convention.axes
    q1 = [("P", a, p.alpha1), ("P", b, p.beta1), ("P", c, p.gamma1)]
    q2 = [("P", a, p.alpha2), ("P", b, p.beta2), ("P", c, p.gamma2)]
    if p.cartan_pair is CartanPair.L4_L7:
        cart = [("P", "y", PI / 2), ("D", None, p.t2), ("P", "y", -PI / 2)]
    else:
        cart = [("P", "y", -PI / 2), ("P", "x", PI / 4), ("D", None, p.t2),
                ("P", "x", -PI / 4), ("P", "y", PI / 2)]
    return q1 + [("D", None, p.t1)] + cart + q2


def _push(out, ev):
    # merge with the previous event when it acts on the same generator
    if out and out[-1].kind is ev.kind and out[-1].axis == ev.axis:
        prev = out.pop()
        if ev.is_pulse:
            ev = PulseEvent.pulse(ev.axis, prev.angle + ev.angle)
        else:
            ev = PulseEvent.delay(prev.duration + ev.duration)
    if ev.is_pulse and abs(ev.angle) < _ANGLE_EPS:
        return
    if not ev.is_pulse and ev.duration == 0.0:
        return
    out.append(ev)


def compile_program(p, merge=True, target_gate=None, phi=None):
    """Time-ordered pulse program realizing ``sequence_unitary(p)``.

    With ``merge`` (the default) adjacent events on the same axis are
    combined and identity events dropped; ``merge=False`` keeps the raw
    expansion, which is only useful for testing.
    """
    if p.t1 < 0 or p.t2 < 0:
        raise NegativeTime("t1=%r, t2=%r" % (p.t1, p.t2))
    raw = []
    for kind, axis, x in reversed(_operator_order(p)):
        raw.append(PulseEvent.pulse(axis, x) if kind == "P" else PulseEvent.delay(x))
    if merge:
        events = []
        for ev in raw:
            _push(events, ev)
    else:
        events = raw
    return PulseProgram(tuple(events), p.t1 + p.t2, p, target_gate, phi)


def simulate_ideal(prog):
    """Product of exact rotations and free evolutions, first event right-most."""
    u = np.array(IDENTITY)
    for ev in prog.events:
        u = ev.ideal_unitary() @ u
    return u


def finite_pulse_unitary(axis, angle, omega):
    """Square pulse of amplitude |omega| (sign set by the angle) under Hq + omega I_axis."""
    if not omega > 0:
        raise NonpositiveAmplitude("omega=%r must be positive" % omega)
    if angle == 0:
        return np.array(IDENTITY)
    amp = math.copysign(omega, angle)
    return herm_expm(HQ + amp * _AXIS_OP[axis], abs(angle) / omega)


def simulate_finite(prog, omega):
    if not omega > 0:
        raise NonpositiveAmplitude("omega=%r must be positive" % omega)
    u = np.array(IDENTITY)
    for ev in prog.events:
        step = finite_pulse_unitary(ev.axis, ev.angle, omega) if ev.is_pulse \
            else ev.ideal_unitary()
        u = step @ u
    return u


def error_vs_amplitude(prog, target, omega_list):
    """(omega, 1 - gate_fidelity) for each amplitude; omegas must be positive and ascending."""
    omegas = [float(w) for w in omega_list]
    if any(w <= 0 for w in omegas):
        raise NonpositiveAmplitude("all amplitudes must be positive")
    if any(b <= a for a, b in zip(omegas, omegas[1:])):
        raise ValueError("omega_list must be strictly ascending")
    return [(w, max(0.0, 1 - gate_fidelity(simulate_finite(prog, w), target))) for w in omegas]


def write_program_json(path, prog):
    with open(path, "w") as fh:
        json.dump(prog.to_dict(), fh, indent=2)
        fh.write("\n")


def read_program_json(path):
    with open(path) as fh:
        return PulseProgram.from_dict(json.load(fh))


def write_sweep_csv(path, sweep):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["omega", "infidelity"])
        for omega, inf in sweep:
            w.writerow([repr(omega), repr(inf)])
