"""
Closed-form time-optimal sequences for the selective rotations and the QFT.

Every tabulated solution is one ``TableRow`` record whose entries are short
arithmetic expressions in ``theta`` and a few named auxiliaries:

    xi   = atan2(2 sqrt2 sin(theta/2), 1 + 3 cos(theta/2)) / 2
    eta  = pi/2 + xi
    acq  = arccos(cos(theta/4)**2)  (evaluated as 2 asin(sin(theta/4) / sqrt2))
    acf  = arccos(sqrt(2/3))

plus the per-group times (``tau``, ``tau1``, ``tau2``) listed in ``GROUPS``.
Rows are evaluated with a restricted expression parser, never ``eval``.
"""

from __future__ import annotations

import ast
import csv
import math
import operator
from dataclasses import dataclass

import numpy as np

from .cartan import CartanPair, EulerConvention, SequenceParams, residual
from .errors import ThetaOutOfValidatedDomain, UnknownCombination
from .gates import GateName, make_gate

PI = math.pi
VALIDATED_THETA = (0.0, PI)
RESIDUAL_TOL = 1e-9
PHASE_MATCH_TOL = 1e-9

_FUNCS = {
    "sqrt": math.sqrt,
    "sin": math.sin,
    "cos": math.cos,
    "arccos": math.acos,
    "atan2": math.atan2,
}
_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}


def evaluate(expr, env):
    """Evaluate an arithmetic expression over ``env`` and the whitelisted functions."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name):
            if node.id == "pi":
                return PI
            return env[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) \
                and node.func.id in _FUNCS and not node.keywords:
            return _FUNCS[node.func.id](*[ev(a) for a in node.args])
        raise ValueError("unsupported expression element %r in %r" % (ast.dump(node), expr))

    return ev(ast.parse(expr, mode="eval"))


def _acq(theta):
    # arccos(cos^2(theta/4)) in a form that keeps full precision near theta = 0
    return 2 * math.asin(math.sin(theta / 4) / math.sqrt(2))


def base_symbols(theta):
    theta = float(theta)
    xi = 0.5 * math.atan2(2 * math.sqrt(2) * math.sin(theta / 2), 1 + 3 * math.cos(theta / 2))
    return {
        "theta": theta,
        "xi": xi,
        "eta": PI / 2 + xi,
        "acq": _acq(theta),
        "acf": math.acos(math.sqrt(2 / 3)),
    }


@dataclass(frozen=True)
class Group:
    """Shared times and minimum-time formula for a block of rows."""

    times: dict
    tmin: str


GROUPS = {
    "r12_0": Group({"tau": "acq"}, "3*acq"),
    "r13_0": Group({"tau": "theta/2"}, "3*theta/2"),
    "r12_2": Group({"tau1": "pi - acq", "tau2": "acq"}, "pi"),
    "r13_2": Group({"tau1": "theta/2", "tau2": "pi - theta/2"}, "pi"),
    "r12_4": Group({"tau1": "pi - acq", "tau2": "pi - 2*acq"}, "2*pi - 3*acq"),
    "r13_4": Group({"tau1": "pi - theta", "tau2": "pi - theta/2"}, "2*pi - 3*theta/2"),
    "qft_1": Group({"tau1": "pi - 2*acf", "tau2": "pi - acf"}, "2*pi - 3*acf"),
    "qft_5": Group({"tau": "acf"}, "3*acf"),
    "qft_9": Group({"tau1": "acf", "tau2": "pi - acf"}, "pi"),
}


@dataclass(frozen=True)
class TableRow:
    gate: GateName
    phi: str
    group: str
    angles: tuple
    t1: str
    t2: str
    convention: EulerConvention = EulerConvention.XYX
    cartan_pair: CartanPair = CartanPair.L4_L7

    @property
    def phi_value(self):
        return evaluate(self.phi, {})

    @property
    def label(self):
        return "%s phi=%s" % (self.gate.value, self.phi)


def _row(gate, phi, group, angles, t1, t2, conv="XYX", pair="L4_L7"):
    return TableRow(GateName(gate), phi, group, tuple(angles.split()), t1, t2,
                    EulerConvention(conv), CartanPair(pair))


# angles: alpha1 beta1 gamma1 alpha2 beta2 gamma2
TABLE = (
    # global phase 0
    _row("Rx12", "0", "r12_0", "xi -pi/4 pi/2 -pi/2 pi/4 xi", "tau", "2*tau"),
    _row("Ry12", "0", "r12_0", "0 xi -pi/4 pi/4 xi 0", "2*tau", "tau"),
    _row("Rx23", "0", "r12_0", "xi pi/4 pi/2 -pi/2 -pi/4 xi", "tau", "2*tau"),
    _row("Ry23", "0", "r12_0", "0 xi pi/4 -pi/4 xi 0", "2*tau", "tau"),
    _row("Rx13", "0", "r13_0", "0 0 0 0 0 0", "tau", "2*tau"),
    _row("Ry13", "0", "r13_0", "0 0 0 0 0 0", "tau", "2*tau", pair="L4_L8"),
    # global phase 2pi/3
    _row("Rx12", "2*pi/3", "r12_2", "xi pi/4 pi 0 -pi/4 xi", "tau2", "tau1"),
    _row("Ry12", "2*pi/3", "r12_2", "eta -pi/2 pi/4 pi/4 pi/2 eta", "tau1", "tau2", "YXY"),
    _row("Rx23", "2*pi/3", "r12_2", "xi -pi/4 pi 0 pi/4 xi", "tau2", "tau1"),
    _row("Ry23", "2*pi/3", "r12_2", "eta pi/2 pi/4 pi/4 -pi/2 eta", "tau1", "tau2", "YXY"),
    _row("Rx13", "2*pi/3", "r13_2", "pi/2 -pi/2 0 0 -pi/2 pi/2", "tau1", "tau2"),
    _row("Ry13", "2*pi/3", "r13_2", "-pi/2 pi/4 0 0 pi/4 -pi/2", "tau1", "tau2"),
    # global phase 4pi/3
    _row("Rx12", "4*pi/3", "r12_4", "xi pi/4 -pi/2 -pi/2 3*pi/4 xi", "tau1", "tau2"),
    _row("Ry12", "4*pi/3", "r12_4", "xi pi/4 -pi/2 -pi/2 -pi/4 xi", "tau1", "tau2", "YXY"),
    _row("Rx23", "4*pi/3", "r12_4", "xi -pi/4 pi/2 pi/2 -3*pi/4 xi", "tau1", "tau2"),
    _row("Ry23", "4*pi/3", "r12_4", "xi -pi/4 pi/2 pi/2 pi/4 xi", "tau1", "tau2", "YXY"),
    _row("Rx13", "4*pi/3", "r13_4", "-pi/2 pi/2 0 0 pi/2 -pi/2", "tau1", "tau2", "YXY"),
    _row("Ry13", "4*pi/3", "r13_4", "pi/2 pi/4 0 0 pi/4 pi/2", "tau1", "tau2", "YXY"),
    # QFT
    _row("QFT", "pi/6", "qft_1", "-pi/2 pi/3 pi/4 -pi/4 2*pi/3 -pi/2", "tau1", "tau2"),
    _row("QFT", "5*pi/6", "qft_5", "-pi/2 pi/3 -pi/4 -pi/4 pi/3 pi/2", "2*tau", "tau"),
    # y-x-y: the x-y-x reading of these angles does not reproduce the gate
    _row("QFT", "9*pi/6", "qft_9", "-pi/2 pi/6 pi/4 -pi/4 pi/6 pi/2", "tau1", "tau2", "YXY"),
)


@dataclass(frozen=True)
class AnalyticSolution:
    gate_name: GateName
    phi: float
    theta: float
    params: SequenceParams
    tmin: float
    validated: bool
    row: TableRow


def row_environment(row, theta):
    env = base_symbols(theta)
    for name, expr in GROUPS[row.group].times.items():
        env[name] = evaluate(expr, env)
    return env


def evaluate_row(row, theta):
    """Return ``(params, tmin)`` for ``row`` at rotation angle ``theta``."""
    env = row_environment(row, theta)
    params = SequenceParams.from_vector(
        [evaluate(a, env) for a in row.angles],
        evaluate(row.t1, env),
        evaluate(row.t2, env),
        row.convention,
        row.cartan_pair,
    )
    return params, float(evaluate(GROUPS[row.group].tmin, env))


def _same_phase(a, b):
    d = (a - b) % (2 * PI)
    return min(d, 2 * PI - d) < PHASE_MATCH_TOL


def find_row(gate_name, phi, table=TABLE):
    gate_name = GateName(gate_name)
    for row in table:
        if row.gate is gate_name and _same_phase(row.phi_value, phi):
            return row
    raise UnknownCombination("no tabulated solution for %s at phi=%.6g" % (gate_name.value, phi))


def in_validated_domain(theta):
    lo, hi = VALIDATED_THETA
    return lo <= theta <= hi


def lookup_solution(gate_name, theta, phi, allow_unvalidated=False, table=TABLE):
    """Evaluate the tabulated solution for (gate, phi) at ``theta``.

    Rotation angles outside [0, pi] raise ThetaOutOfValidatedDomain unless
    ``allow_unvalidated`` is set, in which case the solution is returned
    with ``validated=False``. ``theta`` is ignored for the QFT.
    """
    row = find_row(gate_name, phi, table)
    if row.gate is GateName.QFT:
        theta = 0.0
    validated = row.gate is GateName.QFT or in_validated_domain(theta)
    if not validated and not allow_unvalidated:
        raise ThetaOutOfValidatedDomain("theta=%.6g outside [0, pi]" % theta)
    params, tmin = evaluate_row(row, theta)
    return AnalyticSolution(row.gate, row.phi_value, theta, params, tmin, validated, row)


def tmin_curve(family, phi, theta_grid, allow_unvalidated=False):
    """(theta, T_min) pairs for a rotation family "R12", "R23" or "R13".

    x and y rotations on the same transition share the same T_min.
    """
    if family not in ("R12", "R23", "R13"):
        raise UnknownCombination("unknown rotation family %r" % family)
    name = GateName("Rx" + family[1:])
    return [
        (float(th), lookup_solution(name, th, phi, allow_unvalidated).tmin)
        for th in theta_grid
    ]


def exact_tmin_r12(theta):
    """3 arccos(cos^2(theta/4)), evaluated without cancellation."""
    return 3 * _acq(theta)


def small_angle_tmin(theta):
    """Leading-order T_min for R12/R23 at phase 0 and small theta."""
    return 3 * theta / (2 * math.sqrt(2))


DEFAULT_THETA_GRID = tuple(k * PI / 12 for k in range(1, 13))


@dataclass
class RowCheck:
    row: TableRow
    theta: float
    params: SequenceParams
    tmin: float
    residual: float
    time_error: float

    @property
    def passed(self):
        return self.residual < RESIDUAL_TOL and self.time_error <= 1e-12


def validate_table(theta_grid=DEFAULT_THETA_GRID, table=TABLE):
    """Evaluate every row (the QFT rows once) and measure its residual."""
    checks = []
    for row in table:
        thetas = (0.0,) if row.gate is GateName.QFT else theta_grid
        for th in thetas:
            params, tmin = evaluate_row(row, th)
            gate = make_gate(row.gate, th)
            checks.append(RowCheck(
                row, th, params, tmin,
                residual(params, gate, row.phi_value),
                abs(params.total_time - tmin),
            ))
    return checks


CSV_COLUMNS = ("gate", "phi", "theta", "alpha1", "beta1", "gamma1", "alpha2", "beta2",
               "gamma2", "t1", "t2", "convention", "cartan_pair", "Tmin", "residual")


def write_table_csv(path, checks):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for c in checks:
            p = c.params
            w.writerow([
                c.row.gate.value, repr(c.row.phi_value),
                "" if c.row.gate is GateName.QFT else repr(c.theta),
                *[repr(a) for a in p.angles], repr(p.t1), repr(p.t2),
                p.euler_convention.value, p.cartan_pair.value,
                repr(c.tmin), "%.3e" % c.residual,
            ])


def theta_grid(theta_min, theta_max, n_points):
    return list(np.linspace(theta_min, theta_max, n_points))


def _check_times_nonnegative():
    # transcription guard: every row must give t1, t2 >= 0 on [0, pi]
    for row in TABLE:
        for th in (0.0,) + DEFAULT_THETA_GRID:
            evaluate_row(row, th)


_check_times_nonnegative()
