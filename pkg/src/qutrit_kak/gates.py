"""
Named single-qutrit target gates and their admissible global phases.

Selective rotations act on one two-level subspace (levels 1-2, 2-3 or 1-3,
numbered from m = +1 downwards) and leave the third level alone. Both the
x and y rotations use the exp(-i theta sigma / 2) convention on the
addressed subspace, so R_x has -i sin(theta/2) off the diagonal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import AngleOutOfRange
from .su3 import is_unitary

TWO_PI = 2 * np.pi


class GateName(str, enum.Enum):
    Rx12 = "Rx12"
    Ry12 = "Ry12"
    Rx23 = "Rx23"
    Ry23 = "Ry23"
    Rx13 = "Rx13"
    Ry13 = "Ry13"
    QFT = "QFT"

    @property
    def family(self):
        """Transition label ("R12", "R23", "R13") or "QFT"."""
        return "QFT" if self is GateName.QFT else "R" + self.value[2:]

    @property
    def axis(self):
        return None if self is GateName.QFT else self.value[1]


_LEVELS = {"12": (0, 1), "23": (1, 2), "13": (0, 2)}


@dataclass(frozen=True, eq=False)
class GateTarget:
    name: GateName
    theta: float
    unitary: np.ndarray

    def __repr__(self):
        if self.name is GateName.QFT:
            return "GateTarget(QFT)"
        return "GateTarget(%s, theta=%.6g)" % (self.name.value, self.theta)


@dataclass(frozen=True)
class GlobalPhaseSet:
    phi0: float
    phases: tuple


def rotation_matrix(axis, levels, theta):
    i, j = _LEVELS[levels]
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    u = np.eye(3, dtype=complex)
    u[i, i] = u[j, j] = c
    if axis == "x":
        u[i, j] = u[j, i] = -1j * s
    else:
        u[i, j] = -s
        u[j, i] = s
    return u


def qft_matrix():
    sigma = np.exp(2j * np.pi / 3)
    return np.array(
        [[1, 1, 1], [1, sigma, sigma**2], [1, sigma**2, sigma]], dtype=complex
    ) / np.sqrt(3)


def make_gate(name, theta=0.0):
    """Build one of the named target gates.

    ``theta`` must lie in [0, 2*pi) for the rotations and is ignored for
    the QFT. Note that theta and theta + 2*pi give gates differing by a
    sign on the addressed block, which is not a global phase.
    """
    name = GateName(name)
    if name is GateName.QFT:
        u = qft_matrix()
        theta = 0.0
    else:
        theta = float(theta)
        if not 0 <= theta < TWO_PI:
            raise AngleOutOfRange("theta=%r outside [0, 2*pi)" % theta)
        u = rotation_matrix(name.axis, name.value[2:], theta)
    u.flags.writeable = False
    return GateTarget(name, theta, u)


def _unitary_of(gate):
    return gate.unitary if isinstance(gate, GateTarget) else np.asarray(gate, dtype=complex)


def global_phases(gate):
    """Global phases phi for which exp(i phi) U has unit determinant.

    Accepts a GateTarget or a bare 3x3 unitary. phi0 is the smallest such
    angle in [0, pi]; the three admissible phases are phi0 + 2*pi*p/3.
    """
    det = np.linalg.det(_unitary_of(gate))
    step = TWO_PI / 3
    phi0 = (-np.angle(det) / 3) % step
    if step - phi0 < 1e-12:
        phi0 = 0.0
    phases = tuple(float((phi0 + step * p) % TWO_PI) for p in range(3))
    return GlobalPhaseSet(float(phi0), phases)


def is_special(u, tol=1e-10):
    return is_unitary(u) and abs(np.linalg.det(u) - 1) <= tol
