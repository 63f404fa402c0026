"""
Dense 3x3 linear algebra for a single spin-1 nucleus.

Operators are plain ``numpy`` arrays of shape (3, 3) and dtype complex128.
The basis is ordered by spin projection m = +1, 0, -1. Energies are in
units of the quadrupole constant q and times in units of 1/q.
"""

from __future__ import annotations

import numpy as np

from .errors import NotHermitian, NotUnitary

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10

IDENTITY = np.eye(3, dtype=complex)
IDENTITY.flags.writeable = False


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.flags.writeable = False
    return a


_S = 1 / np.sqrt(2)
IX = _frozen([[0, _S, 0], [_S, 0, _S], [0, _S, 0]])
IY = _frozen([[0, -1j * _S, 0], [1j * _S, 0, -1j * _S], [0, 1j * _S, 0]])
IZ = _frozen(np.diag([1.0, 0.0, -1.0]))
HQ = _frozen(IZ @ IZ - (2 / 3) * np.eye(3))


def spin1_operators():
    """Return ``(Ix, Iy, Iz, Hq)`` with q = 1 and exact resonance.

    The arrays are read-only; copy them before modifying.
    """
    return IX, IY, IZ, HQ


def commutator(a, b):
    return a @ b - b @ a


def dagger(a):
    return np.conj(np.transpose(a))


def is_hermitian(h, tol=HERMITIAN_TOL):
    h = np.asarray(h)
    return h.shape == (3, 3) and np.max(np.abs(h - dagger(h))) <= tol


def is_unitary(u, tol=UNITARY_TOL):
    u = np.asarray(u)
    return u.shape == (3, 3) and np.linalg.norm(dagger(u) @ u - IDENTITY) <= tol


def hermitian_eig(h):
    """Eigen-decomposition ``(w, v)`` of a Hermitian 3x3 matrix.

    Raises NotHermitian if ``h`` fails the Hermiticity check.
    """
    if not is_hermitian(h):
        raise NotHermitian("operator is not Hermitian within %g" % HERMITIAN_TOL)
    return np.linalg.eigh(np.asarray(h, dtype=complex))


def propagator_from_eig(w, v, t):
    """exp(-i t H) for H = v diag(w) v^dagger."""
    if t == 0:
        return np.eye(len(w), dtype=complex)
    return (v * np.exp(-1j * t * w)) @ dagger(v)


def herm_expm(h, t):
    """Return exp(-i t h) for Hermitian ``h``, computed from its eigenbasis."""
    w, v = hermitian_eig(h)
    return propagator_from_eig(w, v, t)


def gate_fidelity(u, v):
    """Phase-insensitive overlap |Tr(u^dagger v)| / 3.

    Equals 1 exactly when ``u`` and ``v`` differ by a global phase.
    """
    if not (is_unitary(u) and is_unitary(v)):
        raise NotUnitary("gate_fidelity needs two unitary operators")
    f = abs(np.trace(dagger(u) @ v)) / 3
    return float(min(f, 1.0))


def phase_sensitive_distance(u, v):
    """Frobenius norm of ``u - v``; zero only for exact equality, phase included."""
    return float(np.linalg.norm(np.asarray(u) - np.asarray(v)))
