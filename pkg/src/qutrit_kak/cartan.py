"""
The su(3) generator basis L1..L8 adapted to hard-pulse control, the
Cartan-structure checks for k = span{L1, L2, L3}, p = span{L4..L8}, and the
eight-factor sequence unitary

    U = Q1 exp(-i t1 L4) exp(-i t2 Lc) Q2,   Lc in {L7, L8},

with Q1, Q2 Euler rotations about x-y-x (or y-x-y).
"""

from __future__ import annotations

import enum
import functools
import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import NegativeTime
from .gates import GateTarget
from .su3 import (
    HQ,
    IX,
    IY,
    IZ,
    commutator,
    dagger,
    herm_expm,
    hermitian_eig,
    phase_sensitive_distance,
    propagator_from_eig,
)

PI = np.pi
_R2 = np.sqrt(2)

# Closed forms with q = 1, used only to cross-check the conjugation route.
EXPLICIT_L = (
    IX,
    IY,
    IZ,
    np.diag([1, -2, 1]) / 3,
    np.array(
        [[_R2, 6j, -3 * _R2], [-6j, -2 * _R2, -6j], [-3 * _R2, 6j, _R2]]
    ) / (12 * _R2),
    np.array([[_R2, 6, 3 * _R2], [6, -2 * _R2, -6], [3 * _R2, -6, _R2]]) / (12 * _R2),
    np.array([[-1, 0, 3], [0, 2, 0], [3, 0, -1]]) / 6,
    np.array([[-1, 0, -3j], [0, 2, 0], [3j, 0, -1]]) / 6,
)


class EulerConvention(str, enum.Enum):
    XYX = "XYX"
    YXY = "YXY"

    @property
    def axes(self):
        return ("x", "y", "x") if self is EulerConvention.XYX else ("y", "x", "y")


class CartanPair(str, enum.Enum):
    L4_L7 = "L4_L7"
    L4_L8 = "L4_L8"


@dataclass(frozen=True, eq=False)
class GeneratorBasis:
    L: tuple

    def __getitem__(self, m):
        """1-based access, ``basis[7]`` is L7."""
        return self.L[m - 1]


def _conjugate(k, angle, h):
    # exp(-i angle k) h exp(+i angle k)
    u = herm_expm(k, angle)
    return u @ h @ dagger(u)


@functools.lru_cache(maxsize=None)
def generator_basis():
    """Build L1..L8 by conjugating Hq with spin rotations.

    The result is compared entrywise with the closed-form matrices; a
    mismatch above 1e-12 raises AssertionError.
    """
    l5 = _conjugate(IX, PI / 4, HQ)
    l6 = _conjugate(IY, PI / 4, HQ)
    l7 = _conjugate(IY, PI / 2, HQ)
    l8 = _conjugate(IY, -PI / 2, l5)
    mats = []
    for m in (IX, IY, IZ, HQ, l5, l6, l7, l8):
        m = np.array(m, dtype=complex)
        m.flags.writeable = False
        mats.append(m)
    for k, (built, ref) in enumerate(zip(mats, EXPLICIT_L), start=1):
        err = np.max(np.abs(built - ref))
        assert err < 1e-12, "L%d deviates from its closed form by %g" % (k, err)
    return GeneratorBasis(tuple(mats))


@dataclass
class CartanReport:
    k_closed: bool
    p_k_in_p: bool
    p_p_in_k: bool
    max_residual: float
    pair_residuals: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return self.k_closed and self.p_k_in_p and self.p_p_in_k


def _span_residual(c, span):
    # Hilbert-Schmidt projection of c onto the complex span of ``span``
    a = np.stack([np.ravel(s) for s in span], axis=1)
    q, _ = np.linalg.qr(a)
    v = np.ravel(c)
    return float(np.linalg.norm(v - q @ (dagger(q) @ v)))


def check_cartan_structure(basis=None, tol=1e-10):
    """Verify [k,k] in k, [p,k] in p and [p,p] in k over all 28 basis pairs."""
    basis = basis or generator_basis()
    k_idx, p_idx = (1, 2, 3), (4, 5, 6, 7, 8)
    k_span = [basis[m] for m in k_idx]
    p_span = [basis[m] for m in p_idx]
    checks = {"k_closed": True, "p_k_in_p": True, "p_p_in_k": True}
    residuals, failures = {}, []
    for a, b in itertools.combinations(range(1, 9), 2):
        c = commutator(basis[a], basis[b])
        if a in k_idx and b in k_idx:
            key, span = "k_closed", k_span
        elif a in p_idx and b in p_idx:
            key, span = "p_p_in_k", k_span
        else:
            key, span = "p_k_in_p", p_span
        r = _span_residual(c, span)
        residuals[(a, b)] = r
        if r >= tol:
            checks[key] = False
            failures.append("[L%d, L%d] (%s): residual %.3g" % (a, b, key, r))
    return CartanReport(
        max_residual=max(residuals.values()),
        pair_residuals=residuals,
        failures=failures,
        **checks,
    )


@dataclass(frozen=True)
class SequenceParams:
    """Angles (rad) and free-evolution times (1/q) of the eight-factor sequence."""

    alpha1: float = 0.0
    beta1: float = 0.0
    gamma1: float = 0.0
    alpha2: float = 0.0
    beta2: float = 0.0
    gamma2: float = 0.0
    t1: float = 0.0
    t2: float = 0.0
    euler_convention: EulerConvention = EulerConvention.XYX
    cartan_pair: CartanPair = CartanPair.L4_L7

    def __post_init__(self):
        object.__setattr__(self, "euler_convention", EulerConvention(self.euler_convention))
        object.__setattr__(self, "cartan_pair", CartanPair(self.cartan_pair))
        for name in ("alpha1", "beta1", "gamma1", "alpha2", "beta2", "gamma2", "t1", "t2"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.t1 < 0 or self.t2 < 0:
            raise NegativeTime("t1=%r, t2=%r" % (self.t1, self.t2))

    @property
    def angles(self):
        return (self.alpha1, self.beta1, self.gamma1, self.alpha2, self.beta2, self.gamma2)

    @property
    def total_time(self):
        return self.t1 + self.t2

    @classmethod
    def from_vector(cls, angles, t1, t2, convention=EulerConvention.XYX,
                    cartan_pair=CartanPair.L4_L7):
        return cls(*[float(a) for a in angles], t1, t2, convention, cartan_pair)

    def to_dict(self):
        d = {n: getattr(self, n) for n in
             ("alpha1", "beta1", "gamma1", "alpha2", "beta2", "gamma2", "t1", "t2")}
        d["euler_convention"] = self.euler_convention.value
        d["cartan_pair"] = self.cartan_pair.value
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


class _Generator:
    """A fixed Hermitian generator with its spectrum cached."""

    def __init__(self, h):
        self.h = np.asarray(h)
        self.w, self.v = hermitian_eig(h)

    def __call__(self, t):
        return propagator_from_eig(self.w, self.v, t)


@functools.lru_cache(maxsize=None)
def _generators():
    basis = generator_basis()
    return {
        "x": _Generator(IX),
        "y": _Generator(IY),
        "z": _Generator(IZ),
        "L4": _Generator(basis[4]),
        "L7": _Generator(basis[7]),
        "L8": _Generator(basis[8]),
    }


def rotation(axis, angle):
    """exp(-i angle I_axis) for axis in {"x", "y", "z"}."""
    return _generators()[axis](angle)


def euler_rotation(alpha, beta, gamma, convention=EulerConvention.XYX):
    a, b, c = EulerConvention(convention).axes
    return rotation(a, alpha) @ rotation(b, beta) @ rotation(c, gamma)


def sequence_factors(p):
    """The eight (generator_key, parameter) pairs of ``p`` in operator order."""
    a, b, c = p.euler_convention.axes
    second = "L7" if p.cartan_pair is CartanPair.L4_L7 else "L8"
    return [
        (a, p.alpha1), (b, p.beta1), (c, p.gamma1),
        ("L4", p.t1), (second, p.t2),
        (a, p.alpha2), (b, p.beta2), (c, p.gamma2),
    ]


def sequence_unitary(p):
    if p.t1 < 0 or p.t2 < 0:
        raise NegativeTime("t1=%r, t2=%r" % (p.t1, p.t2))
    gens = _generators()
    u = np.eye(3, dtype=complex)
    for key, x in sequence_factors(p):
        u = u @ gens[key](x)
    return u


def target_operator(gate, phi):
    """exp(i phi) times the gate's unitary."""
    u = gate.unitary if isinstance(gate, GateTarget) else np.asarray(gate, dtype=complex)
    return np.exp(1j * phi) * u


def residual(p, gate, phi):
    """Frobenius distance between exp(i phi) U_gate and the sequence unitary."""
    return phase_sensitive_distance(target_operator(gate, phi), sequence_unitary(p))
