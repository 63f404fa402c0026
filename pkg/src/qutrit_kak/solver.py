"""
Numerical minimum-time search over the eight-factor sequence.

For fixed free-evolution times (t1, t2) the six Euler angles are fitted by
multi-start trust-region least squares on the phase-sensitive residual. The outer
search over (t1, t2) uses a double-coset invariant: with the involution
theta(U) = J conj(U) J^dagger, J = exp(-i pi Iy), the spin rotations are
fixed points and

    M(W) = W J W^T J^dagger  ~  A^2 ,   W = Q1 A Q2,

so Tr M(W) depends only on the Cartan factor A = exp(-i(t1 L4 + t2 L7)).
The invariant is scanned on a (t1, t2) grid, its zeros are polished, and
candidates are confirmed in increasing t1 + t2 by an actual angle fit.
"""

from __future__ import annotations

import functools
import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import minimum_filter
from scipy.optimize import least_squares

from .cartan import (
    CartanPair,
    EulerConvention,
    SequenceParams,
    _generators,
    rotation,
    sequence_factors,
    sequence_unitary,
    target_operator,
)
from .errors import NoFeasiblePointFound, NotUnitary
from .gates import GateTarget, global_phases
from .su3 import dagger, is_unitary, phase_sensitive_distance

log = logging.getLogger(__name__)

PI = math.pi


@dataclass(frozen=True)
class SolverConfig:
    """Search settings.

    residual_tol: Frobenius residual below which a point counts as feasible.
    n_restarts: angle-fit starts per (t1, t2, convention, pair).
    t_grid_step: spacing of the coarse (t1, t2) scan over [0, t_max]^2.
    refine_tol: polished candidates closer than this in (t1, t2) are merged,
        and a polished point is kept only if its invariant mismatch is below it.
    """

    residual_tol: float = 1e-8
    n_restarts: int = 12
    rng_seed: int = 0
    t_grid_step: float = PI / 60
    refine_tol: float = 1e-4
    t_max: float = 2 * PI

    def __post_init__(self):
        if not self.residual_tol > 0:
            raise ValueError("residual_tol must be positive")
        if self.n_restarts < 1:
            raise ValueError("n_restarts must be >= 1")
        if not self.t_grid_step > 0:
            raise ValueError("t_grid_step must be positive")


@dataclass
class AngleFit:
    angles: tuple
    residual: float
    restarts_used: int


@dataclass
class SolveResult:
    """Best sequence found. ``total_time`` is a numerical T_min, not a proof of optimality."""

    params: SequenceParams
    residual_value: float
    total_time: float
    feasible: bool
    restarts_used: int
    phi: float = 0.0
    candidates: list = field(default_factory=list)

    def to_dict(self):
        return {
            "params": self.params.to_dict(),
            "residual": self.residual_value,
            "total_time": self.total_time,
            "label": "numerical T_min",
            "feasible": self.feasible,
            "restarts_used": self.restarts_used,
            "phi": self.phi,
        }


def _residual_vector(target, factors):
    u = functools.reduce(np.matmul, factors)
    d = u - target
    return np.concatenate([d.real.ravel(), d.imag.ravel()])


class _SequenceModel:
    """Residual and exact Jacobian of the sequence w.r.t. the six angles."""

    def __init__(self, target, t1, t2, convention, pair):
        self.target = target
        self.template = SequenceParams(t1=t1, t2=t2, euler_convention=convention,
                                       cartan_pair=pair)
        gens = _generators()
        self.keys = [k for k, _ in sequence_factors(self.template)]
        self.gens = [gens[k] for k in self.keys]
        self.fixed = {3: gens[self.keys[3]](t1), 4: gens[self.keys[4]](t2)}
        self.angle_slots = (0, 1, 2, 5, 6, 7)

    def factors(self, x):
        f = [None] * 8
        for slot, a in zip(self.angle_slots, x):
            f[slot] = self.gens[slot](a)
        f[3], f[4] = self.fixed[3], self.fixed[4]
        return f

    def fun(self, x):
        return _residual_vector(self.target, self.factors(x))

    def jac(self, x):
        f = self.factors(x)
        left = [np.eye(3, dtype=complex)]
        for m in f:
            left.append(left[-1] @ m)
        right = [np.eye(3, dtype=complex)]
        for m in reversed(f):
            right.append(m @ right[-1])
        right = right[::-1]
        cols = []
        for slot in self.angle_slots:
            d = left[slot + 1] @ (-1j * self.gens[slot].h) @ right[slot + 1]
            cols.append(np.concatenate([d.real.ravel(), d.imag.ravel()]))
        return np.stack(cols, axis=1)


def _wrap(x):
    return (np.asarray(x) + PI) % (2 * PI) - PI


def solve_at_fixed_times(gate, phi, t1, t2, convention=EulerConvention.XYX,
                         cartan_pair=CartanPair.L4_L7, config=SolverConfig()):
    """Best angle fit of exp(i phi) gate with the free-evolution times frozen.

    Restart 0 starts from all-zero angles, the rest from uniform draws in
    [-pi, pi)^6 seeded by ``config.rng_seed``. Stops early once a fit is
    far below ``residual_tol``.
    """
    target = target_operator(gate, phi)
    model = _SequenceModel(target, t1, t2, EulerConvention(convention), CartanPair(cartan_pair))
    rng = np.random.default_rng(config.rng_seed)
    starts = [np.zeros(6)] + [rng.uniform(-PI, PI, 6) for _ in range(config.n_restarts - 1)]
    best = None
    for k, x0 in enumerate(starts, start=1):
        # trf rather than lm: MINPACK's result drifts in the last bits between
        # identical calls, which breaks run-to-run reproducibility
        sol = least_squares(model.fun, x0, jac=model.jac, method="trf",
                            xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
        x = _wrap(sol.x)
        r = phase_sensitive_distance(target, functools.reduce(np.matmul, model.factors(x)))
        if best is None or r < best.residual:
            best = AngleFit(tuple(float(a) for a in x), r, k)
        if best.residual < 1e-3 * config.residual_tol:
            break
    best.restarts_used = k
    return best


# joint eigenvalues of (L4, L7) on their common eigenbasis
_L4_EIGS = np.array([1, 1, -2]) / 3
_L7_EIGS = np.array([1, -2, 1]) / 3


def coset_invariant(w):
    """Tr(W J W^T J^dagger), constant on K W K for K generated by Ix, Iy."""
    j = rotation("y", PI)
    return complex(np.trace(w @ j @ w.T @ dagger(j)))


def cartan_invariant(t1, t2):
    """Tr A^2 for A = exp(-i(t1 L4 + t2 L7)); broadcasts over arrays."""
    t1 = np.asarray(t1, dtype=float)[..., None]
    t2 = np.asarray(t2, dtype=float)[..., None]
    return np.exp(-2j * (t1 * _L4_EIGS + t2 * _L7_EIGS)).sum(axis=-1)


def _polish_times(target_inv, t1, t2, upper):
    def f(t):
        d = cartan_invariant(t[0], t[1]) - target_inv
        return np.array([d.real, d.imag])

    sol = least_squares(f, [t1, t2], bounds=([0, 0], [upper, upper]),
                        xtol=1e-15, ftol=1e-15, gtol=1e-15, method="trf")
    return sol.x, float(np.hypot(*sol.fun))


def candidate_times(w, config=SolverConfig()):
    """(t1, t2) points where the invariant of ``w`` is matched, sorted by t1 + t2."""
    grid = np.arange(0.0, config.t_max + 0.5 * config.t_grid_step, config.t_grid_step)
    t1g, t2g = np.meshgrid(grid, grid, indexing="ij")
    target_inv = coset_invariant(w)
    mismatch = np.abs(cartan_invariant(t1g, t2g) - target_inv)
    # |d Tr A^2 / dt| <= 8/3 per unit time, so a root lies within this of a grid value
    coarse = 3.0 * config.t_grid_step
    is_min = (mismatch == minimum_filter(mismatch, size=3, mode="nearest")) & (mismatch < coarse)
    found = []
    for i, j in zip(*np.nonzero(is_min)):
        t, err = _polish_times(target_inv, grid[i], grid[j], config.t_max + config.t_grid_step)
        if err > config.refine_tol:
            continue
        if any(np.hypot(*(t - s)) < config.refine_tol for s in found):
            continue
        found.append(t)
    found.sort(key=lambda t: (round(t[0] + t[1], 12), t[0]))
    return [(float(a), float(b)) for a, b in found]


def _joint_polish(target, params):
    """Refine angles and times together, keeping the times non-negative."""
    conv, pair = params.euler_convention, params.cartan_pair

    def fun(x):
        p = SequenceParams.from_vector(x[:6], max(x[6], 0.0), max(x[7], 0.0), conv, pair)
        d = sequence_unitary(p) - target
        return np.concatenate([d.real.ravel(), d.imag.ravel()])

    x0 = np.array(list(params.angles) + [params.t1, params.t2])
    lo = np.r_[np.full(6, -np.inf), 0.0, 0.0]
    sol = least_squares(fun, x0, bounds=(lo, np.full(8, np.inf)), method="trf",
                        xtol=1e-15, ftol=1e-15, gtol=1e-15)
    x = sol.x
    return SequenceParams.from_vector(_wrap(x[:6]), max(x[6], 0.0), max(x[7], 0.0), conv, pair)


def _as_unitary(gate):
    u = gate.unitary if isinstance(gate, GateTarget) else np.asarray(gate, dtype=complex)
    if not is_unitary(u, 1e-8):
        raise NotUnitary("target is not unitary")
    return u


_COMBOS = tuple(itertools.product(EulerConvention, CartanPair))


def find_tmin(gate, phi, config=SolverConfig()):
    """Smallest t1 + t2 at which exp(i phi) gate is reproduced within residual_tol.

    Both Euler conventions and both Cartan pairs are tried at each candidate.
    """
    u = _as_unitary(gate)
    target = np.exp(1j * phi) * u
    if abs(np.linalg.det(target) - 1) > 1e-8:
        raise NoFeasiblePointFound(
            "det(exp(i phi) U) = %s != 1; phi is not an admissible global phase"
            % np.round(np.linalg.det(target), 6))
    cands = candidate_times(target, config)
    tried = []
    used = 0
    for t1, t2 in cands:
        for conv, pair in _COMBOS:
            fit = solve_at_fixed_times(u, phi, t1, t2, conv, pair, config)
            used += fit.restarts_used
            params = SequenceParams.from_vector(fit.angles, t1, t2, conv, pair)
            r = fit.residual
            if config.residual_tol <= r < 1e-3:
                params = _joint_polish(target, params)
                r = phase_sensitive_distance(target, sequence_unitary(params))
            tried.append((params.total_time, r))
            log.debug("t1=%.6f t2=%.6f %s/%s residual=%.3g", t1, t2, conv.value, pair.value, r)
            if r < config.residual_tol:
                return SolveResult(params, r, params.total_time, True, used, phi, tried)
    raise NoFeasiblePointFound(
        "no feasible (t1, t2) among %d candidates on [0, %.4g]^2 with step %.4g"
        % (len(cands), config.t_max, config.t_grid_step))


def solve_all_phases(gate, config=SolverConfig()):
    """find_tmin for each admissible global phase; infeasible phases map to None."""
    out = {}
    for phi in global_phases(gate).phases:
        try:
            out[phi] = find_tmin(gate, phi, config)
        except NoFeasiblePointFound:
            out[phi] = None
    return out


def min_over_phases(gate, config=SolverConfig(), tie_tol=1e-9):
    """Phase with the smallest numerical T_min, and its SolveResult.

    Ties within ``tie_tol`` go to the phase listed first by global_phases.
    """
    results = solve_all_phases(gate, config)
    best = None
    for phi, res in results.items():
        if res is None:
            continue
        if best is None or res.total_time < best[1].total_time - tie_tol:
            best = (phi, res)
    if best is None:
        raise NoFeasiblePointFound("no admissible global phase is reachable")
    return best
