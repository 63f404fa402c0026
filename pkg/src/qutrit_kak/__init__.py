"""Time-optimal hard-pulse control of a spin-1 quadrupole qutrit."""

from .analytic import lookup_solution, small_angle_tmin, tmin_curve
from .cartan import (
    CartanPair,
    EulerConvention,
    SequenceParams,
    check_cartan_structure,
    euler_rotation,
    generator_basis,
    residual,
    sequence_unitary,
)
from .gates import GateName, GateTarget, global_phases, make_gate
from .pulse import compile_program, error_vs_amplitude, simulate_finite, simulate_ideal
from .solver import SolverConfig, SolveResult, find_tmin, min_over_phases, solve_at_fixed_times
from .su3 import gate_fidelity, herm_expm, phase_sensitive_distance, spin1_operators

__version__ = "0.1.0"
