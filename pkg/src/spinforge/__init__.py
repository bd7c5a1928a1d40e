"""Simulator and pulse designer for two-qubit NMR geometric phase gates.

The package models two Ising-coupled nuclear spins driven by a single
rectangular four-harmonic pulse, propagates the dynamics three independent
ways (closed form, oscillatory RTA integration, full-Hamiltonian
integration), splits acquired phases into dynamical and geometric parts, and
inverts the construction to synthesize pulses for arbitrary diagonal
geometric gates.  See the README for the CLI and HTTP service front ends.
"""

from .designer import (
    DesignResult,
    FeasibilityReport,
    GateTarget,
    design,
    design_aa,
    design_cpg,
    feasibility_report,
)
from .evolve import (
    Drive,
    GateResult,
    Trajectory,
    coeff_matrix,
    coeffs_analytic,
    drive_exact,
    drive_rta,
    fidelity,
    gate_tomography,
    initial_lab_state,
    propagate_numeric,
    propagate_rta_analytic,
    propagate_unitary,
    trajectory_analytic,
)
from .frame import (
    FrameParams,
    RotEigensystem,
    eigensystem_general,
    eigensystem_symmetric,
    frame_for_pulse,
    rotate,
    solve_frame,
    static_hamiltonian,
)
from .model import (
    Harmonic,
    PulseSpec,
    SpinSystem,
    Spectrum,
    hamiltonian_exact,
    hamiltonian_rta,
    pulse_for_couplings,
    rta_couplings,
    spectrum,
)
from .phase import PhaseReport, decompose, dynamical_phase, total_phase

__version__ = "0.1.0"

__all__ = [
    "DesignResult",
    "Drive",
    "FeasibilityReport",
    "FrameParams",
    "GateResult",
    "GateTarget",
    "Harmonic",
    "PhaseReport",
    "PulseSpec",
    "RotEigensystem",
    "SpinSystem",
    "Spectrum",
    "Trajectory",
    "coeff_matrix",
    "coeffs_analytic",
    "decompose",
    "design",
    "design_aa",
    "design_cpg",
    "drive_exact",
    "drive_rta",
    "dynamical_phase",
    "eigensystem_general",
    "eigensystem_symmetric",
    "feasibility_report",
    "fidelity",
    "frame_for_pulse",
    "gate_tomography",
    "hamiltonian_exact",
    "hamiltonian_rta",
    "initial_lab_state",
    "propagate_numeric",
    "propagate_rta_analytic",
    "propagate_unitary",
    "pulse_for_couplings",
    "rotate",
    "rta_couplings",
    "solve_frame",
    "spectrum",
    "static_hamiltonian",
    "total_phase",
    "trajectory_analytic",
]
