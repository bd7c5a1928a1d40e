"""Exception types shared across the toolkit.

Every domain failure derives from :class:`SpinforgeError` and carries a short
machine-readable ``code`` used by the CLI (exit-code mapping) and the HTTP
service (error bodies).
"""

from __future__ import annotations


class SpinforgeError(Exception):
    """Base class for all toolkit failures."""

    code = "error"


class DegenerateSpectrum(SpinforgeError):
    """Two transition frequencies coincide within the guard band.

    Frequency-selective addressing of the four transitions is impossible for
    this system, so the resonant-transition treatment does not apply.
    """

    code = "degenerate_spectrum"


class InconsistentPhases(SpinforgeError):
    """Pulse phases violate Phi1 + Phi2 = Phi3 + Phi4.

    No diagonal frame transformation removes the time dependence of the
    driven Hamiltonian when the phase closure fails.
    """

    code = "inconsistent_phases"


class NotStatic(SpinforgeError):
    """The rotated Hamiltonian retains time dependence (frame/pulse mismatch)."""

    code = "not_static"


class ComplexRadical(SpinforgeError):
    """The closed-form eigenvalue radical went negative beyond rounding."""

    code = "complex_radical"


class NoConvergence(SpinforgeError):
    """Step-halving certificate failed at the smallest allowed step."""

    code = "no_convergence"


class NotCyclic(SpinforgeError):
    """The evolution did not return to the initial ray."""

    code = "not_cyclic"


class GridTooCoarse(SpinforgeError):
    """Quadrature grid-refinement certificate failed."""

    code = "grid_too_coarse"


class ConditionUnmet(SpinforgeError):
    """Pulse duration does not satisfy the cyclicity condition."""

    code = "condition_unmet"


class Infeasible(SpinforgeError):
    """A designed pulse fails a physical-validity guard.

    The exception carries the completed design so callers can still inspect
    or emit the algebraic result together with the violated margins.
    """

    code = "infeasible"

    def __init__(self, message: str, result=None, violations=()):
        super().__init__(message)
        self.result = result
        self.violations = list(violations)
