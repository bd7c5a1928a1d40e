"""Diagonal rotating frame that makes the driven RTA Hamiltonian static.

The frame is U(t) = diag(exp(i(phi_i t + theta_i))).  Transforming the RTA
Hamiltonian with it removes all time dependence exactly when the frame rates
match the harmonic frequencies and the frame phases match the harmonic
phases through the relations

    phi3 - phi1 = Omega_1,   theta3 - theta1 = Phi_1,
    phi4 - phi3 = Omega_2,   theta4 - theta3 = Phi_2,
    phi2 - phi1 = Omega_3,   theta2 - theta1 = Phi_3,
    phi4 - phi2 = Omega_4,   theta4 - theta2 = Phi_4.

The rate relations are always mutually consistent (Omega_1 + Omega_2 =
Omega_3 + Omega_4 identically), but the phase relations overdetermine
theta4; a solution exists iff Phi_1 + Phi_2 = Phi_3 + Phi_4, which
:func:`solve_frame` enforces as a hard precondition.  With the gauge
phi1 = eps1 the static matrix has zero diagonal and couplings -h_k/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angles import principal
from .errors import ComplexRadical, InconsistentPhases, NotStatic
from .model import PulseSpec, SpinSystem, Spectrum, rta_couplings, spectrum
from .model import _rta_batch

#: Tolerance for the phase-closure precondition on ingested data (rad).
PHASE_CLOSURE_TOL = 1e-9

#: Involutory eigenvector matrix of the symmetric static Hamiltonian.
COEFF_MATRIX = 0.5 * np.array(
    [[1, 1, 1, 1], [1, -1, -1, 1], [1, -1, 1, -1], [1, 1, -1, -1]], dtype=float
)


@dataclass(frozen=True)
class FrameParams:
    """Rotating-frame rates phi_1..phi_4 and phases theta_1..theta_4."""

    phi: tuple[float, float, float, float]
    theta: tuple[float, float, float, float]

    @property
    def phi_array(self) -> np.ndarray:
        return np.asarray(self.phi)

    @property
    def theta_array(self) -> np.ndarray:
        return np.asarray(self.theta)


@dataclass(frozen=True)
class RotEigensystem:
    """Eigenvalues and real eigenvector matrix of the static Hamiltonian.

    Row j of ``vectors`` holds the eigenvector belonging to ``energies[j]``
    in the computational basis; the matrix is symmetric, orthogonal and its
    own inverse, so rows and columns are interchangeable.
    """

    energies: tuple[float, float, float, float]
    vectors: np.ndarray

    @property
    def energy_array(self) -> np.ndarray:
        return np.asarray(self.energies)


def solve_frame(spec: Spectrum, pulse_phases, theta1: float = 0.0) -> FrameParams:
    """Solve the frame relations for the given pulse phases.

    Parameters
    ----------
    spec : Spectrum
        Transition frequencies Omega_1..Omega_4 of the system.
    pulse_phases : sequence of 4 floats
        Harmonic phases Phi_1..Phi_4 (rad).
    theta1 : float
        Free gauge phase of the first frame component.

    Returns
    -------
    FrameParams
        With phi1 = eps1 and the remaining entries fixed by the relations.

    Raises
    ------
    InconsistentPhases
        If Phi_1 + Phi_2 differs from Phi_3 + Phi_4 by more than 1e-9 rad.
    """
    Phi = np.asarray(pulse_phases, dtype=float)
    if Phi.shape != (4,):
        raise ValueError("four pulse phases are required")
    closure = (Phi[0] + Phi[1]) - (Phi[2] + Phi[3])
    if abs(principal(closure)) > PHASE_CLOSURE_TOL:
        raise InconsistentPhases(
            f"Phi1 + Phi2 - Phi3 - Phi4 = {closure:.3e} rad; no diagonal frame "
            "removes the time dependence"
        )
    om = spec.omega_res
    phi1 = spec.eps[0]
    phi = (phi1, phi1 + om[2], phi1 + om[0], phi1 + om[0] + om[1])
    theta = (theta1, theta1 + Phi[2], theta1 + Phi[0], theta1 + Phi[0] + Phi[1])
    _check_relations(spec, Phi, phi, theta)
    return FrameParams(phi=phi, theta=theta)


def _check_relations(spec: Spectrum, Phi: np.ndarray, phi, theta) -> None:
    """Verify all eight frame relations; residuals scale with the frequencies."""
    om = spec.omega_res
    res = [
        phi[2] - phi[0] - om[0],
        phi[3] - phi[2] - om[1],
        phi[1] - phi[0] - om[2],
        phi[3] - phi[1] - om[3],
        theta[2] - theta[0] - Phi[0],
        theta[3] - theta[2] - Phi[1],
        theta[1] - theta[0] - Phi[2],
        principal(theta[3] - theta[1] - Phi[3]),
    ]
    scale = max(1.0, max(abs(o) for o in om), max(abs(p) for p in Phi))
    worst = max(abs(r) for r in res)
    if worst > 1e-12 * scale:
        raise InconsistentPhases(f"frame relation residual {worst:.3e} exceeds tolerance")


def static_hamiltonian(couplings) -> np.ndarray:
    """The frame-static matrix: zero diagonal, couplings -h_k/2.

    Pattern (1-indexed): (1,2) = -h3/2, (1,3) = -h1/2, (2,4) = -h4/2,
    (3,4) = -h2/2, real symmetric.
    """
    h1, h2, h3, h4 = np.asarray(couplings, dtype=float)
    M = np.zeros((4, 4))
    M[0, 1] = M[1, 0] = -h3 / 2.0
    M[0, 2] = M[2, 0] = -h1 / 2.0
    M[1, 3] = M[3, 1] = -h4 / 2.0
    M[2, 3] = M[3, 2] = -h2 / 2.0
    return M


def rotate(sys: SpinSystem, pulse: PulseSpec, frame: FrameParams) -> np.ndarray:
    """Transform the RTA Hamiltonian into the frame and verify it is static.

    Computes U(t) H(t) U(t)^dag - diag(phi) at three incommensurate times in
    the pulse window and requires the samples to agree.  Returns the static
    matrix, which for a frame from :func:`solve_frame` has zero diagonal and
    the -h_k/2 coupling pattern.

    Raises
    ------
    NotStatic
        If the samples differ beyond 1e-12 relative to the matrix scale;
        this signals a frame/pulse mismatch (for example a detuned harmonic).
    """
    if pulse.tau > 0.0:
        ts = np.array([0.11, 0.37, 0.83]) * pulse.tau
    else:
        ts = np.zeros(3)
    Hs = _rta_batch(sys, pulse, ts)
    phi = frame.phi_array
    theta = frame.theta_array
    u = np.exp(1j * (phi[None, :] * ts[:, None] + theta[None, :]))
    rotated = u[:, :, None] * Hs * np.conj(u)[:, None, :]
    rotated[:, range(4), range(4)] -= phi
    h = rta_couplings(sys, pulse)
    scale = max(1.0, float(np.abs(Hs).max()), float(np.abs(h).max()))
    drift = np.abs(rotated - rotated[0]).max()
    if drift > 1e-12 * scale:
        raise NotStatic(
            f"rotated Hamiltonian drifts by {drift:.3e} across the window "
            f"(tolerance {1e-12 * scale:.3e}); frame and pulse are mismatched"
        )
    # Strip the residual imaginary dust so callers get the real static form.
    R = rotated[0]
    imag = np.abs(R.imag).max()
    if imag > 1e-12 * scale:
        raise NotStatic(f"rotated Hamiltonian retains imaginary parts of size {imag:.3e}")
    return R.real.copy()


def eigensystem_general(h1: float, h2: float, h3: float, h4: float) -> np.ndarray:
    """Closed-form eigenvalues of the static Hamiltonian for four couplings.

    Uses the radical form with A = sum h_i^2, B = sum h_i^4 and the quartic
    cross term C; B + C equals A^2 - 4 (h2 h3 - h1 h4)^2 and is therefore
    nonnegative for real couplings.  Returned in the pairing
    E1 <= E3 <= E4 <= E2 (outer pair from the + radical, inner from the -).
    """
    h = np.array([h1, h2, h3, h4], dtype=float)
    if (h < 0.0).any():
        raise ValueError("couplings must be nonnegative")
    A = float((h**2).sum())
    B = float((h**4).sum())
    C = float(
        8.0 * h[0] * h[1] * h[2] * h[3]
        + 2.0 * h[0] ** 2 * h[1] ** 2
        + 2.0 * h[0] ** 2 * h[2] ** 2
        - 2.0 * h[0] ** 2 * h[3] ** 2
        - 2.0 * h[1] ** 2 * h[2] ** 2
        + 2.0 * h[1] ** 2 * h[3] ** 2
        + 2.0 * h[2] ** 2 * h[3] ** 2
    )
    disc = B + C
    if disc < -1e-12 * max(1.0, A * A):
        raise ComplexRadical(f"eigenvalue radical B + C = {disc:.3e} is negative")
    root = np.sqrt(max(disc, 0.0))
    outer = np.sqrt(2.0) / 4.0 * np.sqrt(A + root)
    inner = np.sqrt(2.0) / 4.0 * np.sqrt(max(A - root, 0.0))
    return np.array([-outer, outer, -inner, inner])


def eigensystem_symmetric(h1: float, h2: float) -> RotEigensystem:
    """Eigensystem under the symmetric coupling convention h1 = h4, h2 = h3.

    Energies come out in the vector-bound pairing

        E1 = -(h1+h2)/2,  E2 = +(h1+h2)/2,
        E3 = -(h1-h2)/2,  E4 = +(h1-h2)/2,

    which keeps each energy attached to its row of the coefficient matrix;
    for h2 > h1 this pairing is intentionally not sorted (E3 > E4).
    """
    energies = (-(h1 + h2) / 2.0, (h1 + h2) / 2.0, -(h1 - h2) / 2.0, (h1 - h2) / 2.0)
    return RotEigensystem(energies=energies, vectors=COEFF_MATRIX.copy())


def frame_for_pulse(sys: SpinSystem, pulse: PulseSpec, theta1: float = 0.0) -> FrameParams:
    """Convenience: solve the frame directly from a pulse's phases."""
    return solve_frame(spectrum(sys), pulse.phis, theta1=theta1)
