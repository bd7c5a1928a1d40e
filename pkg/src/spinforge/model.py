"""Physical model of two driven, Ising-coupled nuclear spins.

Conventions used everywhere in this package:

* Basis order is ``|00>, |01>, |10>, |11>`` where ``0`` is spin-up along z.
* Every frequency-like quantity is an angular frequency with hbar = 1, so
  energies, couplings and Rabi amplitudes all share rad/time units and a
  user-supplied "MHz" number is ingested verbatim as rad/s.  Whether a 2*pi
  belongs on an ingested scalar coupling is a unit convention the caller
  owns; the toolkit stores what it is given.
* The drive is a single rectangular transverse pulse containing four
  harmonics, on for ``t in [0, tau]`` and identically zero outside.

The static part is an Ising Hamiltonian

    H_z = -(omega1*sz1 + omega2*sz2 + J*sz1*sz2) / 2,

diagonal in the computational basis with energies ``eps_1..eps_4``.  The
isotropic transverse exchange term H_xy (same J, sx1*sx2 + sy1*sy2 form)
couples ``|01> <-> |10>`` and is a flag-controlled correction of relative
order eta^2 with eta = J/(omega1 - omega2).

Each harmonic k has angular frequency Omega_k, phase Phi_k and field
amplitude htilde_k; spin i couples to it with strength gamma_i * htilde_k.
Assigning the four harmonic frequencies to the four single-flip transition
frequencies makes exactly one drive term per transition resonant; keeping
only those four terms is the resonant transition approximation (RTA) matrix
built by :func:`hamiltonian_rta`, while :func:`hamiltonian_exact` keeps all
eight drive terms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrum

#: Basis labels in matrix order.
BASIS_LABELS = ("00", "01", "10", "11")

# Index pairs (row, col) with row the spin-up partner of the flipped spin.
_SPIN1_PAIRS = ((0, 2), (1, 3))  # |00>-|10>, |01>-|11>
_SPIN2_PAIRS = ((0, 1), (2, 3))  # |00>-|01>, |10>-|11>

# RTA placement: (row, col, harmonic index) per transition.
_RTA_PLACEMENT = ((0, 2, 0), (2, 3, 1), (0, 1, 2), (1, 3, 3))


@dataclass(frozen=True)
class SpinSystem:
    """Static parameters of the two-spin system (angular units).

    Attributes
    ----------
    omega1, omega2 : float
        Larmor frequencies, required ``omega1 > omega2 > 0``.
    J : float
        Ising coupling, ``0 <= J < omega2`` so the level ordering holds.
        J = 0 is constructible but every spectrum-dependent operation
        rejects it: the conditional splitting collapses and the four
        transitions stop being addressable.
    gamma1, gamma2 : float
        Gyromagnetic ratios (rad/time per field unit), both positive.
    """

    omega1: float
    omega2: float
    J: float
    gamma1: float
    gamma2: float

    def __post_init__(self) -> None:
        if not (self.omega1 > self.omega2 > 0.0):
            raise ValueError(
                f"need omega1 > omega2 > 0, got omega1={self.omega1}, omega2={self.omega2}"
            )
        if self.J < 0.0:
            raise ValueError(f"need J >= 0, got J={self.J}")
        if not self.J < self.omega2:
            raise ValueError(
                f"need J < omega2 for a valid level ordering, got J={self.J}, omega2={self.omega2}"
            )
        if not (self.gamma1 > 0.0 and self.gamma2 > 0.0):
            raise ValueError("gyromagnetic ratios must be positive")

    @property
    def eta(self) -> float:
        """Small parameter J/(omega1 - omega2) controlling the Ising truncation."""
        return self.J / (self.omega1 - self.omega2)


@dataclass(frozen=True)
class Spectrum:
    """Energies and single-flip transition frequencies of the Ising part.

    ``eps`` holds the four level energies in basis order; ``omega_res`` the
    transition frequencies (Omega_1..Omega_4) assigned to the pulse
    harmonics:

        Omega_1 = eps3 - eps1 = omega1 + J   (|00> <-> |10>)
        Omega_2 = eps4 - eps3 = omega2 - J   (|10> <-> |11>)
        Omega_3 = eps2 - eps1 = omega2 + J   (|00> <-> |01>)
        Omega_4 = eps4 - eps2 = omega1 - J   (|01> <-> |11>)
    """

    eps: tuple[float, float, float, float]
    omega_res: tuple[float, float, float, float]

    @property
    def eps_array(self) -> np.ndarray:
        return np.asarray(self.eps)

    @property
    def omega_array(self) -> np.ndarray:
        return np.asarray(self.omega_res)

    @property
    def min_gap(self) -> float:
        """Smallest pairwise separation of the transition frequencies."""
        om = self.omega_array
        diffs = np.abs(om[:, None] - om[None, :])
        return float(diffs[np.triu_indices(4, k=1)].min())

    @property
    def spread(self) -> float:
        """Largest level splitting, eps4 - eps1."""
        return self.eps[3] - self.eps[0]


@dataclass(frozen=True)
class Harmonic:
    """One pulse harmonic: angular frequency, phase and field amplitude."""

    omega: float
    phi: float
    amplitude: float

    def __post_init__(self) -> None:
        if not self.amplitude > 0.0:
            raise ValueError(f"harmonic amplitude must be positive, got {self.amplitude}")


@dataclass(frozen=True)
class PulseSpec:
    """Four-harmonic rectangular pulse on the window [0, tau]."""

    harmonics: tuple[Harmonic, Harmonic, Harmonic, Harmonic]
    tau: float

    def __post_init__(self) -> None:
        if len(self.harmonics) != 4:
            raise ValueError("exactly four harmonics are required")
        if self.tau < 0.0:
            raise ValueError(f"pulse duration must be nonnegative, got {self.tau}")

    @property
    def omegas(self) -> np.ndarray:
        return np.array([h.omega for h in self.harmonics])

    @property
    def phis(self) -> np.ndarray:
        return np.array([h.phi for h in self.harmonics])

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([h.amplitude for h in self.harmonics])


def spectrum(sys: SpinSystem, guard_band: float = 0.0) -> Spectrum:
    """Closed-form energies and transition frequencies of the Ising part.

    Parameters
    ----------
    sys : SpinSystem
    guard_band : float
        Minimum allowed pairwise separation of the transition frequencies
        (rad/time).  The default 0.0 still rejects exact or floating-point
        level coincidence.  The designer passes ``10 * max coupling`` here to
        enforce frequency selectivity.

    Raises
    ------
    DegenerateSpectrum
        If any two transition frequencies are closer than the guard band.
    """
    w1, w2, J = sys.omega1, sys.omega2, sys.J
    eps = (-(w1 + w2 + J) / 2.0, -(w1 - w2 - J) / 2.0, (w1 - w2 + J) / 2.0, (w1 + w2 - J) / 2.0)
    omega_res = (w1 + J, w2 - J, w2 + J, w1 - J)
    if not (eps[0] < eps[1] <= eps[2] < eps[3]):
        raise ValueError(f"level ordering violated: eps={eps}")
    if min(omega_res) <= 0.0:
        raise ValueError(f"transition frequencies must be positive: {omega_res}")
    spec = Spectrum(eps=eps, omega_res=omega_res)
    floor = max(guard_band, 64.0 * np.finfo(float).eps * max(omega_res))
    if spec.min_gap < floor:
        raise DegenerateSpectrum(
            f"transition frequencies separated by {spec.min_gap:.6g} < guard band "
            f"{floor:.6g}; frequency-selective addressing is impossible"
        )
    return spec


def rta_couplings(sys: SpinSystem, pulse: PulseSpec) -> np.ndarray:
    """Effective couplings (h1, h2, h3, h4) of the four resonant drive terms.

    The convention pairs harmonics 1 and 3 with gamma1 and harmonics 2 and 4
    with gamma2:  h1 = gamma1*htilde1, h2 = gamma2*htilde2,
    h3 = gamma1*htilde3, h4 = gamma2*htilde4.
    """
    a = pulse.amplitudes
    return np.array([sys.gamma1 * a[0], sys.gamma2 * a[1], sys.gamma1 * a[2], sys.gamma2 * a[3]])


def pulse_for_couplings(
    sys: SpinSystem,
    couplings,
    phases=(0.0, 0.0, 0.0, 0.0),
    tau: float = 0.0,
) -> PulseSpec:
    """Build a resonance-matched pulse realizing the given effective couplings.

    Inverts :func:`rta_couplings` for the field amplitudes and assigns each
    harmonic its transition frequency from :func:`spectrum`.
    """
    h = np.asarray(couplings, dtype=float)
    if h.shape != (4,):
        raise ValueError("four couplings are required")
    spec = spectrum(sys)
    amp = (h[0] / sys.gamma1, h[1] / sys.gamma2, h[2] / sys.gamma1, h[3] / sys.gamma2)
    harmonics = tuple(
        Harmonic(omega=spec.omega_res[k], phi=float(phases[k]), amplitude=amp[k]) for k in range(4)
    )
    return PulseSpec(harmonics=harmonics, tau=tau)


def _window(pulse: PulseSpec, t) -> np.ndarray:
    """Rectangular window indicator, vectorized over t."""
    t = np.asarray(t, dtype=float)
    return ((t >= 0.0) & (t <= pulse.tau)).astype(float)


def hamiltonian_exact(
    sys: SpinSystem, pulse: PulseSpec, t: float, include_xy: bool = False
) -> np.ndarray:
    """Full lab-frame Hamiltonian at time t with all eight drive terms.

    Returns H_z (+ H_xy when ``include_xy``) plus the pulse, where each spin
    couples to every harmonic with strength gamma_i * htilde_k.  Off-resonant
    and counter-rotating terms discarded by the RTA are all present.  Outside
    the pulse window the drive vanishes exactly.
    """
    return _exact_batch(sys, pulse, np.atleast_1d(float(t)), include_xy)[0]


def hamiltonian_rta(sys: SpinSystem, pulse: PulseSpec, t: float) -> np.ndarray:
    """Resonant-transition-approximation Hamiltonian at time t.

    Diagonal eps_i plus one drive term per transition:
    entries (1,2) = -(h3/2) f3, (1,3) = -(h1/2) f1, (2,4) = -(h4/2) f4,
    (3,4) = -(h2/2) f2 with f_k(t) = exp(i (Omega_k t + Phi_k)) taken from
    the pulse, and zero (1,4), (2,3) corners.  Meaningful when the pulse
    harmonics sit on the four resonances; a mismatch is caught downstream by
    the frame check, not here.
    """
    return _rta_batch(sys, pulse, np.atleast_1d(float(t)))[0]


def _exact_batch(
    sys: SpinSystem, pulse: PulseSpec, ts: np.ndarray, include_xy: bool = False
) -> np.ndarray:
    """Vectorized :func:`hamiltonian_exact` over a 1-d array of times."""
    spec = spectrum(sys)
    n = ts.shape[0]
    H = np.zeros((n, 4, 4), dtype=complex)
    H[:, range(4), range(4)] = spec.eps_array
    if include_xy:
        H[:, 1, 2] += -sys.J
        H[:, 2, 1] += -sys.J
    win = _window(pulse, ts)
    f = np.exp(1j * (pulse.omegas[None, :] * ts[:, None] + pulse.phis[None, :]))
    total = (pulse.amplitudes[None, :] * f).sum(axis=1) * win
    s1 = -0.5 * sys.gamma1 * total
    s2 = -0.5 * sys.gamma2 * total
    for a, b in _SPIN1_PAIRS:
        H[:, a, b] += s1
        H[:, b, a] += np.conj(s1)
    for a, b in _SPIN2_PAIRS:
        H[:, a, b] += s2
        H[:, b, a] += np.conj(s2)
    return H


def _rta_batch(sys: SpinSystem, pulse: PulseSpec, ts: np.ndarray) -> np.ndarray:
    """Vectorized :func:`hamiltonian_rta` over a 1-d array of times."""
    spec = spectrum(sys)
    h = rta_couplings(sys, pulse)
    n = ts.shape[0]
    H = np.zeros((n, 4, 4), dtype=complex)
    H[:, range(4), range(4)] = spec.eps_array
    win = _window(pulse, ts)
    f = np.exp(1j * (pulse.omegas[None, :] * ts[:, None] + pulse.phis[None, :])) * win[:, None]
    for a, b, k in _RTA_PLACEMENT:
        H[:, a, b] = -0.5 * h[k] * f[:, k]
        H[:, b, a] = np.conj(H[:, a, b])
    return H


def resonance_assignment_ok(sys: SpinSystem, pulse: PulseSpec, rtol: float = 1e-9) -> bool:
    """True when each harmonic frequency matches its assigned transition."""
    spec = spectrum(sys)
    return bool(
        np.allclose(pulse.omegas, spec.omega_array, rtol=rtol, atol=rtol * max(spec.omega_res))
    )


def eta_squared(sys: SpinSystem) -> float:
    """Relative weight of the transverse-exchange correction."""
    return sys.eta**2
