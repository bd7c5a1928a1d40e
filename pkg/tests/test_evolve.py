import numpy as np
import pytest
from scipy.linalg import expm

from spinforge import (
    coeff_matrix,
    coeffs_analytic,
    drive_exact,
    drive_rta,
    fidelity,
    frame_for_pulse,
    gate_tomography,
    initial_lab_state,
    propagate_numeric,
    propagate_rta_analytic,
    propagate_unitary,
    pulse_for_couplings,
    spectrum,
    static_hamiltonian,
    trajectory_analytic,
)
from spinforge.angles import principal, product_mod_2pi
from spinforge.errors import NoConvergence
from spinforge.frame import COEFF_MATRIX, eigensystem_symmetric

from .conftest import DEMO


def closed_phases(rng):
    p = rng.uniform(-np.pi, np.pi, 4)
    p[3] = principal(p[0] + p[1] - p[2])
    return p


def demo_pulse(phases=(0.0, 0.0, 0.0, 0.0), m=1, n=2, h1=5.0):
    tau = 2 * np.pi * m / h1
    h2 = n / m * h1
    return pulse_for_couplings(DEMO, (h1, h2, h2, h1), phases=phases, tau=tau)


class TestCoeffsAnalytic:
    def test_identity_at_zero(self, rng):
        for _ in range(10):
            h1, h2 = rng.uniform(0.1, 10.0, 2)
            assert np.allclose(coeff_matrix(h1, h2, 0.0), np.eye(4), atol=1e-15)

    def test_full_transfer(self):
        # h1 = h2 = 1 at t = pi moves all population to the double-flip state;
        # the matrix-exponential oracle fixes the amplitude's sign to -1
        c = coeffs_analytic(1.0, 1.0, np.pi, 0)
        assert np.abs(c) == pytest.approx([0.0, 0.0, 0.0, 1.0], abs=1e-12)
        oracle = expm(-1j * static_hamiltonian((1.0, 1.0, 1.0, 1.0)) * np.pi)[:, 0]
        assert np.allclose(c, oracle, atol=1e-12)

    def test_matches_eigendecomposition_extraction(self, rng):
        C = COEFF_MATRIX
        worst = 0.0
        for _ in range(1000):
            h1, h2 = rng.uniform(0.05, 10.0, 2)
            t = rng.uniform(0.0, 10.0)
            E = eigensystem_symmetric(h1, h2).energy_array
            K_ext = C @ np.diag(np.exp(-1j * E * t)) @ C
            worst = max(worst, np.abs(coeff_matrix(h1, h2, t) - K_ext).max())
        assert worst <= 1e-12

    def test_matches_expm_oracle(self, rng):
        for _ in range(50):
            h1, h2 = rng.uniform(0.1, 8.0, 2)
            t = rng.uniform(0.0, 8.0)
            U = expm(-1j * static_hamiltonian((h1, h2, h2, h1)) * t)
            assert np.allclose(coeff_matrix(h1, h2, t), U, atol=2e-13)

    def test_cyclic_terminal_values(self):
        for m, n in ((1, 1), (1, 2), (2, 3)):
            h1 = 5.0
            tau = 2 * np.pi * m / h1
            K = coeff_matrix(h1, n / m * h1, tau)
            assert np.abs(np.abs(np.diag(K)) - 1.0).max() <= 1e-12
            assert np.abs(K - np.diag(np.diag(K))).max() <= 1e-12

    def test_unitarity(self, rng):
        for _ in range(20):
            h1, h2 = rng.uniform(0.1, 10.0, 2)
            K = coeff_matrix(h1, h2, rng.uniform(0, 10))
            assert np.allclose(K.conj().T @ K, np.eye(4), atol=1e-14)
            assert abs(np.abs(K[:, 0]) ** 2).sum() == pytest.approx(1.0)


class TestPropagateAnalytic:
    def test_basis_state_at_cycle_end(self, rng):
        phases = closed_phases(rng)
        pulse = demo_pulse(phases=phases)
        fr = frame_for_pulse(DEMO, pulse, theta1=0.3)
        out = propagate_rta_analytic(DEMO, pulse, fr, pulse.tau, np.eye(4)[0])
        # global sign is -1 for (m, n) = (1, 2)
        expected = -np.exp(-1j * (fr.phi[0] * pulse.tau + fr.theta[0])) * np.eye(4)[0]
        assert np.allclose(out, expected, atol=1e-10)

    def test_identity_at_time_zero(self):
        pulse = demo_pulse()  # zero-phase pulse: theta = 0 and U(0) = identity
        fr = frame_for_pulse(DEMO, pulse, theta1=0.0)
        psi0 = np.array([1.0, 0, 0, 1.0], dtype=complex) / np.sqrt(2)
        out = propagate_rta_analytic(DEMO, pulse, fr, 0.0, psi0)
        assert np.allclose(out, psi0, atol=1e-15)

    def test_norm_preserved(self, rng):
        pulse = demo_pulse(phases=closed_phases(rng))
        fr = frame_for_pulse(DEMO, pulse)
        for _ in range(10):
            psi = rng.normal(size=4) + 1j * rng.normal(size=4)
            psi /= np.linalg.norm(psi)
            out = propagate_rta_analytic(DEMO, pulse, fr, rng.uniform(0, pulse.tau), psi)
            assert abs(np.linalg.norm(out) - 1.0) <= 1e-12

    def test_linearity(self, rng):
        pulse = demo_pulse(phases=closed_phases(rng))
        fr = frame_for_pulse(DEMO, pulse)
        t = 0.43 * pulse.tau
        a, b = 0.6, 0.8j
        psi, chi = np.eye(4)[1].astype(complex), np.eye(4)[2].astype(complex)
        combo = a * psi + b * chi
        combo_n = combo / np.linalg.norm(combo)
        out = propagate_rta_analytic(DEMO, pulse, fr, t, combo_n)
        parts = (
            a * propagate_rta_analytic(DEMO, pulse, fr, t, psi)
            + b * propagate_rta_analytic(DEMO, pulse, fr, t, chi)
        ) / np.linalg.norm(combo)
        assert np.allclose(out, parts, atol=1e-10)

    def test_matches_ode_oracle(self, rng):
        # random state, random time, random (closure-satisfying) phases
        phases = closed_phases(rng)
        pulse = demo_pulse(phases=phases)
        fr = frame_for_pulse(DEMO, pulse, theta1=0.2)
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        t = rng.uniform(0.3, 1.0) * pulse.tau
        analytic = propagate_rta_analytic(DEMO, pulse, fr, t, psi)
        traj = propagate_numeric(
            drive_rta(DEMO, pulse),
            (0.0, t),
            initial_lab_state(fr, psi),
            cert_target=1e-10,
            samples=32,
        )
        assert np.abs(traj.states[-1] - analytic).max() <= 1e-9


class TestPropagateNumeric:
    def test_stationary_state_phase(self, demo_system):
        # drive off outside the window: |01> only accumulates its own energy
        pulse = demo_pulse()
        spec = spectrum(demo_system)
        T = 0.8
        psi0 = np.eye(4)[1].astype(complex)
        traj = propagate_numeric(
            drive_rta(demo_system, pulse), (2 * pulse.tau, 2 * pulse.tau + T), psi0,
            cert_target=1e-10, samples=16,
        )
        expected = np.exp(-1j * spec.eps[1] * T) * psi0
        assert np.allclose(traj.states[-1], expected, atol=1e-9)

    def test_certificate_metadata(self, rng):
        pulse = demo_pulse()
        fr = frame_for_pulse(DEMO, pulse)
        traj = propagate_numeric(
            drive_rta(DEMO, pulse), (0.0, pulse.tau), initial_lab_state(fr, np.eye(4)[0]),
            cert_target=1e-8, samples=64,
        )
        assert traj.meta["certificate"] <= 1e-8
        assert traj.meta["norm_drift"] <= 1e-9
        assert traj.times.shape == (65,)
        assert np.all(np.linalg.norm(traj.states, axis=1) == pytest.approx(1.0, abs=1e-9))

    def test_local_error_step_control(self):
        # requesting a local error picks the resolution instead of the
        # steps-per-period default
        pulse = demo_pulse()
        fr = frame_for_pulse(DEMO, pulse)
        psi = initial_lab_state(fr, np.eye(4)[0])
        loose = propagate_numeric(
            drive_rta(DEMO, pulse), (0.0, 0.2 * pulse.tau), psi,
            local_error=1e-8, cert_target=1e-6, samples=16,
        )
        tight = propagate_numeric(
            drive_rta(DEMO, pulse), (0.0, 0.2 * pulse.tau), psi,
            local_error=1e-14, cert_target=1e-6, samples=16,
        )
        assert tight.meta["steps"] > loose.meta["steps"]

    def test_no_convergence_raises(self):
        pulse = demo_pulse()
        with pytest.raises(NoConvergence):
            propagate_numeric(
                drive_rta(DEMO, pulse), (0.0, pulse.tau), np.eye(4)[0].astype(complex),
                cert_target=1e-16, max_steps=1 << 14, samples=16,
            )

    def test_time_composition(self, rng):
        pulse = demo_pulse(phases=closed_phases(rng))
        fr = frame_for_pulse(DEMO, pulse)
        psi = initial_lab_state(fr, np.eye(4)[0])
        drive = drive_rta(DEMO, pulse)
        t1, t2 = 0.31 * pulse.tau, 0.74 * pulse.tau
        leg1 = propagate_numeric(drive, (0.0, t1), psi, cert_target=1e-10, samples=16)
        leg2 = propagate_numeric(drive, (t1, t2), leg1.states[-1], cert_target=1e-10, samples=16)
        direct = propagate_numeric(drive, (0.0, t2), psi, cert_target=1e-10, samples=16)
        assert np.abs(leg2.states[-1] - direct.states[-1]).max() <= 1e-8

    def test_fourth_order_convergence(self):
        # fixed-resolution runs must contract by ~16x per step halving
        pulse = demo_pulse()
        drive = drive_exact(DEMO, pulse)
        span = (0.0, pulse.tau)
        finals = {}
        for spp in (16, 32, 64, 128):
            U, _ = propagate_unitary(drive, span, steps_per_period=spp, cert_target=np.inf)
            finals[spp] = U
        d1 = np.linalg.norm(finals[32] - finals[16])
        d2 = np.linalg.norm(finals[64] - finals[32])
        d3 = np.linalg.norm(finals[128] - finals[64])
        assert 12.0 <= d1 / d2 <= 20.0
        assert 12.0 <= d2 / d3 <= 20.0


class TestGateTomography:
    def test_analytic_diagonal_zero_phase(self):
        pulse = demo_pulse()
        fr = frame_for_pulse(DEMO, pulse, theta1=0.0)
        g = gate_tomography("analytic", DEMO, pulse, fr)
        # (m, n) = (1, 2): global sign -1, phases phi_i tau
        diag = np.array(
            [-np.exp(-1j * product_mod_2pi(fr.phi[i], pulse.tau)) for i in range(4)]
        )
        assert np.allclose(g.matrix, np.diag(diag), atol=1e-10)
        assert g.unitarity_defect <= 1e-12

    def test_global_sign(self):
        for (m, n), sign in (((1, 1), 1.0), ((1, 2), -1.0)):
            pulse = demo_pulse(m=m, n=n)
            fr = frame_for_pulse(DEMO, pulse)
            g = gate_tomography("analytic", DEMO, pulse, fr)
            k = coeff_matrix(5.0, n / m * 5.0, pulse.tau)
            assert np.real(k[0, 0]) == pytest.approx(sign, abs=1e-12)
            first = g.matrix[0, 0] * np.exp(1j * product_mod_2pi(fr.phi[0], pulse.tau))
            assert np.real(first) == pytest.approx(sign, abs=1e-10)

    def test_off_condition_not_diagonal(self):
        # half a Rabi cycle: the gate mixes basis states and no diagonal
        # gate reaches fidelity 1
        h1 = 5.0
        pulse = pulse_for_couplings(
            DEMO, (h1, 2 * h1, 2 * h1, h1), tau=np.pi / h1
        )
        fr = frame_for_pulse(DEMO, pulse)
        g = gate_tomography("analytic", DEMO, pulse, fr)
        off_mass = np.linalg.norm(g.matrix - np.diag(np.diag(g.matrix)))
        assert off_mass > 0.1
        best_diag_fidelity = np.abs(np.diag(g.matrix)).sum() / 4.0
        assert best_diag_fidelity < 1.0 - 1e-3

    def test_rta_numeric_matches_analytic(self, rng):
        pulse = demo_pulse(phases=closed_phases(rng))
        fr = frame_for_pulse(DEMO, pulse, theta1=0.5)
        g_num = gate_tomography("rta-numeric", DEMO, pulse, fr, cert_target=1e-9)
        g_ana = gate_tomography("analytic", DEMO, pulse, fr)
        assert np.abs(g_num.matrix - g_ana.matrix).max() <= 1e-8
        assert fidelity(g_num, g_ana) == pytest.approx(1.0, abs=1e-10)

    def test_exact_close_to_rta_at_guard_scale(self, desk_system):
        # guard-compliant drive: full-Hamiltonian gate stays within 1e-3 of
        # the closed form, improving as the drive weakens
        infids = []
        for h1 in (0.2, 0.1):
            tau = 2 * np.pi / h1
            pulse = pulse_for_couplings(desk_system, (h1, 2 * h1, 2 * h1, h1), tau=tau)
            fr = frame_for_pulse(desk_system, pulse)
            g_exact = gate_tomography("exact-numeric", desk_system, pulse, fr, cert_target=1e-8)
            g_ana = gate_tomography("analytic", desk_system, pulse, fr)
            infids.append(1.0 - fidelity(g_exact, g_ana))
        assert all(f < 1e-3 for f in infids)  # fidelity >= 0.999
        assert infids[1] < infids[0]


class TestFidelity:
    def test_self(self, rng):
        pulse = demo_pulse()
        fr = frame_for_pulse(DEMO, pulse)
        G = gate_tomography("analytic", DEMO, pulse, fr).matrix
        assert fidelity(G, G) == pytest.approx(1.0)

    def test_global_phase_invariance(self, rng):
        pulse = demo_pulse()
        fr = frame_for_pulse(DEMO, pulse)
        G = gate_tomography("analytic", DEMO, pulse, fr).matrix
        assert fidelity(G, np.exp(1j * 0.7) * G) == pytest.approx(1.0)
        assert fidelity(np.exp(-1j * 2.2) * G, G) == pytest.approx(1.0)

    def test_diagonal_example(self):
        assert fidelity(np.eye(4), np.diag([1.0, 1.0, 1.0, -1.0])) == pytest.approx(0.5)

    def test_rejects_non_unitary(self):
        with pytest.raises(ValueError):
            fidelity(np.eye(4) * 0.5, np.eye(4))

    def test_rejects_mixed_frames(self):
        pulse = demo_pulse()
        fr = frame_for_pulse(DEMO, pulse)
        g = gate_tomography("analytic", DEMO, pulse, fr)
        other = gate_tomography("analytic", DEMO, pulse, fr)
        other.frame = "rotating"
        with pytest.raises(ValueError):
            fidelity(g, other)


class TestTrajectoryAnalytic:
    def test_grid_and_norms(self, rng):
        pulse = demo_pulse(phases=closed_phases(rng))
        fr = frame_for_pulse(DEMO, pulse)
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        traj = trajectory_analytic(DEMO, pulse, fr, psi, samples=256)
        assert traj.frame == "lab"
        assert traj.times[0] == 0.0 and traj.times[-1] == pytest.approx(pulse.tau)
        assert np.all(np.diff(traj.times) > 0)
        assert np.abs(np.linalg.norm(traj.states, axis=1) - 1.0).max() <= 1e-12
