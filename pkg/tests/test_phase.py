import numpy as np
import pytest
from scipy.integrate import quad, simpson

from spinforge import (
    design,
    design_aa,
    frame_for_pulse,
    gate_tomography,
    propagate_numeric,
    pulse_for_couplings,
    spectrum,
    total_phase,
    trajectory_analytic,
)
from spinforge.angles import angle_distance, principal, product_mod_2pi
from spinforge.designer import GateTarget
from spinforge.errors import ConditionUnmet, GridTooCoarse, NotCyclic
from spinforge.evolve import drive_rta
from spinforge.phase import condition_indices, decompose, dynamical_phase, global_sign

from .conftest import DEMO, DESK, DESK_H1


def closed_phases(rng):
    p = rng.uniform(-np.pi, np.pi, 4)
    p[3] = principal(p[0] + p[1] - p[2])
    return p


def demo_pulse(phases=(0.0, 0.0, 0.0, 0.0), m=1, n=2, h1=5.0):
    tau = 2 * np.pi * m / h1
    return pulse_for_couplings(DEMO, (h1, n / m * h1, n / m * h1, h1), phases=phases, tau=tau)


class TestTotalPhase:
    def test_explicit_phase(self, rng):
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        assert total_phase(psi, np.exp(1j * 0.7) * psi) == pytest.approx(0.7, abs=1e-12)

    def test_orthogonal_rejected(self):
        with pytest.raises(NotCyclic):
            total_phase(np.eye(4)[0], np.eye(4)[1])

    def test_principal_branch(self, rng):
        psi = np.eye(4)[2].astype(complex)
        val = total_phase(psi, np.exp(1j * 5.0) * psi)
        assert val == pytest.approx(principal(5.0), abs=1e-12)
        assert -np.pi < val <= np.pi

    def test_designed_gate_basis_phase(self, rng):
        tgt = GateTarget(theta_targets=tuple(rng.uniform(-np.pi, np.pi, 4)), m=1, n=2, h1=DESK_H1)
        res = design(DESK, tgt)
        g = gate_tomography("analytic", DESK, res.pulse, res.frame)
        psi1 = np.eye(4)[1].astype(complex)
        beta = total_phase(psi1, g.matrix @ psi1)
        shift = np.pi if res.global_sign < 0 else 0.0
        assert angle_distance(beta, -tgt.theta_targets[1] + shift) <= 1e-9


class TestDynamicalPhase:
    def test_zero_for_distinct_indices(self, rng):
        pulse = demo_pulse(phases=closed_phases(rng))
        fr = frame_for_pulse(DEMO, pulse)
        spec = spectrum(DEMO)
        tol_abs = 1e-9 * max(abs(e) for e in spec.eps) * pulse.tau
        for i in range(4):
            traj = trajectory_analytic(DEMO, pulse, fr, np.eye(4)[i].astype(complex), samples=4096)
            assert abs(dynamical_phase(traj, DEMO, pulse)) <= tol_abs

    def test_equal_indices_residual_against_quadrature(self):
        # independent oracle: adaptive quadrature of the closed-form
        # population integrand, no shared grid, no shared code path
        pulse = demo_pulse(m=1, n=1)
        fr = frame_for_pulse(DEMO, pulse)
        spec = spectrum(DEMO)
        traj = trajectory_analytic(DEMO, pulse, fr, np.eye(4)[0].astype(complex), samples=8192)
        measured = dynamical_phase(traj, DEMO, pulse)
        h = 5.0

        def integrand(t):
            c1, s1 = np.cos(h * t / 2), np.sin(h * t / 2)
            c2, s2 = np.cos(h * t / 2), np.sin(h * t / 2)
            pops = np.array([(c1 * c2) ** 2, (c1 * s2) ** 2, (s1 * c2) ** 2, (s1 * s2) ** 2])
            return float(pops @ spec.eps_array)

        oracle, err = quad(integrand, 0.0, pulse.tau, limit=200, epsabs=1e-12)
        assert err < 1e-10
        assert measured == pytest.approx(-oracle, abs=1e-9)
        assert measured == pytest.approx(DEMO.J * pulse.tau / 4.0, abs=1e-9)

    def test_stationary_state(self):
        pulse = demo_pulse()
        spec = spectrum(DEMO)
        T = 1.2
        psi0 = np.eye(4)[1].astype(complex)
        traj = propagate_numeric(
            drive_rta(DEMO, pulse), (2 * pulse.tau, 2 * pulse.tau + T), psi0,
            cert_target=1e-10, samples=512,
        )
        dd = dynamical_phase(traj, DEMO, pulse)
        assert dd == pytest.approx(-spec.eps[1] * T, rel=1e-9)

    def test_grid_too_coarse(self, rng):
        pulse = demo_pulse(phases=closed_phases(rng))
        fr = frame_for_pulse(DEMO, pulse)
        traj = trajectory_analytic(DEMO, pulse, fr, np.eye(4)[0].astype(complex), samples=8)
        with pytest.raises(GridTooCoarse):
            dynamical_phase(traj, DEMO, pulse, tol=1e-14)

    def test_rejects_rotating_frame(self, rng):
        pulse = demo_pulse()
        fr = frame_for_pulse(DEMO, pulse)
        traj = trajectory_analytic(DEMO, pulse, fr, np.eye(4)[0].astype(complex), samples=64)
        traj.frame = "rotating"
        with pytest.raises(ValueError):
            dynamical_phase(traj, DEMO, pulse)

    @pytest.mark.parametrize("m,n", [(1, 1), (1, 2), (2, 3)])
    def test_cross_term_integrals_vanish(self, m, n):
        # the two off-diagonal contributions to the energy integral cancel
        # over the cycle for every integer index pair: their integrands are
        # pure sine waves completing whole periods
        from scipy.integrate import simpson

        from spinforge import coeff_matrix

        h1 = 5.0
        h2 = n / m * h1
        tau = 2 * np.pi * m / h1
        ts = np.linspace(0.0, tau, 16385)
        K = coeff_matrix(h1, h2, ts)  # (T, 4, 4); column i = start state i
        for i in range(4):
            c = K[:, :, i]
            first = simpson(np.conj(c[:, 2]) * c[:, 0] + np.conj(c[:, 3]) * c[:, 1], x=ts)
            second = simpson(np.conj(c[:, 3]) * c[:, 2] + np.conj(c[:, 1]) * c[:, 0], x=ts)
            assert abs(h1 / 2 * first) <= 1e-9 * max(1.0, h1 * tau)
            assert abs(h2 / 2 * second) <= 1e-9 * max(1.0, h2 * tau)

    def test_exact_integrand_flag(self):
        # sensitivity switch: integrate against the full Hamiltonian with
        # the exchange term instead of the resonant approximation
        pulse = demo_pulse()
        fr = frame_for_pulse(DEMO, pulse)
        traj = trajectory_analytic(DEMO, pulse, fr, np.eye(4)[0].astype(complex), samples=4096)
        dd_rta = dynamical_phase(traj, DEMO, pulse, integrand="rta")
        dd_exact = dynamical_phase(traj, DEMO, pulse, integrand="exact")
        assert np.isfinite(dd_exact)
        # the integrands differ by the discarded drive and exchange terms,
        # which is a bounded perturbation at these couplings
        assert abs(dd_exact - dd_rta) < 1.0
        with pytest.raises(ValueError):
            dynamical_phase(traj, DEMO, pulse, integrand="bogus")

    def test_term_integrals(self):
        # each populated level contributes its energy times tau/4
        pulse = demo_pulse()
        fr = frame_for_pulse(DEMO, pulse)
        spec = spectrum(DEMO)
        traj = trajectory_analytic(DEMO, pulse, fr, np.eye(4)[0].astype(complex), samples=8192)
        pops = np.abs(traj.states) ** 2
        for k in range(4):
            integral = simpson(pops[:, k] * spec.eps[k], x=traj.times)
            assert integral == pytest.approx(spec.eps[k] * pulse.tau / 4.0, rel=1e-9)


class TestConditionIndices:
    def test_detects_indices(self):
        for m, n in ((1, 1), (1, 2), (2, 3)):
            pulse = demo_pulse(m=m, n=n)
            assert condition_indices(DEMO, pulse) == (m, n)

    def test_rejects_noncyclic(self):
        pulse = pulse_for_couplings(DEMO, (5.0, 10.0, 10.0, 5.0), tau=1.0)
        with pytest.raises(ConditionUnmet):
            condition_indices(DEMO, pulse)

    def test_global_sign(self):
        assert global_sign(1, 1) == 1
        assert global_sign(1, 2) == -1
        assert global_sign(2, 3) == -1
        assert global_sign(2, 2) == 1


class TestDecompose:
    def test_pure_geometric_at_distinct_indices(self, rng):
        pulse = demo_pulse(phases=closed_phases(rng))
        fr = frame_for_pulse(DEMO, pulse, theta1=rng.uniform(-1, 1))
        rep = decompose(DEMO, pulse, fr, propagator="analytic")
        spec = spectrum(DEMO)
        scale = max(abs(e) for e in spec.eps) * pulse.tau
        for i in range(4):
            assert abs(rep.delta_d[i]) <= 1e-9 * scale
            assert angle_distance(rep.delta_g[i], rep.beta[i]) <= 1e-9
        assert rep.global_sign == -1
        assert rep.condition_met
        assert not rep.warnings

    def test_equal_indices_warns_with_residual(self):
        pulse = demo_pulse(m=1, n=1)
        fr = frame_for_pulse(DEMO, pulse)
        rep = decompose(DEMO, pulse, fr, propagator="analytic")
        expected = DEMO.J * pulse.tau / 4.0
        assert np.array(rep.delta_d) == pytest.approx(
            expected * np.array([1.0, -1.0, -1.0, 1.0]), abs=1e-9
        )
        assert rep.warnings and "J*tau/4" in rep.warnings[0]

    def test_beta_matches_expected_phases(self, rng):
        phases = closed_phases(rng)
        pulse = demo_pulse(phases=phases)
        th1 = rng.uniform(-1, 1)
        fr = frame_for_pulse(DEMO, pulse, theta1=th1)
        rep = decompose(DEMO, pulse, fr, propagator="analytic")
        for i in range(4):
            theta_total = product_mod_2pi(fr.phi[i], pulse.tau) + fr.theta[i]
            expected = principal(-theta_total + np.pi)  # sign -1 at (1, 2)
            assert angle_distance(rep.beta[i], expected) <= 1e-9
            # unwrapped value agrees modulo 2 pi
            assert angle_distance(rep.beta_unwrapped[i], rep.beta[i]) <= 1e-6

    def test_gauge_covariance(self, rng):
        phases = closed_phases(rng)
        pulse = demo_pulse(phases=phases)
        delta = 0.9
        rep0 = decompose(DEMO, pulse, frame_for_pulse(DEMO, pulse, theta1=0.0))
        rep1 = decompose(DEMO, pulse, frame_for_pulse(DEMO, pulse, theta1=delta))
        for i in range(4):
            assert angle_distance(rep1.beta[i], rep0.beta[i] - delta) <= 1e-9
            assert rep1.delta_d[i] == pytest.approx(rep0.delta_d[i], abs=1e-9)

    def test_beta_sum_rule(self, rng):
        phases = closed_phases(rng)
        pulse = demo_pulse(phases=phases)
        fr = frame_for_pulse(DEMO, pulse, theta1=0.4)
        rep = decompose(DEMO, pulse, fr)
        total = sum(
            principal(product_mod_2pi(fr.phi[i], pulse.tau) + fr.theta[i]) for i in range(4)
        )
        arg_a = 0.0 if rep.global_sign > 0 else np.pi
        assert angle_distance(sum(rep.beta), -total + 4 * arg_a) <= 1e-9

    def test_condition_unmet_raises(self):
        pulse = pulse_for_couplings(DEMO, (5.0, 10.0, 10.0, 5.0), tau=1.0)
        fr = frame_for_pulse(DEMO, pulse)
        with pytest.raises(ConditionUnmet):
            decompose(DEMO, pulse, fr)

    def test_aa_phase_reported(self):
        res = design_aa(DESK, m=1, n=2, h1=DESK_H1, phase=0.8)
        rep = decompose(DESK, res.pulse, res.frame)
        assert rep.aa_phase == pytest.approx(0.8, abs=1e-9)
        # a random superposition returns to itself up to the reported phase
        rng = np.random.default_rng(5)
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        g = gate_tomography("analytic", DESK, res.pulse, res.frame)
        out = g.matrix @ psi
        overlap = np.vdot(psi, out)
        assert abs(overlap) == pytest.approx(1.0, abs=1e-11)
        assert angle_distance(np.angle(overlap), -0.8 + np.pi) <= 1e-9  # sign -1

    def test_cross_propagator_consistency(self, rng):
        # all three propagation routes agree on the total phases; the
        # dynamical split off the exact route is leakage-limited and checked
        # only to the measured budget
        tgt = GateTarget(theta_targets=tuple(rng.uniform(-np.pi, np.pi, 4)), m=1, n=2, h1=DESK_H1)
        res = design(DESK, tgt)
        rep_a = decompose(DESK, res.pulse, res.frame, propagator="analytic")
        rep_r = decompose(
            DESK, res.pulse, res.frame, propagator="rta-numeric", cert_target=1e-7, samples=2048
        )
        rep_e = decompose(
            DESK, res.pulse, res.frame, propagator="exact-numeric", cert_target=1e-6, samples=2048
        )
        for i in range(4):
            assert angle_distance(rep_r.beta[i], rep_a.beta[i]) <= 1e-6
            assert angle_distance(rep_e.beta[i], rep_a.beta[i]) <= 1e-2
            assert abs(rep_r.delta_d[i] - rep_a.delta_d[i]) <= 1e-5
            assert abs(rep_e.delta_d[i] - rep_a.delta_d[i]) <= 0.5
