"""Task execution layer shared by the HTTP service and the CLI.

Each handler consumes validated documents and returns a response model;
neither front end re-implements any logic.  Design infeasibility is not an
exception at this layer: the response carries the completed design together
with its violations so callers can persist the artifacts and signal the
condition their own way (HTTP status field, CLI exit code 2).
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from . import designer, evolve, model, phase, sweep, verify
from .errors import Infeasible
from .frame import FrameParams, frame_for_pulse
from .schemas import (
    CheckDoc,
    DesignPayload,
    DesignResponse,
    DesignResultDoc,
    FeasibilityDoc,
    GateDoc,
    PhaseReportDoc,
    PhasesPayload,
    PhasesResponse,
    RunConfigDoc,
    SimulatePayload,
    SimulateResponse,
    SweepPayload,
    SweepResponse,
    TrajectoryDoc,
    VerifyPayload,
    VerifyResponse,
)

TRAJECTORY_HEADER = [
    "t",
    "re_c1", "im_c1",
    "re_c2", "im_c2",
    "re_c3", "im_c3",
    "re_c4", "im_c4",
    "norm",
]


def run_design(cfg: RunConfigDoc) -> DesignResponse:
    payload = DesignPayload.model_validate(cfg.task_payload)
    sys = cfg.system.to_core()
    target = payload.target.to_core()
    try:
        result = designer.design(sys, target)
        feasible, violations = True, []
    except Infeasible as exc:
        result = exc.result
        feasible, violations = False, list(exc.violations)
    feas = designer.feasibility_report(sys, result, tau_phi=payload.tau_phi)
    return DesignResponse(
        feasible=feasible,
        violations=violations,
        design=DesignResultDoc.from_core(result),
        feasibility=FeasibilityDoc.from_core(feas),
    )


def _resolve_pulse_and_frame(
    cfg: RunConfigDoc, payload
) -> tuple[model.PulseSpec, FrameParams]:
    sys = cfg.system.to_core()
    if payload.pulse is not None:
        pulse = payload.pulse.to_core()
        frame = frame_for_pulse(sys, pulse, theta1=payload.theta1)
        return pulse, frame
    ref = Path(payload.design_ref)
    if not ref.is_absolute():
        ref = Path(cfg.output_dir) / ref
    doc = DesignResultDoc.model_validate(json.loads(ref.read_text()))
    return doc.pulse.to_core(), doc.frame.to_core()


def _trajectory_doc(traj: evolve.Trajectory) -> TrajectoryDoc:
    rows = []
    for t, state in zip(traj.times, traj.states):
        row = [float(t)]
        for c in state:
            row.extend([float(c.real), float(c.imag)])
        row.append(float(np.linalg.norm(state)))
        rows.append(row)
    return TrajectoryDoc(header=list(TRAJECTORY_HEADER), rows=rows)


def run_simulate(cfg: RunConfigDoc) -> SimulateResponse:
    payload = SimulatePayload.model_validate(cfg.task_payload)
    sys = cfg.system.to_core()
    pulse, frame = _resolve_pulse_and_frame(cfg, payload)
    if payload.initial_state is not None:
        psi0 = np.array([complex(r, i) for r, i in payload.initial_state])
        psi0 = psi0 / np.linalg.norm(psi0)
    else:
        psi0 = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)

    if pulse.tau == 0.0:
        theta_phase = np.exp(-1j * frame.theta_array)
        gate = evolve.GateResult(
            matrix=np.diag(theta_phase),
            frame="lab",
            propagator=payload.propagator,
            unitarity_defect=0.0,
            meta={"certificate": 0.0, "steps": 0},
        )
        traj = evolve.Trajectory(
            times=np.array([0.0]),
            states=(theta_phase * psi0)[None, :],
            frame="lab",
        )
        return SimulateResponse(
            gate=GateDoc.from_core(gate, diagnostics=_diagnostics(sys, payload, None)),
            trajectory=_trajectory_doc(traj),
        )

    gate = evolve.gate_tomography(
        payload.propagator,
        sys,
        pulse,
        frame,
        include_xy=payload.include_xy,
        steps_per_period=payload.steps_per_period,
        cert_target=payload.cert_target,
        max_steps=payload.max_steps,
    )
    if payload.propagator == "analytic":
        traj = evolve.trajectory_analytic(sys, pulse, frame, psi0, samples=payload.samples)
    else:
        drive = (
            evolve.drive_rta(sys, pulse)
            if payload.propagator == "rta-numeric"
            else evolve.drive_exact(sys, pulse, payload.include_xy)
        )
        traj = evolve.propagate_numeric(
            drive,
            (0.0, pulse.tau),
            evolve.initial_lab_state(frame, psi0),
            steps_per_period=payload.steps_per_period,
            cert_target=payload.cert_target,
            samples=payload.samples,
            max_steps=payload.max_steps,
        )
    diagnostics = _diagnostics(sys, payload, (pulse, frame, gate))
    return SimulateResponse(
        gate=GateDoc.from_core(gate, diagnostics=diagnostics),
        trajectory=_trajectory_doc(traj),
    )


def _diagnostics(sys: model.SpinSystem, payload, context) -> dict | None:
    """Transverse-exchange diagnostics for exact runs with the term enabled."""
    if not (payload.propagator == "exact-numeric" and payload.include_xy):
        return None
    out = {"eta": sys.eta, "eta_squared": sys.eta**2}
    if context is not None:
        pulse, frame, gate = context
        reference = evolve.gate_tomography("analytic", sys, pulse, frame)
        out["fidelity_vs_analytic"] = evolve.fidelity(gate, reference)
    return out


def run_phases(cfg: RunConfigDoc) -> PhasesResponse:
    payload = PhasesPayload.model_validate(cfg.task_payload)
    sys = cfg.system.to_core()
    pulse, frame = _resolve_pulse_and_frame(cfg, payload)
    report = phase.decompose(
        sys,
        pulse,
        frame,
        propagator=payload.propagator,
        include_xy=payload.include_xy,
        samples=payload.samples,
        steps_per_period=payload.steps_per_period,
        cert_target=payload.cert_target,
        max_steps=payload.max_steps,
    )
    return PhasesResponse(report=PhaseReportDoc.from_core(report))


def run_verify(cfg: RunConfigDoc) -> VerifyResponse:
    payload = VerifyPayload.model_validate(cfg.task_payload)
    results = verify.run_verify(cfg.seed, inject_fault=payload.inject_fault)
    checks = [
        CheckDoc(
            name=r.name,
            passed=r.passed,
            residual=r.residual if math.isfinite(r.residual) else 1e308,
            tolerance=r.tolerance,
            detail=r.detail,
        )
        for r in results
    ]
    return VerifyResponse(passed=all(r.passed for r in results), seed=cfg.seed, checks=checks)


def run_sweep(cfg: RunConfigDoc) -> SweepResponse:
    payload = SweepPayload.model_validate(cfg.task_payload)
    sys = cfg.system.to_core()
    rows = sweep.run(sys, payload)
    n_failed = sum(1 for r in rows if r[-1])
    return SweepResponse(
        header=list(sweep.SWEEP_HEADER), rows=rows, n_ok=len(rows) - n_failed, n_failed=n_failed
    )


RUNNERS = {
    "design": run_design,
    "simulate": run_simulate,
    "phases": run_phases,
    "verify": run_verify,
    "sweep": run_sweep,
}


def run_task(cfg: RunConfigDoc):
    return RUNNERS[cfg.task](cfg)
