"""Pydantic document models: the package's JSON wire and file formats.

Every document is strict (unknown keys rejected) and mirrors a core type.
The same models back the HTTP service request/response bodies, the CLI
config files, and the JSON artifacts written to disk, so there is exactly
one schema for each surface.  Complex matrices travel as nested
``[re, im]`` pairs: a gate is ``[[[re, im] x4] x4]`` row-major.
"""

from __future__ import annotations

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .designer import DesignResult, FeasibilityReport, GateTarget
from .evolve import GateResult
from .frame import FrameParams
from .model import Harmonic, PulseSpec, SpinSystem
from .phase import PhaseReport


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ---------------------------------------------------------------------------
# core documents


class SpinSystemDoc(StrictModel):
    omega1: float
    omega2: float
    J: float
    gamma1: float
    gamma2: float

    def to_core(self) -> SpinSystem:
        return SpinSystem(
            omega1=self.omega1, omega2=self.omega2, J=self.J, gamma1=self.gamma1, gamma2=self.gamma2
        )

    @classmethod
    def from_core(cls, sys: SpinSystem) -> "SpinSystemDoc":
        return cls(omega1=sys.omega1, omega2=sys.omega2, J=sys.J, gamma1=sys.gamma1, gamma2=sys.gamma2)


class HarmonicDoc(StrictModel):
    omega: float
    phi: float
    amplitude: float


class PulseSpecDoc(StrictModel):
    harmonics: list[HarmonicDoc] = Field(min_length=4, max_length=4)
    tau: float

    def to_core(self) -> PulseSpec:
        return PulseSpec(
            harmonics=tuple(
                Harmonic(omega=h.omega, phi=h.phi, amplitude=h.amplitude) for h in self.harmonics
            ),
            tau=self.tau,
        )

    @classmethod
    def from_core(cls, pulse: PulseSpec) -> "PulseSpecDoc":
        return cls(
            harmonics=[
                HarmonicDoc(omega=h.omega, phi=h.phi, amplitude=h.amplitude)
                for h in pulse.harmonics
            ],
            tau=pulse.tau,
        )


class FrameParamsDoc(StrictModel):
    phi: list[float] = Field(min_length=4, max_length=4)
    theta: list[float] = Field(min_length=4, max_length=4)

    def to_core(self) -> FrameParams:
        return FrameParams(phi=tuple(self.phi), theta=tuple(self.theta))

    @classmethod
    def from_core(cls, frame: FrameParams) -> "FrameParamsDoc":
        return cls(phi=list(frame.phi), theta=list(frame.theta))


class GateTargetDoc(StrictModel):
    theta_targets: list[float] = Field(min_length=4, max_length=4)
    m: int = Field(ge=1)
    n: int = Field(ge=1)
    h1: float | None = None
    tau: float | None = None

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.h1 is None) == (self.tau is None):
            raise ValueError("exactly one of h1, tau must be supplied")
        return self

    def to_core(self) -> GateTarget:
        return GateTarget(
            theta_targets=tuple(self.theta_targets), m=self.m, n=self.n, h1=self.h1, tau=self.tau
        )


def complex_matrix_to_doc(M: np.ndarray) -> list[list[list[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M, dtype=complex)]


def complex_matrix_from_doc(doc) -> np.ndarray:
    M = np.array([[complex(e[0], e[1]) for e in row] for row in doc])
    if M.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix document, got shape {M.shape}")
    return M


class GateDoc(StrictModel):
    matrix: list[list[list[float]]]
    frame: str
    propagator: str
    unitarity_defect: float
    certificate: float | None = None
    steps: int | None = None
    diagnostics: dict | None = None

    @field_validator("matrix")
    @classmethod
    def _shape(cls, v):
        if len(v) != 4 or any(len(r) != 4 for r in v) or any(len(e) != 2 for r in v for e in r):
            raise ValueError("gate matrix must be [[re,im] x4] x4")
        return v

    @classmethod
    def from_core(cls, gate: GateResult, diagnostics: dict | None = None) -> "GateDoc":
        return cls(
            matrix=complex_matrix_to_doc(gate.matrix),
            frame=gate.frame,
            propagator=gate.propagator,
            unitarity_defect=gate.unitarity_defect,
            certificate=gate.meta.get("certificate"),
            steps=gate.meta.get("steps"),
            diagnostics=diagnostics,
        )


class FeasibilityDoc(StrictModel):
    omega_tau: list[float] = Field(min_length=4, max_length=4)
    omega_tau_min: float
    omega_tau_ok: bool
    min_gap: float
    max_coupling: float
    guard_ratio: float
    guard_ok: bool
    amplitudes: list[float] = Field(min_length=4, max_length=4)
    amplitude_ratio_2_over_1: float
    eta: float
    eta_squared: float
    tau: float
    tau_phi_over_tau: float | None = None
    notes: list[str] = Field(default_factory=list)

    @classmethod
    def from_core(cls, rep: FeasibilityReport) -> "FeasibilityDoc":
        return cls(
            omega_tau=list(rep.omega_tau),
            omega_tau_min=rep.omega_tau_min,
            omega_tau_ok=rep.omega_tau_ok,
            min_gap=rep.min_gap,
            max_coupling=rep.max_coupling,
            guard_ratio=rep.guard_ratio,
            guard_ok=rep.guard_ok,
            amplitudes=list(rep.amplitudes),
            amplitude_ratio_2_over_1=rep.amplitude_ratio_2_over_1,
            eta=rep.eta,
            eta_squared=rep.eta_squared,
            tau=rep.tau,
            tau_phi_over_tau=rep.tau_phi_over_tau,
            notes=list(rep.notes),
        )


class DesignResultDoc(StrictModel):
    target: GateTargetDoc
    pulse: PulseSpecDoc
    frame: FrameParamsDoc
    global_sign: int
    predicted_gate: GateDoc

    @classmethod
    def from_core(cls, res: DesignResult) -> "DesignResultDoc":
        return cls(
            target=GateTargetDoc(
                theta_targets=list(res.target.theta_targets),
                m=res.target.m,
                n=res.target.n,
                h1=res.target.h1,
                tau=res.target.tau,
            ),
            pulse=PulseSpecDoc.from_core(res.pulse),
            frame=FrameParamsDoc.from_core(res.frame),
            global_sign=res.global_sign,
            predicted_gate=GateDoc.from_core(res.predicted_gate),
        )


class PhaseReportDoc(StrictModel):
    beta: list[float] = Field(min_length=4, max_length=4)
    delta_D: list[float] = Field(min_length=4, max_length=4)
    delta_G: list[float] = Field(min_length=4, max_length=4)
    global_sign: int
    condition_met: bool
    m: int
    n: int
    aa_phase: float | None = None
    beta_unwrapped: list[float] | None = None
    warnings: list[str] = Field(default_factory=list)

    @classmethod
    def from_core(cls, rep: PhaseReport) -> "PhaseReportDoc":
        return cls(
            beta=list(rep.beta),
            delta_D=list(rep.delta_d),
            delta_G=list(rep.delta_g),
            global_sign=rep.global_sign,
            condition_met=rep.condition_met,
            m=rep.m,
            n=rep.n,
            aa_phase=rep.aa_phase,
            beta_unwrapped=list(rep.beta_unwrapped) if rep.beta_unwrapped else None,
            warnings=list(rep.warnings),
        )


class TrajectoryDoc(StrictModel):
    """Column-ordered trajectory table matching the CSV layout."""

    header: list[str]
    rows: list[list[float]]


# ---------------------------------------------------------------------------
# task payloads

PropagatorName = Literal["analytic", "rta-numeric", "exact-numeric"]


class DesignPayload(StrictModel):
    target: GateTargetDoc
    tau_phi: float | None = None


class SimulatePayload(StrictModel):
    propagator: PropagatorName
    pulse: PulseSpecDoc | None = None
    design_ref: str | None = None
    theta1: float = 0.0
    include_xy: bool = False
    initial_state: list[list[float]] | None = None  # 4 x [re, im]
    samples: int = Field(default=2048, ge=8)
    steps_per_period: int = Field(default=64, ge=4)
    cert_target: float = Field(default=1e-8, gt=0)
    max_steps: int = Field(default=1 << 23, ge=16)

    @model_validator(mode="after")
    def _pulse_source(self):
        if (self.pulse is None) == (self.design_ref is None):
            raise ValueError("exactly one of pulse, design_ref must be supplied")
        if self.initial_state is not None:
            if len(self.initial_state) != 4 or any(len(e) != 2 for e in self.initial_state):
                raise ValueError("initial_state must be 4 [re, im] pairs")
        return self


class PhasesPayload(StrictModel):
    propagator: PropagatorName = "analytic"
    pulse: PulseSpecDoc | None = None
    design_ref: str | None = None
    theta1: float = 0.0
    include_xy: bool = False
    samples: int = Field(default=4096, ge=8)
    steps_per_period: int = Field(default=64, ge=4)
    cert_target: float = Field(default=1e-8, gt=0)
    max_steps: int = Field(default=1 << 23, ge=16)

    @model_validator(mode="after")
    def _pulse_source(self):
        if (self.pulse is None) == (self.design_ref is None):
            raise ValueError("exactly one of pulse, design_ref must be supplied")
        return self


class VerifyPayload(StrictModel):
    inject_fault: str | None = None


class SweepPayload(StrictModel):
    parameter: Literal["h1", "J", "steps_per_period"]
    values: list[float] = Field(min_length=1)
    m: int = Field(default=1, ge=1)
    n: int = Field(default=2, ge=1)
    h1: float = Field(default=0.05, gt=0)  # baseline coupling for J / spp sweeps
    include_xy: bool = False
    cert_target: float = Field(default=1e-7, gt=0)


TaskName = Literal["design", "simulate", "phases", "verify", "sweep"]

_PAYLOAD_MODELS = {
    "design": DesignPayload,
    "simulate": SimulatePayload,
    "phases": PhasesPayload,
    "verify": VerifyPayload,
    "sweep": SweepPayload,
}


class RunConfigDoc(StrictModel):
    system: SpinSystemDoc
    task: TaskName
    task_payload: dict
    output_dir: str = "."
    seed: int = Field(default=0, ge=0)

    def payload(self):
        """Validate the payload against the task's schema."""
        return _PAYLOAD_MODELS[self.task].model_validate(self.task_payload)


# ---------------------------------------------------------------------------
# responses


class DesignResponse(StrictModel):
    feasible: bool
    violations: list[str] = Field(default_factory=list)
    design: DesignResultDoc
    feasibility: FeasibilityDoc


class SimulateResponse(StrictModel):
    gate: GateDoc
    trajectory: TrajectoryDoc


class PhasesResponse(StrictModel):
    report: PhaseReportDoc


class CheckDoc(StrictModel):
    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: str = ""


class VerifyResponse(StrictModel):
    passed: bool
    seed: int
    checks: list[CheckDoc]


class SweepResponse(StrictModel):
    header: list[str]
    rows: list[list]
    n_ok: int
    n_failed: int


DOCUMENT_MODELS: dict[str, type[BaseModel]] = {
    "spin_system": SpinSystemDoc,
    "pulse_spec": PulseSpecDoc,
    "frame_params": FrameParamsDoc,
    "gate_target": GateTargetDoc,
    "gate": GateDoc,
    "feasibility": FeasibilityDoc,
    "design_result": DesignResultDoc,
    "phase_report": PhaseReportDoc,
    "trajectory": TrajectoryDoc,
    "run_config": RunConfigDoc,
    "design_payload": DesignPayload,
    "simulate_payload": SimulatePayload,
    "phases_payload": PhasesPayload,
    "verify_payload": VerifyPayload,
    "sweep_payload": SweepPayload,
}


def all_schemas() -> dict:
    """JSON Schema for every document, keyed by document name."""
    return {name: model.model_json_schema() for name, model in sorted(DOCUMENT_MODELS.items())}
