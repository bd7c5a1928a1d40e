"""HTTP front end: a FastAPI app wrapping the task handlers.

One POST endpoint per task plus schema and health probes.  Request bodies
are the same strict documents the CLI config files use (system + task
payload); responses are the handler response models.  Domain failures map
to HTTP 422 with the error code in the body; infeasible designs are not
errors (the response carries ``feasible: false`` and the margins).
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__, handlers
from .errors import SpinforgeError
from .schemas import (
    DesignPayload,
    DesignResponse,
    PhasesPayload,
    PhasesResponse,
    RunConfigDoc,
    SimulatePayload,
    SimulateResponse,
    SpinSystemDoc,
    StrictModel,
    SweepPayload,
    SweepResponse,
    VerifyPayload,
    VerifyResponse,
    all_schemas,
)


class DesignRequest(StrictModel):
    system: SpinSystemDoc
    payload: DesignPayload
    seed: int = 0


class SimulateRequest(StrictModel):
    system: SpinSystemDoc
    payload: SimulatePayload
    seed: int = 0


class PhasesRequest(StrictModel):
    system: SpinSystemDoc
    payload: PhasesPayload
    seed: int = 0


class VerifyRequest(StrictModel):
    system: SpinSystemDoc | None = None
    payload: VerifyPayload = VerifyPayload()
    seed: int = 0


class SweepRequest(StrictModel):
    system: SpinSystemDoc
    payload: SweepPayload
    seed: int = 0


def _config(task: str, request) -> RunConfigDoc:
    system = request.system
    if system is None:
        # verify does not need a system; any valid one satisfies the schema
        system = SpinSystemDoc(omega1=64.0, omega2=16.0, J=6.0, gamma1=1.0, gamma2=1.0)
    return RunConfigDoc(
        system=system,
        task=task,
        task_payload=request.payload.model_dump(mode="json"),
        output_dir=".",
        seed=request.seed,
    )


def create_app() -> FastAPI:
    app = FastAPI(title="spinforge", version=__version__)

    @app.exception_handler(SpinforgeError)
    async def _domain_error(_: Request, exc: SpinforgeError):
        return JSONResponse(status_code=422, content={"code": exc.code, "message": str(exc)})

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.get("/v1/schemas")
    def schemas():
        return all_schemas()

    @app.post("/v1/design", response_model=DesignResponse)
    def design(request: DesignRequest):
        return handlers.run_design(_config("design", request))

    @app.post("/v1/simulate", response_model=SimulateResponse)
    def simulate(request: SimulateRequest):
        return handlers.run_simulate(_config("simulate", request))

    @app.post("/v1/phases", response_model=PhasesResponse)
    def phases(request: PhasesRequest):
        return handlers.run_phases(_config("phases", request))

    @app.post("/v1/verify", response_model=VerifyResponse)
    def verify(request: VerifyRequest):
        return handlers.run_verify(_config("verify", request))

    @app.post("/v1/sweep", response_model=SweepResponse)
    def sweep(request: SweepRequest):
        return handlers.run_sweep(_config("sweep", request))

    return app


app = create_app()
