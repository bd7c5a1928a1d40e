"""Batch front door: thin client over the task handlers.

Subcommands mirror the service endpoints one to one; the CLI only parses
the config, invokes the shared handler in process, writes the artifacts and
maps outcomes to exit codes:

    0  success
    1  schema violation or bad invocation (diagnostic names the key)
    2  infeasible design (artifacts are still written)
    3  integration did not converge
    4  evolution not cyclic / cyclicity condition unmet
    5  verify suite failed

``serve`` starts the HTTP service on the same handlers.
"""

from __future__ import annotations

import argparse
import json
import sys as _sys
from pathlib import Path

from pydantic import ValidationError

from . import __version__, handlers, io
from .errors import (
    ConditionUnmet,
    DegenerateSpectrum,
    GridTooCoarse,
    Infeasible,
    NoConvergence,
    NotCyclic,
    SpinforgeError,
)
from .schemas import RunConfigDoc, all_schemas

EXIT_OK = 0
EXIT_SCHEMA = 1
EXIT_INFEASIBLE = 2
EXIT_NO_CONVERGENCE = 3
EXIT_NOT_CYCLIC = 4
EXIT_VERIFY_FAILED = 5

_EXIT_BY_ERROR: list[tuple[type, int]] = [
    (Infeasible, EXIT_INFEASIBLE),
    (DegenerateSpectrum, EXIT_INFEASIBLE),
    (NoConvergence, EXIT_NO_CONVERGENCE),
    (NotCyclic, EXIT_NOT_CYCLIC),
    (ConditionUnmet, EXIT_NOT_CYCLIC),
    (GridTooCoarse, EXIT_NO_CONVERGENCE),
]

TASKS = ("design", "simulate", "phases", "verify", "sweep")


def _say(quiet: bool, message: str) -> None:
    if not quiet:
        print(message)


def _validation_diagnostic(exc: ValidationError) -> str:
    lines = []
    for err in exc.errors():
        loc = ".".join(str(p) for p in err["loc"]) or "<root>"
        lines.append(f"  {loc}: {err['msg']}")
    return "config schema violation:\n" + "\n".join(lines)


def _load_config(args) -> RunConfigDoc:
    raw = json.loads(Path(args.config).read_text())
    cfg = RunConfigDoc.model_validate(raw)
    if cfg.task != args.command:
        raise ValueError(f"config task {cfg.task!r} does not match subcommand {args.command!r}")
    updates = {}
    if args.output is not None:
        updates["output_dir"] = args.output
    if args.seed is not None:
        updates["seed"] = args.seed
    if updates:
        # revalidate: flag overrides must obey the same schema as the file
        cfg = RunConfigDoc.model_validate(cfg.model_dump() | updates)
    cfg.payload()  # validate the task payload eagerly for a line/key diagnostic
    return cfg


def _outdir(cfg: RunConfigDoc) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_design(cfg: RunConfigDoc, quiet: bool) -> int:
    response = handlers.run_design(cfg)
    out = _outdir(cfg)
    io.dump_json(out / "design.json", response.design)
    feas = response.feasibility.model_dump(mode="json")
    feas["feasible"] = response.feasible
    feas["violations"] = response.violations
    io.dump_json(out / "feasibility.json", feas)
    _say(quiet, f"wrote {out / 'design.json'} and {out / 'feasibility.json'}")
    if not response.feasible:
        _say(quiet, "design is INFEASIBLE: " + "; ".join(response.violations))
        return EXIT_INFEASIBLE
    return EXIT_OK


def _cmd_simulate(cfg: RunConfigDoc, quiet: bool) -> int:
    response = handlers.run_simulate(cfg)
    out = _outdir(cfg)
    io.dump_csv(out / "trajectory.csv", response.trajectory.header, response.trajectory.rows)
    io.dump_json(out / "gate.json", response.gate)
    _say(quiet, f"wrote {out / 'trajectory.csv'} and {out / 'gate.json'}")
    return EXIT_OK


def _cmd_phases(cfg: RunConfigDoc, quiet: bool) -> int:
    response = handlers.run_phases(cfg)
    out = _outdir(cfg)
    io.dump_json(out / "phases.json", response.report)
    _say(quiet, f"wrote {out / 'phases.json'}")
    return EXIT_OK


def _cmd_verify(cfg: RunConfigDoc, quiet: bool) -> int:
    response = handlers.run_verify(cfg)
    out = _outdir(cfg)
    io.dump_json(out / "verify.json", response)
    for check in response.checks:
        status = "pass" if check.passed else "FAIL"
        _say(quiet, f"  [{status}] {check.name}: residual {check.residual:.3e}"
                    f" (tol {check.tolerance:.1e})")
    _say(quiet, f"wrote {out / 'verify.json'}")
    return EXIT_OK if response.passed else EXIT_VERIFY_FAILED


def _cmd_sweep(cfg: RunConfigDoc, quiet: bool) -> int:
    response = handlers.run_sweep(cfg)
    out = _outdir(cfg)
    io.dump_csv(out / "sweep.csv", response.header, response.rows)
    _say(quiet, f"wrote {out / 'sweep.csv'} ({response.n_ok} ok, {response.n_failed} failed)")
    if response.n_ok == 0:
        return EXIT_SCHEMA
    return EXIT_OK


_COMMANDS = {
    "design": _cmd_design,
    "simulate": _cmd_simulate,
    "phases": _cmd_phases,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
}


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinforge",
        description="Two-qubit NMR geometric phase gate simulator and pulse designer",
    )
    parser.add_argument("--version", action="version", version=f"spinforge {__version__}")
    parser.add_argument(
        "--emit-schema",
        action="store_true",
        help="print the JSON schemas of all documents and exit",
    )
    sub = parser.add_subparsers(dest="command")
    for task in TASKS:
        p = sub.add_parser(task, help=f"run the {task} task from a config file")
        p.add_argument("--config", required=True, help="path to a run-config JSON document")
        p.add_argument("--output", default=None, help="output directory (overrides config)")
        p.add_argument("--seed", type=int, default=None, help="seed (overrides config)")
        p.add_argument("--quiet", action="store_true", help="suppress progress messages")
    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.emit_schema:
        print(json.dumps(all_schemas(), sort_keys=True, indent=2))
        return EXIT_OK
    if args.command is None:
        parser.print_usage(_sys.stderr)
        print("error: a subcommand or --emit-schema is required", file=_sys.stderr)
        return EXIT_SCHEMA
    if args.command == "serve":
        return _cmd_serve(args)
    quiet = args.quiet
    try:
        cfg = _load_config(args)
    except ValidationError as exc:
        print(_validation_diagnostic(exc), file=_sys.stderr)
        return EXIT_SCHEMA
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"config error: {exc}", file=_sys.stderr)
        return EXIT_SCHEMA
    try:
        return _COMMANDS[args.command](cfg, quiet)
    except ValidationError as exc:
        print(_validation_diagnostic(exc), file=_sys.stderr)
        return EXIT_SCHEMA
    except OSError as exc:
        print(f"output error: {exc}", file=_sys.stderr)
        return EXIT_SCHEMA
    except SpinforgeError as exc:
        for err_type, code in _EXIT_BY_ERROR:
            if isinstance(exc, err_type):
                print(f"{exc.code}: {exc}", file=_sys.stderr)
                return code
        print(f"{exc.code}: {exc}", file=_sys.stderr)
        return EXIT_SCHEMA


if __name__ == "__main__":
    raise SystemExit(main())
