"""
SqueezeLab — coupled oscillators, entanglement entropy and Lorentz squeezing
============================================================================
- entropy-sweep : purity, entropy and effective temperature over an η range
- schmidt       : reduced-density spectrum (optionally against the partial-trace oracle)
- squeeze-grid  : |ψ_η(z,t)|² or |φ_η(q_z,q_0)|² on a square grid
- parton-report : decoherence metrics for a hadron at a given beam energy
- verify        : run every invariant check, exit 4 on any failure

Exit codes: 0 ok, 2 usage/validation, 3 numerical domain, 4 verification failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

import pandas as pd
from pydantic import ValidationError

from core import config
from core.errors import DomainError, SqueezeLabError, UsageError
from services import metrics
from services.commands import (
    cmd_entropy_sweep,
    cmd_parton_report,
    cmd_schmidt,
    cmd_squeeze_grid,
    cmd_verify,
)
from services.output.table_writer import emit, render_json, render_table
from services.schemas import (
    EntropySweepConfig,
    OutputFormat,
    PartonReportConfig,
    RunConfig,
    SchmidtConfig,
    SqueezeGridConfig,
    Subcommand,
    ToleranceProfile,
    VerifyConfig,
)

logger = logging.getLogger("squeezelab")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_VERIFY_FAILED = 4

_CONFIGS = {
    Subcommand.ENTROPY_SWEEP: EntropySweepConfig,
    Subcommand.SCHMIDT: SchmidtConfig,
    Subcommand.SQUEEZE_GRID: SqueezeGridConfig,
    Subcommand.PARTON_REPORT: PartonReportConfig,
    Subcommand.VERIFY: VerifyConfig,
}

# argparse dest → RunConfig field
_RENAMES = {"format": "output_format", "output": "output_path"}
_NOT_CONFIG = {"command", "log_level", "strict"}


# ── Argument parsing ─────────────────────────────────────────────────────────

def _common(parser: argparse.ArgumentParser, default_format: Optional[str] = None) -> None:
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], default=default_format)
    parser.add_argument("--output", help="write to this file instead of stdout")
    parser.add_argument("--workers", type=int, help=f"grid worker threads (default {config.WORKERS})")
    parser.add_argument("--log-level", default=None, help=f"logging level (default {config.LOG_LEVEL})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="squeezelab", description=__doc__.splitlines()[1])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(Subcommand.ENTROPY_SWEEP.value, help="purity/entropy/temperature over an η range")
    p.add_argument("--eta-min", type=float, required=True)
    p.add_argument("--eta-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--omega", type=float)
    _common(p)

    p = sub.add_parser(Subcommand.SCHMIDT.value, help="reduced-density spectrum λ_k")
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--tol", type=float)
    p.add_argument("--kmax", type=int)
    p.add_argument("--oracle", action="store_true", default=None, help="add partial-trace oracle columns (k ≤ 30)")
    _common(p)

    p = sub.add_parser(Subcommand.SQUEEZE_GRID.value, help="|amplitude|² on a square grid")
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--extent", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--representation", choices=["space", "momentum"])
    _common(p)

    p = sub.add_parser(Subcommand.PARTON_REPORT.value, help="parton decoherence metrics (JSON)")
    p.add_argument("--beam-energy-gev", type=float, required=True)
    p.add_argument("--mass-gev", type=float)
    p.add_argument("--omega", type=float)
    p.add_argument("--energy-convention", choices=["total", "momentum"])
    _common(p, default_format=OutputFormat.JSON.value)

    p = sub.add_parser(Subcommand.VERIFY.value, help="run the invariant suite")
    p.add_argument("--profile", choices=[t.value for t in ToleranceProfile])
    p.add_argument("--strict", action="store_true", help="shorthand for --profile strict")
    p.add_argument("--metrics-file", help="write Prometheus text metrics to this path")
    _common(p)
    return parser


def _configure_logging(level_name: Optional[str]) -> None:
    level_name = (level_name or config.LOG_LEVEL).upper()
    level = logging.getLevelName(level_name)
    if not isinstance(level, int):
        raise UsageError(f"unknown log level {level_name!r}")
    logging.basicConfig(
        level=level,
        format="%(asctime)s | %(levelname)-8s | %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
        force=True,
    )


def build_config(args: argparse.Namespace) -> RunConfig:
    """Namespace → validated pydantic model. Unset flags fall back to model defaults."""
    subcommand = Subcommand(args.command)
    fields = {
        _RENAMES.get(name, name): value
        for name, value in vars(args).items()
        if value is not None and name not in _NOT_CONFIG
    }
    if subcommand is Subcommand.VERIFY and args.strict:
        if fields.get("profile", ToleranceProfile.STRICT.value) != ToleranceProfile.STRICT.value:
            raise UsageError("--strict conflicts with --profile fast")
        fields["profile"] = ToleranceProfile.STRICT
    return _CONFIGS[subcommand](**fields)


# ── Error reporting ──────────────────────────────────────────────────────────

def _report_error(exc: Exception, exit_code: int, as_json: bool) -> int:
    if isinstance(exc, ValidationError):
        message = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in exc.errors()
        )
    else:
        message = str(exc)
    if as_json:
        emit(render_json({"error": {"type": type(exc).__name__, "message": message, "exit_code": exit_code}}))
    else:
        sys.stderr.write(f"squeezelab: error: {message}\n")
    return exit_code


def _wants_json(args: argparse.Namespace) -> bool:
    if args.format is not None:
        return args.format == OutputFormat.JSON.value
    return args.command == Subcommand.PARTON_REPORT.value


# ── Dispatch ─────────────────────────────────────────────────────────────────

def run(cfg: RunConfig) -> int:
    fmt = cfg.output_format.value
    if isinstance(cfg, EntropySweepConfig):
        text = render_table(cmd_entropy_sweep(cfg), fmt)
    elif isinstance(cfg, SchmidtConfig):
        text = render_table(cmd_schmidt(cfg), fmt)
    elif isinstance(cfg, SqueezeGridConfig):
        text = render_table(cmd_squeeze_grid(cfg), fmt)
    elif isinstance(cfg, PartonReportConfig):
        document = cmd_parton_report(cfg)
        if cfg.output_format is OutputFormat.JSON:
            text = render_json(document)
        else:
            text = render_table(pd.DataFrame([document]), fmt)
    else:
        frame, report = cmd_verify(cfg)
        if cfg.metrics_file is not None:
            metrics.write_metrics(cfg.metrics_file)
        if cfg.output_format is OutputFormat.JSON:
            text = render_json({
                "profile": report.profile.value,
                "passed": report.passed,
                "checks": [r.to_dict() for r in report.results],
            })
        else:
            text = render_table(frame, fmt)
        emit(text, cfg.output_path)
        return EXIT_OK if report.passed else EXIT_VERIFY_FAILED
    emit(text, cfg.output_path)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    as_json = _wants_json(args)
    try:
        _configure_logging(args.log_level)
        cfg = build_config(args)
    except (ValidationError, UsageError) as exc:
        return _report_error(exc, EXIT_USAGE, as_json)

    logger.info("squeezelab %s starting", cfg.subcommand.value)
    try:
        return run(cfg)
    except DomainError as exc:
        logger.error("domain error: %s", exc)
        return _report_error(exc, EXIT_DOMAIN, as_json)
    except SqueezeLabError as exc:
        return _report_error(exc, exc.exit_code, as_json)
    except Exception as exc:
        # numerical failures no module anticipated (overflow, non-JSON floats)
        logger.exception("unexpected %s", type(exc).__name__)
        return _report_error(exc, EXIT_DOMAIN, as_json)


if __name__ == "__main__":
    sys.exit(main())
