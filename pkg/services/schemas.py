"""
schemas.py — Pydantic v2 run configurations, one model per subcommand.

Field constraints cover ranges the CLI can reject before any computation
(exit 2). Mathematical preconditions owned by the physics modules are left to
those modules and surface as DomainError (exit 3).
"""
from __future__ import annotations

from enum import Enum
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from core import config
from services.lorentz_squeeze import Representation
from services.parton_decoherence import EnergyConvention


# ---------------------------------------------------------------------------
# Enums
# ---------------------------------------------------------------------------

class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class Subcommand(str, Enum):
    ENTROPY_SWEEP = "entropy-sweep"
    SCHMIDT = "schmidt"
    SQUEEZE_GRID = "squeeze-grid"
    PARTON_REPORT = "parton-report"
    VERIFY = "verify"


class ToleranceProfile(str, Enum):
    FAST = "fast"
    STRICT = "strict"


# ---------------------------------------------------------------------------
# Run configurations
# ---------------------------------------------------------------------------

class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    subcommand: Subcommand
    output_format: OutputFormat = OutputFormat.CSV
    output_path: Optional[Path] = None
    workers: int = Field(default=config.WORKERS, ge=1, le=64)


class EntropySweepConfig(RunConfig):
    subcommand: Subcommand = Subcommand.ENTROPY_SWEEP
    eta_min: float = Field(..., ge=0.0)
    eta_max: float = Field(..., le=config.MAX_SWEEP_ETA)
    steps: int = Field(..., ge=2, le=1_000_000)
    omega: float = Field(default=1.0, gt=0.0)

    @model_validator(mode="after")
    def _range_not_degenerate(self) -> "EntropySweepConfig":
        if not self.eta_max > self.eta_min:
            raise ValueError(
                f"eta_max must exceed eta_min (got [{self.eta_min}, {self.eta_max}])"
            )
        return self


class SchmidtConfig(RunConfig):
    subcommand: Subcommand = Subcommand.SCHMIDT
    eta: float
    tol: float = Field(default=config.SERIES_TOL, gt=0.0, lt=1.0)
    kmax: Optional[int] = Field(default=None, ge=0)
    oracle: bool = False


class SqueezeGridConfig(RunConfig):
    subcommand: Subcommand = Subcommand.SQUEEZE_GRID
    eta: float = Field(..., ge=-config.MAX_BOOST_ETA, le=config.MAX_BOOST_ETA)
    extent: float = Field(default=8.0, gt=0.0)
    points: int = Field(default=101, ge=5, le=4096)
    representation: Representation = Representation.SPACE


class PartonReportConfig(RunConfig):
    subcommand: Subcommand = Subcommand.PARTON_REPORT
    output_format: OutputFormat = OutputFormat.JSON
    beam_energy_gev: float
    mass_gev: float = Field(default=config.PROTON_MASS_GEV, gt=0.0)
    omega: float = Field(default=1.0, gt=0.0)
    energy_convention: EnergyConvention = EnergyConvention.TOTAL


class VerifyConfig(RunConfig):
    subcommand: Subcommand = Subcommand.VERIFY
    profile: ToleranceProfile = ToleranceProfile.FAST
    metrics_file: Optional[Path] = None
