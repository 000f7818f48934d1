"""
Subcommand implementations. Each takes a validated run configuration and
returns the complete result; nothing here writes to stdout or files.
"""
from __future__ import annotations

import logging

import numpy as np
import pandas as pd

from services import entanglement_entropy as ee
from services.lorentz_squeeze import BoostedOscillatorState, Representation, density_grid
from services.oscillator_core import OscillatorSystem
from services.parton_decoherence import PartonKinematics, parton_report
from services.schemas import (
    EntropySweepConfig,
    PartonReportConfig,
    SchmidtConfig,
    SqueezeGridConfig,
    VerifyConfig,
)
from services.verify_suite import SuiteReport, run_suite

logger = logging.getLogger("squeezelab.commands")

GRID_COLUMNS = {
    Representation.SPACE: ("z", "t", "density"),
    Representation.MOMENTUM: ("qz", "q0", "density"),
}


def cmd_entropy_sweep(cfg: EntropySweepConfig) -> pd.DataFrame:
    """Rows (eta, purity, entropy, temperature) on a uniform η grid."""
    etas = np.linspace(cfg.eta_min, cfg.eta_max, cfg.steps)
    rows = [
        (float(eta), ee.purity(eta), ee.entropy(eta), ee.effective_temperature(eta, cfg.omega).temperature)
        for eta in etas
    ]
    logger.info("entropy-sweep: %d rows on [%g, %g], ω=%g", len(rows), cfg.eta_min, cfg.eta_max, cfg.omega)
    return pd.DataFrame.from_records(rows, columns=["eta", "purity", "entropy", "temperature"])


def cmd_schmidt(cfg: SchmidtConfig) -> pd.DataFrame:
    """
    Rows (k, lambda, cumulative) of the reduced-density spectrum.

    With oracle, rows stop at k = min(kmax, 30) and gain the partial-trace
    eigenvalue and its absolute deviation.
    """
    spectrum = ee.schmidt_spectrum(cfg.eta, cfg.tol, cfg.kmax)
    frame = pd.DataFrame({
        "k": np.arange(spectrum.lambdas.size, dtype=np.int64),
        "lambda": spectrum.lambdas,
        "cumulative": np.cumsum(spectrum.lambdas),
    })
    if cfg.oracle:
        kmax = min(spectrum.kmax, ee.MAX_ORACLE_ORDER)
        oracle = ee.reduced_density_eigenvalues_oracle(OscillatorSystem.from_eta(cfg.eta), kmax)
        frame = frame.iloc[: kmax + 1].copy()
        frame["oracle_lambda"] = oracle
        frame["abs_error"] = np.abs(oracle - frame["lambda"].to_numpy())
    logger.info("schmidt: η=%g %d rows (oracle=%s)", cfg.eta, len(frame), cfg.oracle)
    return frame


def cmd_squeeze_grid(cfg: SqueezeGridConfig) -> pd.DataFrame:
    """Rows (coord1, coord2, |amplitude|²) in row-major order over [−extent, extent]²."""
    nodes, density = density_grid(
        BoostedOscillatorState(cfg.eta), cfg.representation, cfg.extent, cfg.points, cfg.workers,
    )
    first, second, value = GRID_COLUMNS[Representation(cfg.representation)]
    return pd.DataFrame({
        first: np.repeat(nodes, nodes.size),
        second: np.tile(nodes, nodes.size),
        value: density.ravel(),
    })


def cmd_parton_report(cfg: PartonReportConfig) -> dict:
    kin = PartonKinematics(
        beam_energy=cfg.beam_energy_gev, mass=cfg.mass_gev, convention=cfg.energy_convention,
    )
    return parton_report(kin, cfg.omega).to_dict()


def cmd_verify(cfg: VerifyConfig) -> tuple[pd.DataFrame, SuiteReport]:
    report = run_suite(cfg.profile)
    frame = pd.DataFrame.from_records(
        [r.to_dict() for r in report.results],
        columns=["check", "error", "bound", "status", "detail"],
    )
    return frame, report
