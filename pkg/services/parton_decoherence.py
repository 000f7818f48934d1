"""
Parton decoherence metrics for a hadron boosted to rapidity η.

A boosted hadron's internal oscillation period dilates by e^η while the time a
light-like projectile needs to cross the contracted hadron shrinks by e^{−η}, so the
interaction-time / period ratio falls like e^{−2η}. At Fermilab energies the
ratio is of order 10^{-6} and the constituents look free and incoherent.
The entropy fields come from tracing out the unobserved time-separation
variable (entanglement_entropy); the widths from lorentz_squeeze.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from core import config
from core.errors import DomainError
from services.entanglement_entropy import effective_temperature, entropy
from services.lorentz_squeeze import (
    BoostedOscillatorState,
    WidthAxis,
    light_cone_variances,
    marginal_width,
    oscillator_equivalent_eta,
)

logger = logging.getLogger("squeezelab.parton_decoherence")


class EnergyConvention(str, Enum):
    TOTAL = "total"        # beam value is E (rest energy included)
    MOMENTUM = "momentum"  # beam value is |p|


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be positive and finite, got {value}")
    return value


def rapidity_from_beam(
    beam_energy: float,
    mass: float,
    convention: EnergyConvention = EnergyConvention.TOTAL,
) -> float:
    """
    η = ln((E + p)/m) = artanh(p/E).

    With the total convention E ≥ m is required and p = √(E − m)·√(E + m).
    Below E = 2m the log1p form keeps E → m⁺ accurate; above it
    ln E + ln(1 + p/E) − ln m cannot overflow. With the momentum convention the
    beam value is p ≥ 0 and η = arsinh(p/m).
    """
    mass = _positive("mass", mass)
    value = float(beam_energy)
    if not math.isfinite(value):
        raise DomainError(f"beam energy must be finite, got {value}")
    convention = EnergyConvention(convention)

    if convention is EnergyConvention.MOMENTUM:
        if value < 0:
            raise DomainError(f"beam momentum must be non-negative, got {value}")
        ratio = value / mass
        if not math.isfinite(ratio):
            raise DomainError(f"beam momentum {value} GeV over mass {mass} GeV overflows")
        return math.asinh(ratio)

    if value < mass:
        raise DomainError(
            f"beam energy {value} GeV is below the rest mass {mass} GeV (E ≥ m required)"
        )
    p = math.sqrt(value - mass) * math.sqrt(value + mass)
    if value < 2.0 * mass:
        eta = math.log1p((value - mass + p) / mass)
    else:
        eta = math.log(value) + math.log1p(p / value) - math.log(mass)
    if not math.isfinite(eta):
        raise DomainError(f"rapidity overflows for beam energy {value} GeV and mass {mass} GeV")
    return eta


@dataclass(frozen=True)
class PartonKinematics:
    """Beam value (GeV) and hadron mass (GeV); rapidity is derived on construction."""
    beam_energy: float
    mass: float = config.PROTON_MASS_GEV
    convention: EnergyConvention = EnergyConvention.TOTAL
    rapidity: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "convention", EnergyConvention(self.convention))
        object.__setattr__(
            self, "rapidity", rapidity_from_beam(self.beam_energy, self.mass, self.convention)
        )

    @classmethod
    def at_rest(cls, mass: float = config.PROTON_MASS_GEV) -> "PartonKinematics":
        return cls(beam_energy=mass, mass=mass)


@dataclass(frozen=True)
class PartonReport:
    rapidity: float
    period_dilation: float
    interaction_ratio: float
    entropy: float
    var_z: float
    var_qz: float
    beam_energy_gev: float
    mass_gev: float
    energy_convention: EnergyConvention
    temperature: float
    time_separation_entropy: float
    light_cone_width_ratio: float
    paper_reference_ratio: float = config.REFERENCE_RATIO

    @property
    def widths(self) -> tuple[float, float]:
        return self.var_z, self.var_qz

    def to_dict(self) -> dict:
        """Stable field order: the core metrics first, context after."""
        return {
            "rapidity": self.rapidity,
            "period_dilation": self.period_dilation,
            "interaction_ratio": self.interaction_ratio,
            "entropy": self.entropy,
            "var_z": self.var_z,
            "var_qz": self.var_qz,
            "paper_reference_ratio": self.paper_reference_ratio,
            "beam_energy_gev": self.beam_energy_gev,
            "mass_gev": self.mass_gev,
            "energy_convention": self.energy_convention.value,
            "temperature": self.temperature,
            "time_separation_entropy": self.time_separation_entropy,
            "light_cone_width_ratio": self.light_cone_width_ratio,
        }


def parton_report(kin: PartonKinematics, omega: float = 1.0) -> PartonReport:
    """Aggregate every metric at kin.rapidity. Nothing is recomputed from the beam value."""
    eta = kin.rapidity
    thermal = effective_temperature(eta, omega)
    state = BoostedOscillatorState(eta)
    var_u, var_v = light_cone_variances(state)

    report = PartonReport(
        rapidity=eta,
        period_dilation=math.exp(eta),
        interaction_ratio=math.exp(-2.0 * eta),
        entropy=entropy(eta),
        var_z=marginal_width(state, WidthAxis.SPACE_Z),
        var_qz=marginal_width(state, WidthAxis.MOMENTUM_QZ),
        beam_energy_gev=float(kin.beam_energy),
        mass_gev=float(kin.mass),
        energy_convention=kin.convention,
        temperature=thermal.temperature,
        time_separation_entropy=entropy(oscillator_equivalent_eta(eta)),
        light_cone_width_ratio=var_u / var_v,
    )
    overflowed = [
        name for name, value in report.to_dict().items()
        if isinstance(value, float) and not math.isfinite(value)
    ]
    if overflowed:
        raise DomainError(f"parton report not representable at η={eta:g}: {', '.join(overflowed)} overflow")
    logger.info(
        "parton_report: E=%g m=%g (%s) η=%.6f ratio=%.3e",
        kin.beam_energy, kin.mass, kin.convention.value, eta, report.interaction_ratio,
    )
    return report


def energy_sweep(
    energies: Iterable[float],
    mass: float = config.PROTON_MASS_GEV,
    omega: float = 1.0,
    convention: EnergyConvention = EnergyConvention.TOTAL,
) -> list[PartonReport]:
    """One report per beam value, in input order."""
    return [
        parton_report(PartonKinematics(beam_energy=e, mass=mass, convention=convention), omega)
        for e in energies
    ]
