"""
Two identical oscillators coupled by a spring.

    H = (p1² + p2²)/2m + ½{K(x1² + x2²) + 2C x1 x2}

The rotation y1 = (x1 − x2)/√2, y2 = (x1 + x2)/√2 separates H into two
independent modes with spring constants K − C and K + C. The ground state
depends on the system only through the squeeze parameter

    e^η = √((K + C)/(K − C)).

Positions are dimensionless (units of (mK)^{1/4}), ħ = 1. Momenta are not
modelled: nothing here is time-evolved, the module only produces η and ψ_η.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from core.errors import DomainError
from core.numerics import integrate_2d, rule_for_width

logger = logging.getLogger("squeezelab.oscillator_core")

SQRT_HALF = math.sqrt(0.5)
PI_MINUS_HALF = 1.0 / math.sqrt(math.pi)


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")
    return value


@dataclass(frozen=True)
class OscillatorSystem:
    """Mass m, spring constant K and coupling C. Requires m > 0, K > 0, |C| < K."""
    m: float
    K: float
    C: float = 0.0

    def __post_init__(self) -> None:
        m, K, C = (_finite(n, getattr(self, n)) for n in ("m", "K", "C"))
        if m <= 0:
            raise DomainError(f"mass must be positive, got m={m}")
        if K <= 0:
            raise DomainError(f"spring constant must be positive, got K={K}")
        if abs(C) >= K:
            raise DomainError(
                f"|C| must be smaller than K for a bound potential, got K={K}, C={C}"
            )
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "C", C)

    @classmethod
    def from_eta(cls, eta: float, m: float = 1.0, K: float = 1.0) -> "OscillatorSystem":
        return cls(m=m, K=K, C=coupling_for_eta(eta, K))

    def to_dict(self) -> dict:
        return {"m": self.m, "K": self.K, "C": self.C}


@dataclass(frozen=True)
class Squeeze:
    """Signed squeeze parameter. η → −η swaps the roles of the two normal modes."""
    eta: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "eta", _finite("eta", self.eta))

    @property
    def factor(self) -> float:
        return math.exp(self.eta)

    def flipped(self) -> "Squeeze":
        return Squeeze(-self.eta)


@dataclass(frozen=True)
class NormalCoordinates:
    y1: float
    y2: float

    def to_cartesian(self) -> tuple[float, float]:
        return from_normal(self)


# ── Squeeze parameter ────────────────────────────────────────────────────────

def eta_from_coupling(sys: OscillatorSystem) -> Squeeze:
    """η = ½ ln((K + C)/(K − C)) = artanh(C/K)."""
    if abs(sys.C) >= sys.K:
        raise DomainError(f"|C| ≥ K gives an unbound potential (K={sys.K}, C={sys.C})")
    eta = math.atanh(sys.C / sys.K)
    logger.debug("eta_from_coupling: K=%g C=%g → η=%.17g", sys.K, sys.C, eta)
    return Squeeze(eta)


def coupling_for_eta(eta: float, K: float = 1.0) -> float:
    """Inverse of eta_from_coupling at fixed K: C = K tanh η."""
    return float(K) * math.tanh(_finite("eta", eta))


def potential_eigen_eta(sys: OscillatorSystem) -> float:
    """
    η from diagonalizing the potential matrix [[K, C], [C, K]].

    The symmetric eigenvector (1, 1)/√2 carries K + C, the antisymmetric one K − C.
    """
    values, vectors = np.linalg.eigh(np.array([[sys.K, sys.C], [sys.C, sys.K]]))
    symmetric = int(np.argmax(np.abs(vectors[0] + vectors[1])))
    lam_sym, lam_anti = values[symmetric], values[1 - symmetric]
    return 0.5 * math.log(lam_sym / lam_anti)


def normal_mode_frequencies(sys: OscillatorSystem) -> tuple[float, float]:
    """(ω₋, ω₊) = (√((K − C)/m), √((K + C)/m)) of the y1 and y2 modes."""
    return math.sqrt((sys.K - sys.C) / sys.m), math.sqrt((sys.K + sys.C) / sys.m)


# ── Normal coordinates ───────────────────────────────────────────────────────

def _rotate(x1, x2):
    return (x1 - x2) * SQRT_HALF, (x1 + x2) * SQRT_HALF


def to_normal(x1: float, x2: float) -> NormalCoordinates:
    y1, y2 = _rotate(float(x1), float(x2))
    return NormalCoordinates(y1=y1, y2=y2)


def from_normal(y: NormalCoordinates) -> tuple[float, float]:
    return (y.y1 + y.y2) * SQRT_HALF, (y.y2 - y.y1) * SQRT_HALF


# ── Ground state ─────────────────────────────────────────────────────────────

def ground_state_for_eta(eta: float) -> Callable:
    """
    ψ_η(x1, x2) = π^{-1/2} exp{−½(e^η y1² + e^{−η} y2²)}.

    The evaluator accepts scalars (returns float) or broadcastable arrays.
    """
    eta = _finite("eta", eta)
    wide, narrow = math.exp(eta), math.exp(-eta)

    def psi(x1, x2):
        a1 = np.asarray(x1, dtype=float)
        a2 = np.asarray(x2, dtype=float)
        y1, y2 = _rotate(a1, a2)
        value = PI_MINUS_HALF * np.exp(-0.5 * (wide * y1 * y1 + narrow * y2 * y2))
        return float(value) if value.ndim == 0 else value

    return psi


def ground_state(sys: OscillatorSystem) -> Callable:
    return ground_state_for_eta(eta_from_coupling(sys).eta)


def normalization(sys: OscillatorSystem, points: int | None = None) -> float:
    """
    ∬ ψ² dx1 dx2 by quadrature.

    Integrated in normal coordinates (orthogonal map, unit Jacobian) so each
    axis gets a rule matched to its own Gaussian width e^{∓η/2}.
    """
    eta = eta_from_coupling(sys).eta
    psi = ground_state_for_eta(eta)

    def density(y1, y2):
        x1, x2 = (y1 + y2) * SQRT_HALF, (y2 - y1) * SQRT_HALF
        return psi(x1, x2) ** 2

    return integrate_2d(
        density,
        rule_for_width(math.exp(-0.5 * eta), points),
        rule_for_width(math.exp(0.5 * eta), points),
    )
