"""
Lorentz-squeezed covariant oscillator in the (z, t) plane.

Light-cone variables u = (z + t)/√2, v = (z − t)/√2 turn a boost along z into
a squeeze: u' = e^η u, v' = e^{−η} v. The normalizable ground state of

    ½{(t² − z²) − (∂²/∂t² − ∂²/∂z²)} ψ = λ ψ,   λ = 0,

boosted by η is

    ψ_η(z, t) = π^{-1/2} exp{−½(e^{−2η} u² + e^{2η} v²)},

and the momentum-energy wave function φ_η(q_z, q_0) has the same form in
q_u = (q_0 − q_z)/√2, q_v = (q_0 + q_z)/√2. Only the 1+1-dimensional
longitudinal reduction is implemented; transverse coordinates never enter.

Quadratures run in light-cone coordinates (orthogonal to (z, t), unit
Jacobian) so each axis gets a rule matched to its own width e^{±η}.
"""
from __future__ import annotations

import asyncio
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from core import config
from core.errors import DomainError
from core.numerics import QuadratureRule, integrate_2d, rule_for_width
from services.oscillator_core import Squeeze

logger = logging.getLogger("squeezelab.lorentz_squeeze")

SQRT_HALF = math.sqrt(0.5)
SQRT_TWO = math.sqrt(2.0)
PI_MINUS_HALF = 1.0 / math.sqrt(math.pi)
EIGENVALUE = 0.0  # λ of the ground state; forced by the Minkowski cancellation
MIN_RESIDUAL_POINTS = 5
MAX_RESIDUAL_SPACING = 1e-2


class Representation(str, Enum):
    SPACE = "space"
    MOMENTUM = "momentum"


class WidthAxis(str, Enum):
    SPACE_Z = "space_z"
    MOMENTUM_QZ = "momentum_qz"


@dataclass(frozen=True)
class SpacetimePoint:
    z: float
    t: float
    u: float = field(init=False)
    v: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "u", (self.z + self.t) * SQRT_HALF)
        object.__setattr__(self, "v", (self.z - self.t) * SQRT_HALF)

    @classmethod
    def from_zt(cls, z: float, t: float) -> "SpacetimePoint":
        return cls(float(z), float(t))

    @classmethod
    def from_uv(cls, u: float, v: float) -> "SpacetimePoint":
        return cls((u + v) * SQRT_HALF, (u - v) * SQRT_HALF)

    def interval(self) -> float:
        """(z² − t²)/2, the boost invariant; equals u·v."""
        return 0.5 * (self.z * self.z - self.t * self.t)


@dataclass(frozen=True)
class MomentumPoint:
    qz: float
    q0: float
    qu: float = field(init=False)
    qv: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "qu", (self.q0 - self.qz) * SQRT_HALF)
        object.__setattr__(self, "qv", (self.q0 + self.qz) * SQRT_HALF)

    @classmethod
    def from_components(cls, qz: float, q0: float) -> "MomentumPoint":
        return cls(float(qz), float(q0))

    @classmethod
    def from_light_cone(cls, qu: float, qv: float) -> "MomentumPoint":
        return cls((qv - qu) * SQRT_HALF, (qu + qv) * SQRT_HALF)

    def interval(self) -> float:
        """(q0² − qz²)/2; equals qu·qv."""
        return 0.5 * (self.q0 * self.q0 - self.qz * self.qz)


@dataclass(frozen=True)
class BoostedOscillatorState:
    """Ground state boosted by rapidity η (shares the squeeze parameter type)."""
    eta: float

    def __post_init__(self) -> None:
        eta = Squeeze(self.eta).eta
        if abs(eta) > config.MAX_BOOST_ETA:
            raise DomainError(
                f"boost rapidity |η| must not exceed {config.MAX_BOOST_ETA:g} (e^{{2η}} overflows), got {eta}"
            )
        object.__setattr__(self, "eta", eta)

    @property
    def squeeze(self) -> Squeeze:
        return Squeeze(self.eta)

    def light_cone_rules(self, points: int | None = None) -> tuple[QuadratureRule, QuadratureRule]:
        """Rules for the (wide, narrow) = (e^η, e^{−η}) light-cone axes."""
        return (
            rule_for_width(math.exp(self.eta), points),
            rule_for_width(math.exp(-self.eta), points),
        )


@dataclass(frozen=True)
class ResidualGrid:
    """Evaluation nodes on [−extent, extent]², finite-difference step `spacing`."""
    extent: float
    spacing: float
    points: int = 41

    def __post_init__(self) -> None:
        if self.points < MIN_RESIDUAL_POINTS:
            raise DomainError(
                f"degenerate residual grid: {self.points} points per axis "
                f"(need ≥ {MIN_RESIDUAL_POINTS})"
            )
        if not (math.isfinite(self.extent) and self.extent > 0):
            raise DomainError(f"grid extent must be positive, got {self.extent}")
        if not (0 < self.spacing <= MAX_RESIDUAL_SPACING):
            raise DomainError(
                f"finite-difference spacing must lie in (0, {MAX_RESIDUAL_SPACING}], got {self.spacing}"
            )

    def nodes(self) -> np.ndarray:
        return symmetric_nodes(self.extent, self.points)

    def halved(self) -> "ResidualGrid":
        return ResidualGrid(self.extent, 0.5 * self.spacing, self.points)


def symmetric_nodes(extent: float, points: int) -> np.ndarray:
    """points nodes on [−extent, extent], exactly antisymmetric under reversal."""
    unit = np.linspace(-1.0, 1.0, points)
    return extent * 0.5 * (unit - unit[::-1])


# ── Boosts ───────────────────────────────────────────────────────────────────

def boost(point: SpacetimePoint, eta: float) -> SpacetimePoint:
    """(z', t') = (z cosh η + t sinh η, z sinh η + t cosh η)."""
    ch, sh = math.cosh(eta), math.sinh(eta)
    return SpacetimePoint(point.z * ch + point.t * sh, point.z * sh + point.t * ch)


def boost_light_cone(point: SpacetimePoint, eta: float) -> SpacetimePoint:
    """Same boost as reciprocal scaling: u' = e^η u, v' = e^{−η} v."""
    return SpacetimePoint.from_uv(math.exp(eta) * point.u, math.exp(-eta) * point.v)


def boost_momentum(point: MomentumPoint, eta: float) -> MomentumPoint:
    """The boost matrix acting on (q_z, q_0): q_v' = e^η q_v, q_u' = e^{−η} q_u."""
    ch, sh = math.cosh(eta), math.sinh(eta)
    return MomentumPoint(point.qz * ch + point.q0 * sh, point.qz * sh + point.q0 * ch)


def oscillator_equivalent_eta(boost_eta: float) -> float:
    """
    Coupled-oscillator squeeze parameter reproducing ψ_η(z, t) as ψ(x1=z, x2=t).

    y1 ↔ v and y2 ↔ u, with weights e^{±2η} in place of e^{±η}.
    """
    return 2.0 * boost_eta


# ── Wave functions ───────────────────────────────────────────────────────────

def _squeezed_gaussian(eta: float) -> Callable:
    contracted, expanded = math.exp(-2.0 * eta), math.exp(2.0 * eta)

    def amplitude(a, b):
        return PI_MINUS_HALF * np.exp(-0.5 * (contracted * a * a + expanded * b * b))

    return amplitude


def spatial_wavefunction(state: BoostedOscillatorState) -> Callable:
    """ψ_η(z, t); at η = 0 the circular ground state π^{-1/2} e^{−(z²+t²)/2}."""
    amplitude = _squeezed_gaussian(state.eta)

    def psi(z, t):
        z = np.asarray(z, dtype=float)
        t = np.asarray(t, dtype=float)
        value = amplitude((z + t) * SQRT_HALF, (z - t) * SQRT_HALF)
        return float(value) if value.ndim == 0 else value

    return psi


def momentum_wavefunction(state: BoostedOscillatorState) -> Callable:
    """φ_η(q_z, q_0); pointwise equal to ψ_η(q_z, −q_0)."""
    amplitude = _squeezed_gaussian(state.eta)

    def phi(qz, q0):
        qz = np.asarray(qz, dtype=float)
        q0 = np.asarray(q0, dtype=float)
        value = amplitude((q0 - qz) * SQRT_HALF, (q0 + qz) * SQRT_HALF)
        return float(value) if value.ndim == 0 else value

    return phi


def _density_in_light_cone(state: BoostedOscillatorState, representation: Representation) -> Callable:
    """
    |amplitude|² as a function of its own (wide, narrow) light-cone pair.

    ψ in (u, v) and φ in (q_u, q_v) are the same squeezed Gaussian. It is evaluated
    on the pair directly: going through (z, t) loses the narrow coordinate once
    e^{−2η} drops below double-precision resolution (η ≳ 18).
    """
    Representation(representation)
    amplitude = _squeezed_gaussian(state.eta)
    return lambda wide, narrow: amplitude(wide, narrow) ** 2


def normalization(
    state: BoostedOscillatorState,
    representation: Representation = Representation.SPACE,
    points: int | None = None,
) -> float:
    density = _density_in_light_cone(state, Representation(representation))
    return integrate_2d(density, *state.light_cone_rules(points))


def light_cone_variances(
    state: BoostedOscillatorState,
    points: int | None = None,
) -> tuple[float, float]:
    """(Var u, Var v) under |ψ_η|²; e^{2η}/2 and e^{−2η}/2."""
    density = _density_in_light_cone(state, Representation.SPACE)
    rules = state.light_cone_rules(points)
    norm = integrate_2d(density, *rules)
    var_u = integrate_2d(lambda u, v: u * u * density(u, v), *rules) / norm
    var_v = integrate_2d(lambda u, v: v * v * density(u, v), *rules) / norm
    return var_u, var_v


def marginal_width(
    state: BoostedOscillatorState,
    which: WidthAxis,
    points: int | None = None,
) -> float:
    """
    Var(z) under |ψ_η|² or Var(q_z) under |φ_η|², by quadrature.

    Both equal cosh(2η)/2: the space-time and momentum-energy widths grow together.
    """
    which = WidthAxis(which)
    if which is WidthAxis.SPACE_Z:
        density = _density_in_light_cone(state, Representation.SPACE)
        longitudinal = lambda u, v: (u + v) * SQRT_HALF  # noqa: E731
    else:
        density = _density_in_light_cone(state, Representation.MOMENTUM)
        longitudinal = lambda qu, qv: (qv - qu) * SQRT_HALF  # noqa: E731
    rules = state.light_cone_rules(points)
    norm = integrate_2d(density, *rules)
    mean = integrate_2d(lambda a, b: longitudinal(a, b) * density(a, b), *rules) / norm
    second = integrate_2d(lambda a, b: longitudinal(a, b) ** 2 * density(a, b), *rules) / norm
    return second - mean * mean


# ── Lorentz-invariant oscillator equation ────────────────────────────────────

def invariant_equation_residual(state: BoostedOscillatorState, grid: ResidualGrid) -> float:
    """
    max |½{(t² − z²)ψ − (ψ_tt − ψ_zz)} − λψ| over the grid, λ = 0.

    Second derivatives by central differences with step grid.spacing; the
    −2ψ terms of ψ_tt and ψ_zz cancel and are never formed.
    """
    psi = spatial_wavefunction(state)
    h = grid.spacing
    z, t = np.meshgrid(grid.nodes(), grid.nodes(), indexing="ij")
    centre = psi(z, t)
    wave = (psi(z, t + h) + psi(z, t - h) - psi(z + h, t) - psi(z - h, t)) / (h * h)
    residual = 0.5 * ((t * t - z * z) * centre - wave) - EIGENVALUE * centre
    return float(np.max(np.abs(residual)))


def residual_convergence_order(state: BoostedOscillatorState, grid: ResidualGrid) -> float:
    """Observed order log2(r(h)/r(h/2)); ≈ 2 for central differences."""
    coarse = invariant_equation_residual(state, grid)
    fine = invariant_equation_residual(state, grid.halved())
    return math.log2(coarse / fine)


# ── Fourier link between ψ_η and φ_η ─────────────────────────────────────────

def fourier_oracle(
    state: BoostedOscillatorState,
    qz,
    q0,
    points: int | None = None,
) -> np.ndarray:
    """
    (1/2π) ∬ ψ_η(z, t) e^{−i(q_z z + q_0 t)} dz dt at the broadcast points (qz, q0).

    Evaluated in light-cone coordinates, where q_z z + q_0 t = k_u u + k_v v
    with k_u = (q_z + q_0)/√2, k_v = (q_z − q_0)/√2.
    """
    psi = spatial_wavefunction(state)
    # ψ itself (not ψ²) is integrated, so the axes need √2 more room
    rule_u = rule_for_width(SQRT_TWO * math.exp(state.eta), points)
    rule_v = rule_for_width(SQRT_TWO * math.exp(-state.eta), points)
    u, v = np.meshgrid(rule_u.nodes, rule_v.nodes, indexing="ij")
    amplitudes = psi((u + v) * SQRT_HALF, (u - v) * SQRT_HALF)

    qz_arr, q0_arr = np.broadcast_arrays(np.asarray(qz, dtype=float), np.asarray(q0, dtype=float))
    k_u = ((qz_arr + q0_arr) * SQRT_HALF).ravel()
    k_v = ((qz_arr - q0_arr) * SQRT_HALF).ravel()
    kernel_u = rule_u.weights * np.exp(-1j * np.outer(k_u, rule_u.nodes))
    kernel_v = rule_v.weights * np.exp(-1j * np.outer(k_v, rule_v.nodes))
    transform = np.einsum("ni,ij,nj->n", kernel_u, amplitudes, kernel_v)
    logger.debug("fourier_oracle: max |Im| = %.3g", float(np.max(np.abs(transform.imag))))
    return (transform.real / (2.0 * math.pi)).reshape(qz_arr.shape)


# ── Density grids ────────────────────────────────────────────────────────────

def _density_block(evaluator: Callable, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    a, b = np.meshgrid(rows, cols, indexing="ij")
    return np.abs(evaluator(a, b)) ** 2


async def _density_grid_async(evaluator: Callable, nodes: np.ndarray, workers: int) -> np.ndarray:
    blocks = np.array_split(nodes, max(1, min(workers, nodes.size)))
    parts = await asyncio.gather(
        *(asyncio.to_thread(_density_block, evaluator, block, nodes) for block in blocks)
    )
    return np.concatenate(parts, axis=0)


def density_grid(
    state: BoostedOscillatorState,
    representation: Representation,
    extent: float,
    points: int,
    workers: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """
    |ψ_η(z, t)|² (or |φ_η(q_z, q_0)|²) on a points × points grid over [−extent, extent]².

    Rows are split across `workers` threads; the result is independent of the split.
    Returns (nodes, density) with density[i, j] at (nodes[i], nodes[j]).
    """
    representation = Representation(representation)
    evaluator = (
        spatial_wavefunction(state)
        if representation is Representation.SPACE
        else momentum_wavefunction(state)
    )
    nodes = symmetric_nodes(extent, points)
    density = asyncio.run(_density_grid_async(evaluator, nodes, workers))
    logger.info(
        "density_grid: %s η=%g %dx%d extent=%g workers=%d",
        representation.value, state.eta, points, points, extent, workers,
    )
    return nodes, density
