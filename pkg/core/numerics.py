"""
Numerical kernels shared by the physics services.

- Hermite functions φ_k(x) by the normalized three-term recurrence
  (never forms H_k or k! explicitly, so nothing overflows for k ≤ cap).
- Fixed quadrature rules (trapezoid on an interval, Gauss–Hermite) and
  tensor-product integration.
- Truncation control for geometric series.

Units are dimensionless throughout (positions in units of (mK)^{1/4}, ħ = 1).
All functions are pure; rules are immutable.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from core import config
from core.errors import DomainError

logger = logging.getLogger("squeezelab.numerics")

PI_MINUS_QUARTER = math.pi ** -0.25


class QuadratureKind(str, Enum):
    GAUSS_HERMITE = "gauss_hermite"
    TRAPEZOID = "trapezoid_on_interval"


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes + positive weights. Integrates plain f: ∫ f ≈ Σ w_i f(x_i)."""
    nodes: np.ndarray
    weights: np.ndarray
    kind: QuadratureKind

    def __post_init__(self) -> None:
        nodes = np.array(self.nodes, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if nodes.ndim != 1 or nodes.shape != weights.shape or nodes.size < 2:
            raise DomainError(
                f"quadrature rule needs matching 1-D nodes/weights with ≥2 entries, "
                f"got shapes {nodes.shape} and {weights.shape}"
            )
        if not np.all(weights > 0):
            raise DomainError("quadrature weights must all be positive")
        if not np.all(np.diff(nodes) > 0):
            raise DomainError("quadrature nodes must be strictly increasing")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "kind", QuadratureKind(self.kind))

    def __len__(self) -> int:
        return int(self.nodes.size)

    @property
    def extent(self) -> tuple[float, float]:
        return float(self.nodes[0]), float(self.nodes[-1])

    def to_dict(self) -> dict:
        lo, hi = self.extent
        return {"kind": self.kind.value, "points": len(self), "lo": lo, "hi": hi}


# ── Hermite functions ────────────────────────────────────────────────────────

def _check_order(k: int) -> None:
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 0:
        raise DomainError(f"Hermite order must be a non-negative integer, got {k!r}")
    if k > config.HERMITE_K_CAP:
        raise DomainError(
            f"Hermite order {k} exceeds configured cap {config.HERMITE_K_CAP}"
        )


def _as_finite_array(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("Hermite function argument must be finite")
    return arr


def hermite_phi(k: int, x):
    """
    φ_k(x) = (√π 2^k k!)^{-1/2} H_k(x) e^{-x²/2}.

    Accepts a scalar (returns float) or an array (returns array of same shape).
    Recurrence: φ_{k+1} = x√(2/(k+1)) φ_k − √(k/(k+1)) φ_{k−1}.
    """
    _check_order(k)
    arr = _as_finite_array(x)
    prev = np.zeros_like(arr)
    cur = PI_MINUS_QUARTER * np.exp(-0.5 * arr * arr)
    for j in range(k):
        prev, cur = cur, math.sqrt(2.0 / (j + 1)) * arr * cur - math.sqrt(j / (j + 1)) * prev
    if arr.ndim == 0:
        return float(cur)
    return cur


def hermite_phi_table(kmax: int, x) -> np.ndarray:
    """All of φ_0..φ_kmax on x in one sweep. Shape (kmax + 1, *x.shape)."""
    _check_order(kmax)
    arr = _as_finite_array(x)
    table = np.empty((kmax + 1,) + arr.shape)
    table[0] = PI_MINUS_QUARTER * np.exp(-0.5 * arr * arr)
    if kmax >= 1:
        table[1] = math.sqrt(2.0) * arr * table[0]
    for j in range(1, kmax):
        table[j + 1] = (
            math.sqrt(2.0 / (j + 1)) * arr * table[j]
            - math.sqrt(j / (j + 1)) * table[j - 1]
        )
    return table


# ── Quadrature ───────────────────────────────────────────────────────────────

def trapezoid_rule(a: float, b: float, n: int) -> QuadratureRule:
    """n-point trapezoid rule on [a, b]; nodes exactly antisymmetric about (a+b)/2."""
    if n < 2:
        raise DomainError(f"trapezoid rule needs n ≥ 2, got {n}")
    if not (math.isfinite(a) and math.isfinite(b)) or b <= a:
        raise DomainError(f"trapezoid interval must satisfy a < b, got [{a}, {b}]")
    unit = np.linspace(-1.0, 1.0, n)
    unit = 0.5 * (unit - unit[::-1])
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    nodes = mid + half * unit
    h = (b - a) / (n - 1)
    weights = np.full(n, h)
    weights[0] = weights[-1] = 0.5 * h
    return QuadratureRule(nodes=nodes, weights=weights, kind=QuadratureKind.TRAPEZOID)


def gauss_hermite_rule(n: int, scale: float = 1.0) -> QuadratureRule:
    """
    n-point Gauss–Hermite rule rescaled to integrate plain f (weights carry e^{x²}).

    Exact for f = polynomial(x)·e^{-x²/scale²} up to degree 2n−1.
    """
    if n < 2:
        raise DomainError(f"Gauss–Hermite rule needs n ≥ 2, got {n}")
    if not scale > 0:
        raise DomainError(f"Gauss–Hermite scale must be positive, got {scale}")
    x, w = np.polynomial.hermite.hermgauss(n)
    return QuadratureRule(
        nodes=scale * x,
        weights=scale * w * np.exp(x * x),
        kind=QuadratureKind.GAUSS_HERMITE,
    )


def rule_for_width(width: float, points: int | None = None) -> QuadratureRule:
    """Default rule: trapezoid on [−L, L], L = QUAD_WIDTH_FACTOR · width."""
    if not width > 0:
        raise DomainError(f"Gaussian width must be positive, got {width}")
    half = config.QUAD_WIDTH_FACTOR * width
    return trapezoid_rule(-half, half, points or config.QUAD_POINTS)


def _finite(values: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise DomainError(f"non-finite integrand values in {what}")
    return values


def integrate_1d(f: Callable[[np.ndarray], np.ndarray], rule: QuadratureRule) -> float:
    values = np.broadcast_to(np.asarray(f(rule.nodes), dtype=float), rule.nodes.shape)
    return float(rule.weights @ _finite(values, "integrate_1d"))


def integrate_2d(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    rule: QuadratureRule,
    rule_y: QuadratureRule | None = None,
) -> float:
    """
    Tensor-product estimate of ∬ f(x, y) dx dy.

    f is called once on broadcast node arrays (shape len(rule) × len(rule_y)).
    """
    ry = rule_y if rule_y is not None else rule
    xs, ys = np.meshgrid(rule.nodes, ry.nodes, indexing="ij")
    values = np.broadcast_to(np.asarray(f(xs, ys), dtype=float), xs.shape)
    return float(rule.weights @ _finite(values, "integrate_2d") @ ry.weights)


# ── Geometric series ─────────────────────────────────────────────────────────

def _check_ratio(r: float) -> None:
    if not (0.0 <= r < 1.0):
        raise DomainError(f"geometric ratio must lie in [0, 1), got {r} (series divergent)")


def geometric_tail_bound(r: float, kmax: int) -> float:
    """Σ_{k>kmax} r^k = r^{kmax+1}/(1−r)."""
    _check_ratio(r)
    if kmax < 0:
        raise DomainError(f"kmax must be non-negative, got {kmax}")
    return r ** (kmax + 1) / (1.0 - r)


def geometric_terms_needed(r: float, tol: float) -> int:
    """Smallest kmax with geometric_tail_bound(r, kmax) ≤ tol."""
    _check_ratio(r)
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    if r == 0.0:
        return 0
    estimate = math.ceil(math.log(tol * (1.0 - r)) / math.log(r)) - 1
    if estimate > config.SERIES_TERM_CAP:
        raise DomainError(
            f"series needs ~{estimate} terms for tol={tol:g} at ratio {r!r}; "
            f"cap is {config.SERIES_TERM_CAP}"
        )
    kmax = max(estimate, 0)
    # float rounding in the log estimate can be off by one either way
    while geometric_tail_bound(r, kmax) > tol:
        kmax += 1
    while kmax > 0 and geometric_tail_bound(r, kmax - 1) <= tol:
        kmax -= 1
    return kmax
