"""
Entanglement between the two oscillators when x2 is never observed.

The ground state has the Schmidt form

    ψ_η(x1, x2) = (1/cosh(η/2)) Σ_k tanh^k(η/2) φ_k(x1) φ_k(x2)

so tracing over x2 leaves ρ(x, x') with eigenvalues
λ_k = tanh^{2k}(η/2)/cosh²(η/2). Purity, entropy and the effective
temperature all follow from that geometric spectrum. The quadrature oracles
at the bottom rebuild ρ numerically from ground_state and never use the
closed forms.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import entr

from core import config
from core.errors import DomainError
from core.numerics import (
    QuadratureRule,
    geometric_tail_bound,
    geometric_terms_needed,
    hermite_phi,
    hermite_phi_table,
    trapezoid_rule,
)
from services.oscillator_core import (
    OscillatorSystem,
    eta_from_coupling,
    ground_state,
)

logger = logging.getLogger("squeezelab.entanglement_entropy")

MAX_ORACLE_ORDER = 30
LN2 = math.log(2.0)
TINY_HALF_ETA = 1e-150  # below this ln coth h = −ln h to full precision
SCHMIDT_ETA_LIMIT = 38.0


def _finite_eta(eta: float) -> float:
    eta = float(eta)
    if not math.isfinite(eta):
        raise DomainError(f"eta must be finite, got {eta}")
    return eta


def _tolerance(tol: float | None) -> float:
    tol = config.SERIES_TOL if tol is None else float(tol)
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    return tol


def _sech(h: float) -> float:
    """1/cosh h as 2x/(1 + x²), x = e^{−|h|}; never overflows."""
    x = math.exp(-abs(h))
    return 2.0 * x / (1.0 + x * x)


def _log_cosh(h: float) -> float:
    """ln cosh h for h ≥ 0."""
    if h < 1.0:
        return math.log(math.cosh(h))
    return h + math.log1p(math.exp(-2.0 * h)) - LN2


def _log_coth(h: float) -> float:
    """ln coth h for h > 0, finite down to the smallest subnormal h."""
    if h > 1.0:
        return 2.0 * math.atanh(math.exp(-2.0 * h))
    if h < TINY_HALF_ETA:
        return -math.log(math.tanh(h))
    return math.log1p(2.0 / math.expm1(2.0 * h))


def _schmidt_ratio(eta: float) -> float:
    """tanh(η/2), rejected once its square is indistinguishable from 1."""
    t = math.tanh(0.5 * eta)
    if t * t >= 1.0:
        raise DomainError(
            f"Schmidt spectrum not resolvable at η={eta}: tanh²(η/2) rounds to 1 in double "
            f"precision (|η| must stay below about {SCHMIDT_ETA_LIMIT:g})"
        )
    return t


@dataclass(frozen=True, eq=False)
class SchmidtSpectrum:
    """Eigenvalues λ_0..λ_kmax of the reduced density matrix plus a bound on the dropped tail."""
    eta: float
    lambdas: np.ndarray
    truncation_error: float

    def __post_init__(self) -> None:
        lambdas = np.array(self.lambdas, dtype=float)
        lambdas.setflags(write=False)
        object.__setattr__(self, "lambdas", lambdas)

    @property
    def kmax(self) -> int:
        return int(self.lambdas.size - 1)

    @property
    def ratio(self) -> float:
        return math.tanh(0.5 * self.eta) ** 2

    def total(self) -> float:
        return math.fsum(self.lambdas)

    def to_dict(self) -> dict:
        return {
            "eta": self.eta,
            "kmax": self.kmax,
            "truncation_error": self.truncation_error,
            "lambdas": self.lambdas.tolist(),
        }


@dataclass(frozen=True)
class ThermalMap:
    """tanh(η/2) = exp(−ω/T) in units ħ = k_B = 1; T = 0 iff η = 0."""
    eta: float
    omega: float
    temperature: float

    def to_dict(self) -> dict:
        return {"eta": self.eta, "omega": self.omega, "temperature": self.temperature}


# ── Schmidt expansion ────────────────────────────────────────────────────────

def schmidt_prefactor(eta: float) -> float:
    """Overall factor of the Schmidt sum; 1/cosh(η/2) keeps Tr ρ = 1."""
    return _sech(0.5 * eta)


def schmidt_spectrum(
    eta: float,
    tol: float | None = None,
    kmax: int | None = None,
) -> SchmidtSpectrum:
    """
    Geometric spectrum λ_k = (1/cosh²(η/2)) tanh^{2k}(η/2), k = 0..kmax.

    kmax is the smallest order with geometric_tail_bound(tanh²(η/2), kmax) ≤ tol
    unless given explicitly.
    """
    eta = _finite_eta(eta)
    tol = _tolerance(tol)
    r = _schmidt_ratio(eta) ** 2
    lam0 = _sech(0.5 * eta) ** 2
    if kmax is None:
        kmax = geometric_terms_needed(r, tol)
    elif kmax < 0 or kmax > config.SERIES_TERM_CAP:
        raise DomainError(f"kmax must lie in [0, {config.SERIES_TERM_CAP}], got {kmax}")
    lambdas = lam0 * np.power(r, np.arange(kmax + 1, dtype=float))
    truncation_error = lam0 * geometric_tail_bound(r, kmax)
    logger.info("schmidt_spectrum: η=%g kmax=%d tail≤%.3g", eta, kmax, truncation_error)
    return SchmidtSpectrum(eta=eta, lambdas=lambdas, truncation_error=truncation_error)


def schmidt_amplitudes(eta: float, tol: float | None = None) -> np.ndarray:
    """
    Coefficients c_k = tanh^k(η/2)/cosh(η/2) of ψ_η = Σ c_k φ_k(x1) φ_k(x2).

    Truncated at amplitude level: Σ_{k>kmax} |tanh(η/2)|^k ≤ tol.
    """
    eta = _finite_eta(eta)
    t = _schmidt_ratio(eta)
    kmax = geometric_terms_needed(abs(t), _tolerance(tol))
    return schmidt_prefactor(eta) * np.power(t, np.arange(kmax + 1, dtype=float))


def schmidt_reconstruction(eta: float, x1, x2, tol: float | None = None) -> np.ndarray:
    """Truncated Schmidt sum Σ c_k φ_k(x1) φ_k(x2) on broadcast arrays x1, x2."""
    coeffs = schmidt_amplitudes(eta, tol)
    a1, a2 = np.broadcast_arrays(np.asarray(x1, dtype=float), np.asarray(x2, dtype=float))
    kmax = coeffs.size - 1
    phi1 = hermite_phi_table(kmax, a1.ravel())
    phi2 = hermite_phi_table(kmax, a2.ravel())
    return np.einsum("k,ki,ki->i", coeffs, phi1, phi2).reshape(a1.shape)


# ── Purity, entropy, temperature ─────────────────────────────────────────────

def purity(eta: float) -> float:
    """Tr ρ² = 1/cosh η, evaluated as 2e^{−|η|}/(1 + e^{−2|η|})."""
    return _sech(_finite_eta(eta))


def purity_series(eta: float, tol: float | None = None) -> float:
    """Tr ρ² = (1/cosh(η/2))⁴ Σ tanh^{4k}(η/2), summed term by term to within tol."""
    eta = _finite_eta(eta)
    tol = _tolerance(tol)
    r4 = math.tanh(0.5 * eta) ** 4
    pref = _sech(0.5 * eta) ** 4
    kmax = geometric_terms_needed(r4, tol / pref) if pref > 0 else 0
    terms = np.power(r4, np.arange(kmax + 1, dtype=float))
    return pref * math.fsum(terms)


def entropy(eta: float) -> float:
    """
    S = 2{cosh²(η/2) ln cosh(η/2) − sinh²(η/2) ln sinh(η/2)}, in units of k_B.

    Even in η; S(0) = 0 by continuity. Evaluated as
    2 ln cosh h + 2 sinh²h ln coth h with h = |η|/2, which has no cancellation
    between large terms. Above h = 1 the second term is rewritten in x = e^{−2h}
    as ½(1 − x)² artanh(x)/x, so nothing overflows for any finite η.
    """
    half = 0.5 * abs(_finite_eta(eta))
    if half == 0.0:
        return 0.0
    if half <= 1.0:
        return 2.0 * (_log_cosh(half) + math.sinh(half) ** 2 * _log_coth(half))
    x = math.exp(-2.0 * half)
    tail = 0.5 * (1.0 - x) ** 2 * (math.atanh(x) / x if x > 0.0 else 1.0)
    return 2.0 * (_log_cosh(half) + tail)


def entropy_from_spectrum(spectrum: SchmidtSpectrum) -> float:
    """−Σ λ_k ln λ_k over the retained eigenvalues."""
    return math.fsum(entr(spectrum.lambdas))


def effective_temperature(eta: float, omega: float) -> ThermalMap:
    """
    T solving tanh(η/2) = exp(−ω/T), i.e. T = ω / ln coth(η/2).

    ln coth(η/2) stays finite and positive for every η > 0 up to about 745,
    where it underflows and T is no longer representable.
    """
    eta = _finite_eta(eta)
    omega = float(omega)
    if not (math.isfinite(omega) and omega > 0):
        raise DomainError(f"omega must be positive and finite, got {omega}")
    if eta < 0:
        raise DomainError(
            f"effective temperature needs η ≥ 0 (tanh(η/2) must lie in [0, 1)), got {eta}; "
            "pass |η| explicitly for the even extension"
        )
    if eta == 0.0:
        return ThermalMap(eta=eta, omega=omega, temperature=0.0)
    log_coth = _log_coth(0.5 * eta)
    temperature = omega / log_coth if log_coth > 0.0 else math.inf
    if not math.isfinite(temperature):
        raise DomainError(f"effective temperature overflows at η={eta}, omega={omega}")
    return ThermalMap(eta=eta, omega=omega, temperature=temperature)


# ── Phase-space second moments ───────────────────────────────────────────────

def mean_excitation(eta: float) -> float:
    """Σ k λ_k = sinh²(η/2)."""
    return math.sinh(0.5 * _finite_eta(eta)) ** 2


def reduced_second_moment(spectrum: SchmidtSpectrum) -> float:
    """Σ λ_k (k + ½); equals cosh(η)/2 for the full spectrum."""
    k = np.arange(spectrum.lambdas.size, dtype=float)
    return math.fsum(spectrum.lambdas * (k + 0.5))


def two_mode_covariance(eta: float) -> np.ndarray:
    """
    Covariance matrix of ψ_η, ordering (x1, x2, p1, p2).

    ½ [[c, s, 0, 0], [s, c, 0, 0], [0, 0, c, −s], [0, 0, −s, c]] with c = cosh η, s = sinh η.
    """
    eta = _finite_eta(eta)
    c, s = math.cosh(eta), math.sinh(eta)
    return 0.5 * np.array([
        [c, s, 0.0, 0.0],
        [s, c, 0.0, 0.0],
        [0.0, 0.0, c, -s],
        [0.0, 0.0, -s, c],
    ])


def reduced_covariance(eta: float) -> np.ndarray:
    """(x1, p1) block of two_mode_covariance: what an observer of x1 alone sees."""
    return two_mode_covariance(eta)[np.ix_([0, 2], [0, 2])]


def symplectic_eigenvalue(cov: np.ndarray) -> float:
    """ν = √det of a single-mode covariance; ν = ½ for a pure state."""
    det = float(np.linalg.det(np.asarray(cov, dtype=float)))
    if det < 0.25 * (1.0 - 1e-12):
        raise DomainError(f"covariance violates the uncertainty bound: det={det}")
    return math.sqrt(max(det, 0.25))


def entropy_from_covariance(cov: np.ndarray) -> float:
    """S = (ν+½)ln(ν+½) − (ν−½)ln(ν−½) for a single-mode Gaussian state."""
    nu = symplectic_eigenvalue(cov)
    return float(entr(nu - 0.5) - entr(nu + 0.5))


def uncertainty_product(eta: float) -> float:
    """Var(x)·Var(p) of the reduced state = cosh²η/4 ≥ 1/4."""
    return float(np.linalg.det(reduced_covariance(eta)))


# ── Quadrature oracles for ρ(x, x') ──────────────────────────────────────────

def _oracle_rule(eta: float, k: int) -> QuadratureRule:
    half = config.QUAD_WIDTH_FACTOR * math.exp(0.5 * abs(eta)) + 2.0 * math.sqrt(2 * k + 1)
    n = max(config.QUAD_POINTS, math.ceil(2.0 * half / config.ORACLE_MAX_STEP) + 1)
    return trapezoid_rule(-half, half, n)


def reduced_density_matrix(
    sys: OscillatorSystem,
    rule: QuadratureRule | None = None,
) -> tuple[QuadratureRule, np.ndarray]:
    """
    ρ(x_i, x_j) = ∫ ψ(x_i, x2) ψ(x_j, x2) dx2 on the rule's nodes.

    The same rule discretizes x, x' and the traced variable x2.
    """
    if rule is None:
        rule = _oracle_rule(eta_from_coupling(sys).eta, MAX_ORACLE_ORDER)
    psi = ground_state(sys)
    x, x2 = np.meshgrid(rule.nodes, rule.nodes, indexing="ij")
    amplitudes = psi(x, x2)
    rho = (amplitudes * rule.weights) @ amplitudes.T
    if not np.all(np.isfinite(rho)):
        raise DomainError("non-finite values in reduced density matrix")
    return rule, rho


def reduced_density_eigenvalue_oracle(sys: OscillatorSystem, k: int) -> float:
    """λ_k = ∬ φ_k(x) ρ(x, x') φ_k(x') dx dx' with ρ from numerical partial trace."""
    if k < 0 or k > MAX_ORACLE_ORDER:
        raise DomainError(f"oracle order must lie in [0, {MAX_ORACLE_ORDER}], got {k}")
    eta = eta_from_coupling(sys).eta
    rule, rho = reduced_density_matrix(sys, _oracle_rule(eta, k))
    weighted = rule.weights * hermite_phi(k, rule.nodes)
    value = float(weighted @ rho @ weighted)
    logger.debug("partial-trace oracle: η=%g k=%d n=%d λ=%.17g", eta, k, len(rule), value)
    return value


def reduced_density_eigenvalues_oracle(sys: OscillatorSystem, kmax: int) -> np.ndarray:
    """reduced_density_eigenvalue_oracle for k = 0..kmax from a single ρ matrix."""
    if kmax < 0 or kmax > MAX_ORACLE_ORDER:
        raise DomainError(f"oracle order must lie in [0, {MAX_ORACLE_ORDER}], got {kmax}")
    eta = eta_from_coupling(sys).eta
    rule, rho = reduced_density_matrix(sys, _oracle_rule(eta, kmax))
    weighted = hermite_phi_table(kmax, rule.nodes) * rule.weights
    return np.einsum("ki,ij,kj->k", weighted, rho, weighted)


def trace_oracle(sys: OscillatorSystem) -> float:
    """Tr ρ = ∫ ρ(x, x) dx."""
    rule, rho = reduced_density_matrix(sys)
    return float(rule.weights @ np.diag(rho))


def purity_oracle(sys: OscillatorSystem) -> float:
    """Tr ρ² = ∬ ρ(x, x')² dx dx'."""
    rule, rho = reduced_density_matrix(sys)
    return float(rule.weights @ (rho * rho) @ rule.weights)
