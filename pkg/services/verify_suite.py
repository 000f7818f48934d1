"""
Self-verification: every closed form checked against an independent route.

Each check returns (measured error, bound); a check passes when error ≤ bound.
The fast profile samples coarser grids than strict but runs the same checks.
A check that raises counts as a failure with an infinite error.
"""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import eval_hermite, gammaln

from core.numerics import geometric_tail_bound, hermite_phi_table, integrate_1d, trapezoid_rule
from services import entanglement_entropy as ee
from services import lorentz_squeeze as ls
from services import metrics
from services.oscillator_core import (
    OscillatorSystem,
    eta_from_coupling,
    ground_state,
    ground_state_for_eta,
    normalization as oscillator_normalization,
    potential_eigen_eta,
)
from services.parton_decoherence import PartonKinematics, energy_sweep, parton_report
from services.schemas import ToleranceProfile

logger = logging.getLogger("squeezelab.verify_suite")

FERMILAB_BEAM_GEV = 900.0


@dataclass(frozen=True)
class CheckResult:
    name: str
    error: float
    bound: float
    passed: bool
    elapsed: float
    detail: str = ""

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_dict(self) -> dict:
        return {
            "check": self.name,
            "error": self.error if math.isfinite(self.error) else None,
            "bound": self.bound,
            "status": self.status,
            "detail": self.detail,
        }


@dataclass
class SuiteReport:
    profile: ToleranceProfile
    results: list[CheckResult] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass(frozen=True)
class _Grids:
    purity_points: int
    eta_set: tuple[float, ...]
    fourier_points: int
    boost_samples: int


_PROFILES = {
    ToleranceProfile.FAST: _Grids(purity_points=25, eta_set=(0.0, 0.5, 1.0), fourier_points=11, boost_samples=200),
    ToleranceProfile.STRICT: _Grids(purity_points=100, eta_set=(0.0, 0.5, 1.0, 2.0), fourier_points=21, boost_samples=2000),
}

_CHECKS: list[tuple[str, Callable[[_Grids], tuple[float, float]]]] = []


def check(name: str):
    def register(fn):
        _CHECKS.append((name, fn))
        return fn
    return register


def check_names() -> list[str]:
    return [name for name, _ in _CHECKS]


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(b))


# ── Numerics ─────────────────────────────────────────────────────────────────

@check("hermite_recurrence")
def _hermite_recurrence(g: _Grids) -> tuple[float, float]:
    """Mixed criterion |rec − exact| ≤ 1e-10·|exact| + 1e-13·max|exact|, reported as its worst ratio."""
    kmax = 60
    x = np.linspace(-8.0, 8.0, 161)
    table = hermite_phi_table(kmax, x)
    worst = 0.0
    for k in range(kmax + 1):
        log_norm = -0.5 * (0.5 * math.log(math.pi) + k * math.log(2.0) + gammaln(k + 1))
        exact = eval_hermite(k, x) * np.exp(-0.5 * x * x + log_norm)
        allowed = 1e-10 * np.abs(exact) + 1e-13 * np.max(np.abs(exact))
        worst = max(worst, float(np.max(np.abs(table[k] - exact) / allowed)))
    return worst, 1.0


@check("hermite_orthonormality")
def _hermite_orthonormality(g: _Grids) -> tuple[float, float]:
    rule = trapezoid_rule(-12.0, 12.0, 200)
    table = hermite_phi_table(30, rule.nodes)
    gram = (table * rule.weights) @ table.T
    return float(np.max(np.abs(gram - np.eye(31)))), 1e-9


@check("trapezoid_constant")
def _trapezoid_constant(g: _Grids) -> tuple[float, float]:
    err = 0.0
    for a, b, n in ((-12.0, 12.0, 200), (0.0, 1.0, 1001), (-3.0, 5.0, 64)):
        err = max(err, abs(integrate_1d(np.ones_like, trapezoid_rule(a, b, n)) - (b - a)))
    return err, 1e-12


@check("tail_bound_is_upper_bound")
def _tail_bound(g: _Grids) -> tuple[float, float]:
    """Relative excess of the summed tail over its closed-form bound; the sum runs 4000 terms past kmax."""
    err = 0.0
    for r in (0.1, 0.5, 0.9, 0.99):
        for kmax in (0, 5, 50):
            actual = math.fsum(r ** k for k in range(kmax + 1, kmax + 4001))
            bound = geometric_tail_bound(r, kmax)
            err = max(err, max(0.0, actual - bound) / bound)
    return err, 1e-12


# ── Oscillator core ──────────────────────────────────────────────────────────

@check("eta_from_coupling_vs_eigen")
def _eta_eigen(g: _Grids) -> tuple[float, float]:
    err = 0.0
    for eta in g.eta_set + (-1.5, 3.0):
        sys = OscillatorSystem.from_eta(eta, K=2.5)
        err = max(err, abs(eta_from_coupling(sys).eta - potential_eigen_eta(sys)))
    return err, 1e-12


@check("oscillator_normalization")
def _oscillator_norm(g: _Grids) -> tuple[float, float]:
    err = max(abs(oscillator_normalization(OscillatorSystem.from_eta(eta)) - 1.0) for eta in g.eta_set + (4.0,))
    return err, 1e-10


@check("oscillator_symmetries")
def _oscillator_symmetries(g: _Grids) -> tuple[float, float]:
    rng = np.random.default_rng(7)
    x1, x2 = rng.uniform(-3.0, 3.0, size=(2, g.boost_samples))
    err = 0.0
    for eta in g.eta_set + (-0.7,):
        psi, psi_flip = ground_state_for_eta(eta), ground_state_for_eta(-eta)
        err = max(err, float(np.max(np.abs(psi(x1, x2) - psi(x2, x1)))))
        err = max(err, float(np.max(np.abs(psi_flip(x1, x2) - psi(x1, -x2)))))
    return err, 1e-15


# ── Entanglement entropy ─────────────────────────────────────────────────────

@check("purity_closed_form")
def _purity(g: _Grids) -> tuple[float, float]:
    err = max(abs(ee.purity_series(eta, 1e-12) - ee.purity(eta)) for eta in np.linspace(0.0, 6.0, g.purity_points))
    return err, 1e-10


@check("purity_monotone")
def _purity_monotone(g: _Grids) -> tuple[float, float]:
    values = [ee.purity(eta) for eta in np.linspace(0.0, 6.0, g.purity_points)]
    violations = sum(1 for a, b in zip(values, values[1:]) if not b < a)
    return float(violations) + abs(ee.purity(0.0) - 1.0), 0.0


@check("entropy_from_spectrum")
def _entropy_spectrum(g: _Grids) -> tuple[float, float]:
    etas = np.linspace(0.0, 6.0, g.purity_points)
    err = max(abs(ee.entropy_from_spectrum(ee.schmidt_spectrum(eta, 1e-14)) - ee.entropy(eta)) for eta in etas)
    return err, 1e-9


@check("entropy_monotone")
def _entropy_monotone(g: _Grids) -> tuple[float, float]:
    values = [ee.entropy(eta) for eta in np.linspace(0.0, 6.0, g.purity_points)]
    violations = sum(1 for a, b in zip(values, values[1:]) if not b > a)
    return float(violations) + abs(ee.entropy(0.0)), 0.0


@check("entropy_from_covariance")
def _entropy_covariance(g: _Grids) -> tuple[float, float]:
    err = max(
        abs(ee.entropy_from_covariance(ee.reduced_covariance(eta)) - ee.entropy(eta))
        for eta in g.eta_set + (3.0,)
    )
    return err, 1e-9


@check("trace_with_tail_bound")
def _trace(g: _Grids) -> tuple[float, float]:
    err = 0.0
    for eta in np.linspace(0.0, 8.0, g.purity_points):
        spectrum = ee.schmidt_spectrum(eta, 1e-12)
        err = max(err, abs(spectrum.total() + spectrum.truncation_error - 1.0))
    return err, 1e-12


@check("partial_trace_oracle")
def _partial_trace(g: _Grids) -> tuple[float, float]:
    kmax = 10
    err = 0.0
    for eta in (0.5, 1.0, 2.0):
        oracle = ee.reduced_density_eigenvalues_oracle(OscillatorSystem.from_eta(eta), kmax)
        closed = ee.schmidt_spectrum(eta, kmax=kmax).lambdas
        err = max(err, float(np.max(np.abs(oracle - closed))))
    return err, 1e-6


@check("oracle_trace_and_purity")
def _oracle_trace_purity(g: _Grids) -> tuple[float, float]:
    err = 0.0
    for eta in (0.5, 1.0):
        sys = OscillatorSystem.from_eta(eta)
        err = max(err, abs(ee.trace_oracle(sys) - 1.0), abs(ee.purity_oracle(sys) - ee.purity(eta)))
    return err, 1e-8


@check("schmidt_reconstruction")
def _reconstruction(g: _Grids) -> tuple[float, float]:
    nodes = np.linspace(-4.0, 4.0, 41)
    x1, x2 = np.meshgrid(nodes, nodes, indexing="ij")
    err = 0.0
    for eta in (0.5, 1.0, 2.0, -1.0):
        exact = ground_state(OscillatorSystem.from_eta(eta))(x1, x2)
        rebuilt = ee.schmidt_reconstruction(eta, x1, x2)
        err = max(err, float(np.max(np.abs(rebuilt - exact))))
    return err, 1e-6


@check("reduced_state_spreading")
def _spreading(g: _Grids) -> tuple[float, float]:
    err = 0.0
    for eta in g.eta_set + (4.0,):
        spectrum = ee.schmidt_spectrum(eta, 1e-14)
        err = max(err, abs(ee.reduced_second_moment(spectrum) - 0.5 * math.cosh(eta)))
        k = np.arange(spectrum.lambdas.size, dtype=float)
        err = max(err, abs(math.fsum(k * spectrum.lambdas) - ee.mean_excitation(eta)))
    return err, 1e-8


@check("temperature_inverts_thermal_map")
def _temperature(g: _Grids) -> tuple[float, float]:
    err = 0.0
    for eta in (0.25, 1.0, 2.0, 5.0):
        t = ee.effective_temperature(eta, 1.0).temperature
        err = max(err, abs(math.exp(-1.0 / t) - math.tanh(0.5 * eta)))
    return err, 1e-12


# ── Lorentz squeeze ──────────────────────────────────────────────────────────

@check("boost_algebra")
def _boost_algebra(g: _Grids) -> tuple[float, float]:
    rng = np.random.default_rng(11)
    zs, ts = rng.uniform(-5.0, 5.0, size=(2, g.boost_samples))
    etas = rng.uniform(-2.0, 2.0, size=(2, g.boost_samples))
    err = 0.0
    for z, t, a, b in zip(zs, ts, *etas):
        p = ls.SpacetimePoint.from_zt(z, t)
        matrix, cone = ls.boost(p, a), ls.boost_light_cone(p, a)
        scale = max(1.0, abs(matrix.z) + abs(matrix.t))
        err = max(err, (abs(matrix.z - cone.z) + abs(matrix.t - cone.t)) / scale)
        twice, once = ls.boost(ls.boost(p, a), b), ls.boost(p, a + b)
        scale = max(1.0, abs(once.z) + abs(once.t))
        err = max(err, (abs(twice.z - once.z) + abs(twice.t - once.t)) / scale)
        err = max(err, abs(cone.u * cone.v - p.u * p.v) / max(1.0, cone.u ** 2 + cone.v ** 2))
    return err, 1e-12


@check("boosted_normalization")
def _boosted_norm(g: _Grids) -> tuple[float, float]:
    err = 0.0
    for eta in g.eta_set + (-1.0,):
        state = ls.BoostedOscillatorState(eta)
        for rep in ls.Representation:
            err = max(err, abs(ls.normalization(state, rep) - 1.0))
    return err, 1e-10


@check("boosted_symmetries")
def _boosted_symmetries(g: _Grids) -> tuple[float, float]:
    rng = np.random.default_rng(13)
    z, t = rng.uniform(-3.0, 3.0, size=(2, g.boost_samples))
    err = 0.0
    for eta in g.eta_set:
        psi = ls.spatial_wavefunction(ls.BoostedOscillatorState(eta))
        phi = ls.momentum_wavefunction(ls.BoostedOscillatorState(eta))
        psi_flip = ls.spatial_wavefunction(ls.BoostedOscillatorState(-eta))
        err = max(
            err,
            float(np.max(np.abs(psi(z, t) - psi(t, z)))),
            float(np.max(np.abs(psi(z, -t) - psi_flip(z, t)))),
            float(np.max(np.abs(phi(z, t) - psi(z, -t)))),
        )
    return err, 1e-15


@check("time_separation_correspondence")
def _correspondence(g: _Grids) -> tuple[float, float]:
    nodes = np.linspace(-3.0, 3.0, 31)
    z, t = np.meshgrid(nodes, nodes, indexing="ij")
    err = 0.0
    for eta in g.eta_set:
        boosted = ls.spatial_wavefunction(ls.BoostedOscillatorState(eta))(z, t)
        coupled = ground_state_for_eta(ls.oscillator_equivalent_eta(eta))(z, t)
        err = max(err, float(np.max(np.abs(boosted - coupled))))
    return err, 1e-13


@check("invariant_equation_residual")
def _residual(g: _Grids) -> tuple[float, float]:
    grid = ls.ResidualGrid(extent=3.0, spacing=1e-3, points=41)
    err = max(ls.invariant_equation_residual(ls.BoostedOscillatorState(eta), grid) for eta in (0.0, 0.5, 1.0))
    return err, 1e-5


@check("residual_second_order")
def _residual_order(g: _Grids) -> tuple[float, float]:
    grid = ls.ResidualGrid(extent=3.0, spacing=1e-2, points=41)
    err = max(
        abs(ls.residual_convergence_order(ls.BoostedOscillatorState(eta), grid) - 2.0)
        for eta in (0.0, 0.5, 1.0)
    )
    return err, 0.05


@check("same_direction_widths")
def _widths(g: _Grids) -> tuple[float, float]:
    err = 0.0
    for eta in (0.0, 0.5, 1.0, 2.0):
        state = ls.BoostedOscillatorState(eta)
        expected = 0.5 * math.cosh(2.0 * eta)
        for axis in ls.WidthAxis:
            err = max(err, abs(ls.marginal_width(state, axis) - expected))
    return err, 1e-8


@check("light_cone_variances")
def _light_cone(g: _Grids) -> tuple[float, float]:
    err = 0.0
    for eta in g.eta_set:
        var_u, var_v = ls.light_cone_variances(ls.BoostedOscillatorState(eta))
        err = max(
            err,
            _rel(var_u, 0.5 * math.exp(2 * eta)),
            _rel(var_v, 0.5 * math.exp(-2 * eta)),
            abs(var_u * var_v - 0.25),
        )
    return err, 1e-10


@check("fourier_link")
def _fourier(g: _Grids) -> tuple[float, float]:
    q = np.linspace(-4.0, 4.0, g.fourier_points)
    qz, q0 = np.meshgrid(q, q, indexing="ij")
    err = 0.0
    for eta in (0.0, 0.5, 1.0, 1.5):
        state = ls.BoostedOscillatorState(eta)
        exact = ls.momentum_wavefunction(state)(qz, q0)
        transformed = ls.fourier_oracle(state, qz, q0)
        err = max(err, float(np.max(np.abs(transformed - exact)) / np.max(np.abs(exact))))
    return err, 1e-6


# ── Parton decoherence ───────────────────────────────────────────────────────

@check("fermilab_interaction_ratio")
def _fermilab(g: _Grids) -> tuple[float, float]:
    """Passes when 1e-7 ≤ ratio ≤ 1e-6; the error is the ratio's distance outside that band."""
    ratio = parton_report(PartonKinematics(FERMILAB_BEAM_GEV)).interaction_ratio
    outside = max(0.0, 1e-7 - ratio, ratio - 1e-6)
    return outside, 0.0


@check("parton_limit_at_rest")
def _parton_at_rest(g: _Grids) -> tuple[float, float]:
    """E = m gives the unboosted values exactly; E just above m stays within 1e-5 of them."""
    mass = 0.938
    rest = parton_report(PartonKinematics.at_rest(mass))
    err = max(
        abs(rest.rapidity), abs(rest.period_dilation - 1.0), abs(rest.interaction_ratio - 1.0),
        abs(rest.entropy), abs(rest.var_z - 0.5), abs(rest.var_qz - 0.5),
    )
    energy = mass + mass * 2.0 ** -40
    near = parton_report(PartonKinematics(energy, mass=mass))
    excess = energy - mass
    reference = math.asinh(math.sqrt(excess * (2.0 * mass + excess)) / mass)
    return max(
        err,
        abs(near.rapidity / reference - 1.0),
        abs(near.period_dilation - 1.0),
        abs(near.interaction_ratio - 1.0),
        abs(near.entropy),
        abs(near.var_z - 0.5),
        abs(near.var_qz - 0.5),
    ), 1e-5


@check("parton_report_consistency")
def _report_consistency(g: _Grids) -> tuple[float, float]:
    err = 0.0
    for energy in (0.938, 1.876, 10.0, 100.0):
        report = parton_report(PartonKinematics(energy))
        err = max(
            err,
            abs(report.period_dilation * report.interaction_ratio - math.exp(-report.rapidity)),
            abs(report.entropy - ee.entropy(report.rapidity)),
            _rel(report.var_z, 0.5 * math.cosh(2 * report.rapidity)),
        )
    return err, 1e-8


@check("parton_monotone_decoherence")
def _monotone(g: _Grids) -> tuple[float, float]:
    reports = energy_sweep([1.0, 2.0, 10.0, 100.0, 900.0, 1800.0])
    violations = sum(
        1 for a, b in zip(reports, reports[1:])
        if not (b.interaction_ratio < a.interaction_ratio and b.entropy > a.entropy)
    )
    return float(violations), 0.0


# ── Runner ───────────────────────────────────────────────────────────────────

def _run_one(name: str, fn: Callable[[_Grids], tuple[float, float]], grids: _Grids) -> CheckResult:
    start = time.perf_counter()
    detail = ""
    try:
        error, bound = fn(grids)
        passed = bool(math.isfinite(error) and error <= bound)
    except Exception as exc:
        logger.error("check %s raised %s: %s", name, type(exc).__name__, exc)
        error, bound, passed = math.inf, 0.0, False
        detail = f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    if not passed:
        logger.error("FAIL %s: error=%.3g bound=%.3g", name, error, bound)
    else:
        logger.debug("PASS %s: error=%.3g bound=%.3g (%.3fs)", name, error, bound, elapsed)
    metrics.record_check(name, error, bound, passed, elapsed)
    return CheckResult(name=name, error=float(error), bound=float(bound), passed=passed, elapsed=elapsed, detail=detail)


def run_suite(profile: ToleranceProfile = ToleranceProfile.FAST) -> SuiteReport:
    profile = ToleranceProfile(profile)
    grids = _PROFILES[profile]
    report = SuiteReport(profile=profile)
    start = time.perf_counter()
    for name, fn in _CHECKS:
        report.results.append(_run_one(name, fn, grids))
    report.elapsed = time.perf_counter() - start
    metrics.record_suite(profile.value, report.elapsed, len(report.failures))
    logger.info(
        "verify[%s]: %d/%d passed in %.2fs",
        profile.value, len(report.results) - len(report.failures), len(report.results), report.elapsed,
    )
    return report
