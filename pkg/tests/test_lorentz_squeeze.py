"""Tests for services/lorentz_squeeze."""
import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.errors import DomainError
from services import lorentz_squeeze as ls
from services.oscillator_core import ground_state_for_eta

coord = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)
rapidity = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)

SQRT2 = math.sqrt(2.0)


# ── Points and boosts ───────────────────────────────────────────────────────

def test_light_cone_product_is_the_interval():
    p = ls.SpacetimePoint.from_zt(3.0, 1.0)
    assert p.u * p.v == pytest.approx(p.interval())
    assert p.interval() == pytest.approx(4.0)


def test_point_constructors_agree():
    p = ls.SpacetimePoint.from_uv(1.0, 1.0)
    assert (p.z, p.t) == pytest.approx((SQRT2, 0.0))
    q = ls.MomentumPoint.from_light_cone(2.0, 3.0)
    assert (q.qu, q.qv) == pytest.approx((2.0, 3.0))
    assert q.qu * q.qv == pytest.approx(q.interval())


def test_boost_identity_at_zero():
    p = ls.SpacetimePoint.from_zt(0.4, -1.3)
    assert ls.boost(p, 0.0) == p


def test_boost_scales_light_cone_axes():
    p = ls.SpacetimePoint.from_uv(1.0, 1.0)
    boosted = ls.boost(p, math.log(2.0))
    assert boosted.u == pytest.approx(2.0, abs=1e-12)
    assert boosted.v == pytest.approx(0.5, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(z=coord, t=coord, eta=rapidity)
def test_matrix_and_light_cone_routes_agree(z, t, eta):
    p = ls.SpacetimePoint.from_zt(z, t)
    matrix, cone = ls.boost(p, eta), ls.boost_light_cone(p, eta)
    scale = max(1.0, abs(matrix.z) + abs(matrix.t))
    assert abs(matrix.z - cone.z) <= 1e-12 * scale
    assert abs(matrix.t - cone.t) <= 1e-12 * scale


@settings(max_examples=200, deadline=None)
@given(z=coord, t=coord, a=rapidity, b=rapidity)
def test_boost_composition_is_additive(z, t, a, b):
    p = ls.SpacetimePoint.from_zt(z, t)
    twice, once = ls.boost(ls.boost(p, a), b), ls.boost(p, a + b)
    scale = max(1.0, abs(once.z) + abs(once.t))
    assert abs(twice.z - once.z) <= 1e-12 * scale
    assert abs(twice.t - once.t) <= 1e-12 * scale


@settings(max_examples=200, deadline=None)
@given(z=coord, t=coord, eta=rapidity)
def test_light_cone_product_invariant_under_boost(z, t, eta):
    p = ls.SpacetimePoint.from_zt(z, t)
    boosted = ls.boost_light_cone(p, eta)
    scale = max(1.0, boosted.u ** 2 + boosted.v ** 2)
    assert abs(boosted.u * boosted.v - p.u * p.v) <= 1e-13 * scale


def test_momentum_boost_squeezes_opposite_axes():
    q = ls.MomentumPoint.from_light_cone(1.0, 1.0)
    boosted = ls.boost_momentum(q, 1.0)
    assert boosted.qv == pytest.approx(math.e, rel=1e-12)
    assert boosted.qu == pytest.approx(1.0 / math.e, rel=1e-12)


def test_oscillator_equivalent_eta():
    assert ls.oscillator_equivalent_eta(0.75) == 1.5


# ── Wave functions ───────────────────────────────────────────────────────────

def test_spatial_wavefunction_examples():
    assert ls.spatial_wavefunction(ls.BoostedOscillatorState(0.0))(0.0, 0.0) == pytest.approx(1.0 / math.sqrt(math.pi))
    # η = 1 at (1, 1): u = √2, v = 0
    value = ls.spatial_wavefunction(ls.BoostedOscillatorState(1.0))(1.0, 1.0)
    assert value == pytest.approx(math.exp(-math.exp(-2.0)) / math.sqrt(math.pi), rel=1e-14)
    assert value == pytest.approx(0.4928, abs=1e-4)


def test_rest_state_is_circular_gaussian():
    psi = ls.spatial_wavefunction(ls.BoostedOscillatorState(0.0))
    assert psi(0.6, -1.2) == pytest.approx(math.exp(-0.5 * (0.36 + 1.44)) / math.sqrt(math.pi), rel=1e-14)


def test_momentum_wavefunction_mirrors_time_component():
    state = ls.BoostedOscillatorState(0.8)
    q = np.linspace(-3.0, 3.0, 13)
    qz, q0 = np.meshgrid(q, q, indexing="ij")
    np.testing.assert_array_equal(ls.momentum_wavefunction(state)(qz, q0), ls.spatial_wavefunction(state)(qz, -q0))


@settings(max_examples=100, deadline=None)
@given(z=coord, t=coord, eta=rapidity)
def test_space_time_symmetries(z, t, eta):
    psi = ls.spatial_wavefunction(ls.BoostedOscillatorState(eta))
    psi_flip = ls.spatial_wavefunction(ls.BoostedOscillatorState(-eta))
    assert psi(z, t) == psi(t, z)
    assert psi(z, -t) == pytest.approx(psi_flip(z, t), rel=1e-15, abs=1e-300)


def test_boosted_state_matches_coupled_oscillator_at_double_squeeze():
    nodes = np.linspace(-3.0, 3.0, 25)
    z, t = np.meshgrid(nodes, nodes, indexing="ij")
    for eta in (0.0, 0.4, 1.0):
        boosted = ls.spatial_wavefunction(ls.BoostedOscillatorState(eta))(z, t)
        coupled = ground_state_for_eta(ls.oscillator_equivalent_eta(eta))(z, t)
        np.testing.assert_allclose(boosted, coupled, rtol=0, atol=1e-12)


def test_density_peaks_along_z_equals_t():
    psi = ls.spatial_wavefunction(ls.BoostedOscillatorState(1.0))
    assert psi(2.0, 2.0) > psi(2.0, -2.0)


# ── Quadrature ───────────────────────────────────────────────────────────────

@pytest.mark.parametrize("eta", [0.0, 1.0, 2.0, -1.0])
@pytest.mark.parametrize("rep", list(ls.Representation))
def test_normalization(eta, rep):
    assert ls.normalization(ls.BoostedOscillatorState(eta), rep) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("eta", [0.0, 0.5, 1.0, 2.0])
def test_widths_increase_in_the_same_direction(eta):
    state = ls.BoostedOscillatorState(eta)
    expected = math.cosh(2.0 * eta) / 2.0
    var_z = ls.marginal_width(state, ls.WidthAxis.SPACE_Z)
    var_qz = ls.marginal_width(state, "momentum_qz")
    assert var_z == pytest.approx(expected, abs=1e-8)
    assert var_qz == pytest.approx(expected, abs=1e-8)
    assert var_z == pytest.approx(var_qz, abs=1e-8)


def test_width_example_at_unit_rapidity():
    assert ls.marginal_width(ls.BoostedOscillatorState(1.0), ls.WidthAxis.SPACE_Z) == pytest.approx(1.88110, abs=1e-5)


@pytest.mark.parametrize("eta", [0.0, 0.7, 1.5])
def test_light_cone_variances_and_area(eta):
    var_u, var_v = ls.light_cone_variances(ls.BoostedOscillatorState(eta))
    assert var_u == pytest.approx(math.exp(2 * eta) / 2, rel=1e-10)
    assert var_v == pytest.approx(math.exp(-2 * eta) / 2, rel=1e-10)
    assert var_u * var_v == pytest.approx(0.25, rel=1e-10)


@pytest.mark.parametrize("eta", [0.0, 0.5, 1.0, 1.5])
def test_fourier_transform_reproduces_momentum_wavefunction(eta):
    state = ls.BoostedOscillatorState(eta)
    q = np.linspace(-4.0, 4.0, 17)
    qz, q0 = np.meshgrid(q, q, indexing="ij")
    exact = ls.momentum_wavefunction(state)(qz, q0)
    transformed = ls.fourier_oracle(state, qz, q0)
    assert transformed.shape == exact.shape
    assert np.max(np.abs(transformed - exact)) / np.max(np.abs(exact)) <= 1e-6


def test_fourier_oracle_at_origin_is_the_integral_of_psi():
    state = ls.BoostedOscillatorState(0.0)
    # ∬ π^{-1/2} e^{-(z²+t²)/2} = 2π · π^{-1/2}
    assert float(ls.fourier_oracle(state, 0.0, 0.0)) == pytest.approx(1.0 / math.sqrt(math.pi), rel=1e-12)


# ── Invariant oscillator equation ────────────────────────────────────────────

@pytest.mark.parametrize("eta", [0.0, 0.5, 1.0])
def test_residual_small_at_fine_spacing(eta):
    grid = ls.ResidualGrid(extent=3.0, spacing=1e-3)
    assert ls.invariant_equation_residual(ls.BoostedOscillatorState(eta), grid) <= 1e-5


@pytest.mark.parametrize("eta", [0.0, 0.5, 1.0])
def test_residual_converges_at_second_order(eta):
    grid = ls.ResidualGrid(extent=3.0, spacing=1e-2)
    assert ls.residual_convergence_order(ls.BoostedOscillatorState(eta), grid) == pytest.approx(2.0, abs=0.05)


def test_non_solution_has_large_residual(monkeypatch):
    monkeypatch.setattr(ls, "EIGENVALUE", 1.0)
    grid = ls.ResidualGrid(extent=3.0, spacing=1e-3)
    assert ls.invariant_equation_residual(ls.BoostedOscillatorState(0.0), grid) > 0.1


@pytest.mark.parametrize(
    "kwargs,match",
    [
        ({"extent": 3.0, "spacing": 1e-3, "points": 4}, "degenerate"),
        ({"extent": 3.0, "spacing": 0.05}, "spacing"),
        ({"extent": -1.0, "spacing": 1e-3}, "extent"),
    ],
)
def test_residual_grid_validation(kwargs, match):
    with pytest.raises(DomainError, match=match):
        ls.ResidualGrid(**kwargs)


# ── Density grids ────────────────────────────────────────────────────────────

def test_density_grid_symmetric_at_rest():
    nodes, density = ls.density_grid(ls.BoostedOscillatorState(0.0), ls.Representation.SPACE, 4.0, 21)
    np.testing.assert_array_equal(nodes, -nodes[::-1])
    np.testing.assert_array_equal(density, density.T)
    np.testing.assert_array_equal(density, density[::-1, ::-1])


def test_density_grid_riemann_sum_normalized():
    nodes, density = ls.density_grid(ls.BoostedOscillatorState(0.5), ls.Representation.SPACE, 8.0, 256)
    cell = (nodes[1] - nodes[0]) ** 2
    assert density.sum() * cell == pytest.approx(1.0, abs=0.02)


@pytest.mark.parametrize("workers", [2, 3, 7])
def test_density_grid_independent_of_workers(workers):
    state = ls.BoostedOscillatorState(1.2)
    _, serial = ls.density_grid(state, ls.Representation.MOMENTUM, 5.0, 61, workers=1)
    _, parallel = ls.density_grid(state, ls.Representation.MOMENTUM, 5.0, 61, workers=workers)
    np.testing.assert_array_equal(serial, parallel)


def test_boosted_state_rejects_non_finite_rapidity():
    with pytest.raises(DomainError):
        ls.BoostedOscillatorState(float("inf"))


@pytest.mark.parametrize("eta", [400.0, -400.0])
def test_boosted_state_rejects_overflowing_rapidity(eta):
    with pytest.raises(DomainError, match="must not exceed"):
        ls.BoostedOscillatorState(eta)


def test_boosted_state_accepts_the_rapidity_limit():
    assert ls.BoostedOscillatorState(350.0).eta == 350.0


def test_narrow_light_cone_variance_resolved_at_high_rapidity():
    var_u, var_v = ls.light_cone_variances(ls.BoostedOscillatorState(20.0))
    assert var_u == pytest.approx(0.5 * math.exp(40.0), rel=1e-8)
    assert var_v == pytest.approx(0.5 * math.exp(-40.0), rel=1e-8)
