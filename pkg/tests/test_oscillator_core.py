"""Tests for services/oscillator_core."""
import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from core.errors import DomainError
from services.oscillator_core import (
    NormalCoordinates,
    OscillatorSystem,
    Squeeze,
    coupling_for_eta,
    eta_from_coupling,
    from_normal,
    ground_state,
    ground_state_for_eta,
    normal_mode_frequencies,
    normalization,
    potential_eigen_eta,
    to_normal,
)

finite_coord = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False)


def test_uncoupled_system_has_zero_squeeze():
    assert eta_from_coupling(OscillatorSystem(m=1.0, K=1.0, C=0.0)).eta == 0.0


def test_eta_closed_form_example():
    # K=5, C=3: e^{2η} = 8/2 = 4
    assert eta_from_coupling(OscillatorSystem(m=1.0, K=5.0, C=3.0)).eta == pytest.approx(math.log(2.0), rel=1e-14)


def test_eta_root_finding_oracle():
    sys_ = OscillatorSystem(m=2.0, K=3.0, C=-1.2)
    root = brentq(lambda eta: math.exp(2 * eta) - (sys_.K + sys_.C) / (sys_.K - sys_.C), -5.0, 5.0, xtol=1e-15)
    assert eta_from_coupling(sys_).eta == pytest.approx(root, abs=1e-12)


@pytest.mark.parametrize("C", [0.0, 0.5, -2.0, 3.9])
def test_eigen_route_matches_closed_form(C):
    sys_ = OscillatorSystem(m=1.0, K=4.0, C=C)
    assert potential_eigen_eta(sys_) == pytest.approx(eta_from_coupling(sys_).eta, abs=1e-12)


@pytest.mark.parametrize("eta", [-2.0, 0.0, 0.3, 4.0])
def test_coupling_for_eta_round_trip(eta):
    sys_ = OscillatorSystem.from_eta(eta, K=2.0)
    assert sys_.C == coupling_for_eta(eta, 2.0) == pytest.approx(2.0 * math.tanh(eta))
    assert eta_from_coupling(sys_).eta == pytest.approx(eta, abs=1e-12)


@pytest.mark.parametrize(
    "kwargs,match",
    [
        ({"m": 1.0, "K": 1.0, "C": 1.0}, "bound potential"),
        ({"m": 1.0, "K": 1.0, "C": -1.5}, "bound potential"),
        ({"m": 0.0, "K": 1.0}, "mass"),
        ({"m": 1.0, "K": -1.0}, "spring constant"),
        ({"m": 1.0, "K": float("inf")}, "finite"),
    ],
)
def test_invalid_systems_rejected(kwargs, match):
    with pytest.raises(DomainError, match=match):
        OscillatorSystem(**kwargs)


def test_domain_error_is_value_error():
    with pytest.raises(ValueError):
        OscillatorSystem(m=1.0, K=1.0, C=2.0)


def test_normal_mode_frequencies():
    low, high = normal_mode_frequencies(OscillatorSystem(m=2.0, K=5.0, C=3.0))
    assert low == pytest.approx(1.0)
    assert high == pytest.approx(2.0)
    # ω₊/ω₋ = e^η
    assert high / low == pytest.approx(math.exp(eta_from_coupling(OscillatorSystem(m=2.0, K=5.0, C=3.0)).eta))


def test_squeeze_value_object():
    s = Squeeze(0.5)
    assert s.factor == pytest.approx(math.exp(0.5))
    assert s.flipped() == Squeeze(-0.5)
    with pytest.raises(DomainError):
        Squeeze(float("nan"))


def test_normal_coordinates_examples():
    y = to_normal(1.0, 1.0)
    assert y.y1 == 0.0
    assert y.y2 == pytest.approx(math.sqrt(2.0))
    assert from_normal(NormalCoordinates(0.0, math.sqrt(2.0))) == pytest.approx((1.0, 1.0))


@settings(max_examples=200, deadline=None)
@given(x1=finite_coord, x2=finite_coord)
def test_rotation_preserves_radius_and_inverts(x1, x2):
    y = to_normal(x1, x2)
    assert y.y1 ** 2 + y.y2 ** 2 == pytest.approx(x1 ** 2 + x2 ** 2, rel=1e-12, abs=1e-12)
    back = y.to_cartesian()
    assert back[0] == pytest.approx(x1, abs=1e-12)
    assert back[1] == pytest.approx(x2, abs=1e-12)


def test_ground_state_at_origin():
    psi = ground_state(OscillatorSystem(m=1.0, K=5.0, C=3.0))
    assert psi(0.0, 0.0) == pytest.approx(1.0 / math.sqrt(math.pi), rel=1e-15)


def test_ground_state_uncoupled_factorizes():
    psi = ground_state(OscillatorSystem(m=1.0, K=1.0))
    assert psi(0.3, -1.1) == pytest.approx(math.exp(-0.5 * (0.09 + 1.21)) / math.sqrt(math.pi), rel=1e-14)


def test_ground_state_along_diagonal():
    # η = ln 2 on x1 = x2 = 1: only y2 = √2 contributes, weight e^{-η} = 1/2
    psi = ground_state(OscillatorSystem(m=1.0, K=5.0, C=3.0))
    assert psi(1.0, 1.0) == pytest.approx(math.exp(-0.5) / math.sqrt(math.pi), rel=1e-14)


@pytest.mark.parametrize("eta", [0.0, 0.5, 2.0, 6.0, -3.0])
def test_normalization(eta):
    assert normalization(OscillatorSystem.from_eta(eta)) == pytest.approx(1.0, abs=1e-10)


@settings(max_examples=100, deadline=None)
@given(eta=st.floats(min_value=-4.0, max_value=4.0), x1=finite_coord, x2=finite_coord)
def test_exchange_symmetry(eta, x1, x2):
    psi = ground_state_for_eta(eta)
    assert psi(x1, x2) == psi(x2, x1)


@settings(max_examples=100, deadline=None)
@given(eta=st.floats(min_value=-4.0, max_value=4.0), x1=finite_coord, x2=finite_coord)
def test_sign_flip_mirrors_second_coordinate(eta, x1, x2):
    assert ground_state_for_eta(-eta)(x1, x2) == pytest.approx(ground_state_for_eta(eta)(x1, -x2), rel=1e-15, abs=1e-300)


def test_sign_flip_is_not_a_plain_exchange():
    eta = 1.0
    assert ground_state_for_eta(-eta)(1.0, 0.2) != pytest.approx(ground_state_for_eta(eta)(0.2, 1.0), rel=1e-6)


def test_array_evaluation_shape():
    psi = ground_state_for_eta(0.7)
    grid = np.linspace(-2, 2, 9)
    assert psi(grid[:, None], grid[None, :]).shape == (9, 9)
