import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tlsfloquet.classifier import triple_sum_T
from tlsfloquet.errors import AccuracyError, UnsupportedSpectrumError
from tlsfloquet.fourier import FourierSeries, integrate_from_zero, mean, multiply, remove_mean
from tlsfloquet.interaction import Interaction, build_phase_functions, build_q, parse_harmonics
from tlsfloquet.special import bessel_j

from conftest import X1, X2, bessel_zero_drive, cos_drive, quad_primitive


def test_interaction_basic_fields():
    f = Interaction(4.0, 1.0, ((1, 0.5 - 0.25j), (3, 0.1), (1, 0.5)))
    assert f.harmonics == ((1, 1.0 - 0.25j), (3, 0.1 + 0j))
    assert f.chi2 == 0.5
    assert f.amplitude == pytest.approx(2 * abs(1.0 - 0.25j))
    assert f.series().is_real(1e-14)
    assert not f.is_monochromatic


def test_interaction_validation():
    with pytest.raises(ValueError):
        Interaction(0.0)
    with pytest.raises(ValueError):
        Interaction(1.0, 0.0, ((0, 1.0),))


def test_drive_evaluation_and_primitive():
    f = Interaction(3.0, 0.4, ((1, 0.7 + 0.2j), (2, -0.3j)))
    t = np.linspace(0.0, 5.0, 9)
    series = f.series()
    assert np.allclose(f(t), series(t).real, atol=1e-13)
    assert np.allclose(f.primitive(t), quad_primitive(f, t), atol=1e-12)


def test_dict_roundtrip():
    f = Interaction(2.0, 1.0, ((1, 0.3 + 0.1j), (2, 0.5)))
    assert Interaction.from_dict(f.to_dict()) == f


def test_parse_harmonics():
    assert parse_harmonics(["1:0.5", "2:0.1:-0.2"]) == ((1, 0.5 + 0j), (2, 0.1 - 0.2j))
    with pytest.raises(ValueError):
        parse_harmonics(["1"])


# -- q and Q0..Q3 ---------------------------------------------------------------

def test_q_trivial_drive():
    q = build_q(Interaction(3.0))
    assert q.distance(FourierSeries.constant(3.0, 1.0)) < 1e-14


@pytest.mark.parametrize("omega,phi", [(10.0, 12.02), (1.0, 0.7), (5.0, 1.0)])
def test_q_matches_jacobi_anger(omega, phi):
    q = build_q(cos_drive(omega, phi))
    x = phi / omega
    for n in range(-30, 31):
        assert abs(q[n] - bessel_j(n, x)) < 1e-10
    assert abs(q(0.0) - 1.0) < 1e-12


def test_Q0_has_doubled_argument():
    f = cos_drive(10.0, 3.0)
    pf = build_phase_functions(f)
    assert abs(mean(pf.Q0) - bessel_j(0, 2 * 3.0 / 10.0)) < 1e-12
    for n in range(6):
        assert abs(pf.Q0[n] - bessel_j(n, 0.6)) < 1e-12


def test_odd_chi2_uses_half_lattice():
    f = Interaction.monochromatic(2.0, 1.0, F0=1.0)  # chi2 = 1
    q = build_q(f)
    assert q.base_freq == 1.0
    t = np.linspace(0.0, 4 * math.pi, 13)
    assert np.allclose(q(t), np.exp(1j * f.primitive(t)), atol=1e-12)


def test_non_integer_chi2_rejected():
    with pytest.raises(UnsupportedSpectrumError):
        build_q(Interaction.monochromatic(2.0, 1.0, F0=0.3))


@given(st.floats(1.0, 20.0), st.floats(0.0, 3.0), st.floats(0.0, 3.0), st.integers(-2, 2),
       st.integers(0, 2**31))
def test_q_is_a_phase(omega, a1, a2, k, seed):
    f = Interaction(omega, 0.5 * k * omega, ((1, a1), (2, 0.5j * a2)))
    q = build_q(f)
    rng = np.random.default_rng(seed)
    t = rng.uniform(0.0, 10.0, 64) / omega
    assert np.max(np.abs(np.abs(q(t)) - 1.0)) < 1e-12


@pytest.mark.parametrize("phi", [0.3, 5.0, 12.0246])
def test_Q0_inverse_is_conjugate(phi):
    Q0 = build_phase_functions(cos_drive(10.0, phi)).Q0
    prod = multiply(Q0, Q0.conj())
    assert prod.distance(FourierSeries.constant(10.0, 1.0)) < 1e-10


@pytest.mark.parametrize("a", [1, 2, 3])
def test_mean_Q1_vanishes_at_bessel_zeros(a):
    pf = build_phase_functions(bessel_zero_drive(10.0, a))
    assert abs(mean(pf.Q1)) < 1e-12


@pytest.mark.parametrize("phi", [0.5, 3.0, 12.0, 40.0])
def test_renormalised_part_of_mean_Q1_vanishes(phi):
    # sum_m (J_m^2 - J_{-m}^2) / m = 0 for any argument; what is left of
    # M(Q1) is M(Q0) times the constant of the anchored primitive
    pf = build_phase_functions(cos_drive(10.0, phi))
    Q0 = pf.Q0
    anchor = integrate_from_zero(remove_mean(Q0.conj()))[0]
    assert abs(mean(pf.Q1) - mean(Q0) * anchor) < 1e-12


def test_unresolved_q_is_reported():
    with pytest.raises(AccuracyError):
        build_q(Interaction(0.125, 0.0625, ((2, 0.5j),)))


@pytest.mark.parametrize("x", [X1, X2])
def test_mean_Q2_vanishes_at_bessel_zero(x):
    pf = build_phase_functions(cos_drive(10.0, 5.0 * x))
    assert abs(mean(pf.Q0)) < 1e-12
    assert abs(mean(pf.Q2)) < 1e-12


@pytest.mark.parametrize("omega", [1.0, 10.0, 3.7])
@pytest.mark.parametrize("a", [1, 2])
def test_mean_Q3_matches_triple_sum(omega, a):
    f = bessel_zero_drive(omega, a)
    pf = build_phase_functions(f)
    x = f.chi1
    ref = triple_sum_T(x) / omega ** 2
    assert abs(mean(pf.Q3) - ref) <= 1e-10 * abs(ref)


def test_Q1_definition():
    pf = build_phase_functions(cos_drive(5.0, 1.0))
    Q0 = pf.Q0
    t = np.array([0.11, 0.5, 0.93])
    inner = quad_primitive(lambda s: np.conj(Q0(s)) - np.conj(mean(Q0)), t)
    assert np.allclose(pf.Q1(t), Q0(t) * inner, atol=1e-12)
