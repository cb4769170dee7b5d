import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tlsfloquet.errors import FrequencyMismatchError, SecularTermError
from tlsfloquet.fourier import (
    FourierSeries,
    bracket,
    index_budget,
    integrate_from_zero,
    linear_combination,
    mean,
    multiply,
    remove_mean,
    renorm2,
    renorm_n,
)
from tlsfloquet.special import bessel_j

from conftest import quad_mean, quad_primitive, series, symmetric_family

TOL = 1e-10
W = 1.0


def exp_series(m, w=W, amp=1.0):
    return FourierSeries.exponential(w, m, amp)


def random_times(rng, w, n=32):
    return rng.uniform(-3.0, 3.0, n) * 2 * math.pi / w


# -- construction and storage ----------------------------------------------

def test_from_coeffs_roundtrip():
    s = FourierSeries.from_coeffs(2.0, {-2: 1j, 3: 0.5})
    assert s.truncation == 3
    assert s[-2] == 1j and s[3] == 0.5 and s[0] == 0 and s[7] == 0
    assert s.coeffs == {-2: 1j, 3: 0.5}


def test_json_roundtrip():
    s = FourierSeries.from_coeffs(0.5, {-1: 1 - 2j, 0: 0.25, 4: 3j})
    back = FourierSeries.from_json(s.to_json())
    assert back.base_freq == 0.5
    assert back.distance(s) == 0.0


def test_bad_inputs():
    with pytest.raises(ValueError):
        FourierSeries(0.0, [1.0])
    with pytest.raises(ValueError):
        FourierSeries(1.0, [1.0, 2.0])


def test_real_flag():
    s = FourierSeries.from_coeffs(1.0, {1: 1 + 1j, -1: 1 - 1j, 0: 2.0})
    assert s.is_real()
    assert not (s * 1j).is_real()
    t = np.linspace(0, 7, 11)
    assert np.max(np.abs(s(t).imag)) < 1e-14


def test_evaluation_matches_definition():
    rng = np.random.default_rng(0)
    s = FourierSeries(3.0, rng.normal(size=9) + 1j * rng.normal(size=9))
    t = rng.uniform(0, 5, 20)
    direct = sum(s[m] * np.exp(1j * m * 3.0 * t) for m in range(-4, 5))
    assert np.allclose(s(t), direct, atol=1e-13)


def test_long_time_evaluation_reduces_argument():
    s = exp_series(1, 10.0)
    period = 2 * math.pi / 10.0
    assert abs(s(1e9 * period) - 1.0) < 1e-6


# -- multiply ---------------------------------------------------------------

def test_multiply_inverse_harmonics():
    out = multiply(exp_series(1), exp_series(-1))
    assert out.distance(FourierSeries.constant(W, 1.0)) < 1e-15


def test_multiply_scalar():
    a = FourierSeries.from_coeffs(W, {-1: 2.0, 2: 1j})
    assert (a * 3.0).distance(FourierSeries.from_coeffs(W, {-1: 6.0, 2: 3j})) == 0.0
    assert (multiply(FourierSeries.constant(W, 3.0), a)).distance(a * 3.0) < 1e-15


def test_multiply_frequency_mismatch():
    with pytest.raises(FrequencyMismatchError):
        multiply(exp_series(1, 1.0), exp_series(1, 2.0))


def test_multiply_bessel_doubling():
    # q = exp(i x sin t) has coefficients J_n(x); q*q = exp(2 i x sin t)
    x = 1.0
    q = FourierSeries.from_coeffs(W, {n: bessel_j(n, x) for n in range(-30, 31)})
    qq = q * q
    n_quad = 256
    t = np.arange(n_quad) * 2 * math.pi / n_quad
    ref = np.fft.fft(np.exp(2j * x * np.sin(t))) / n_quad
    for n in range(6):
        assert abs(qq[n] - ref[n]) < 1e-13


def test_multiply_truncation_grows_additively():
    a = FourierSeries(W, np.ones(5))
    b = FourierSeries(W, np.ones(7))
    assert multiply(a, b).truncation == 5


def test_index_budget():
    a = FourierSeries(W, np.ones(41))
    with index_budget(10):
        assert multiply(a, a).truncation == 10
    assert multiply(a, a).truncation == 40


# -- mean ---------------------------------------------------------------------

def test_mean_examples():
    assert mean(FourierSeries.constant(W, 5.0)) == 5.0
    assert mean(exp_series(1)) == 0.0


# -- integrate_from_zero -------------------------------------------------------

def test_integrate_single_harmonic():
    w = 3.0
    F = integrate_from_zero(exp_series(1, w))
    assert abs(F[1] - 1 / (1j * w)) < 1e-15
    assert abs(F[0] + 1 / (1j * w)) < 1e-15
    assert F(0.0) == 0


def test_integrate_zero():
    assert integrate_from_zero(FourierSeries.zero(W)).max_abs() == 0.0


def test_integrate_rejects_mean():
    with pytest.raises(SecularTermError):
        integrate_from_zero(FourierSeries.from_coeffs(W, {0: 1.0, 1: 1.0}))


def test_integrate_periodic_primitive_vanishes_after_period():
    from tlsfloquet import Interaction, build_phase_functions

    f = Interaction.monochromatic(10.0, 3.0)
    Q0 = build_phase_functions(f).Q0
    F = integrate_from_zero(remove_mean(Q0))
    T = 2 * math.pi / 10.0
    assert abs(F(T)) < 1e-12
    # independent quadrature of the same integrand at an interior point
    t = np.array([0.37 * T])
    ref = quad_primitive(lambda s: Q0(s) - mean(Q0), t)
    assert abs(F(t[0]) - ref[0]) < 1e-12


@given(series(zero_mean=True))
def test_integrate_derivative_roundtrip(a):
    F = integrate_from_zero(a)
    assert F.derivative().distance(a) < 1e-12
    assert abs(F(0.0)) < 1e-12


# -- bracket and renormalisation ----------------------------------------------

def test_bracket_one_harmonic():
    w = 2.0
    out = bracket(FourierSeries.constant(w, 1.0), exp_series(1, w))
    expected = FourierSeries.from_coeffs(w, {1: 1 / (1j * w), 0: -1 / (1j * w)})
    assert out.distance(expected) < 1e-15


def test_bracket_requires_zero_mean():
    with pytest.raises(SecularTermError):
        bracket(exp_series(1), FourierSeries.constant(W, 1.0))


def test_renorm2_examples():
    w = 2.0
    one = FourierSeries.constant(w, 1.0)
    assert renorm2(one, exp_series(1, w)).distance(bracket(one, exp_series(1, w))) < 1e-15
    assert renorm2(one, one).max_abs() == 0.0


def test_renorm_n_small_cases():
    a = FourierSeries.from_coeffs(W, {1: 2.0, -2: 1j})
    assert renorm_n([a]).distance(a) == 0.0
    with pytest.raises(ValueError):
        renorm_n([])


def test_renorm3_of_zero_mean_Q0(case_iii_drive):
    from tlsfloquet import build_phase_functions

    pf = build_phase_functions(case_iii_drive)
    Q0 = pf.Q0
    assert abs(mean(Q0)) < 1e-12
    lhs = renorm_n([Q0, Q0, Q0])
    assert lhs.distance(renorm2(Q0, pf.Q2)) < 1e-12


def test_renormalised_sum_vs_plain_integrals():
    # R3(1|e^{it}|1) + R2(i e^{it}|1) vanishes
    one = FourierSeries.constant(W, 1.0)
    e1 = exp_series(1)
    assert (renorm_n([one, e1, one]) + renorm2(e1 * 1j, one)).max_abs() == 0.0
    # while the plain nested integrals add up to e^{it} - 1
    t = np.array([0.3, 1.1, 2.9, 5.0])
    inner = quad_primitive(lambda s: np.exp(1j * s) * s, t)
    plain = inner + 1j * np.exp(1j * t) * t
    assert np.allclose(plain, np.exp(1j * t) - 1.0, atol=1e-12)


@given(
    st.floats(0.2, 2.0), st.floats(0.2, 2.0), st.floats(0.2, 2.0),
    st.integers(1, 4), st.sampled_from([1.0, 2.0, 5.0]),
)
def test_renormalised_sum_vs_plain_integrals_family(alpha, beta, gamma, k, w):
    one = FourierSeries.constant(w, 1.0)
    a2 = exp_series(k, w, beta)
    b1 = exp_series(k, w, 1j * alpha * beta * gamma / (k * w))
    renormed = renorm_n([one * alpha, a2, one * gamma]) + renorm2(b1, one)
    assert renormed.max_abs() < TOL
    t = np.linspace(0.1, 3.0, 6) * 2 * math.pi / w
    x = k * w
    nested = alpha * gamma * quad_primitive(lambda s: beta * np.exp(1j * x * s) * s, t, nodes=96)
    plain = nested + b1(t) * t
    expected = alpha * beta * gamma * (np.exp(1j * x * t) - 1.0) / x ** 2
    assert np.max(np.abs(plain - expected)) < TOL


# -- bracket mean identities -------------------------------------------

def M(s):
    return mean(s)


def triple(a, b, c):
    """Mean-value-ready ``(a|b|c)`` with ``M(c) = M(b|c) = 0`` assumed."""
    return bracket(a, bracket(b, c))


@given(symmetric_family(2))
def test_bracket_mean_vanishes_for_matched_pair(pair):
    b, c = pair
    assert abs(M(bracket(b, c))) < TOL


@given(series(zero_mean=True, base=1.0), series(zero_mean=True, base=1.0))
def test_bracket_coefficient_formula(b, c):
    h = bracket(b, c)
    w = b.base_freq
    for n in range(-h.truncation, h.truncation + 1):
        Hn = sum(
            1j * c[m] * (b[n] - b[n - m]) / (m * w)
            for m in range(-c.truncation, c.truncation + 1) if m != 0
        )
        assert abs(h[n] - Hn) < TOL


@given(series(zero_mean=True, base=2.0), series(zero_mean=True, base=2.0))
def test_bracket_mean_antisymmetry(b, c):
    assert abs(M(bracket(b, c)) + M(bracket(c, b))) < TOL


@given(series(zero_mean=True))
def test_self_bracket_mean_vanishes(c):
    assert abs(M(bracket(c, c))) < TOL


@given(symmetric_family(2), series(zero_mean=True, max_trunc=6, base=1.0))
def test_triple_bracket_mean_by_quadrature(bc, a):
    b, c = bc
    lhs = M(triple(a, b, c))
    T = 2 * math.pi
    n = 512
    t = np.arange(n) * (T / n)
    A = quad_primitive(a, t)
    C = quad_primitive(c, t)
    rhs = -np.mean(b(t) * A * C)
    assert abs(lhs - rhs) < TOL


@given(symmetric_family(3))
def test_triple_bracket_outer_exchange(abc):
    a, b, c = abc
    assert abs(M(triple(a, b, c)) - M(triple(c, b, a))) < TOL


@given(symmetric_family(3))
def test_triple_bracket_cyclic_sum(abc):
    a, b, c = abc
    total = M(triple(a, b, c)) + M(triple(b, c, a)) + M(triple(c, a, b))
    assert abs(total) < TOL


def test_triple_bracket_cyclic_terms_nonzero():
    rng = np.random.default_rng(3)
    D = rng.normal(size=7) + 1j * rng.normal(size=7)
    D[3] = 0.0
    fam = [FourierSeries(1.0, D * rng.uniform(0.5, 2.0, 4)[np.abs(np.arange(-3, 4))]) for _ in range(3)]
    a, b, c = fam
    terms = [M(triple(a, b, c)), M(triple(b, c, a)), M(triple(c, a, b))]
    assert max(abs(x) for x in terms) > 1e-3
    assert abs(sum(terms)) < TOL


@given(series(zero_mean=True))
def test_triple_self_bracket_mean_vanishes(a):
    assert abs(M(triple(a, a, a))) < TOL


# -- renormalisation identities ---------------------------------------------

@given(st.lists(series(base=1.0, max_trunc=4), min_size=2, max_size=5))
def test_renorm_n_is_iterated_renorm2(items):
    lhs = renorm_n(items)
    rest = renorm_n(items[1:])
    rhs = bracket(items[0], rest - mean(rest))
    assert lhs.distance(rhs) < TOL * max(1.0, lhs.max_abs())


@given(st.lists(series(base=1.0, max_trunc=4), min_size=1, max_size=4), series(base=1.0, max_trunc=4),
       series(base=1.0, max_trunc=4))
def test_renorm_n_absorbs_inner_renorm2(head, b, c):
    lhs = renorm_n(head + [renorm2(b, c)])
    rhs = renorm_n(head + [b, c])
    assert lhs.distance(rhs) < TOL * max(1.0, lhs.max_abs())


@given(series(base=1.0), st.lists(series(base=1.0), min_size=1, max_size=4))
def test_renorm2_linearity(a, bs):
    total = linear_combination([(1.0, b) for b in bs], 1.0)
    lhs = renorm2(a, total)
    rhs = linear_combination([(1.0, renorm2(a, b)) for b in bs], 1.0)
    assert lhs.distance(rhs) < TOL


@given(series(zero_mean=True, base=1.0))
def test_mean_of_renormalised_square_vanishes(Q0):
    assert abs(M(renorm2(Q0, Q0))) < TOL


# -- evaluation consistency ------------------------------------------------------

@given(series(base=1.0), series(base=1.0), st.integers(0, 10_000))
def test_pointwise_consistency(a, b, seed):
    rng = np.random.default_rng(seed)
    t = random_times(rng, 1.0)
    scale = 1.0 + a.norm() * b.norm()
    assert np.max(np.abs((a * b)(t) - a(t) * b(t))) < 1e-10 * scale
    assert np.max(np.abs((a + b)(t) - (a(t) + b(t)))) < 1e-10 * scale
    assert np.max(np.abs(a.conj()(t) - np.conj(a(t)))) < 1e-10 * scale
    # renorm2 equals b(t) times the quadrature primitive of a - M(a)
    r = renorm2(b, a)
    prim = quad_primitive(lambda s: a(s) - mean(a), t)
    assert np.max(np.abs(r(t) - b(t) * prim)) < 1e-10 * scale


def test_quad_mean_helper_agrees_with_mean():
    s = FourierSeries.from_coeffs(1.0, {0: 0.5 + 1j, 2: 3.0})
    assert abs(quad_mean(s, 2 * math.pi) - mean(s)) < 1e-14
