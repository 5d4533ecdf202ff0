import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from selberglab.mellin import (
    DivergentMellin,
    GenericTestFunction,
    ReferenceTestFunction,
    beta_closed_form,
    class_membership,
    evaluate,
    inverse_mellin,
    mellin,
    mellin_quadrature,
    zero_function,
)

from oracles import reference_mellin_quad, reference_psi


def test_evaluate_examples():
    psi = ReferenceTestFunction(3, 2, 1)
    assert evaluate(psi, 2) == pytest.approx(0.03125, rel=1e-15)
    assert evaluate(psi, 1) == 0.0
    assert evaluate(psi.scaled(7.0), 7.0) == 0.0
    assert evaluate(psi, 0.5) == 0.0
    for t in (0, -1):
        with pytest.raises(ValueError):
            evaluate(psi, t)


def test_reference_rejects_bad_parameters():
    for args in ((0, 2, 1), (3, -1, 1), (3, 2, 0)):
        with pytest.raises(ValueError):
            ReferenceTestFunction(*args)


@settings(max_examples=100, deadline=None)
@given(beta=st.floats(1.1, 6), k=st.integers(0, 5), T=st.floats(1, 1e3), x=st.floats(0.01, 1e4))
def test_reference_matches_oracle_and_is_nonnegative(beta, k, T, x):
    psi = ReferenceTestFunction(beta, k, T)
    v = psi(T * x)
    assert v >= 0
    assert v == pytest.approx(float(reference_psi(beta, k, T, T * x)), rel=1e-12, abs=1e-300)


def test_mellin_examples():
    assert mellin(ReferenceTestFunction(3, 0, 1), 1) == pytest.approx(0.5, rel=1e-15)
    assert mellin(ReferenceTestFunction(3, 1, 1), 0) == pytest.approx(1 / 12, rel=1e-15)
    assert mellin(ReferenceTestFunction(4, 3, 1), 1) == pytest.approx(1 / 60, rel=1e-15)


def test_beta_closed_form_against_gamma():
    for a in (0.5, 2.0, 3.7):
        for m in (1, 2, 4):
            assert beta_closed_form(a, m) == pytest.approx(
                math.gamma(a) * math.gamma(m) / math.gamma(a + m), rel=1e-13
            )


def test_divergent_strip():
    psi = ReferenceTestFunction(3, 2, 1)
    for s in (3, 3.5 + 2j):
        with pytest.raises(DivergentMellin):
            mellin(psi, s)
        with pytest.raises(DivergentMellin):
            mellin_quadrature(psi, s)
    with pytest.raises(DivergentMellin):
        inverse_mellin(psi, 3.0, 10.0, 2.0)


@pytest.mark.parametrize("beta", [2, 3, 4])
@pytest.mark.parametrize("k", [2, 3])
def test_quadrature_matches_closed_form(beta, k):
    psi = ReferenceTestFunction(beta, k, 1.0)
    for sigma in (0.0, 1.0):
        for tau in (-20.0, -7.5, 0.0, 0.5, 3.0, 20.0):
            s = complex(sigma, tau)
            ref = mellin(psi, s)
            assert abs(mellin_quadrature(psi, s) - ref) <= 1e-8 * abs(ref), s


def test_closed_form_against_mpmath():
    for beta, k, T, s in ((4, 3, 1, 1 + 2j), (2.5, 2, 3.0, 0.3 - 5j), (3, 2, 10.0, 1.9 + 0.1j)):
        got = mellin(ReferenceTestFunction(beta, k, T), s)
        assert got == pytest.approx(reference_mellin_quad(beta, k, T, s), rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(T=st.floats(1, 1e5), sigma=st.floats(-2, 1.9), tau=st.floats(-50, 50))
def test_scale_covariance(T, sigma, tau):
    psi = ReferenceTestFunction(2.0, 2)
    s = complex(sigma, tau)
    assert mellin(psi.scaled(T), s) == pytest.approx(T**s * mellin(psi, s), rel=1e-12)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_decay_along_vertical_lines(k):
    psi = ReferenceTestFunction(4, k, 1)
    h = np.linspace(-100, 100, 2001)
    vals = np.abs(mellin(psi, 1.25 + 1j * h)) * (1 + np.abs(h)) ** (k - 1)
    assert np.all(np.isfinite(vals))
    # bounded: the tail of the window never exceeds its core
    assert vals[np.abs(h) > 50].max() <= vals[np.abs(h) <= 50].max()
    assert vals.max() < math.factorial(k)


def test_vectorized_mellin():
    psi = ReferenceTestFunction(4, 3, 2.0)
    s = np.array([0.5, 1 + 1j, -1 - 3j])
    assert np.allclose(mellin(psi, s), [mellin(psi, z) for z in s], rtol=1e-15)


def test_generic_matches_reference():
    ref = ReferenceTestFunction(3, 2, 2.0)
    gen = GenericTestFunction(lambda t: (t / 2.0) ** -3 * (1 - 2.0 / t) ** 2, 2.0, 3.0, 1)
    assert gen(1.0) == 0.0 and gen(4.0) == ref(4.0)
    for s in (0.5, 1 + 4j, -1 - 10j):
        assert mellin(gen, s) == pytest.approx(mellin(ref, s), rel=1e-9)


def test_zero_function():
    z = zero_function()
    assert mellin(z, 1 + 1j) == 0
    assert inverse_mellin(z, 0.0, 100.0, 2.0) == 0.0
    assert class_membership(z, 5.0, 3).member


@pytest.mark.parametrize("t", [0.5, 1.5, 2.0, 10.0])
def test_inversion_round_trip(t):
    psi = ReferenceTestFunction(3, 2, 1)
    assert inverse_mellin(psi, 0.0, 2000.0, t) == pytest.approx(evaluate(psi, t), abs=1e-6)


def test_inversion_independent_of_line():
    psi = ReferenceTestFunction(4, 3, 1)
    a = inverse_mellin(psi, 0.5, 1000.0, 3.0)
    b = inverse_mellin(psi, 2.5, 1000.0, 3.0)
    assert a == pytest.approx(b, abs=1e-8)
    assert a == pytest.approx(evaluate(psi, 3.0), abs=1e-8)


def test_inversion_preconditions():
    psi = ReferenceTestFunction(3, 2, 1)
    with pytest.raises(ValueError):
        inverse_mellin(psi, 0.0, 0.0, 2.0)
    with pytest.raises(ValueError):
        inverse_mellin(psi, 0.0, 10.0, 0.0)


@pytest.mark.parametrize(
    "beta,k,mu,j",
    [(3, 2, 6, 1), (3, 2, 6, 3), (3, 2, 7, 1), (3, 2, 6, 2), (4, 3, 8, 2), (4, 3, 8, 3),
     (4, 3, 5, 0), (2, 2, 4.5, 0), (3, 4, 6, 3), (3, 1, 2, 0), (3, 1, 2, 1)],
)
def test_membership_matches_analytic_rule(beta, k, mu, j):
    psi = ReferenceTestFunction(beta, k, 1)
    got = class_membership(psi, mu, j, per_decade=2000)
    assert got.member == (j <= k - 1 and mu <= 2 * beta), got.diagnostics
    assert set(got.seminorms) == set(range(j + 1))


def test_membership_seminorm_value():
    # sup_N N^(mu/2) psi(N) for beta = 3, k = 2, mu = 6 is reached as N -> inf: value 1
    got = class_membership(ReferenceTestFunction(3, 2, 1), 6.0, 0)
    assert got.member and got.seminorms[0] == pytest.approx(1.0, rel=1e-4)


def test_membership_rejects_negative_order():
    with pytest.raises(ValueError):
        class_membership(ReferenceTestFunction(3, 2, 1), 1.0, -1)
