import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from selberglab.geodesics import enumerate_classes
from selberglab.lefschetz import (
    class_number_form,
    contour_side,
    geometric_side,
    geometric_tail,
    psi_counting,
    residue_side,
    verification_report,
)
from selberglab.mellin import DivergentMellin, ReferenceTestFunction, mellin, zero_function
from selberglab.quadform import discriminant_record
from selberglab.selberg import TRIVIAL_ZERO, ZeroDatum

from oracles import reference_psi

REF = ReferenceTestFunction(4, 3, 1)


def test_geometric_side_examples():
    assert geometric_side(REF, 10) == pytest.approx(2.253653 * 2.8232e-4, rel=1e-4)
    c = enumerate_classes(10)[0]
    expected = 2.2536504730112195 * float(reference_psi(4, 3, 1, c.norm))
    assert geometric_side(REF, 10) == pytest.approx(expected, rel=1e-14)
    assert geometric_side(zero_function(), 1e3) == 0
    assert geometric_side(REF, 6.0) == 0
    with pytest.raises(ValueError):
        geometric_side(REF, 1.0)


@pytest.mark.parametrize("C", [1.1, 1.5, 2.5])
def test_contour_matches_geometric_small_X(C):
    assert contour_side(REF, C, 0, 1e3) == pytest.approx(geometric_side(REF, 1e3), rel=1e-3)


def test_contour_fixed_height():
    psi = ReferenceTestFunction(4, 4, 1)
    assert contour_side(psi, 1.25, 2000.0, 1e3) == pytest.approx(geometric_side(psi, 1e3), rel=1e-5)


def test_contour_preconditions():
    for C in (0.9, 1.0, 4.0, 5.0):
        with pytest.raises(ValueError):
            contour_side(REF, C, 0, 1e3)
    with pytest.raises(ValueError):
        contour_side(REF, 1.25, -1.0, 1e3)
    assert contour_side(zero_function(), 1.25, 0, 1e3) == 0


def test_residue_side():
    m1 = mellin(REF, 1).real
    assert residue_side(REF, [TRIVIAL_ZERO]) == pytest.approx(1 / 60, rel=1e-15)
    assert residue_side(REF, []) == 0
    assert residue_side(REF, [ZeroDatum(1 + 0j, 2)]) == pytest.approx(2 * m1, rel=1e-15)
    z = ZeroDatum(0.5 + 9.5j, 1, "Maass")
    assert residue_side(REF, [TRIVIAL_ZERO, z]) == pytest.approx(m1 + mellin(REF, z.s0).real, rel=1e-14)
    with pytest.raises(DivergentMellin, match="bad"):
        residue_side(REF, [ZeroDatum(5 + 0j, 1, "bad")])


def test_psi_counting_examples():
    assert psi_counting(10) == pytest.approx(1.924847, abs=1e-6)
    assert psi_counting(10) == pytest.approx(4 * math.log((1 + math.sqrt(5)) / 2), rel=1e-15)
    assert psi_counting(6.8) == 0
    with pytest.raises(ValueError):
        psi_counting(1)


def test_psi_counting_step_function():
    norms = sorted({c.norm for c in enumerate_classes(2000)})
    values = [psi_counting(x) for x in [1.5] + norms]
    assert values == sorted(values)
    # right-continuous: the jump belongs to the norm itself
    for N in norms[:20]:
        assert psi_counting(N * (1 + 1e-12)) == psi_counting(N) > psi_counting(N * (1 - 1e-9))


def test_class_number_form_examples():
    assert class_number_form(10) == pytest.approx(1.924847, abs=1e-6)
    r = discriminant_record(12)
    assert r.h_narrow * r.log_eps_plus == pytest.approx(2 * 1.316958, abs=2e-6)
    assert 2 * r.h_wide * r.log_eps_fund == pytest.approx(2 * 1.316958, abs=2e-6)
    with pytest.raises(ValueError):
        class_number_form(0.5)


@settings(max_examples=40, deadline=None)
@given(X=st.floats(1.5, 2e4))
def test_two_route_class_sum(X):
    a, b = psi_counting(X), class_number_form(X)
    assert b == pytest.approx(a, rel=1e-12, abs=1e-300)


def test_geometric_tail_against_mpmath():
    for X in (10.0, 1e5, 1e9):
        expected = float(mpmath.quad(lambda t: reference_psi(4, 3, 1, t), [X, mpmath.inf]))
        assert geometric_tail(REF, X) == pytest.approx(expected, rel=1e-8)
    assert geometric_tail(zero_function(), 10.0) == 0


def test_verification_report_keys():
    rep = verification_report(REF, 1.25, 0, 1e3)
    assert set(rep) == {
        "psi_params", "C", "H", "X", "geometric", "contour", "residue_partial",
        "rel_err_geom_contour", "tail_estimates",
    }
    assert rep["psi_params"] == {"beta": 4, "k": 3, "T": 1}
    assert rep["residue_partial"] == pytest.approx(1 / 60)
    assert rep["rel_err_geom_contour"] <= 1e-3
    assert rep["H"] >= 100
    assert set(rep["tail_estimates"]) == {"geometric_beyond_X", "logderiv_on_line", "contour_last_decade"}
    fixed = verification_report(REF, 1.25, 500.0, 1e3, zeros=[])
    assert fixed["H"] == 500.0 and fixed["residue_partial"] == 0
