import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as sint

from orthoframes.errors import SymbolNotPositive
from orthoframes.overlaps import coherent_overlaps, gabor_overlaps
from orthoframes.seedfn import LatticeParams
from orthoframes.symbol import (CoefficientTable, build_symbol, check_positive,
                                coefficients, convolve, parseval_sum,
                                symbol_from_coefficients, symbol_gram)


def _oracle_coeff(F, k, power):
    """``(2 pi)**-1 int_0^{2 pi} cos(k P) F(P)**power dP`` by scipy."""
    val, _ = sint.quad(lambda P: math.cos(k * P) * F(P) ** power, 0, 2 * math.pi,
                       epsabs=1e-14, limit=200)
    return val / (2 * math.pi)


@pytest.mark.parametrize("beta", [1 / 3, 1 / math.pi, 0.45])
def test_one_dimensional_coefficients_against_scipy(beta):
    sym = symbol_from_coefficients(np.array([beta, 1.0, beta]))
    t = coefficients(sym, 8)
    F = lambda P: 1 + 2 * beta * math.cos(P)
    for k in range(4):
        assert t.coeff(k).real == pytest.approx(_oracle_coeff(F, k, -0.5), abs=1e-11)
        assert t.alpha(k).real == pytest.approx(_oracle_coeff(F, k, 0.5), abs=1e-11)


def test_symbol_evaluation_matches_series():
    sym = symbol_from_coefficients(np.array([0.25, 1.0, 0.25]))
    P = np.linspace(0, 2 * math.pi, 7)
    np.testing.assert_allclose(sym(P).real, 1 + 0.5 * np.cos(P), atol=1e-15)
    assert sym.min_value == pytest.approx(0.5)
    assert sym.max_value == pytest.approx(1.5)


def test_two_dimensional_symbol_is_real(lat4):
    sym = build_symbol(coherent_overlaps(LatticeParams(2), 6))
    assert sym.max_imag < 1e-12
    assert sym.min_value > 0.8


def test_coherent_l1_has_zero():
    sym = build_symbol(coherent_overlaps(LatticeParams(1), 8))
    assert sym.min_value < 1e-12
    np.testing.assert_allclose(sym.argmin, (math.pi, math.pi), atol=1e-12)
    with pytest.raises(SymbolNotPositive) as err:
        coefficients(sym, 4)
    assert "zero" in str(err.value)
    assert err.value.value is not None


def test_check_positive_reports_location():
    sym = symbol_from_coefficients(np.array([0.4, 1.0, 0.4]))
    loc, val = check_positive(sym)
    assert val == pytest.approx(0.2)
    assert loc[0] == pytest.approx(math.pi)
    with pytest.raises(SymbolNotPositive):
        check_positive(sym, floor=0.3)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, 0.45), st.floats(-0.2, 0.2))
def test_sum_rule_and_gram(beta, gamma):
    mod = 1 - 2 * abs(beta) - 2 * abs(gamma)
    if mod <= 0.05:
        return
    vals = np.array([gamma, beta, 1.0, beta, gamma])
    sym = symbol_from_coefficients(vals)
    t = coefficients(sym, 48)
    assert t.sum_rule() == pytest.approx(1.0, abs=1e-9)
    from orthoframes.overlaps import OverlapSequence
    g = symbol_gram(t, OverlapSequence.from_array(vals))
    delta = np.zeros(5)
    delta[2] = 1
    np.testing.assert_allclose(g, delta, atol=1e-9)
    lhs, rhs = parseval_sum(t, sym)
    assert lhs == pytest.approx(rhs, abs=1e-9)


def test_table_truncation_and_embedding():
    t = coefficients(symbol_from_coefficients(np.array([0.3, 1.0, 0.3])), 6)
    s = t.truncated(2)
    assert s.radius == 2
    assert s.coeff(1) == t.coeff(1)
    assert s.coeff(3) == 0
    e = t.embed_2d()
    assert e.dims == 2
    assert e.coeff(0, 1) == t.coeff(1)
    assert e.coeff(1, 0) == 0
    np.testing.assert_array_equal(e.row_profile(), t.c)
    assert t.csv_header() == ["k1", "c_re", "c_im", "alphahat_re", "alphahat_im"]
    assert len(e.csv_rows()) == 13 * 13


def test_identity_table():
    t = CoefficientTable.identity(2, 2)
    assert t.coeff(0, 0) == 1 and t.coeff(1, 0) == 0
    assert t.sum_rule() == 1


def test_convolve_centred():
    x = np.array([0, 1, 0.0])
    y = np.array([1, 2, 3.0])
    np.testing.assert_allclose(convolve(x, y), [0, 1, 2, 3, 0])


def test_example1_symbol_in_two_variables(rect_ex1, lat4):
    ov = gabor_overlaps(rect_ex1, lat4, 3)
    sym = build_symbol(ov)
    P1, P2 = 0.7, 1.9
    assert sym(P1, P2).real == pytest.approx(1 + 2 / 3 * math.cos(P2), abs=1e-13)
    t = coefficients(sym, 6)
    assert t.row_profile() is not None
