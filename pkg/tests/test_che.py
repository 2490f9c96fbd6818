import numpy as np
import pytest
from hypothesis import given, settings

from heunghf.che import CaseKind, CheParams, classify, nearest_integer, shift_delta_exponent, swap_singularities, validate_params
from heunghf.frobenius import frobenius_coefficients, ode_residual

from conftest import complex_st


@pytest.mark.parametrize("params, kind, n", [
    ((1.5, -2, 1, 0.3), CaseKind.GHF_DELTA, 2),
    ((1.5, -2, 0, 0.3), CaseKind.GHF_DELTA_EPS0, 2),
    ((1.5, 0, 1, 0.3), CaseKind.KUMMER, 0),
    ((1.5, 0, 0, 0.3), CaseKind.BESSEL, 0),
    ((1.5, 4, 1, 0.3), CaseKind.NEEDS_DELTA_SHIFT, 2),
    ((-2, 0.5, 1, 0.3), CaseKind.NEEDS_SWAP, 2),
    ((3, 0.5, 1, 0.3), CaseKind.NEEDS_SWAP, 1),
    ((1.5, 1, 1, 0.3), CaseKind.EXCEPTIONAL, None),
    ((1.5, 0.5, 1, 0.3), CaseKind.UNSUPPORTED, None),
])
def test_classify(params, kind, n):
    c = classify(CheParams(*params))
    assert c.kind is kind
    assert c.n_value == n


def test_nearest_integer():
    assert nearest_integer(-2 + 1e-12) == -2
    assert nearest_integer(-2 + 1e-6) is None
    assert nearest_integer(3 + 1e-12j) == 3


def test_shift_examples():
    p, k = shift_delta_exponent(CheParams(1, 3, 2, 5, 7))
    assert p.as_tuple() == (1, -1, 2, 1, 9) and k == -2
    p, k = shift_delta_exponent(CheParams(2, 3, 1, 1, 5))
    assert p.as_tuple() == (2, -1, 1, -1, 9) and k == -2


def test_swap_example():
    p = swap_singularities(CheParams(2, 3, 1, 1, 5))
    assert p.as_tuple() == (3, 2, -1, -1, 4)


def test_validate_params():
    assert validate_params(CheParams(1.5, -1, 1, 1)) == []
    assert validate_params(CheParams(-2, -1, 1, 1))
    assert validate_params(CheParams(1.5, 1, 1, 1))
    assert validate_params(CheParams(float("nan"), -1, 1, 1))


@settings(max_examples=50, deadline=None)
@given(complex_st(), complex_st(), complex_st(), complex_st(), complex_st())
def test_swap_is_involution(g, d, e, a, q):
    p = CheParams(g, d, e, a, q)
    back = swap_singularities(swap_singularities(p))
    assert np.allclose(back.as_tuple(), p.as_tuple(), atol=1e-14)


@settings(max_examples=25, deadline=None)
@given(complex_st(), complex_st(), complex_st(), complex_st(), complex_st())
def test_swap_substitution(g, d, e, a, q):
    # u(z) = w(1 - z) where w solves the swapped equation at 0.
    p = CheParams(g + 1.5, d, e, a, q)
    s = swap_singularities(p)
    w = np.polynomial.polynomial.Polynomial(frobenius_coefficients(s, 120).coeffs.coeffs)
    z = 0.7
    u, du, d2u = w(1 - z), -w.deriv()(1 - z), w.deriv(2)(1 - z)
    assert abs(ode_residual(u, du, d2u, p, z)) < 1e-10


@settings(max_examples=25, deadline=None)
@given(complex_st(), complex_st(), complex_st(), complex_st())
def test_shift_substitution(g, d, e, a):
    # u = (z - 1)^(1 - delta) w with w solving the shifted equation.
    p = CheParams(g + 1.5, d + 2.2, e, a, 0.4)
    s, k = shift_delta_exponent(p)
    w = np.polynomial.polynomial.Polynomial(frobenius_coefficients(s, 120).coeffs.coeffs)
    z = 0.3 + 0.1j
    P, P1, P2 = (z - 1) ** k, k * (z - 1) ** (k - 1), k * (k - 1) * (z - 1) ** (k - 2)
    W, W1, W2 = w(z), w.deriv()(z), w.deriv(2)(z)
    u, du, d2u = P * W, P1 * W + P * W1, P2 * W + 2 * P1 * W1 + P * W2
    assert abs(ode_residual(u, du, d2u, p, z)) < 1e-10
