import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import ALPHAS, UNIT, XS
from fracineq.corpus import builtin
from fracineq.errors import DomainError, PreconditionError, UnsupportedError
from fracineq.kernels import moment_left
from fracineq.oracle import (
    cross_validate,
    poly_derivative,
    poly_power_integral,
    poly_rl_exact,
    poly_times_linear,
    poly_weighted_exact,
)
from fracineq.quad import Interval
from fracineq.specfun import beta

coeff_lists = st.lists(st.floats(-10, 10, allow_nan=False), min_size=1, max_size=9)


def test_examples():
    assert poly_rl_exact([1.0], UNIT, 1.0, 1.0) == pytest.approx(1.0, rel=1e-15)
    for x in XS:
        assert poly_rl_exact([0.0, 1.0], UNIT, 1.0, x) == pytest.approx(x * x / 2, rel=1e-14)
    assert poly_rl_exact([0, 0, 1], UNIT, 1.5, 1.0) == pytest.approx(0.1719434921, rel=1e-9)
    assert poly_rl_exact([0, 0, 1], UNIT, 1.5, 1.0) == pytest.approx(2 / math.gamma(4.5), rel=1e-14)


def test_alpha_zero_and_left_endpoint():
    iv = Interval(1.0, 3.0)
    assert poly_rl_exact([1, 2, 3], iv, 0.0, 2.0) == pytest.approx(6.0)
    assert poly_rl_exact([1, 2, 3], iv, 1.7, 1.0) == 0.0


def test_degree_cap():
    with pytest.raises(UnsupportedError):
        poly_rl_exact([1.0] * 14, UNIT, 1.0, 0.5)
    assert poly_rl_exact([1.0] * 13, UNIT, 1.0, 0.5) > 0


def test_errors():
    with pytest.raises(DomainError):
        poly_rl_exact([1.0], UNIT, 1.0, 1.5)
    with pytest.raises(DomainError):
        poly_rl_exact([1.0], UNIT, -0.5, 0.5)
    with pytest.raises(DomainError):
        poly_weighted_exact([1.0], UNIT, 0.5, 0.0, 1.0)
    with pytest.raises(DomainError):
        poly_power_integral([1.0], UNIT, -1.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        poly_power_integral([1.0], UNIT, 0.5, 0.7, 0.2)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_weighted_examples(alpha):
    iv = Interval(0.0, 2.0)
    assert poly_weighted_exact([1.0], iv, alpha, 0.0, 2.0) == pytest.approx(2.0**alpha / alpha, rel=1e-14)
    assert poly_weighted_exact([0.0, 1.0], UNIT, alpha, 0.0, 1.0) == pytest.approx(beta(2, alpha), rel=1e-13)
    for x in XS:
        assert poly_weighted_exact([0.0, 1.0], UNIT, alpha, 0.0, x) == pytest.approx(
            moment_left(x, UNIT, alpha), abs=1e-13
        )


@pytest.mark.parametrize("alpha", ALPHAS)
@pytest.mark.parametrize("k", range(13))
def test_weighted_monomials_are_beta(alpha, k):
    iv = Interval(-0.5, 1.5)
    coeffs = [0.0] * k + [1.0]
    expected = iv.length ** (alpha + k) * beta(k + 1, alpha)
    assert poly_weighted_exact(coeffs, iv, alpha, iv.a, iv.b) == pytest.approx(expected, rel=1e-12)


@settings(max_examples=60)
@given(coeff_lists, coeff_lists, st.floats(-3, 3), st.sampled_from(ALPHAS), st.sampled_from(XS))
def test_rl_exact_linear_in_coeffs(c1, c2, s, alpha, x):
    n = max(len(c1), len(c2))
    p = np.pad(c1, (0, n - len(c1)))
    q = np.pad(c2, (0, n - len(c2)))
    combined = poly_rl_exact(list(p + s * q), UNIT, alpha, x)
    separate = poly_rl_exact(list(p), UNIT, alpha, x) + s * poly_rl_exact(list(q), UNIT, alpha, x)
    scale = 1.0 + np.abs(p).sum() + abs(s) * np.abs(q).sum()
    assert combined == pytest.approx(separate, abs=1e-13 * scale)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("x", XS)
def test_integer_order_is_iterated_integration(n, x):
    # n-fold integral of (t-a)^k is (x-a)^(k+n) k!/(k+n)!
    coeffs = [1.0, -2.0, 0.5, 3.0]
    expected = sum(c * x ** (k + n) * math.factorial(k) / math.factorial(k + n) for k, c in enumerate(coeffs))
    assert poly_rl_exact(coeffs, UNIT, float(n), x) == pytest.approx(expected, abs=1e-12)


def test_poly_helpers():
    assert poly_times_linear([1.0, 2.0], 0.5) == pytest.approx([-0.5, 0.0, 2.0])
    assert poly_derivative([3.0, 1.0, 4.0]) == pytest.approx([1.0, 8.0])
    assert poly_derivative([3.0]) == [0.0]


@pytest.mark.parametrize(
    "name, alpha, x, tol",
    [("square", 1.5, 1.0, 1e-12), ("linear", 1.0, 0.7, 1e-13), ("quartic", 3.0, 0.9, 1e-12)],
)
def test_cross_validate_examples(name, alpha, x, tol):
    assert cross_validate(builtin(name, UNIT), UNIT, alpha, x) <= tol


def test_cross_validate_needs_polynomial():
    with pytest.raises(PreconditionError):
        cross_validate(builtin("exp", UNIT), UNIT, 1.5, 0.5)


@pytest.mark.parametrize("k", [0, 3, 8, 12])
@pytest.mark.parametrize("exponent", [-0.75, -0.5, 0.0, 0.5, 2.0])
@pytest.mark.parametrize("lo, hi", [(0.0, 0.3), (0.3, 1.0), (0.5, 0.9), (0.0, 0.9)])
def test_partial_ranges_match_incomplete_beta(k, exponent, lo, hi):
    # int_lo^hi (1-t)^e t^k dt is an incomplete Beta value; evaluated in mpmath
    import mpmath

    with mpmath.workdps(40):
        expected = float(mpmath.betainc(k + 1, exponent + 1, lo, hi))
    got = poly_power_integral([0.0] * k + [1.0], UNIT, exponent, lo, hi)
    assert got == pytest.approx(expected, rel=1e-13)
