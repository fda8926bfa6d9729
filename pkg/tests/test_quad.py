import math
import threading

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import roots_jacobi

from conftest import ALPHAS, UNIT, XS
from fracineq.corpus import DEFAULT_FUNCTIONS, builtin, linear_combination
from fracineq.errors import ConvergenceError, DomainError
from fracineq.oracle import poly_rl_exact
from fracineq.quad import (
    Interval,
    QuadratureConfig,
    adaptive_oracle,
    gauss_jacobi,
    jacobi_polynomial,
    power_weighted_integral,
    rl_integral,
    weighted_integral,
)
from fracineq.specfun import beta, gamma


def test_interval_validation():
    with pytest.raises(DomainError):
        Interval(1.0, 1.0)
    with pytest.raises(DomainError):
        Interval(2.0, 1.0)
    with pytest.raises(DomainError):
        Interval(0.0, float("inf"))
    iv = Interval(0, 2)
    assert (iv.length, iv.midpoint) == (2.0, 1.0)
    assert iv.interior_grid(3) == [0.5, 1.0, 1.5]
    assert tuple(iv) == (0.0, 2.0)


def test_config_validation():
    with pytest.raises(DomainError):
        QuadratureConfig(jacobi_nodes=3)
    with pytest.raises(DomainError):
        QuadratureConfig(target_abs_tol=0.0)


# --- Gauss-Jacobi rule -------------------------------------------------------


@pytest.mark.parametrize("n", [4, 8, 16, 32, 64])
@pytest.mark.parametrize("a, b", [(0.0, 0.0), (0.5, 0.0), (-0.5, 0.0), (-0.75, 0.0), (1.5, 0.0), (2.0, 0.3)])
def test_gauss_jacobi_integrates_monomials_exactly(n, a, b):
    # int_{-1}^{1} (1-x)^a (1+x)^b (1+x)^k dx = 2^(a+b+k+1) B(a+1, b+k+1)
    x, w = gauss_jacobi(n, a, b)
    for k in range(0, 2 * n, max(1, n // 4)):
        exact = 2.0 ** (a + b + k + 1) * beta(a + 1, b + k + 1)
        assert np.sum(w * (1 + x) ** k) == pytest.approx(exact, rel=1e-12 if a >= 0 else 1e-11)


@pytest.mark.parametrize("n", [5, 20, 64])
@pytest.mark.parametrize("a, b", [(0.5, 0.0), (-0.5, 0.0), (1.0, 0.0), (0.25, 1.5)])
def test_gauss_jacobi_matches_scipy_nodes(n, a, b):
    x, w = gauss_jacobi(n, a, b)
    xs, ws = roots_jacobi(n, a, b)
    assert np.allclose(np.sort(x), np.sort(xs), atol=1e-10)
    assert np.allclose(w[np.argsort(x)], ws[np.argsort(xs)], rtol=1e-9, atol=1e-14)


def test_gauss_jacobi_nodes_are_roots():
    n, a, b = 17, 0.3, 0.0
    x, _ = gauss_jacobi(n, a, b)
    p, _, _ = jacobi_polynomial(n, a, b, x)
    assert np.max(np.abs(p)) < 1e-10
    assert np.all(np.diff(np.sort(x)) > 0)
    assert np.all(np.abs(x) < 1)


def test_gauss_jacobi_cached_and_read_only():
    x1, w1 = gauss_jacobi(12, 0.5)
    x2, w2 = gauss_jacobi(12, 0.5)
    assert x1 is x2 and w1 is w2
    with pytest.raises(ValueError):
        x1[0] = 0.0


def test_gauss_jacobi_thread_safe():
    results = []

    def work():
        results.append(gauss_jacobi(23, 0.123456, 0.0)[0].copy())

    threads = [threading.Thread(target=work) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(np.array_equal(results[0], r) for r in results)


def test_gauss_jacobi_rejects_bad_parameters():
    with pytest.raises(DomainError):
        gauss_jacobi(0, 0.5)
    with pytest.raises(DomainError):
        gauss_jacobi(8, -1.0)


# --- rl_integral ---------------------------------------------------------------


def test_rl_examples():
    one = builtin("constant(1)", UNIT)
    sq = builtin("square", UNIT)
    assert rl_integral(one, UNIT, 1.0, 1.0) == pytest.approx(1.0, abs=1e-14)
    assert rl_integral(one, UNIT, 1.5, 1.0) == pytest.approx(1 / gamma(2.5), abs=1e-14)
    assert rl_integral(one, UNIT, 1.5, 1.0) == pytest.approx(0.7522528, abs=1e-7)
    assert rl_integral(sq, UNIT, 1.5, 1.0) == pytest.approx(gamma(3) / gamma(4.5), abs=1e-14)
    assert rl_integral(sq, UNIT, 1.5, 1.0) == pytest.approx(0.1719435, abs=1e-7)


def test_rl_endpoints_and_order_zero():
    f = builtin("exp", UNIT)
    assert rl_integral(f, UNIT, 2.0, 0.0) == 0.0
    assert rl_integral(f, UNIT, 0.0, 0.3) == pytest.approx(math.exp(0.3))
    with pytest.raises(DomainError):
        rl_integral(f, UNIT, 1.0, 1.2)
    with pytest.raises(DomainError):
        rl_integral(f, UNIT, -0.5, 0.5)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_rl_fractional_below_one(alpha):
    # the substitution handles alpha < 1 too
    f = builtin("square", UNIT)
    assert rl_integral(f, UNIT, alpha, 0.8) == pytest.approx(poly_rl_exact(f.poly_form, UNIT, alpha, 0.8), abs=1e-12)


def test_rl_degree_eight_polynomial():
    f = builtin("poly(1, -2, 0.5, 3, -1, 0.25, 2, -0.5, 1)", UNIT)
    assert len(f.poly_form) == 9
    for alpha in ALPHAS:
        for x in XS:
            assert rl_integral(f, UNIT, alpha, x) == pytest.approx(poly_rl_exact(f.poly_form, UNIT, alpha, x), abs=1e-12)


def test_rl_shifted_interval():
    iv = Interval(-1.0, 2.0)
    f = builtin("poly(0.5, 1, -1, 0.2)", iv)
    for alpha in ALPHAS:
        for x in iv.interior_grid(5):
            assert rl_integral(f, iv, alpha, x) == pytest.approx(poly_rl_exact(f.poly_form, iv, alpha, x), abs=1e-12)


@pytest.mark.parametrize("name", DEFAULT_FUNCTIONS)
@pytest.mark.parametrize("x", XS)
def test_rl_alpha_one_matches_adaptive_oracle(name, x):
    f = builtin(name, UNIT)
    ref = adaptive_oracle(f.eval, 0.0, x, 1e-12, points=f.breakpoints)
    assert rl_integral(f, UNIT, 1.0, x) == pytest.approx(ref, abs=1e-10)


@pytest.mark.parametrize("name", DEFAULT_FUNCTIONS)
@pytest.mark.parametrize("alpha", [1.5, 2.5])
def test_rl_fractional_matches_adaptive_oracle(name, alpha):
    f = builtin(name, UNIT)
    x = 0.7
    ref = adaptive_oracle(lambda t: (x - t) ** (alpha - 1) * f.eval(t), 0.0, x, 1e-12, points=f.breakpoints)
    assert rl_integral(f, UNIT, alpha, x) == pytest.approx(ref / gamma(alpha), abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from(DEFAULT_FUNCTIONS),
    st.sampled_from(DEFAULT_FUNCTIONS),
    st.floats(-5, 5),
    st.floats(-5, 5),
    st.sampled_from(ALPHAS),
    st.floats(0.01, 1.0),
)
def test_rl_linearity(n1, n2, c1, c2, alpha, x):
    f1, f2 = builtin(n1, UNIT), builtin(n2, UNIT)
    g = linear_combination(c1, f1, c2, f2)
    lhs = rl_integral(g, UNIT, alpha, x)
    rhs = c1 * rl_integral(f1, UNIT, alpha, x) + c2 * rl_integral(f2, UNIT, alpha, x)
    assert lhs == pytest.approx(rhs, abs=1e-11)


@pytest.mark.parametrize("x", XS)
def test_semigroup_square(x):
    # J^1 (J^1 f) at x, by iterated plain integration, against the alpha = 2 path
    f = builtin("square", UNIT)
    inner = lambda s: rl_integral(f, UNIT, 1.0, s)
    iterated = adaptive_oracle(inner, 0.0, x, 1e-12)
    assert iterated == pytest.approx(rl_integral(f, UNIT, 2.0, x), abs=1e-9)


# --- weighted_integral and adaptive_oracle ------------------------------------


def test_weighted_examples():
    assert weighted_integral(lambda t: np.ones_like(t), UNIT, 2.0) == pytest.approx(0.5, abs=1e-14)
    assert weighted_integral(lambda t: t, UNIT, 1.5) == pytest.approx(beta(2, 1.5), abs=1e-14)
    assert weighted_integral(lambda t: t, UNIT, 1.5) == pytest.approx(0.2666667, abs=1e-7)
    assert weighted_integral(lambda t: np.abs(t - 0.5), UNIT, 1.0, [0.5]) == pytest.approx(0.25, abs=1e-14)


def test_weighted_errors():
    with pytest.raises(DomainError):
        weighted_integral(lambda t: t, UNIT, 0.5)
    with pytest.raises(DomainError):
        weighted_integral(lambda t: t, UNIT, 1.5, [1.0])


@pytest.mark.parametrize("alpha", ALPHAS)
def test_weighted_matches_adaptive_oracle(alpha):
    g = lambda t: np.exp(t) * np.abs(t - 0.3)
    ref = adaptive_oracle(lambda t: (1 - t) ** (alpha - 1) * g(t), 0.0, 1.0, 1e-12, points=[0.3])
    assert weighted_integral(g, UNIT, alpha, [0.3]) == pytest.approx(ref, abs=1e-10)


def test_power_weighted_singular_exponent():
    # int_0^1 (1-t)^(-0.6) t dt = B(2, 0.4)
    val = power_weighted_integral(lambda t: t, 0.0, 1.0, 1.0, -0.6)
    assert val == pytest.approx(beta(2, 0.4), rel=1e-12)
    with pytest.raises(DomainError):
        power_weighted_integral(lambda t: t, 0.0, 1.0, 1.0, -1.0)
    with pytest.raises(DomainError):
        power_weighted_integral(lambda t: t, 0.0, 1.0, 0.5, 0.5)


@pytest.mark.parametrize("e", [-0.984375, -0.999, -0.9999])
def test_power_weighted_exponent_near_minus_one(e):
    # int_0^1 (1-t)^e (1 + t) dt = 1/(e+1) + B(2, e+1), both huge as e -> -1
    val = power_weighted_integral(lambda t: 1.0 + t, 0.0, 1.0, 1.0, e)
    assert val == pytest.approx(1.0 / (e + 1.0) + beta(2, e + 1.0), rel=1e-13)


def test_power_weighted_budget_exhaustion():
    cfg = QuadratureConfig(jacobi_nodes=4, max_subdivisions=0, target_abs_tol=1e-14)
    with pytest.raises(ConvergenceError) as info:
        power_weighted_integral(lambda t: np.sin(40 * t), 0.0, 1.0, 1.0, 0.5, cfg=cfg)
    assert math.isfinite(info.value.estimate)


def test_adaptive_oracle_examples():
    assert adaptive_oracle(lambda t: t * t, 0.0, 1.0, 1e-12) == pytest.approx(1 / 3, abs=1e-12)
    assert adaptive_oracle(math.exp, 0.0, 1.0, 1e-12) == pytest.approx(math.e - 1, abs=1e-12)
    assert adaptive_oracle(lambda t: math.sqrt(1 - t), 0.0, 1.0, 1e-10) == pytest.approx(2 / 3, abs=1e-10)


def test_adaptive_oracle_convergence_error():
    with pytest.raises(ConvergenceError) as info:
        adaptive_oracle(lambda t: math.sin(1 / t) / t if t else 0.0, 0.0, 1.0, 1e-14, limit=5)
    assert info.value.estimate is not None
    with pytest.raises(DomainError):
        adaptive_oracle(math.exp, 0, 1, 0.0)
