"""Closed-form ground truth for polynomial integrands.

Polynomials are stored as coefficients of powers of (t - a).  Riemann-
Liouville integrals of (t - a)^k are Gamma ratios; integrals against
(b - t)^e are obtained by re-expanding in powers of (b - t) with exact
integer binomials, so nothing here touches numerical quadrature.

The re-expanded sum alternates in sign and cancels badly for high degree
or short ranges near a, so it is accumulated in 40-digit arithmetic and
rounded once at the end.
"""
from __future__ import annotations

import math
from typing import Sequence

import mpmath
from numpy.polynomial import polynomial as npoly

from .errors import DomainError, PreconditionError, UnsupportedError
from .quad import QuadratureConfig, as_interval, rl_integral
from .specfun import loggamma

__all__ = [
    "MAX_DEGREE",
    "poly_rl_exact",
    "poly_weighted_exact",
    "poly_power_integral",
    "poly_times_linear",
    "poly_derivative",
    "cross_validate",
]

MAX_DEGREE = 12

# private context: never touches mpmath's global precision
_MP = mpmath.MPContext()
_MP.dps = 40


def _coeffs(coeffs: Sequence[float], max_degree: int = MAX_DEGREE) -> list[float]:
    c = [float(v) for v in coeffs]
    if not c:
        c = [0.0]
    if len(c) - 1 > max_degree:
        raise UnsupportedError(f"polynomial degree {len(c) - 1} exceeds {max_degree}")
    if not all(math.isfinite(v) for v in c):
        raise DomainError("polynomial coefficients must be finite")
    return c


def poly_rl_exact(coeffs: Sequence[float], interval, alpha: float, x: float) -> float:
    """J_a^alpha p(x) for p = sum c_k (t-a)^k:

        sum c_k k! / Gamma(k + alpha + 1) (x - a)^(k + alpha)
    """
    iv = as_interval(interval)
    c = _coeffs(coeffs)
    if not iv.a <= x <= iv.b:
        raise DomainError(f"x={x} outside [{iv.a}, {iv.b}]")
    h = x - iv.a
    if alpha == 0:
        return float(sum(ck * h**k for k, ck in enumerate(c)))
    if not alpha > 0:
        raise DomainError(f"fractional order must be >= 0, got {alpha}")
    if h == 0.0:
        return 0.0
    log_h = math.log(h)
    total = 0.0
    for k, ck in enumerate(c):
        if ck == 0.0:
            continue
        total += ck * math.exp(loggamma(k + 1) - loggamma(k + alpha + 1) + (k + alpha) * log_h)
    return total


def _reexpand_about_b(c, length):
    # sum c_k (t-a)^k = sum d_j (b-t)^j using t - a = (b - a) - (b - t)
    d = [_MP.zero] * len(c)
    for k, ck in enumerate(c):
        if ck == 0.0:
            continue
        ck = _MP.mpf(ck)
        for j in range(k + 1):
            term = ck * math.comb(k, j) * length ** (k - j)
            d[j] += -term if j % 2 else term
    return d


def poly_power_integral(
    coeffs: Sequence[float],
    interval,
    exponent: float,
    lo: float,
    hi: float,
    max_degree: int = MAX_DEGREE,
) -> float:
    """int_lo^hi (b - t)^exponent p(t) dt, exponent > -1, a <= lo <= hi <= b.

    ``max_degree`` may be raised by one for products p(t)*(t - c) of a
    maximal-degree polynomial with a linear kernel factor.
    """
    iv = as_interval(interval)
    c = _coeffs(coeffs, max_degree)
    if not exponent > -1.0:
        raise DomainError(f"exponent must exceed -1, got {exponent}")
    if not iv.a <= lo <= hi <= iv.b:
        raise DomainError(f"need a <= lo <= hi <= b, got lo={lo}, hi={hi}")
    if lo == hi:
        return 0.0
    mpf = _MP.mpf
    b = mpf(iv.b)
    d = _reexpand_about_b(c, b - iv.a)
    u_lo, u_hi = b - lo, b - hi
    e1 = mpf(exponent) + 1
    # running powers u^(e+1+j)
    w_lo = u_lo**e1
    w_hi = u_hi**e1 if u_hi else _MP.zero
    total = _MP.zero
    for j, dj in enumerate(d):
        if dj:
            total += dj * (w_lo - w_hi) / (e1 + j)
        w_lo *= u_lo
        w_hi *= u_hi
    return float(total)


def poly_weighted_exact(coeffs: Sequence[float], interval, alpha: float, lo: float, hi: float) -> float:
    """int_lo^hi (b - t)^(alpha-1) p(t) dt for alpha >= 1."""
    if not alpha >= 1.0:
        raise DomainError(f"poly_weighted_exact requires alpha >= 1, got {alpha}")
    return poly_power_integral(coeffs, interval, alpha - 1.0, lo, hi)


def poly_times_linear(coeffs: Sequence[float], shift: float) -> list[float]:
    """Coefficients of ((t-a) - shift) * p(t) in the (t-a) basis."""
    return [float(v) for v in npoly.polymul([-shift, 1.0], _coeffs(coeffs))]


def poly_derivative(coeffs: Sequence[float]) -> list[float]:
    c = _coeffs(coeffs)
    return [float(v) for v in npoly.polyder(c)] if len(c) > 1 else [0.0]


def cross_validate(f, interval, alpha: float, x: float, cfg: QuadratureConfig | None = None) -> float:
    """|rl_integral - poly_rl_exact| for a polynomial test function."""
    if f.poly_form is None:
        raise PreconditionError(f"{f.name} has no polynomial form")
    numeric = rl_integral(f, interval, alpha, x, cfg)
    exact = poly_rl_exact(f.poly_form, interval, alpha, x)
    return abs(numeric - exact)
