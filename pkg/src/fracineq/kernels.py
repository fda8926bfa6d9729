"""Peano kernels and the closed-form weighted moments used by the bounds.

All kernels follow the convention that t = x belongs to the upper branch.
Kernel functions are vectorised in ``t``.
"""
from __future__ import annotations

import numpy as np

from .errors import DomainError, SingularityError
from .quad import as_interval
from .specfun import gamma

__all__ = [
    "p1",
    "p2",
    "p3",
    "fractional_scale",
    "lambda_anchors",
    "linear_moment",
    "moment_left",
    "moment_right",
    "j3_moment",
    "j4_moment",
    "j3_printed",
    "j4_printed",
]


def _check_lambda(lam):
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam}")


def _check_alpha(alpha):
    if not alpha >= 1.0:
        raise DomainError(f"order alpha >= 1 required, got {alpha}")


def fractional_scale(x: float, interval, alpha: float) -> float:
    """(b-x)^(1-alpha) Gamma(alpha): the factor turning P1 into P2."""
    iv = as_interval(interval)
    _check_alpha(alpha)
    if not iv.a <= x <= iv.b:
        raise DomainError(f"x={x} outside [{iv.a}, {iv.b}]")
    if x == iv.b and alpha > 1.0:
        raise SingularityError("(b - x)^(1 - alpha) is singular at x = b for alpha > 1")
    return (iv.b - x) ** (1.0 - alpha) * gamma(alpha)


def lambda_anchors(interval, lam: float) -> tuple[float, float]:
    """(c1, c2) = ((1-lam) a + lam b, lam a + (1-lam) b), the zeros of P3's branches."""
    iv = as_interval(interval)
    return (1.0 - lam) * iv.a + lam * iv.b, lam * iv.a + (1.0 - lam) * iv.b


def p1(x: float, t, interval):
    """Classical Montgomery kernel."""
    iv = as_interval(interval)
    t = np.asarray(t, dtype=float)
    out = np.where(t < x, t - iv.a, t - iv.b) / iv.length
    return out if out.ndim else float(out)


def p2(x: float, t, interval, alpha: float):
    """Fractional kernel P1(x, t) (b-x)^(1-alpha) Gamma(alpha)."""
    scale = fractional_scale(x, interval, alpha)
    out = np.asarray(p1(x, t, interval)) * scale
    return out if out.ndim else float(out)


def p3(x: float, t, interval, alpha: float, lam: float):
    """Lambda-shifted fractional kernel; lam = 0 recovers p2."""
    iv = as_interval(interval)
    _check_lambda(lam)
    scale = fractional_scale(x, iv, alpha)
    c1, c2 = lambda_anchors(iv, lam)
    t = np.asarray(t, dtype=float)
    out = np.where(t < x, t - c1, t - c2) / iv.length * scale
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Closed-form moments against (b - t)^(alpha - 1)


def linear_moment(c: float, lo: float, hi: float, b: float, alpha: float) -> float:
    """int_lo^hi (b-t)^(alpha-1) (t - c) dt, from t - c = (b - c) - (b - t)."""
    u_lo, u_hi = b - lo, b - hi
    return (b - c) * (u_lo**alpha - u_hi**alpha) / alpha - (u_lo ** (alpha + 1) - u_hi ** (alpha + 1)) / (alpha + 1)


def moment_left(x: float, interval, alpha: float) -> float:
    """int_a^x (b-t)^(alpha-1) (t-a) dt."""
    iv = as_interval(interval)
    _check_alpha(alpha)
    d, r = iv.length, iv.b - x
    return (d ** (alpha + 1) + r**alpha * (alpha * r - (alpha + 1) * d)) / (alpha * (alpha + 1))


def moment_right(x: float, interval, alpha: float) -> float:
    """int_x^b (b-t)^alpha dt."""
    iv = as_interval(interval)
    _check_alpha(alpha)
    return (iv.b - x) ** (alpha + 1) / (alpha + 1)


def _abs_linear_moment(c, lo, hi, b, alpha):
    # int_lo^hi (b-t)^(alpha-1) |t - c| dt
    if hi <= lo:
        return 0.0
    if c <= lo:
        return linear_moment(c, lo, hi, b, alpha)
    if c >= hi:
        return -linear_moment(c, lo, hi, b, alpha)
    return -linear_moment(c, lo, c, b, alpha) + linear_moment(c, c, hi, b, alpha)


def j3_moment(x: float, interval, alpha: float, lam: float) -> float:
    """int_a^x (b-t)^(alpha-1) |t - (1-lam) a - lam b| dt, exactly."""
    iv = as_interval(interval)
    _check_alpha(alpha)
    _check_lambda(lam)
    c1, _ = lambda_anchors(iv, lam)
    return _abs_linear_moment(c1, iv.a, x, iv.b, alpha)


def j4_moment(x: float, interval, alpha: float, lam: float) -> float:
    """int_x^b (b-t)^(alpha-1) |t - (1-lam) b - lam a| dt, exactly."""
    iv = as_interval(interval)
    _check_alpha(alpha)
    _check_lambda(lam)
    _, c2 = lambda_anchors(iv, lam)
    return _abs_linear_moment(c2, x, iv.b, iv.b, alpha)


def j3_printed(x: float, interval, alpha: float, lam: float) -> float:
    """Reference closed form for the left moment, kept for comparison only.

    Its first bracket mixes 2(1-lam)^(alpha+1) - 1 with lam (b-a), which
    carries a length unit, so it agrees with j3_moment only at lam = 0.
    """
    iv = as_interval(interval)
    d, r = iv.length, iv.b - x
    k = alpha * (alpha + 1)
    return (
        d ** (alpha + 1) / k * (2 * (1 - lam) ** (alpha + 1) + lam * d - 1)
        + r**alpha / k * (alpha * r - (1 - lam) * d * (alpha + 1))
    )


def j4_printed(x: float, interval, alpha: float, lam: float) -> float:
    """Reference closed form for the right moment, kept for comparison only."""
    iv = as_interval(interval)
    d, r = iv.length, iv.b - x
    k = alpha * (alpha + 1)
    return 2 * lam ** (alpha + 1) * d ** (alpha + 1) / k + r**alpha / k * (alpha * r - lam * d * (alpha + 1))
