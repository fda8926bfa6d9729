"""Fractional Montgomery identities.

For alpha >= 1, a < x < b and 0 <= lam <= 1 the identity reads

    (1 - 2 lam) f(x) = mean - boundary - J^(alpha-1)(P3 f)(b) + J^alpha(P3 f')(b)

with mean = Gamma(alpha)/(b-a) (b-x)^(1-alpha) J^alpha f(b) and
boundary = lam ((b-a)/(b-x))^(alpha-1) f(a).  lam = 0 gives the P2 form.
At alpha = 1 the convention J^0 g(b) = g(b) is used for the correction.

Every term can be computed by quadrature or, for polynomial f, exactly.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

from .corpus import TestFunction, poly_eval
from .errors import DomainError, PreconditionError
from .kernels import lambda_anchors, p3
from .oracle import (
    MAX_DEGREE,
    poly_derivative,
    poly_power_integral,
    poly_rl_exact,
    poly_times_linear,
    poly_weighted_exact,
)
from .quad import QuadratureConfig, as_interval, power_weighted_integral, rl_integral, weighted_integral
from .specfun import gamma

__all__ = [
    "QUADRATURE",
    "EXACT",
    "CLOSED_FORM",
    "TermBreakdown",
    "identity_terms",
    "montgomery_terms",
    "montgomery_residual",
    "generalized_terms",
    "generalized_residual",
    "rhs_representation",
    "classical_montgomery_residual",
]

QUADRATURE = "quadrature"
EXACT = "exact-oracle"
CLOSED_FORM = "closed-form"


@dataclass(frozen=True)
class TermBreakdown:
    mean_term: float
    boundary_term: float
    kernel_correction: float
    derivative_term: float
    lhs: float
    lam: float = 0.0
    provenance: dict = field(default_factory=dict)

    @property
    def rhs(self) -> float:
        """Right-hand side of the identity assembled from the terms."""
        return self.mean_term - self.boundary_term - self.kernel_correction + self.derivative_term

    @property
    def residual(self) -> float:
        return self.lhs - self.rhs

    @property
    def source(self) -> str:
        """``exact-oracle`` when no term needed quadrature."""
        return QUADRATURE if QUADRATURE in self.provenance.values() else EXACT

    def as_dict(self) -> dict:
        out = asdict(self)
        out["residual"] = self.residual
        return out


def _check_args(iv, alpha, x, lam):
    if not alpha >= 1.0:
        raise DomainError(f"identities require alpha >= 1, got {alpha}")
    if not iv.a < x < iv.b:
        raise DomainError(f"x={x} must lie strictly inside ({iv.a}, {iv.b})")
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam}")


def _quadrature_terms(f, iv, alpha, x, lam, cfg):
    d, r = iv.length, iv.b - x
    c1, c2 = lambda_anchors(iv, lam)
    scale = gamma(alpha) * r ** (1.0 - alpha) / d
    mean = scale * rl_integral(f, iv, alpha, iv.b, cfg)

    if alpha == 1.0:
        correction = float(p3(x, iv.b, iv, alpha, lam) * f.eval(iv.b))
        corr_src = CLOSED_FORM
    else:
        # lower piece: (b-t)^(alpha-2) is bounded on [a, x]
        lower = power_weighted_integral(
            lambda t: p3(x, t, iv, alpha, lam) * f.eval(t), iv.a, x, iv.b, alpha - 2.0, f.breakpoints, cfg
        )
        # upper piece: t - c2 = -(b - t) + lam (b - a), so the weight splits into
        # a regular part and, for lam > 0, a genuinely singular (b-t)^(alpha-2) part
        upper = -power_weighted_integral(f.eval, x, iv.b, iv.b, alpha - 1.0, f.breakpoints, cfg)
        if lam > 0.0:
            upper += lam * d * power_weighted_integral(f.eval, x, iv.b, iv.b, alpha - 2.0, f.breakpoints, cfg)
        correction = (lower + scale * upper) / gamma(alpha - 1.0)
        corr_src = QUADRATURE

    breaks = [x, c1, c2, *f.breakpoints]
    derivative = power_weighted_integral(
        lambda t: p3(x, t, iv, alpha, lam) * f.deriv_right(t), iv.a, iv.b, iv.b, alpha - 1.0, breaks, cfg
    ) / gamma(alpha)
    return mean, correction, derivative, corr_src


def _exact_terms(f, iv, alpha, x, lam):
    c = f.poly_form
    d, r = iv.length, iv.b - x
    c1, c2 = lambda_anchors(iv, lam)
    # P3 = kscale * (t - c) on each branch
    kscale = gamma(alpha) * r ** (1.0 - alpha) / d
    mean = kscale * poly_rl_exact(c, iv, alpha, iv.b)

    if alpha == 1.0:
        correction = float(p3(x, iv.b, iv, alpha, lam) * poly_eval(c, iv.a, iv.b))
        corr_src = CLOSED_FORM
    else:
        deg = MAX_DEGREE + 1
        lower = poly_power_integral(poly_times_linear(c, c1 - iv.a), iv, alpha - 2.0, iv.a, x, deg)
        upper = poly_power_integral(poly_times_linear(c, c2 - iv.a), iv, alpha - 2.0, x, iv.b, deg)
        correction = kscale * (lower + upper) / gamma(alpha - 1.0)
        corr_src = EXACT

    dc = poly_derivative(c)
    lower = poly_power_integral(poly_times_linear(dc, c1 - iv.a), iv, alpha - 1.0, iv.a, x)
    upper = poly_power_integral(poly_times_linear(dc, c2 - iv.a), iv, alpha - 1.0, x, iv.b)
    derivative = kscale * (lower + upper) / gamma(alpha)
    return mean, correction, derivative, corr_src


def identity_terms(
    f: TestFunction,
    interval,
    alpha: float,
    x: float,
    lam: float = 0.0,
    cfg: QuadratureConfig | None = None,
    exact: bool = False,
) -> TermBreakdown:
    """Evaluate every term of the lambda-extended identity at (alpha, x, lam).

    ``exact=True`` routes all integrals through the polynomial oracle and
    requires ``f.poly_form``.
    """
    iv = as_interval(interval)
    x, lam, alpha = float(x), float(lam), float(alpha)
    _check_args(iv, alpha, x, lam)
    if exact:
        if f.poly_form is None:
            raise PreconditionError(f"{f.name} has no polynomial form for the exact path")
        mean, correction, derivative, corr_src = _exact_terms(f, iv, alpha, x, lam)
        src = EXACT
    else:
        mean, correction, derivative, corr_src = _quadrature_terms(f, iv, alpha, x, lam, cfg)
        src = QUADRATURE
    boundary = lam * (iv.length / (iv.b - x)) ** (alpha - 1.0) * float(f.eval(iv.a)) if lam else 0.0
    return TermBreakdown(
        mean_term=float(mean),
        boundary_term=float(boundary),
        kernel_correction=float(correction),
        derivative_term=float(derivative),
        lhs=(1.0 - 2.0 * lam) * float(f.eval(x)),
        lam=lam,
        provenance={
            "mean_term": src,
            "boundary_term": CLOSED_FORM,
            "kernel_correction": corr_src,
            "derivative_term": src,
            "lhs": CLOSED_FORM,
        },
    )


def montgomery_terms(f, interval, alpha, x, cfg=None, exact=False) -> TermBreakdown:
    """Terms of the P2 identity f(x) = mean - J^(alpha-1)(P2 f)(b) + J^alpha(P2 f')(b)."""
    return identity_terms(f, interval, alpha, x, 0.0, cfg, exact)


def montgomery_residual(f, interval, alpha, x, cfg=None, exact=False) -> float:
    """lhs - mean + kernel_correction - derivative_term; zero when the identity holds."""
    return montgomery_terms(f, interval, alpha, x, cfg, exact).residual


def generalized_terms(f, interval, alpha, x, lam, cfg=None, exact=False) -> TermBreakdown:
    return identity_terms(f, interval, alpha, x, lam, cfg, exact)


def generalized_residual(f, interval, alpha, x, lam, cfg=None, exact=False) -> float:
    """(1-2 lam) f(x) - mean + boundary + kernel_correction - derivative_term."""
    return identity_terms(f, interval, alpha, x, lam, cfg, exact).residual


def rhs_representation(f, interval, alpha, x, cfg=None, exact=False) -> float:
    """(b-x)^(1-alpha)/(b-a) [int_a^x (b-t)^(alpha-1)(t-a) f' dt - int_x^b (b-t)^alpha f' dt].

    Equals f(x) - mean + kernel_correction whenever the identity holds.
    """
    iv = as_interval(interval)
    _check_args(iv, alpha, float(x), 0.0)
    pref = (iv.b - x) ** (1.0 - alpha) / iv.length
    if exact:
        if f.poly_form is None:
            raise PreconditionError(f"{f.name} has no polynomial form for the exact path")
        dc = poly_derivative(f.poly_form)
        left = poly_weighted_exact(poly_times_linear(dc, 0.0), iv, alpha, iv.a, x)
        right = poly_weighted_exact(dc, iv, alpha + 1.0, x, iv.b)
        return pref * (left - right)

    def g(t):
        fp = f.deriv_right(t)
        return fp * (t < x) * (t - iv.a) - fp * (t >= x) * (iv.b - t)

    return pref * weighted_integral(g, iv, alpha, [x, *f.breakpoints], cfg)


def classical_montgomery_residual(f, interval, x, integrate) -> float:
    """f(x) - (1/(b-a)) int f - int P1(x,t) f'(t) dt using a caller-supplied
    scalar integrator ``integrate(g, lo, hi, points)``."""
    iv = as_interval(interval)
    pts = list(f.breakpoints)
    mean = integrate(f.eval, iv.a, iv.b, pts) / iv.length
    left = integrate(lambda t: (t - iv.a) * f.deriv_right(t), iv.a, x, pts)
    right = integrate(lambda t: (t - iv.b) * f.deriv_right(t), x, iv.b, pts)
    return float(f.eval(x)) - mean - (left + right) / iv.length
