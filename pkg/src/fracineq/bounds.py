"""Ostrowski-type inequality checks for convex and Lipschitz functions.

Each check returns a :class:`BoundReport` with both sides of a ``<=`` claim
and the margin rhs - lhs.  A claim holds when margin >= -slack, where the
slack absorbs the numerical floor of the identity terms (1e-8 through
quadrature, 1e-11 through the exact polynomial oracle).
"""
from __future__ import annotations

from dataclasses import dataclass

from .corpus import TestFunction
from .errors import DomainError, PreconditionError
from .identities import TermBreakdown, identity_terms, montgomery_terms
from .kernels import j3_moment, j4_moment, moment_left, moment_right
from .quad import as_interval

__all__ = [
    "SLACK_QUADRATURE",
    "SLACK_EXACT",
    "BoundReport",
    "convex_bracket",
    "thm1_check",
    "thm2_check",
    "cor1_check",
    "cor2_check",
    "midpoint_chain",
    "thm3_check",
    "thm3_exact_rhs",
    "thm3_printed_rhs",
    "lambda_zero_rhs",
]

SLACK_QUADRATURE = 1e-8
SLACK_EXACT = 1e-11

VARIANTS = ("thm1", "thm2", "thm3_exact", "thm3_printed", "cor1", "cor2", "midpoint1", "midpoint2")


@dataclass(frozen=True)
class BoundReport:
    """One inequality check.

    For the midpoint chains ``0 <= lhs <= rhs`` the margin is the smaller
    of the two gaps, so ``holds`` still means ``margin >= -slack``.
    """

    lhs: float
    rhs: float
    margin: float
    holds: bool
    slack: float
    variant: str
    provenance: str
    terms: TermBreakdown | None = None

    def as_dict(self) -> dict:
        out = {k: getattr(self, k) for k in ("lhs", "rhs", "margin", "holds", "slack", "variant", "provenance")}
        if self.terms is not None:
            out["terms"] = self.terms.as_dict()
        return out


def _report(lhs, rhs, variant, provenance, slack, terms=None, margin=None):
    if not slack > 0:
        raise DomainError("slack must be positive")
    lhs, rhs = float(lhs), float(rhs)
    margin = rhs - lhs if margin is None else float(margin)
    return BoundReport(lhs, rhs, margin, bool(margin >= -slack), slack, variant, provenance, terms)


def _slack(slack, exact):
    if slack is not None:
        return slack
    return SLACK_EXACT if exact else SLACK_QUADRATURE


def _require_convex(f: TestFunction):
    if not f.convex:
        raise PreconditionError(f"{f.name} is not declared convex")


def _check_interior(iv, x):
    if not iv.a < x < iv.b:
        raise DomainError(f"x={x} must lie strictly inside ({iv.a}, {iv.b})")


def convex_bracket(interval, alpha: float, x: float, upper_slope: float, lower_slope: float) -> float:
    """1/(alpha(alpha+1)) [ alpha (b-x)^2/(b-a) s_up
        - ((b-a)^alpha (b-x)^(1-alpha) + alpha (b-x)^2/(b-a) - (alpha+1)(b-x)) s_low ].

    With (s_up, s_low) = (f'_+(x), f'_-(x)) this is the convex lower bound;
    with (f'_-(b), f'_+(a)) it is the upper bound.
    """
    iv = as_interval(interval)
    d, r = iv.length, iv.b - x
    quad_term = alpha * r * r / d
    low_coef = d**alpha * r ** (1.0 - alpha) + quad_term - (alpha + 1.0) * r
    return (quad_term * upper_slope - low_coef * lower_slope) / (alpha * (alpha + 1.0))


def _deviation(terms: TermBreakdown) -> float:
    # mean - J^(alpha-1)(P2 f)(b) - f(x)
    return terms.mean_term - terms.kernel_correction - terms.lhs


def thm1_check(f, interval, alpha, x, cfg=None, exact=False, slack=None) -> BoundReport:
    """Convex lower bound on mean - correction - f(x) in terms of f'_±(x)."""
    iv = as_interval(interval)
    _require_convex(f)
    _check_interior(iv, x)
    terms = montgomery_terms(f, iv, alpha, x, cfg, exact)
    lhs = convex_bracket(iv, alpha, x, float(f.deriv_right(x)), float(f.deriv_left(x)))
    return _report(lhs, _deviation(terms), "thm1", terms.source, _slack(slack, exact), terms)


def thm2_check(f, interval, alpha, x, cfg=None, exact=False, slack=None) -> BoundReport:
    """Convex upper bound on mean - correction - f(x) in terms of f'_+(a), f'_-(b)."""
    iv = as_interval(interval)
    _require_convex(f)
    _check_interior(iv, x)
    fa, fb = float(f.deriv_right(iv.a)), float(f.deriv_left(iv.b))
    if not (abs(fa) < float("inf") and abs(fb) < float("inf")):
        raise PreconditionError("f'_+(a) and f'_-(b) must be finite")
    terms = montgomery_terms(f, iv, alpha, x, cfg, exact)
    rhs = convex_bracket(iv, alpha, x, fb, fa)
    return _report(_deviation(terms), rhs, "thm2", terms.source, _slack(slack, exact), terms)


def cor1_check(f, interval, x, cfg=None, exact=False, slack=None) -> BoundReport:
    """alpha = 1: (1/2)[(b-x)^2 f'_+(x) - (a-x)^2 f'_-(x)] <= int f - (b-a) f(x)."""
    iv = as_interval(interval)
    _require_convex(f)
    _check_interior(iv, x)
    terms = montgomery_terms(f, iv, 1.0, x, cfg, exact)
    lhs = 0.5 * ((iv.b - x) ** 2 * float(f.deriv_right(x)) - (iv.a - x) ** 2 * float(f.deriv_left(x)))
    rhs = iv.length * (terms.mean_term - terms.lhs)
    return _report(lhs, rhs, "cor1", terms.source, _slack(slack, exact), terms)


def cor2_check(f, interval, x, cfg=None, exact=False, slack=None) -> BoundReport:
    """alpha = 1: int f - (b-a) f(x) <= (1/2)[(b-x)^2 f'_-(b) - (a-x)^2 f'_+(a)]."""
    iv = as_interval(interval)
    _require_convex(f)
    _check_interior(iv, x)
    terms = montgomery_terms(f, iv, 1.0, x, cfg, exact)
    lhs = iv.length * (terms.mean_term - terms.lhs)
    rhs = 0.5 * ((iv.b - x) ** 2 * float(f.deriv_left(iv.b)) - (iv.a - x) ** 2 * float(f.deriv_right(iv.a)))
    return _report(lhs, rhs, "cor2", terms.source, _slack(slack, exact), terms)


def midpoint_chain(f, interval, cfg=None, exact=False, slack=None) -> tuple[BoundReport, BoundReport]:
    """The two midpoint chains at m = (a+b)/2:

        0 <= (b-a)/8 [f'_+(m) - f'_-(m)] <= mean - f(m)
        0 <= mean - f(m) <= (b-a)/8 [f'_-(b) - f'_+(a)]
    """
    iv = as_interval(interval)
    _require_convex(f)
    m = iv.midpoint
    terms = montgomery_terms(f, iv, 1.0, m, cfg, exact)
    gap = terms.mean_term - terms.lhs
    jump = iv.length / 8.0 * (float(f.deriv_right(m)) - float(f.deriv_left(m)))
    spread = iv.length / 8.0 * (float(f.deriv_left(iv.b)) - float(f.deriv_right(iv.a)))
    s = _slack(slack, exact)
    first = _report(jump, gap, "midpoint1", terms.source, s, terms, margin=min(jump, gap - jump))
    second = _report(gap, spread, "midpoint2", terms.source, s, terms, margin=min(gap, spread - gap))
    return first, second


def thm3_exact_rhs(M: float, interval, alpha: float, x: float, lam: float) -> float:
    """M (b-x)^(1-alpha)/(b-a) (J3 + J4) with exactly integrated moments."""
    iv = as_interval(interval)
    pref = (iv.b - x) ** (1.0 - alpha) / iv.length
    return M * pref * (j3_moment(x, iv, alpha, lam) + j4_moment(x, iv, alpha, lam))


def thm3_printed_rhs(M: float, interval, alpha: float, x: float, lam: float) -> float:
    """Reference closed-form bound built on the j3_printed bracket.

    Agrees with thm3_exact_rhs at lam = 0 only; never used as a verdict.
    """
    iv = as_interval(interval)
    d, r = iv.length, iv.b - x
    brace = d**alpha * r ** (1.0 - alpha) * (
        2 * lam ** (alpha + 1) + 2 * (1 - lam) ** (alpha + 1) + lam * d - 1
    ) + r * (2 * alpha * r / d - (alpha + 1))
    return M / (alpha * (alpha + 1)) * brace


def lambda_zero_rhs(M: float, interval, alpha: float, x: float) -> float:
    """lam = 0 bound M (b-x)^(1-alpha)/(b-a) (moment_left + moment_right)."""
    iv = as_interval(interval)
    pref = (iv.b - x) ** (1.0 - alpha) / iv.length
    return M * pref * (moment_left(x, iv, alpha) + moment_right(x, iv, alpha))


def thm3_check(f, interval, alpha, x, lam, cfg=None, exact=False, slack=None) -> tuple[BoundReport, BoundReport]:
    """Bounded-derivative estimate for the lambda identity.

    lhs = |(1-2 lam) f(x) - mean + boundary + J^(alpha-1)(P3 f)(b)|.
    Returns (thm3_exact, thm3_printed); only the first is a verdict, the
    second documents the reference closed form.
    """
    iv = as_interval(interval)
    _check_interior(iv, x)
    if f.deriv_bound_M is None:
        raise PreconditionError(f"{f.name} has no derivative bound M")
    terms = identity_terms(f, iv, alpha, x, lam, cfg, exact)
    lhs = abs(terms.lhs - terms.mean_term + terms.boundary_term + terms.kernel_correction)
    M = f.deriv_bound_M
    s = _slack(slack, exact)
    exact_rep = _report(lhs, thm3_exact_rhs(M, iv, alpha, x, lam), "thm3_exact", terms.source, s, terms)
    printed_rep = _report(lhs, thm3_printed_rhs(M, iv, alpha, x, lam), "thm3_printed", terms.source, s, terms)
    return exact_rep, printed_rep
