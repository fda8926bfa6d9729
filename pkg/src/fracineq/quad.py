"""Quadrature against the weakly singular weight (anchor - t)^e.

Every integral in the package has the shape

    int_lo^hi (anchor - t)^e g(t) dt,   anchor >= hi,  e > -1,

with g smooth between declared breakpoints.  The piece touching the anchor
is integrated with Gauss-Jacobi nodes that absorb the weight exactly; the
remaining pieces carry the (smooth) weight inside the integrand and use
Gauss-Legendre.  Each piece is checked by comparing an n-node and a 2n-node
rule and bisected when the two disagree.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np
from scipy import integrate

from .errors import ConvergenceError, DomainError
from .specfun import gamma

__all__ = [
    "Interval",
    "QuadratureConfig",
    "DEFAULT_CONFIG",
    "gauss_jacobi",
    "jacobi_polynomial",
    "power_weighted_integral",
    "weighted_integral",
    "rl_integral",
    "adaptive_oracle",
]


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
            raise DomainError(f"interval requires finite a < b, got [{self.a}, {self.b}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    def interior_grid(self, count: int) -> list[float]:
        """``count`` uniformly spaced interior points a + i(b-a)/(count+1)."""
        return [self.a + self.length * i / (count + 1) for i in range(1, count + 1)]

    def __iter__(self):
        yield self.a
        yield self.b


def as_interval(interval) -> Interval:
    if isinstance(interval, Interval):
        return interval
    a, b = interval
    return Interval(a, b)


@dataclass(frozen=True)
class QuadratureConfig:
    jacobi_nodes: int = 32
    max_subdivisions: int = 64
    target_abs_tol: float = 1e-10

    def __post_init__(self):
        if int(self.jacobi_nodes) < 4:
            raise DomainError("jacobi_nodes must be >= 4")
        if int(self.max_subdivisions) < 0:
            raise DomainError("max_subdivisions must be >= 0")
        if not self.target_abs_tol > 0:
            raise DomainError("target_abs_tol must be positive")


DEFAULT_CONFIG = QuadratureConfig()


# ---------------------------------------------------------------------------
# Gauss-Jacobi nodes and weights


def jacobi_polynomial(n: int, a: float, b: float, x):
    """Evaluate P_n^(a,b)(x), its derivative and P_{n-1}^(a,b)(x) by the
    three-term recurrence."""
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev, np.zeros_like(x), np.zeros_like(x)
    cur = 0.5 * (a - b + (a + b + 2.0) * x)
    for k in range(2, n + 1):
        s = 2 * k + a + b
        c1 = 2 * k * (k + a + b) * (s - 2)
        c2 = (s - 1) * (s * (s - 2) * x + a * a - b * b)
        c3 = 2 * (k + a - 1) * (k + b - 1) * s
        prev, cur = cur, (c2 * cur - c3 * prev) / c1
    s = 2 * n + a + b
    deriv = (n * (a - b - s * x) * cur + 2 * (n + a) * (n + b) * prev) / (s * (1 - x) * (1 + x))
    return cur, deriv, prev


_NODE_CACHE: dict[tuple[int, float, float], tuple[np.ndarray, np.ndarray]] = {}
_NODE_LOCK = threading.Lock()
_EDGE = float(np.nextafter(1.0, 0.0))


def _compute_gauss_jacobi(n, a, b):
    k = np.arange(1, n + 1)
    x = np.cos((k - 0.25 + 0.5 * a) * np.pi / (n + 0.5 * (a + b + 1)))
    # Newton with Ehrlich deflation against the other iterates, so no two
    # starting guesses can settle on the same root
    for _ in range(100):
        p, dp, _ = jacobi_polynomial(n, a, b, x)
        ratio = p / dp
        diff = x[:, None] - x[None, :]
        np.fill_diagonal(diff, np.inf)
        step = ratio / (1.0 - ratio * np.sum(1.0 / diff, axis=1))
        # a root within an ulp of +-1 (exponent near -1) must not land on it
        x = np.clip(x - step, -_EDGE, _EDGE)
        if np.max(np.abs(step)) < 1e-15:
            break
    else:
        raise ConvergenceError(f"Gauss-Jacobi Newton iteration stalled (n={n}, a={a}, b={b})")
    x = np.sort(x)
    _, dp, _ = jacobi_polynomial(n, a, b, x)
    # Gamma(n+a+1) Gamma(n+b+1) / (Gamma(n+a+b+1) n!) peeled down to small
    # arguments; log-gamma at n ~ 64 would cost ~1e-14 relative accuracy
    k = np.arange(2, n + 1, dtype=float)
    const = (
        2.0 ** (a + b + 1)
        * gamma(a + 2) * gamma(b + 2) / gamma(a + b + 2)
        * float(np.prod((k + a) * (k + b) / ((k + a + b) * k)))
    )
    w = const / ((1 - x) * (1 + x) * dp * dp)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_jacobi(n: int, a: float, b: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for int_{-1}^{1} (1-s)^a (1+s)^b g(s) ds.

    Results are cached per (n, a, b) and returned as read-only arrays.
    """
    if n < 1:
        raise DomainError("need at least one node")
    if not (a > -1 and b > -1):
        raise DomainError(f"Jacobi exponents must exceed -1, got ({a}, {b})")
    key = (int(n), float(a), float(b))
    cached = _NODE_CACHE.get(key)
    if cached is None:
        with _NODE_LOCK:
            cached = _NODE_CACHE.get(key)
            if cached is None:
                cached = _compute_gauss_jacobi(*key)
                _NODE_CACHE[key] = cached
    return cached


# ---------------------------------------------------------------------------
# Piecewise weighted integration


def _values(g, t):
    return np.broadcast_to(np.asarray(g(t), dtype=float), t.shape)


def _rule(g, lo, hi, anchor, exponent, n):
    """(value, integral of |integrand|) for an n-node rule on [lo, hi]."""
    half = 0.5 * (hi - lo)
    if anchor == hi:
        s, w = gauss_jacobi(n, exponent, 0.0)
        t = lo + half * (1.0 + s)
        vals = _values(g, t)
        scale = half ** (exponent + 1.0)
        if exponent >= 0.0:
            return scale * float(np.dot(w, vals)), scale * float(np.dot(w, np.abs(vals)))
        # the weight nearest the anchor carries the rounding of 1 - s; peel off
        # a constant and integrate it exactly so that weight multiplies ~0
        c = float(vals[-1])
        e1 = exponent + 1.0
        exact = (hi - lo) ** e1 / e1
        rest = vals - c
        return c * exact + scale * float(np.dot(w, rest)), abs(c) * exact + scale * float(np.dot(w, np.abs(rest)))
    s, w = gauss_jacobi(n, 0.0, 0.0)
    t = lo + half * (1.0 + s)
    vals = _values(g, t)
    if exponent != 0.0:
        vals = vals * (anchor - t) ** exponent
    return half * float(np.dot(w, vals)), half * float(np.dot(w, np.abs(vals)))


# two rules cannot agree better than rounding in the integrand's magnitude
_ROUNDING = 100 * np.finfo(float).eps


def _adaptive_piece(g, lo, hi, anchor, exponent, cfg, tol, budget):
    n = cfg.jacobi_nodes
    total_len = hi - lo
    stack = [(lo, hi)]
    value = 0.0
    err_total = 0.0
    while stack:
        l, h = stack.pop()
        coarse, _ = _rule(g, l, h, anchor, exponent, n)
        fine, magnitude = _rule(g, l, h, anchor, exponent, 2 * n)
        err = abs(fine - coarse)
        allowed = max(tol * (h - l) / total_len, _ROUNDING * magnitude)
        if err <= allowed or h - l <= 1e-13 * max(1.0, abs(h)):
            value += fine
            err_total += err
            continue
        if budget[0] <= 0:
            rest = fine + sum(_rule(g, l2, h2, anchor, exponent, 2 * n)[0] for l2, h2 in stack)
            raise ConvergenceError(
                "subdivision budget exhausted",
                estimate=value + rest,
                error_estimate=err_total + err,
            )
        budget[0] -= 1
        mid = 0.5 * (l + h)
        stack.append((l, mid))
        stack.append((mid, h))
    return value


def _split_points(lo, hi, breakpoints):
    inner = sorted({float(p) for p in breakpoints if lo < p < hi})
    return [lo, *inner, hi]


def power_weighted_integral(
    g: Callable,
    lo: float,
    hi: float,
    anchor: float,
    exponent: float,
    breakpoints: Iterable[float] = (),
    cfg: QuadratureConfig | None = None,
) -> float:
    """int_lo^hi (anchor - t)^exponent g(t) dt for anchor >= hi, exponent > -1.

    ``g`` must accept numpy arrays.  The range is split at every breakpoint
    inside (lo, hi); g only needs to be smooth on each resulting piece.
    """
    cfg = cfg or DEFAULT_CONFIG
    if not exponent > -1.0:
        raise DomainError(f"weight exponent must exceed -1, got {exponent}")
    if hi < lo:
        raise DomainError(f"empty range [{lo}, {hi}]")
    if anchor < hi:
        raise DomainError("weight anchor must lie at or beyond the upper limit")
    if hi == lo:
        return 0.0
    nodes = _split_points(lo, hi, breakpoints)
    total = hi - lo
    budget = [int(cfg.max_subdivisions)]
    value = 0.0
    for l, h in zip(nodes[:-1], nodes[1:]):
        tol = cfg.target_abs_tol * (h - l) / total
        value += _adaptive_piece(g, l, h, anchor, exponent, cfg, tol, budget)
    return value


def weighted_integral(
    g: Callable,
    interval,
    alpha: float,
    extra_breakpoints: Iterable[float] = (),
    cfg: QuadratureConfig | None = None,
) -> float:
    """Raw integral int_a^b (b - t)^(alpha-1) g(t) dt (no 1/Gamma(alpha)).

    Restricted to alpha >= 1, where the weight is continuous.
    """
    iv = as_interval(interval)
    if not alpha >= 1.0:
        raise DomainError(f"weighted_integral requires alpha >= 1, got {alpha}")
    bps = list(extra_breakpoints)
    for p in bps:
        if not iv.a < p < iv.b:
            raise DomainError(f"breakpoint {p} not inside ({iv.a}, {iv.b})")
    return power_weighted_integral(g, iv.a, iv.b, iv.b, alpha - 1.0, bps, cfg)


def rl_integral(f, interval, alpha: float, x: float, cfg: QuadratureConfig | None = None) -> float:
    """Left-sided Riemann-Liouville integral J_a^alpha f(x).

    ``f`` is a TestFunction (anything with ``eval`` and ``breakpoints``).
    alpha = 0 returns f(x).
    """
    iv = as_interval(interval)
    x = float(x)
    if not iv.a <= x <= iv.b:
        raise DomainError(f"x={x} outside [{iv.a}, {iv.b}]")
    if alpha == 0:
        return float(f.eval(x))
    if not alpha > 0:
        raise DomainError(f"fractional order must be >= 0, got {alpha}")
    if x == iv.a:
        return 0.0
    raw = power_weighted_integral(f.eval, iv.a, x, x, alpha - 1.0, f.breakpoints, cfg)
    return raw / gamma(alpha)


def adaptive_oracle(
    g: Callable,
    a: float,
    b: float,
    tol: float,
    points: Iterable[float] | None = None,
    limit: int = 500,
) -> float:
    """Independent cross-check: globally adaptive Gauss-Kronrod (QUADPACK).

    Raises ConvergenceError, carrying the best estimate, when the
    subdivision budget runs out before the error estimate drops below tol.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    if b == a:
        return 0.0
    pts = None
    if points is not None:
        pts = sorted(p for p in points if a < p < b) or None
    value, err, *_ = integrate.quad(
        lambda t: float(g(t)), a, b, epsabs=tol, epsrel=0.0, limit=limit, points=pts, full_output=1
    )
    if not err <= tol:
        raise ConvergenceError(f"adaptive oracle did not reach tol={tol}", estimate=value, error_estimate=err)
    return float(value)
