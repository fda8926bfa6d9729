"""Catalog of test functions with analytic one-sided derivatives.

Catalog names (stable, used by the CLI)::

    constant(c=1)            f = c
    linear(m=1)              f = m t
    square                   f = t^2
    abs_shift(c=midpoint)    f = |t - c|           kink at c
    exp                      f = e^t
    piecewise_linear_convex  slopes -1, 1/2, 2     kinks at a + (b-a)/3, a + 2(b-a)/3
    quartic                  f = t^4 - t^2         not convex on [0, 1]
    neg_entropy              f = u log u, u = t - a + 1
    poly(c0, c1, ...)        f = sum c_k t^k       degree <= 12

Every callable is vectorised over numpy arrays.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import CatalogError, DomainError
from .quad import Interval, as_interval

__all__ = [
    "TestFunction",
    "CATALOG",
    "DEFAULT_FUNCTIONS",
    "builtin",
    "parse_name",
    "validate_convexity",
    "check_derivative_consistency",
    "linear_combination",
    "scaled",
    "poly_eval",
]

MAX_POLY_DEGREE = 12


@dataclass(frozen=True)
class TestFunction:
    """A function on [a, b] together with its one-sided derivatives.

    ``poly_form`` holds monomial coefficients in powers of (t - a) when the
    function is a polynomial; ``deriv_bound_source`` is ``"analytic"`` or
    ``"grid"`` depending on how ``deriv_bound_M`` was obtained.
    """

    __test__ = False  # not a pytest class

    name: str
    interval: Interval
    eval: Callable
    deriv_left: Callable
    deriv_right: Callable
    breakpoints: tuple[float, ...] = ()
    convex: bool = False
    poly_form: tuple[float, ...] | None = None
    deriv_bound_M: float | None = None
    deriv_bound_source: str | None = None

    def __post_init__(self):
        a, b = self.interval.a, self.interval.b
        bps = tuple(float(p) for p in self.breakpoints)
        if any(not a < p < b for p in bps):
            raise DomainError(f"{self.name}: breakpoints must lie strictly inside ({a}, {b})")
        if any(p >= q for p, q in zip(bps, bps[1:])):
            raise DomainError(f"{self.name}: breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", bps)
        if self.poly_form is not None:
            if len(self.poly_form) - 1 > MAX_POLY_DEGREE:
                raise DomainError(f"{self.name}: polynomial degree exceeds {MAX_POLY_DEGREE}")
            object.__setattr__(self, "poly_form", tuple(float(c) for c in self.poly_form))

    @property
    def is_polynomial(self) -> bool:
        return self.poly_form is not None

    def __call__(self, t):
        return self.eval(t)


def poly_eval(coeffs, a: float, t):
    """Evaluate sum c_k (t - a)^k."""
    return npoly.polyval(np.asarray(t, dtype=float) - a, coeffs)


def _shift_to_left_endpoint(coeffs, a):
    # coefficients in t  ->  coefficients in (t - a)
    out = np.zeros(1)
    shift = np.array([a, 1.0])
    power = np.ones(1)
    for c in coeffs:
        out = npoly.polyadd(out, c * power)
        power = npoly.polymul(power, shift)
    return tuple(np.trim_zeros(out, "b")) or (0.0,)


def _grid_bound(deriv, iv: Interval, points: int = 10_000):
    t = np.linspace(iv.a, iv.b, points)
    return 1.05 * float(np.max(np.abs(deriv(t))))


def _polynomial(name, iv, coeffs, convex, bound=None):
    poly_t = np.asarray(coeffs, dtype=float)
    dpoly_t = npoly.polyder(poly_t) if len(poly_t) > 1 else np.zeros(1)

    def f(t):
        return npoly.polyval(np.asarray(t, dtype=float), poly_t)

    def df(t):
        return npoly.polyval(np.asarray(t, dtype=float), dpoly_t)

    source = "analytic"
    if bound is None:
        bound = _grid_bound(df, iv)
        source = "grid"
    return TestFunction(
        name=name,
        interval=iv,
        eval=f,
        deriv_left=df,
        deriv_right=df,
        convex=convex,
        poly_form=_shift_to_left_endpoint(poly_t, iv.a),
        deriv_bound_M=bound,
        deriv_bound_source=source,
    )


def _constant(iv, c=1.0):
    return _polynomial(f"constant({c:g})", iv, [c], convex=True, bound=0.0)


def _linear(iv, m=1.0):
    return _polynomial(f"linear({m:g})", iv, [0.0, m], convex=True, bound=abs(m))


def _square(iv):
    return _polynomial("square", iv, [0.0, 0.0, 1.0], convex=True, bound=2 * max(abs(iv.a), abs(iv.b)))


def _quartic(iv):
    # f'' = 12 t^2 - 2 changes sign at +-1/sqrt(6); convex only on intervals avoiding that band.
    # sup |4t^3 - 2t| has no tidy closed form on a general interval; use the grid path
    knee = 1.0 / math.sqrt(6.0)
    convex = iv.a >= knee or iv.b <= -knee
    return _polynomial("quartic", iv, [0.0, 0.0, -1.0, 0.0, 1.0], convex=convex)


def _poly(iv, *coeffs):
    if not coeffs:
        raise CatalogError("poly(...) needs at least one coefficient")
    if len(coeffs) - 1 > MAX_POLY_DEGREE:
        raise CatalogError(f"poly(...) supports degree <= {MAX_POLY_DEGREE}")
    name = "poly(" + ",".join(f"{c:g}" for c in coeffs) + ")"
    d2 = npoly.polyder(np.asarray(coeffs, dtype=float), 2) if len(coeffs) > 2 else np.zeros(1)
    t = np.linspace(iv.a, iv.b, 2001)
    convex = bool(np.all(npoly.polyval(t, d2) >= 0.0))
    return _polynomial(name, iv, coeffs, convex=convex)


def _abs_shift(iv, c=None):
    c = iv.midpoint if c is None else float(c)

    def f(t):
        return np.abs(np.asarray(t, dtype=float) - c)

    def left(t):
        return np.where(np.asarray(t, dtype=float) > c, 1.0, -1.0)

    def right(t):
        return np.where(np.asarray(t, dtype=float) >= c, 1.0, -1.0)

    return TestFunction(
        name=f"abs_shift({c:g})",
        interval=iv,
        eval=f,
        deriv_left=left,
        deriv_right=right,
        breakpoints=(c,) if iv.a < c < iv.b else (),
        convex=True,
        deriv_bound_M=1.0,
        deriv_bound_source="analytic",
    )


def _exp(iv):
    return TestFunction(
        name="exp",
        interval=iv,
        eval=lambda t: np.exp(np.asarray(t, dtype=float)),
        deriv_left=lambda t: np.exp(np.asarray(t, dtype=float)),
        deriv_right=lambda t: np.exp(np.asarray(t, dtype=float)),
        convex=True,
        deriv_bound_M=math.exp(iv.b),
        deriv_bound_source="analytic",
    )


_PL_SLOPES = (-1.0, 0.5, 2.0)


def _piecewise_linear_convex(iv):
    p1 = iv.a + iv.length / 3.0
    p2 = iv.a + 2.0 * iv.length / 3.0
    s0, s1, s2 = _PL_SLOPES

    def f(t):
        t = np.asarray(t, dtype=float)
        return s0 * (t - iv.a) + (s1 - s0) * np.maximum(t - p1, 0.0) + (s2 - s1) * np.maximum(t - p2, 0.0)

    def left(t):
        t = np.asarray(t, dtype=float)
        return s0 + (s1 - s0) * (t > p1) + (s2 - s1) * (t > p2)

    def right(t):
        t = np.asarray(t, dtype=float)
        return s0 + (s1 - s0) * (t >= p1) + (s2 - s1) * (t >= p2)

    return TestFunction(
        name="piecewise_linear_convex",
        interval=iv,
        eval=f,
        deriv_left=left,
        deriv_right=right,
        breakpoints=(p1, p2),
        convex=True,
        deriv_bound_M=max(abs(s) for s in _PL_SLOPES),
        deriv_bound_source="analytic",
    )


def _neg_entropy(iv):
    # u log u shifted so u >= 1 on the interval: smooth, convex, f' finite at a
    def f(t):
        u = np.asarray(t, dtype=float) - iv.a + 1.0
        return u * np.log(u)

    def df(t):
        u = np.asarray(t, dtype=float) - iv.a + 1.0
        return np.log(u) + 1.0

    return TestFunction(
        name="neg_entropy",
        interval=iv,
        eval=f,
        deriv_left=df,
        deriv_right=df,
        convex=True,
        deriv_bound_M=1.0 + math.log1p(iv.length),
        deriv_bound_source="analytic",
    )


CATALOG: dict[str, Callable] = {
    "constant": _constant,
    "linear": _linear,
    "square": _square,
    "abs_shift": _abs_shift,
    "exp": _exp,
    "piecewise_linear_convex": _piecewise_linear_convex,
    "quartic": _quartic,
    "neg_entropy": _neg_entropy,
    "poly": _poly,
}

DEFAULT_FUNCTIONS = (
    "constant",
    "linear",
    "square",
    "abs_shift",
    "exp",
    "piecewise_linear_convex",
    "quartic",
    "neg_entropy",
)

_NAME_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\((.*)\))?\s*$")


def parse_name(spec: str) -> tuple[str, tuple[float, ...]]:
    """Split ``"abs_shift(0.5)"`` into ``("abs_shift", (0.5,))``."""
    m = _NAME_RE.match(spec)
    if not m:
        raise CatalogError(f"malformed function name {spec!r}")
    base, args = m.group(1), m.group(2)
    if base not in CATALOG:
        raise CatalogError(f"unknown function {base!r}; catalog: {', '.join(CATALOG)}")
    params: tuple[float, ...] = ()
    if args is not None and args.strip():
        try:
            params = tuple(float(p) for p in args.split(","))
        except ValueError:
            raise CatalogError(f"non-numeric parameter in {spec!r}") from None
    return base, params


def builtin(name: str, interval) -> TestFunction:
    """Build a catalog function on ``interval``."""
    base, params = parse_name(name)
    iv = as_interval(interval)
    try:
        return CATALOG[base](iv, *params)
    except TypeError:
        raise CatalogError(f"wrong number of parameters for {base!r}: {name!r}") from None


def linear_combination(c1: float, f1: TestFunction, c2: float = 0.0, f2: TestFunction | None = None) -> TestFunction:
    """c1*f1 + c2*f2 as a TestFunction (f2 defaults to the zero function).

    The derivative bound is the triangle-inequality bound, not the sup.
    """
    if f2 is None:
        f2 = _constant(f1.interval, 0.0)
    if f1.interval != f2.interval:
        raise DomainError("linear_combination needs functions on the same interval")

    def lc(g1, g2):
        return lambda t: c1 * g1(t) + c2 * g2(t)

    poly = None
    if f1.poly_form is not None and f2.poly_form is not None:
        poly = tuple(npoly.polyadd(c1 * np.asarray(f1.poly_form), c2 * np.asarray(f2.poly_form)))
    bound = None
    if f1.deriv_bound_M is not None and f2.deriv_bound_M is not None:
        bound = abs(c1) * f1.deriv_bound_M + abs(c2) * f2.deriv_bound_M
    return TestFunction(
        name=f"{c1:g}*{f1.name}+{c2:g}*{f2.name}",
        interval=f1.interval,
        eval=lc(f1.eval, f2.eval),
        deriv_left=lc(f1.deriv_left, f2.deriv_left),
        deriv_right=lc(f1.deriv_right, f2.deriv_right),
        breakpoints=tuple(sorted(set(f1.breakpoints) | set(f2.breakpoints))),
        convex=(f1.convex and c1 >= 0) and (f2.convex and c2 >= 0),
        poly_form=poly,
        deriv_bound_M=bound,
        deriv_bound_source="triangle" if bound is not None else None,
    )


def scaled(f: TestFunction, c: float) -> TestFunction:
    """c*f, keeping the original name suffixed with the factor."""
    g = linear_combination(c, f)
    return replace(g, name=f"{c:g}*{f.name}")


def validate_convexity(f: TestFunction, samples: int = 1000, tol: float = 1e-12) -> bool:
    """Empirical convexity test on a uniform grid.

    Checks the midpoint inequality f((u+v)/2) <= (f(u)+f(v))/2 + tol for all
    grid pairs u < v, that f'_+ is nondecreasing along the grid and that
    f'_- <= f'_+ pointwise.
    """
    if samples < 100:
        raise DomainError("validate_convexity needs at least 100 samples")
    iv = f.interval
    t = np.linspace(iv.a, iv.b, samples)
    t = np.union1d(t, np.asarray(f.breakpoints, dtype=float))
    vals = np.asarray(f.eval(t), dtype=float)
    iu, iv_ = np.triu_indices(len(t), k=1)
    mid = np.asarray(f.eval(0.5 * (t[iu] + t[iv_])), dtype=float)
    scale = 1.0 + np.maximum(np.abs(vals[iu]), np.abs(vals[iv_]))
    if np.any(mid > 0.5 * (vals[iu] + vals[iv_]) + tol * scale):
        return False
    right = np.asarray(f.deriv_right(t), dtype=float)
    left = np.asarray(f.deriv_left(t), dtype=float)
    dscale = 1.0 + np.abs(right)
    if np.any(np.diff(right) < -tol * dscale[1:]):
        return False
    return not np.any(left > right + tol * dscale)


def check_derivative_consistency(f: TestFunction, samples: int = 997, tol: float = 1e-12) -> bool:
    """deriv_left == deriv_right away from the declared breakpoints."""
    t = np.linspace(f.interval.a, f.interval.b, samples)
    if f.breakpoints:
        gap = np.min(np.abs(t[:, None] - np.asarray(f.breakpoints)[None, :]), axis=1)
        t = t[gap > 1e-9 * f.interval.length]
    left = np.asarray(f.deriv_left(t), dtype=float)
    right = np.asarray(f.deriv_right(t), dtype=float)
    return bool(np.all(np.abs(left - right) <= tol * (1.0 + np.abs(right))))
