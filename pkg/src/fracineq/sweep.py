"""Parameter sweeps over (check, function, alpha, lambda, x) and their reports.

Config files are flat ``key = value`` text.  Lines starting with ``#`` are
comments, arrays are comma separated and may be wrapped in ``[...]``::

    interval  = 0, 1
    alphas    = 1, 1.5, 2
    lambdas   = 0, 0.5
    x_grid    = 9
    functions = square, abs_shift(0.5), exp
    checks    = identity, thm1, thm3
    output_format = csv
    output_path   = report.csv

Recognised keys are listed in ``CONFIG_KEYS``.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache

from .bounds import midpoint_chain, thm1_check, thm2_check, thm3_check
from .corpus import DEFAULT_FUNCTIONS, builtin, parse_name, validate_convexity
from .errors import CatalogError, ConfigError, FracIneqError
from .identities import QUADRATURE, identity_terms
from .oracle import poly_rl_exact
from .quad import Interval, QuadratureConfig, rl_integral

log = logging.getLogger(__name__)

__all__ = [
    "CHECKS",
    "CSV_HEADER",
    "CONFIG_KEYS",
    "SweepConfig",
    "Row",
    "SweepReport",
    "parse_config",
    "run_sweep",
    "to_csv",
    "to_json",
]

CHECKS = ("identity", "identity_lambda", "thm1", "thm2", "thm3", "midpoint", "quad_selftest")
LAMBDA_CHECKS = frozenset({"identity_lambda", "thm3"})
INFORMATIONAL = frozenset({"thm3_printed"})
CSV_HEADER = ("check", "function", "alpha", "lambda", "x", "lhs", "rhs", "margin", "residual", "holds", "provenance")

DEFAULT_ALPHAS = (1.0, 1.25, 1.5, 2.0, 2.5, 3.0)
DEFAULT_LAMBDAS = (0.0, 0.25, 0.5, 0.75, 1.0)
DEFAULT_TOLERANCES = {
    "slack_quadrature": 1e-8,
    "slack_exact": 1e-11,
    "identity_tol": 1e-8,
    "identity_tol_exact": 1e-11,
    "selftest_tol": 1e-12,
}
TYPO_THRESHOLD = 1e-10


@dataclass(frozen=True)
class SweepConfig:
    interval: Interval = Interval(0.0, 1.0)
    alphas: tuple[float, ...] = DEFAULT_ALPHAS
    lambdas: tuple[float, ...] = DEFAULT_LAMBDAS
    x_grid: int = 9
    functions: tuple[str, ...] = DEFAULT_FUNCTIONS
    checks: tuple[str, ...] = CHECKS
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output_format: str = "csv"
    output_path: str | None = None
    jacobi_nodes: int = 32
    max_subdivisions: int = 64
    target_abs_tol: float = 1e-10
    prefer_exact: bool = True
    jobs: int = 1

    def __post_init__(self):
        if not self.alphas:
            raise ConfigError("alphas", "must not be empty")
        for a in self.alphas:
            if not (math.isfinite(a) and a >= 1.0):
                raise ConfigError("alphas", f"every alpha must be >= 1, got {a:g}")
        for lam in self.lambdas:
            if not 0.0 <= lam <= 1.0:
                raise ConfigError("lambdas", f"every lambda must lie in [0, 1], got {lam:g}")
        if not self.lambdas:
            raise ConfigError("lambdas", "must not be empty")
        if self.x_grid < 1:
            raise ConfigError("x_grid", "must be >= 1")
        if not self.functions:
            raise ConfigError("functions", "must not be empty")
        for name in self.functions:
            try:
                parse_name(name)
            except CatalogError as exc:
                raise ConfigError("functions", str(exc)) from None
        if not self.checks:
            raise ConfigError("checks", "must not be empty")
        for c in self.checks:
            if c not in CHECKS:
                raise ConfigError("checks", f"unknown check {c!r}; expected one of {', '.join(CHECKS)}")
        if self.output_format not in ("csv", "json"):
            raise ConfigError("output_format", "must be csv or json")
        for key, value in self.tolerances.items():
            if key not in DEFAULT_TOLERANCES:
                raise ConfigError(key, "unknown tolerance")
            if not value > 0:
                raise ConfigError(key, "must be positive")
        if self.jobs < 1:
            raise ConfigError("jobs", "must be >= 1")
        try:
            self.quadrature
        except FracIneqError as exc:
            raise ConfigError("quadrature", str(exc)) from None

    @property
    def quadrature(self) -> QuadratureConfig:
        return QuadratureConfig(self.jacobi_nodes, self.max_subdivisions, self.target_abs_tol)

    def tol(self, key: str) -> float:
        return self.tolerances.get(key, DEFAULT_TOLERANCES[key])

    def with_overrides(self, **overrides) -> "SweepConfig":
        overrides = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **overrides)


# ---------------------------------------------------------------------------
# Config parsing


def _split_list(text: str) -> list[str]:
    text = text.strip()
    if text.startswith("[") and text.endswith("]"):
        text = text[1:-1]
    items, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            items.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    items.append("".join(cur))
    items = [i.strip().strip("'\"").strip() for i in items]
    return [i for i in items if i]


def _floats(key, text):
    try:
        return tuple(float(v) for v in _split_list(text))
    except ValueError:
        raise ConfigError(key, f"expected numbers, got {text!r}") from None


def _int(key, text):
    try:
        return int(text.strip().strip("'\""))
    except ValueError:
        raise ConfigError(key, f"expected an integer, got {text!r}") from None


def _float(key, text):
    try:
        return float(text.strip().strip("'\""))
    except ValueError:
        raise ConfigError(key, f"expected a number, got {text!r}") from None


def _bool(key, text):
    v = text.strip().strip("'\"").lower()
    if v in ("true", "yes", "1", "on"):
        return True
    if v in ("false", "no", "0", "off"):
        return False
    raise ConfigError(key, f"expected true/false, got {text!r}")


def _interval(key, text):
    vals = _floats(key, text)
    if len(vals) != 2:
        raise ConfigError(key, "expected two numbers a, b")
    try:
        return Interval(*vals)
    except FracIneqError as exc:
        raise ConfigError(key, str(exc)) from None


def _string(key, text):
    return text.strip().strip("'\"")


def _fmt(key, text):
    v = _string(key, text).lower()
    if v not in ("csv", "json"):
        raise ConfigError(key, "must be csv or json")
    return v


CONFIG_KEYS = {
    "interval": _interval,
    "alphas": _floats,
    "lambdas": _floats,
    "x_grid": _int,
    "functions": lambda k, t: tuple(_split_list(t)),
    "checks": lambda k, t: tuple(_split_list(t)),
    "output_format": _fmt,
    "output_path": _string,
    "jacobi_nodes": _int,
    "max_subdivisions": _int,
    "target_abs_tol": _float,
    "prefer_exact": _bool,
    "jobs": _int,
    **{k: _float for k in DEFAULT_TOLERANCES},
}


def parse_config(source: str) -> SweepConfig:
    """Parse flat key-value text into a validated SweepConfig."""
    values: dict = {}
    tolerances = dict(DEFAULT_TOLERANCES)
    seen: set[str] = set()
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in CONFIG_KEYS:
            raise ConfigError(key, "unknown key")
        if key in seen:
            raise ConfigError(key, "given more than once")
        seen.add(key)
        parsed = CONFIG_KEYS[key](key, value)
        if key in DEFAULT_TOLERANCES:
            tolerances[key] = parsed
        else:
            values[key] = parsed
    return SweepConfig(tolerances=tolerances, **values)


# ---------------------------------------------------------------------------
# Rows and reports


@dataclass(frozen=True)
class Row:
    check: str
    function: str
    alpha: float
    lam: float
    x: float
    lhs: float | None = None
    rhs: float | None = None
    margin: float | None = None
    residual: float | None = None
    holds: bool = False
    provenance: str = "error"
    error: str | None = None
    terms: dict | None = None

    @property
    def key(self):
        return (self.check, self.function, self.alpha, self.lam, self.x)

    @property
    def informational(self) -> bool:
        return self.check in INFORMATIONAL

    def as_dict(self) -> dict:
        out = {
            "check": self.check,
            "function": self.function,
            "alpha": self.alpha,
            "lambda": self.lam,
            "x": self.x,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "residual": self.residual,
            "holds": self.holds,
            "provenance": self.provenance,
        }
        if self.error is not None:
            out["error"] = self.error
        if self.terms is not None:
            out["terms"] = self.terms
        return out


@dataclass
class SweepReport:
    rows: list[Row]
    summary: dict
    typo_ledger: list[dict]
    skipped: list[dict]

    @property
    def ok(self) -> bool:
        """True iff every non-informational row holds and no row errored."""
        return all(r.holds and r.error is None for r in self.rows if not r.informational)

    @property
    def exit_status(self) -> int:
        return 0 if self.ok else 1


@lru_cache(maxsize=None)
def _function(name: str, a: float, b: float):
    return builtin(name, Interval(a, b))


@lru_cache(maxsize=None)
def _convexity_verified(name: str, a: float, b: float) -> bool:
    return validate_convexity(_function(name, a, b), samples=1000)


def _evaluate(config: SweepConfig, task) -> list[Row]:
    check, name, alpha, lam, x = task
    iv = config.interval
    cfg = config.quadrature
    try:
        f = _function(name, iv.a, iv.b)
        label = f.name
        exact = config.prefer_exact and f.poly_form is not None
        if check in ("thm1", "thm2", "midpoint") and not _convexity_verified(name, iv.a, iv.b):
            raise FracIneqError(f"{label} is declared convex but fails the convexity check")

        if check in ("identity", "identity_lambda"):
            terms = identity_terms(f, iv, alpha, x, lam, cfg, exact)
            tol = config.tol("identity_tol_exact" if exact else "identity_tol")
            res = terms.residual
            holds = abs(res) <= tol
            return [
                Row(check, label, alpha, lam, x, lhs=terms.lhs, rhs=terms.rhs, residual=res, holds=holds,
                    provenance=terms.source, terms=None if holds else terms.as_dict())
            ]

        slack = config.tol("slack_exact" if exact else "slack_quadrature")
        if check == "thm1":
            reports = [thm1_check(f, iv, alpha, x, cfg, exact, slack)]
        elif check == "thm2":
            reports = [thm2_check(f, iv, alpha, x, cfg, exact, slack)]
        elif check == "midpoint":
            reports = list(midpoint_chain(f, iv, cfg, exact, slack))
        elif check == "thm3":
            reports = list(thm3_check(f, iv, alpha, x, lam, cfg, exact, slack))
        elif check == "quad_selftest":
            numeric = rl_integral(f, iv, alpha, x, cfg)
            reference = poly_rl_exact(f.poly_form, iv, alpha, x)
            res = numeric - reference
            return [
                Row(check, label, alpha, lam, x, lhs=numeric, rhs=reference, residual=res,
                    holds=abs(res) <= config.tol("selftest_tol"), provenance=QUADRATURE)
            ]
        else:  # pragma: no cover - guarded by SweepConfig validation
            raise FracIneqError(f"unknown check {check!r}")

        rows = []
        for rep in reports:
            residual = rep.terms.residual if rep.terms is not None else None
            rows.append(
                Row(rep.variant, label, alpha, lam, x, lhs=rep.lhs, rhs=rep.rhs, margin=rep.margin,
                    residual=residual, holds=rep.holds, provenance=rep.provenance,
                    terms=None if rep.holds or rep.terms is None else rep.terms.as_dict())
            )
        return rows
    except Exception as exc:  # every failure becomes a row, never a crash
        log.debug("row %s failed", task, exc_info=True)
        variants = {"thm3": ("thm3_exact", "thm3_printed"), "midpoint": ("midpoint1", "midpoint2")}
        return [
            Row(v, name, alpha, lam, x, error=f"{type(exc).__name__}: {exc}")
            for v in variants.get(check, (check,))
        ]


def _evaluate_chunk(args) -> list[Row]:
    config, tasks = args
    out = []
    for task in tasks:
        out.extend(_evaluate(config, task))
    return out


def _plan(config: SweepConfig):
    """Enumerate tasks; returns (tasks, skipped)."""
    iv = config.interval
    xs = iv.interior_grid(config.x_grid)
    tasks, skipped = [], []
    for check in config.checks:
        for name in config.functions:
            try:
                f = _function(name, iv.a, iv.b)
            except Exception as exc:
                # surfaces again as an errored row when the task is evaluated
                log.warning("cannot build %s: %s", name, exc)
                tasks.append((check, name, 1.0, 0.0, iv.midpoint))
                continue
            if check in ("thm1", "thm2", "midpoint") and not f.convex:
                skipped.append({"check": check, "function": f.name, "reason": "not convex"})
                continue
            if check == "quad_selftest" and f.poly_form is None:
                skipped.append({"check": check, "function": f.name, "reason": "no polynomial form"})
                continue
            if check == "midpoint":
                tasks.append((check, name, 1.0, 0.0, iv.midpoint))
                continue
            lams = config.lambdas if check in LAMBDA_CHECKS else (0.0,)
            for alpha in config.alphas:
                for lam in lams:
                    for x in xs:
                        tasks.append((check, name, float(alpha), float(lam), float(x)))
    return tasks, skipped


def _summarise(rows: list[Row]) -> dict:
    summary: dict = {}
    for r in rows:
        s = summary.setdefault(
            r.check, {"rows": 0, "pass": 0, "fail": 0, "error": 0, "worst_margin": None, "worst_residual": None}
        )
        s["rows"] += 1
        if r.error is not None:
            s["error"] += 1
        elif r.holds:
            s["pass"] += 1
        else:
            s["fail"] += 1
        if r.margin is not None and (s["worst_margin"] is None or r.margin < s["worst_margin"]):
            s["worst_margin"] = r.margin
        if r.check in ("identity", "identity_lambda", "quad_selftest") and r.residual is not None:
            if s["worst_residual"] is None or abs(r.residual) > s["worst_residual"]:
                s["worst_residual"] = abs(r.residual)
    return {k: summary[k] for k in sorted(summary)}


def _typo_ledger(rows: list[Row]) -> list[dict]:
    exact = {r.key[1:]: r for r in rows if r.check == "thm3_exact" and r.error is None}
    ledger = []
    for r in rows:
        if r.check != "thm3_printed" or r.error is not None:
            continue
        e = exact.get(r.key[1:])
        if e is None:
            continue
        delta = r.rhs - e.rhs
        if abs(delta) > TYPO_THRESHOLD * max(1.0, abs(e.rhs)):
            ledger.append({
                "function": r.function, "alpha": r.alpha, "lambda": r.lam, "x": r.x,
                "printed_rhs": r.rhs, "exact_rhs": e.rhs, "delta": delta,
                "printed_holds": r.holds,
            })
    return ledger


def run_sweep(config: SweepConfig, jobs: int | None = None) -> SweepReport:
    """Evaluate every (check, function, alpha, lambda, x) combination.

    Rows come back sorted by that tuple, so the report does not depend on
    ``jobs``.
    """
    jobs = config.jobs if jobs is None else jobs
    tasks, skipped = _plan(config)
    if jobs > 1 and len(tasks) > 1:
        size = max(1, math.ceil(len(tasks) / (4 * jobs)))
        chunks = [(config, tasks[i:i + size]) for i in range(0, len(tasks), size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = [row for part in pool.map(_evaluate_chunk, chunks) for row in part]
    else:
        rows = _evaluate_chunk((config, tasks))
    rows.sort(key=lambda r: r.key)
    return SweepReport(rows=rows, summary=_summarise(rows), typo_ledger=_typo_ledger(rows), skipped=skipped)


# ---------------------------------------------------------------------------
# Writers


def _num(v) -> str:
    if v is None:
        return ""
    return format(float(v), ".17g")


def to_csv(report: SweepReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in report.rows:
        writer.writerow([
            r.check, r.function, _num(r.alpha), _num(r.lam), _num(r.x), _num(r.lhs), _num(r.rhs),
            _num(r.margin), _num(r.residual), "true" if r.holds else "false", r.provenance,
        ])
    return buf.getvalue()


def _json_safe(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def to_json(report: SweepReport) -> str:
    doc = {
        "rows": [r.as_dict() for r in report.rows],
        "summary": report.summary,
        "typo_ledger": report.typo_ledger,
        "skipped": report.skipped,
        "ok": report.ok,
    }
    return json.dumps(_json_safe(doc), indent=2, sort_keys=True) + "\n"


def render(report: SweepReport, fmt: str) -> str:
    return to_json(report) if fmt == "json" else to_csv(report)
