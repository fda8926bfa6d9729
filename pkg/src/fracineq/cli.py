"""Command-line entry point: ``verify --config sweep.cfg``.

Every config key has a matching flag (``x_grid`` -> ``--x-grid``) and flags
win over the file.  The report goes to ``--out`` (or ``output_path``) or to
stdout; a one-line-per-check summary goes to stderr.

Exit status: 0 when every verdict row holds, 1 otherwise, 2 for bad usage or
configuration.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .errors import ConfigError
from .sweep import CONFIG_KEYS, SweepConfig, SweepReport, parse_config, render, run_sweep

_POST_PARSE = ("output_format", "output_path", "jobs")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="verify", description="Sweep fractional Ostrowski identities and bounds.")
    p.add_argument("--config", type=Path, help="key = value config file (defaults apply when omitted)")
    p.add_argument("--format", dest="output_format", choices=("csv", "json"))
    p.add_argument("--out", dest="output_path", help="write the report here instead of stdout")
    p.add_argument("--checks", help="comma separated subset of checks")
    p.add_argument("--self-test", action="store_true", help="run only the quadrature-vs-oracle checks")
    p.add_argument("--jobs", type=int, help="worker processes")
    p.add_argument("-v", "--verbose", action="store_true")
    for key in CONFIG_KEYS:
        if key in _POST_PARSE or key == "checks":
            continue
        p.add_argument("--" + key.replace("_", "-"), dest=key, metavar="VALUE")
    return p


def _config_from_args(args) -> SweepConfig:
    flags = {k: getattr(args, k) for k in CONFIG_KEYS if k not in _POST_PARSE and getattr(args, k, None) is not None}
    text = args.config.read_text() if args.config else ""
    # drop file entries that a flag replaces, then append the flag values
    lines = [ln for ln in text.splitlines() if ln.partition("=")[0].strip() not in flags]
    lines += [f"{k} = {v}" for k, v in flags.items()]
    config = parse_config("\n".join(lines))
    overrides = {k: getattr(args, k) for k in _POST_PARSE if getattr(args, k) is not None}
    if args.self_test:
        overrides["checks"] = ("quad_selftest",)
    return replace(config, **overrides)


def _print_summary(report: SweepReport, stream) -> None:
    for check, s in report.summary.items():
        worst = s["worst_margin"] if s["worst_margin"] is not None else s["worst_residual"]
        label = "worst_margin" if s["worst_margin"] is not None else "worst_residual"
        note = " (informational)" if check == "thm3_printed" else ""
        print(
            f"{check:15s} rows={s['rows']:5d} pass={s['pass']:5d} fail={s['fail']:5d} "
            f"error={s['error']:3d} {label}={worst if worst is None else format(worst, '.3e')}{note}",
            file=stream,
        )
    if report.skipped:
        print(f"skipped {len(report.skipped)} inapplicable (check, function) pairs", file=stream)
    if report.typo_ledger:
        print(f"typo_ledger: {len(report.typo_ledger)} thm3 rows where printed != exact", file=stream)
    print("OK" if report.ok else "FAILED", file=stream)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        config = _config_from_args(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return 2

    report = run_sweep(config)
    text = render(report, config.output_format)
    if config.output_path:
        with open(config.output_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    _print_summary(report, sys.stderr)
    return report.exit_status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
