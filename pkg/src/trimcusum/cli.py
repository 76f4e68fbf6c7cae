"""Command line front end: run the test on CSV data, simulate tables and power
curves, estimate resampled critical values, and print asymptotic quantiles.

Exit status: 0 success (or no rejection), 1 rejection (test subcommand),
2 usage error, 3 data error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .heavy_tail_models import (
    GAUSSIAN,
    ONE_SIDED_PARETO,
    TWO_SIDED_PARETO,
    TailModel,
    gaussian,
    one_sided_pareto,
    two_sided_pareto,
)
from .limit_dist import sup_bridge_quantile
from .montecarlo import (
    PowerSpec,
    SimulationSpec,
    centering_normality_diagnostic,
    critical_value_table,
    power_curve,
    trim_truncation_divergence,
)
from .resampling import (
    WITH_REPLACEMENT,
    WITHOUT_REPLACEMENT,
    ResamplePlan,
    resampled_critical_value,
)
from .trimmed_cusum import (
    DegenerateSampleError,
    TestReport,
    cusum_path,
    default_trim_depth,
    locate_change,
    test_statistic,
    trim,
)

__all__ = ["DataError", "load_series", "main", "entry_point"]

_MODE_NAMES = {"bootstrap": WITH_REPLACEMENT, "permutation": WITHOUT_REPLACEMENT}


class DataError(Exception):
    """Problem with input data (missing file, bad line, too few values)."""


class UsageError(Exception):
    """Problem with the requested configuration."""


def load_series(path: str) -> np.ndarray:
    """One real per line; an optional leading 'value' header row is skipped."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    start = 0
    if lines and lines[0].strip().lower() == "value":
        start = 1
    values = []
    for lineno in range(start, len(lines)):
        text = lines[lineno].strip()
        try:
            x = float(text)
        except ValueError:
            raise DataError(f"{path}: unparseable value on line {lineno + 1}: {text!r}") from None
        if not math.isfinite(x):
            raise DataError(f"{path}: non-finite value on line {lineno + 1}")
        values.append(x)
    if len(values) < 4:
        raise DataError(f"{path}: need at least 4 values, got {len(values)}")
    return np.asarray(values)


def _sig6(x: float) -> float:
    """Round to 6 significant digits for report output."""
    return float(f"{x:.6g}")


def _model_from_args(args) -> TailModel:
    if args.family == GAUSSIAN:
        return gaussian()
    if args.family == ONE_SIDED_PARETO:
        return one_sided_pareto(args.alpha)
    return two_sided_pareto(args.alpha, args.p)


def _resolve_workers(args) -> int:
    env = os.environ.get("TRIMCUSUM_WORKERS")
    if env is not None:
        try:
            workers = int(env)
        except ValueError:
            raise UsageError(f"TRIMCUSUM_WORKERS must be an integer, got {env!r}") from None
    else:
        workers = args.workers
    if workers < 1:
        raise UsageError("worker count must be at least 1")
    return workers


def _csv(header: list[str], rows: list[list]) -> str:
    out = [",".join(header)]
    for row in rows:
        out.append(",".join(repr(x) if isinstance(x, float) else str(x) for x in row))
    return "\n".join(out) + "\n"


def _json_doc(config: dict, body: dict) -> str:
    return json.dumps({"config": config, **body}, indent=2) + "\n"


def _cmd_test(args) -> tuple[int, str]:
    series = load_series(args.input)
    n = series.size
    d = args.d if args.d is not None else default_trim_depth(n)
    if not 2 <= d < n:
        raise UsageError(f"trim depth d={d} must satisfy 2 <= d < n={n}")
    try:
        statistic = test_statistic(series, d)
    except DegenerateSampleError as exc:
        raise DataError(str(exc)) from exc
    crit_asym = sup_bridge_quantile(args.level)
    crit_resampled = None
    method = "asymptotic"
    critical = crit_asym
    if args.resample_B is not None:
        plan = ResamplePlan(
            m=args.m if args.m is not None else n,
            mode=_MODE_NAMES[args.mode],
            replications=args.resample_B,
            level=args.level,
            seed=args.seed,
        )
        crit_resampled = resampled_critical_value(series, d, plan).value
        method = "resampled"
        critical = crit_resampled
    ts = trim(series, d)
    location = locate_change(cusum_path(ts.trimmed_values))
    report = TestReport(
        statistic=statistic,
        critical_value=critical,
        level=args.level,
        reject=statistic > critical,
        change_at=location.k,
        method=method,
    )
    config = {
        "subcommand": "test",
        "input": args.input,
        "d": d,
        "level": args.level,
        "seed": args.seed,
        "resample_B": args.resample_B,
        "m": args.m,
        "mode": args.mode,
    }
    body = {
        "n": n,
        "statistic": _sig6(report.statistic),
        "critical_value_asymptotic": _sig6(crit_asym),
        "critical_value_resampled": None if crit_resampled is None else _sig6(crit_resampled),
        "critical_value_used": _sig6(report.critical_value),
        "method": report.method,
        "reject": report.reject,
        "change_at": report.change_at,
        "degenerate_path": location.degenerate,
        "threshold": _sig6(ts.threshold),
        "trimmed_mean": _sig6(ts.trimmed_mean),
        "sigma_hat": _sig6(ts.sigma_hat),
    }
    if args.format == "csv":
        header = list(body)
        text = _csv(header, [[body[k] for k in header]])
    else:
        text = _json_doc(config, body)
    return (1 if report.reject else 0), text


def _cmd_simulate(args) -> tuple[int, str]:
    n_list = _parse_n_list(args.n)
    model = _model_from_args(args)
    spec = SimulationSpec(
        model,
        n=n_list[0],
        replications=args.reps,
        level=args.level,
        master_seed=args.seed,
        d=args.d,
    )
    rows = [[_inf_str(n), cv] for n, cv in critical_value_table(spec, n_list, workers=_resolve_workers(args))]
    if args.format == "json":
        return 0, _json_doc(_sim_config("simulate", args, n_list), {"table": rows})
    return 0, _csv(["n", "critical_value"], rows)


def _cmd_power(args) -> tuple[int, str]:
    model = _model_from_args(args)
    spec = SimulationSpec(
        model,
        n=args.n,
        replications=args.reps,
        level=args.level,
        master_seed=args.seed,
        d=args.d,
    )
    change_at = args.change_at if args.change_at is not None else args.n // 2
    critical = args.critical_value
    if critical is None:
        critical = sup_bridge_quantile(args.level)
    pspec = PowerSpec(base=spec, change_at=change_at, critical_value=critical)
    points = power_curve(pspec, workers=_resolve_workers(args))
    if args.format == "json":
        config = _sim_config("power", args, [args.n])
        config.update({"change_at": change_at, "critical_value": critical})
        return 0, _json_doc(config, {"points": [[s, p] for s, p in points]})
    return 0, _csv(["shift", "power"], [[s, p] for s, p in points])


def _cmd_resample(args) -> tuple[int, str]:
    series = load_series(args.input)
    n = series.size
    d = args.d if args.d is not None else default_trim_depth(n)
    if not 2 <= d < n:
        raise UsageError(f"trim depth d={d} must satisfy 2 <= d < n={n}")
    plan = ResamplePlan(
        m=args.m if args.m is not None else n,
        mode=_MODE_NAMES[args.mode],
        replications=args.reps,
        level=args.level,
        seed=args.seed,
    )
    try:
        est = resampled_critical_value(series, d, plan)
    except DegenerateSampleError as exc:
        raise DataError(str(exc)) from exc
    if args.format == "json":
        config = {
            "subcommand": "resample",
            "input": args.input,
            "d": d,
            "m": plan.m,
            "mode": args.mode,
            "B": plan.replications,
            "level": plan.level,
            "seed": plan.seed,
        }
        body = {
            "critical_value": est.value,
            "standard_error": est.standard_error,
        }
        return 0, _json_doc(config, body)
    return 0, _csv(
        ["value", "level", "B", "standard_error"],
        [[est.value, est.level, est.replications, est.standard_error]],
    )


def _cmd_diagnose(args) -> tuple[int, str]:
    model = one_sided_pareto(args.alpha)
    d = args.d if args.d is not None else default_trim_depth(args.n)
    workers = _resolve_workers(args)
    summary = centering_normality_diagnostic(
        model, args.n, d, args.reps, seed=args.seed, workers=workers
    )
    gaps = trim_truncation_divergence(
        model, args.n, d, args.reps, seed=args.seed, workers=workers
    )
    config = {
        "subcommand": "diagnose",
        "family": ONE_SIDED_PARETO,
        "alpha": args.alpha,
        "n": args.n,
        "d": d,
        "reps": args.reps,
        "seed": args.seed,
    }
    body = {
        "centering": {
            "mean": _sig6(summary.mean),
            "variance": None if summary.variance is None else _sig6(summary.variance),
            "ks_to_normal": _sig6(summary.ks_to_normal),
        },
        "gap_medians": {
            "centered": _sig6(gaps.centered_median),
            "uncentered": _sig6(gaps.uncentered_median),
        },
    }
    return 0, _json_doc(config, body)


def _cmd_quantile(args) -> tuple[int, str]:
    value = sup_bridge_quantile(args.level)
    if args.format == "json":
        return 0, _json_doc(
            {"subcommand": "quantile", "level": args.level}, {"quantile": _sig6(value)}
        )
    return 0, f"{value:.6g}\n"


def _sim_config(subcommand: str, args, n_list: list[int]) -> dict:
    return {
        "subcommand": subcommand,
        "family": args.family,
        "alpha": args.alpha,
        "p": args.p,
        "n": n_list if subcommand == "simulate" else n_list[0],
        "d": args.d,
        "reps": args.reps,
        "level": args.level,
        "seed": args.seed,
    }


def _inf_str(n: float):
    return "inf" if math.isinf(n) else int(n)


def _parse_n_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"--n expects a comma-separated list of integers, got {text!r}") from None
    if not values:
        raise UsageError("--n list is empty")
    return values


def _add_common(sub, *, with_model=False, with_workers=False) -> None:
    sub.add_argument("--level", type=float, default=0.95)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--d", type=int, default=None)
    sub.add_argument("--output", default=None)
    sub.add_argument("--format", choices=("json", "csv"), default=None)
    if with_model:
        sub.add_argument(
            "--family",
            choices=(TWO_SIDED_PARETO, ONE_SIDED_PARETO, GAUSSIAN),
            default=TWO_SIDED_PARETO,
        )
        sub.add_argument("--alpha", type=float, default=1.5)
        sub.add_argument("--p", type=float, default=0.5)
    if with_workers:
        sub.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trimcusum",
        description="Trimmed CUSUM change-point test for heavy-tailed data.",
    )
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p_test = subs.add_parser("test", help="run the change-point test on a CSV series")
    p_test.add_argument("--input", required=True)
    p_test.add_argument("--resample-B", type=int, default=None, dest="resample_B")
    p_test.add_argument("--m", type=int, default=None)
    p_test.add_argument("--mode", choices=tuple(_MODE_NAMES), default="permutation")
    _add_common(p_test)

    p_sim = subs.add_parser("simulate", help="simulate a critical-value table")
    p_sim.add_argument("--n", default="100,200,400,800")
    p_sim.add_argument("--reps", type=int, default=100_000)
    _add_common(p_sim, with_model=True, with_workers=True)

    p_pow = subs.add_parser("power", help="simulate an empirical power curve")
    p_pow.add_argument("--n", type=int, required=True)
    p_pow.add_argument("--reps", type=int, default=10_000)
    p_pow.add_argument("--change-at", type=int, default=None, dest="change_at")
    p_pow.add_argument("--critical-value", type=float, default=None, dest="critical_value")
    _add_common(p_pow, with_model=True, with_workers=True)

    p_res = subs.add_parser("resample", help="resampled critical value for a CSV series")
    p_res.add_argument("--input", required=True)
    p_res.add_argument("--m", type=int, default=None)
    p_res.add_argument("--mode", choices=tuple(_MODE_NAMES), default="permutation")
    p_res.add_argument("--reps", type=int, default=2000)
    _add_common(p_res)

    p_diag = subs.add_parser("diagnose", help="centering and gap diagnostics")
    p_diag.add_argument("--n", type=int, default=100_000)
    p_diag.add_argument("--reps", type=int, default=2000)
    p_diag.add_argument("--alpha", type=float, default=1.5)
    p_diag.add_argument("--workers", type=int, default=1)
    _add_common(p_diag)

    p_q = subs.add_parser("quantile", help="asymptotic critical value")
    _add_common(p_q)

    return parser


_COMMANDS = {
    "test": _cmd_test,
    "simulate": _cmd_simulate,
    "power": _cmd_power,
    "resample": _cmd_resample,
    "diagnose": _cmd_diagnose,
    "quantile": _cmd_quantile,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if not 0.0 < args.level < 1.0:
            raise UsageError("--level must lie in (0, 1)")
        code, text = _COMMANDS[args.subcommand](args)
    except UsageError as exc:
        print(f"trimcusum: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"trimcusum: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OverflowError) as exc:
        print(f"trimcusum: {exc}", file=sys.stderr)
        return 2
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"trimcusum: cannot write {args.output}: {exc}", file=sys.stderr)
            return 3
    else:
        sys.stdout.write(text)
    return code


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
