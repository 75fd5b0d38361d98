"""Command-line front end: estimate over reserve grids, run benchmark tables,
and print analytic diagnostics for a model/tilt configuration.

Exit codes: 0 success, 2 configuration error, 3 admissibility failure,
4 step cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

from .engine import SimConfig, estimate_psi, estimate_psi_finite
from .errors import (
    ConfigError,
    MgfUnavailable,
    NonFiniteMoment,
    RuinlabError,
    SecondMomentInfinite,
    StepCapExceeded,
    UnsupportedCombination,
)
from .lundberg import (
    exact_psi_cl_exp,
    exact_psi_sa_exp,
    lundberg_root,
    memm_point,
    xi_hat,
)
from .model import RiskModel, model_from_config
from .tables import TABLES, table_spec
from .tilts import TiltingPair, check_admissible, hazard_r_max, tilt_from_config

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ADMISSIBILITY = 3
EXIT_STEP_CAP = 4

_ESTIMATE_COLUMNS = [
    "u",
    "estimate",
    "std_error",
    "rse",
    "are",
    "ess",
    "max_norm_weight",
    "K",
    "seed",
    "runtime_seconds",
]

_TABLE_COLUMNS = [
    "table",
    "config",
    "u",
    "exact",
    "estimate",
    "std_error",
    "rse",
    "are",
    "ess",
    "max_norm_weight",
    "K",
    "seed",
]


def _fmt(value) -> str:
    """Locale-independent cell formatting; floats keep 11 significant digits."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if value == int(value) and abs(value) < 1e15:
            return f"{value:g}"
        return f"{value:.10e}"
    return str(value)


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _parse_u_grid(text: str) -> list[float]:
    try:
        grid = [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"cannot parse reserve grid {text!r}") from exc
    if not grid:
        raise ConfigError("reserve grid is empty")
    if any(u < 0 for u in grid):
        raise ConfigError("reserves must be nonnegative")
    if grid != sorted(grid):
        raise ConfigError("reserve grid must be sorted ascending")
    return grid


def _exact_fn(model: RiskModel):
    """Closed-form psi for the model, or None when no formula applies."""
    for fn in (exact_psi_cl_exp, exact_psi_sa_exp):
        try:
            fn(model, 0.0)
            return fn
        except RuinlabError:
            continue
    return None


def _gate_admissibility(pair: TiltingPair, args) -> None:
    """Exit 3 unless the pair is ruin-inducing or a legal finite-time override applies."""
    finite = getattr(args, "horizon", None) is not None
    try:
        report = check_admissible(pair)
    except NonFiniteMoment as exc:
        if finite and (args.force or pair.variant == "identity"):
            return
        print(f"admissibility failure: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_ADMISSIBILITY)
    if report.in_c_p:
        return
    if finite and (args.force or pair.variant == "identity"):
        return
    print(
        "tilt is not ruin-inducing: "
        f"c*E[W e^delta] = {report.lhs:.10g} > E[X e^gamma] = {report.rhs:.10g} "
        "(use --force with --horizon for diagnostic runs)",
        file=sys.stderr,
    )
    raise SystemExit(EXIT_ADMISSIBILITY)


def _run_grid(model, pair, u_grid, args, exact_fn):
    rows = []
    for u in u_grid:
        cfg = SimConfig(
            u=u,
            k=args.K,
            seed=args.seed,
            max_steps=args.max_steps,
            horizon=args.horizon,
            threshold=args.threshold,
        )
        exact = exact_fn(model, u) if (exact_fn and args.horizon is None) else None
        if cfg.horizon is not None:
            rep = estimate_psi_finite(model, pair, cfg, exact=exact)
        else:
            rep = estimate_psi(model, pair, cfg, exact=exact)
        rows.append((u, exact, rep))
    return rows


def cmd_estimate(args) -> int:
    model = model_from_config(_load_json(args.model))
    pair = tilt_from_config(_load_json(args.tilt), model)
    u_grid = _parse_u_grid(args.u)
    exact_fn = None
    if args.exact:
        exact_fn = _exact_fn(model)
        if exact_fn is None:
            raise ConfigError("--exact requested but no closed form applies to this model")
    _gate_admissibility(pair, args)

    rows = _run_grid(model, pair, u_grid, args, exact_fn)
    out, close = _open_out(args.out)
    try:
        out.write(f"# model: {model.label()}\n")
        out.write(f"# tilt: {pair.label()}\n")
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(_ESTIMATE_COLUMNS)
        for u, _exact, rep in rows:
            writer.writerow(
                [
                    _fmt(float(u)),
                    _fmt(rep.estimate),
                    _fmt(rep.std_error),
                    _fmt(rep.rse),
                    _fmt(rep.are),
                    _fmt(rep.ess),
                    _fmt(rep.max_norm_weight),
                    _fmt(rep.k),
                    _fmt(rep.seed),
                    _fmt(rep.runtime_seconds),
                ]
            )
    finally:
        if close:
            out.close()
    return EXIT_OK


def cmd_table(args) -> int:
    spec = table_spec(args.name)
    out, close = _open_out(args.out)
    try:
        header_lines = []
        runs = []
        for col in spec.columns:
            pair = tilt_from_config(col.tilt_config, col.model)
            report = check_admissible(pair)
            if not report.in_c_p:
                raise ConfigError(
                    f"{spec.name}/{col.label}: resolved tilt is not ruin-inducing"
                )
            header_lines.append(
                f"# {spec.name} {col.label}: {col.model.label()}; tilt {pair.label()}"
            )
            runs.append((col, pair))
        for line in header_lines:
            out.write(line + "\n")
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(_TABLE_COLUMNS)
        for col, pair in runs:
            for u in spec.u_grid:
                cfg = SimConfig(u=float(u), k=args.K, seed=args.seed)
                exact = col.exact(col.model, u) if col.exact else None
                rep = estimate_psi(col.model, pair, cfg, exact=exact)
                writer.writerow(
                    [
                        spec.name,
                        col.label,
                        _fmt(float(u)),
                        _fmt(exact),
                        _fmt(rep.estimate),
                        _fmt(rep.std_error),
                        _fmt(rep.rse),
                        _fmt(rep.are),
                        _fmt(rep.ess),
                        _fmt(rep.max_norm_weight),
                        _fmt(rep.k),
                        _fmt(rep.seed),
                    ]
                )
    finally:
        if close:
            out.close()
    return EXIT_OK


def cmd_check(args) -> int:
    model = model_from_config(_load_json(args.model))
    lines: list[tuple[str, str]] = []
    lines.append(("model", model.label()))
    lines.append(("E[X]", _fmt(model.claim_mean)))
    lines.append(("E[W]", _fmt(model.wait_mean)))
    lines.append(("premium", _fmt(model.premium)))
    lines.append(("safety_loading", _fmt(model.safety_loading)))
    lines.append(("npc", "holds"))  # construction rejects violations

    try:
        rho = lundberg_root(model)
        lines.append(("rho", _fmt(rho) if rho is not None else "not found"))
    except MgfUnavailable:
        lines.append(("rho", "unavailable (no mgf)"))
    try:
        mp = memm_point(model)
        if mp is None:
            lines.append(("r_memm", "not found"))
        else:
            lines.append(("r_memm", _fmt(mp.r)))
            if mp.premium is not None:
                lines.append(("memm_premium", _fmt(mp.premium)))
    except MgfUnavailable:
        lines.append(("r_memm", "unavailable (no mgf)"))
    try:
        lines.append(("xi_hat", _fmt(xi_hat(model))))
    except (UnsupportedCombination, SecondMomentInfinite) as exc:
        lines.append(("xi_hat", f"unavailable ({exc})"))
    exact_fn = _exact_fn(model)
    lines.append(("exact_psi_0", _fmt(exact_fn(model, 0.0)) if exact_fn else "unavailable"))

    if args.tilt:
        pair = tilt_from_config(_load_json(args.tilt), model)
        lines.append(("tilt", pair.label()))
        if pair.variant == "hazard":
            lines.append(("r_max", _fmt(hazard_r_max(model, pair.theta))))
        try:
            report = check_admissible(pair)
            lines.append(("in_c_p", str(report.in_c_p)))
            lines.append(("lhs_c_E_W_tilted", _fmt(report.lhs)))
            lines.append(("rhs_E_X_tilted", _fmt(report.rhs)))
            lines.append(("moment_method", report.method))
        except NonFiniteMoment as exc:
            lines.append(("in_c_p", f"False (non-finite tilted moment: {exc})"))

    for key, value in lines:
        print(f"{key}: {value}")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["key", "value"])
            writer.writerows(lines)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ruinlab",
        description="Importance-sampling estimation of ruin probabilities "
        "in Sparre Andersen risk models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="estimate psi(u) over a reserve grid")
    est.add_argument("--model", required=True, help="model config (JSON)")
    est.add_argument("--tilt", required=True, help="tilt config (JSON)")
    est.add_argument("--u", required=True, help="comma-separated ascending reserves")
    est.add_argument("--K", type=int, required=True, help="replications per reserve")
    est.add_argument("--seed", type=int, required=True, help="master seed")
    est.add_argument("--horizon", type=float, default=None, help="finite time horizon")
    est.add_argument("--threshold", type=float, default=None, help="solvency threshold b")
    est.add_argument(
        "--max-steps", type=int, default=10**8, help="per-replication step cap"
    )
    est.add_argument("--out", default=None, help="CSV output path (default stdout)")
    est.add_argument("--exact", action="store_true", help="add ARE from the closed form")
    est.add_argument(
        "--force",
        action="store_true",
        help="run a non-ruin-inducing tilt anyway (finite-time mode only)",
    )
    est.set_defaults(fn=cmd_estimate)

    tab = sub.add_parser("table", help="run a named benchmark configuration")
    tab.add_argument("name", choices=sorted(TABLES), help="benchmark name")
    tab.add_argument("--K", type=int, required=True)
    tab.add_argument("--seed", type=int, required=True)
    tab.add_argument("--out", default=None, help="CSV output path (default stdout)")
    tab.set_defaults(fn=cmd_table)

    chk = sub.add_parser("check", help="print analytic diagnostics for a model")
    chk.add_argument("--model", required=True, help="model config (JSON)")
    chk.add_argument("--tilt", default=None, help="optional tilt config (JSON)")
    chk.add_argument("--out", default=None, help="optional CSV output path")
    chk.set_defaults(fn=cmd_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StepCapExceeded as exc:
        print(f"step cap exceeded: {exc}", file=sys.stderr)
        return EXIT_STEP_CAP
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
