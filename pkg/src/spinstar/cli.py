"""Command-line interface: ``spinstar {sweep,ensemble,limits,verify}``."""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import capacities as cap
from .config import FORMATS, RunConfig, load_config
from .ensembles import (
    EnsembleConfig,
    ensemble_average,
    equal_coupling_coherence,
    low_temperature_saturation_check,
    recurrence_period,
    short_time_flatness_check,
)
from .errors import ConfigError, ResourceError, SpinStarError
from .model import coherence_factor
from .output import open_output, render_csv, render_json
from .verify import run_verify

BASE_COLUMNS = ["t", "ratio_abs", "Q", "C_E", "Q_E", "C"]


def columns_for(thetas) -> list[str]:
    return BASE_COLUMNS + [f"C_E_lim@{th:.12g}" for th in thetas]


def sweep_rows(cfg: RunConfig) -> list[dict]:
    model = cfg.model()
    return [cap.capacity_point(model, float(t), cfg.theta_grid).as_row() for t in cfg.time.values()]


def ensemble_rows(cfg: RunConfig) -> list[dict]:
    if cfg.bath.kind != "random":
        raise ConfigError("the ensemble command needs a bath of type 'random'")
    ecfg = EnsembleConfig(
        n_bath=cfg.bath.n,
        n_samples=cfg.bath.samples,
        seed=cfg.bath.seed,
        beta=cfg.beta,
        alpha=cfg.alpha,
        time_grid=tuple(cfg.time.values()),
        omega0=cfg.omega0,
    )
    res = ensemble_average(ecfg, workers=cfg.workers, thetas=cfg.theta_grid)
    cols = columns_for(cfg.theta_grid)
    rows = []
    for i, t in enumerate(res.time_grid):
        row = {
            "t": float(t),
            "ratio_abs": float(res.mean_ratio[i]),
            "Q": float(res.mean_q[i]),
            "C_E": float(res.mean_ce[i]),
            "Q_E": float(res.mean_qe[i]),
            "C": cap.classical_capacity(),
        }
        for th, col in zip(cfg.theta_grid, cols[len(BASE_COLUMNS):]):
            row[col] = float(res.mean_ce_lim[float(th)][i])
        rows.append(row)
    return rows


def limit_diagnostics(cfg: RunConfig) -> dict:
    """Period, temperature-limit and short-time diagnostics for the configured bath."""
    model = cfg.model()
    alpha = cfg.alpha
    eps = [1e-3 / alpha, 2e-3 / alpha, 4e-3 / alpha]
    deficits = short_time_flatness_check(model, eps)
    diag: dict = {
        "n_bath": model.n_bath,
        "short_time_deficits": [{"t": e, "deficit": d} for e, d in deficits],
        "short_time_ratio": deficits[0][1] / deficits[1][1] if deficits[1][1] > 0 else None,
    }
    if cfg.bath.kind != "equal":
        diag["period"] = None
        return diag

    n, g, om = cfg.bath.n, cfg.bath.g, cfg.bath.omega
    if g == 0:
        diag["period"] = None
        return diag
    period = recurrence_period(g, alpha)
    grid = np.linspace(0.0, period, 201)
    q_first = [cap.quantum_capacity(model, t) for t in grid]
    q_shift = [cap.quantum_capacity(model, t + period) for t in grid]
    closed_err = max(
        abs(equal_coupling_coherence(n, g, om, alpha, cfg.beta, t).ratio_abs - coherence_factor(model, t).ratio_abs)
        for t in grid
    )
    zero_t = math.pi / (4.0 * alpha * abs(g))
    diag.update(
        {
            "period": period,
            "q_at_period": cap.quantum_capacity(model, period),
            "min_q_over_period": min(q_first),
            "periodicity_error": max(abs(a - b) for a, b in zip(q_first, q_shift)),
            "closed_form_error": closed_err,
            "high_temperature_q_at_quarter_period": cap.quantum_capacity_from_ratio(
                equal_coupling_coherence(n, g, om, alpha, 0.0, zero_t).ratio_abs
            ),
            "low_temperature_min_q_beta50": low_temperature_saturation_check(n, g, om, alpha, 50.0, grid),
        }
    )
    return diag


def _write_table(cfg: RunConfig, rows: list[dict], **extra) -> None:
    cols = columns_for(cfg.theta_grid)
    text = render_json(cols, rows, **extra) if cfg.output_format == "json" else render_csv(cols, rows)
    with open_output(cfg.output_path) as fh:
        fh.write(text)


def _load(args) -> RunConfig:
    return load_config(
        args.config,
        {"seed": args.seed, "format": args.format, "output": args.output, "workers": args.workers},
    )


def cmd_sweep(args) -> int:
    cfg = _load(args)
    _write_table(cfg, sweep_rows(cfg))
    return 0


def cmd_ensemble(args) -> int:
    cfg = _load(args)
    _write_table(cfg, ensemble_rows(cfg), seed=cfg.bath.seed, samples=cfg.bath.samples)
    return 0


def cmd_limits(args) -> int:
    cfg = _load(args)
    rows = sweep_rows(cfg)
    diag = limit_diagnostics(cfg)
    if cfg.output_format == "json":
        _write_table(cfg, rows, diagnostics=diag)
    else:
        _write_table(cfg, rows)
        stream = sys.stderr if cfg.output_path in (None, "", "-") else sys.stdout
        stream.write(json.dumps(diag, indent=2) + "\n")
    return 0


def cmd_verify(args) -> int:
    results = run_verify(args.max_n, seed=args.seed or 0)
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} check families passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinstar", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, help_text in [
        ("sweep", cmd_sweep, "capacities of one bath over a time grid"),
        ("ensemble", cmd_ensemble, "capacities averaged over random baths"),
        ("limits", cmd_limits, "sweep plus period and limit diagnostics"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--output", "-o", help="output path ('-' for stdout)")
        p.add_argument("--format", choices=FORMATS)
        p.add_argument("--seed", type=int, help="override the random-bath seed")
        p.add_argument("--workers", type=int, help="parallel workers for ensembles")
        p.set_defaults(func=fn)

    p = sub.add_parser("verify", help="run the brute-force oracle suite")
    p.add_argument("--max-n", type=int, default=8, help="largest bath to enumerate (<= 20)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ResourceError as exc:
        print(f"spinstar: resource limit: {exc}", file=sys.stderr)
        return 2
    except (SpinStarError, ValueError) as exc:
        print(f"spinstar: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"spinstar: I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
