"""Command-line front end.

Subcommands: ``rates`` (analytic decay rates), ``pipeline`` (synthetic
experiment and fit), ``classify`` (verdict via exit code) and ``tomo-demo``.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import export
from .config import FORMATS, MODES, ConfigError, ExperimentConfig, build_config, load_config_file
from .dilation import circuit_for
from .divisibility import (Verdict, classify, decay_rates, rate_trajectory, sign_change_time,
                           uniform_grid)
from .estimation import classify_experiment, estimate_p, experimental_rates, fit_c
from .qmath import KET0, partial_trace_ancilla
from .simulator import (NoiseModel, add_noise, pauli_expectations, run_dilation_full,
                        synthetic_experiment, tomo_reconstruct)

log = logging.getLogger("paulimix")

EXIT_MARKOVIAN = 0
EXIT_NON_MARKOVIAN = 10
EXIT_ERROR = 1
EXIT_USAGE = 2


def _weights_arg(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"weights must be comma-separated numbers, got {text!r}")
    if len(vals) != 3:
        raise argparse.ArgumentTypeError(f"need exactly three weights, got {len(vals)}")
    return vals


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--preset", help="fig2 .. fig6")
    p.add_argument("--weights", type=_weights_arg, metavar="X1,X2,X3")
    p.add_argument("--two-mix-a", type=float, dest="two_mix_a", metavar="A")
    p.add_argument("--c", type=float)
    p.add_argument("--t-start", type=float)
    p.add_argument("--t-end", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--tol", type=float)


def _add_noise(p: argparse.ArgumentParser) -> None:
    p.add_argument("--sigma", type=float)
    p.add_argument("--seed", type=int)


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--out", help="output directory (default: $PAULIMIX_OUTPUT_DIR or ./out)")
    p.add_argument("--format", choices=FORMATS, dest="fmt")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paulimix", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rates", help="analytic decay rates and verdict")
    _add_common(p)
    _add_output(p)

    p = sub.add_parser("pipeline", help="synthetic experiment, fit and fitted rates")
    _add_common(p)
    _add_noise(p)
    _add_output(p)
    p.add_argument("--sample-t-start", type=float)
    p.add_argument("--sample-t-end", type=float)
    p.add_argument("--sample-n", type=int)

    p = sub.add_parser("classify", help="print verdict; exit 0 Markovian, 10 NonMarkovian")
    _add_common(p)

    p = sub.add_parser("tomo-demo", help="tomography of the dilated state at one time")
    _add_common(p)
    _add_noise(p)
    p.add_argument("--time", type=float, default=0.1)
    return parser


def _merge(args: argparse.Namespace) -> dict:
    values = load_config_file(args.config) if args.config else {}
    for key in ("preset", "weights", "two_mix_a", "c", "tol", "sigma", "seed", "mode", "out", "fmt"):
        val = getattr(args, key, None)
        if val is not None:
            values[key] = val
    if args.weights is not None:
        values.pop("two_mix_a", None)
    if args.two_mix_a is not None:
        values.pop("weights", None)
    if args.preset is not None and args.weights is None and args.two_mix_a is None:
        values.pop("weights", None)
        values.pop("two_mix_a", None)

    grid = dict(values.get("grid", {}))
    for flag, key in (("t_start", "t_start"), ("t_end", "t_end"), ("n", "n")):
        if getattr(args, flag, None) is not None:
            grid[key] = getattr(args, flag)
    if grid:
        values["grid"] = grid
    samples = dict(values.get("samples", {}))
    for flag, key in (("sample_t_start", "t_start"), ("sample_t_end", "t_end"), ("sample_n", "n")):
        if getattr(args, flag, None) is not None:
            samples[key] = getattr(args, flag)
    if samples:
        values["samples"] = samples
    return values


def _grid(cfg: ExperimentConfig) -> np.ndarray:
    return uniform_grid(cfg.grid.t_start, cfg.grid.t_end, cfg.grid.n)


def cmd_rates(cfg: ExperimentConfig) -> list[Path]:
    traj = rate_trajectory(cfg.mixture(), cfg.grid.t_start, cfg.grid.t_end, cfg.grid.n)
    verdict = classify(traj, cfg.tol)
    rows = export.rate_rows(traj)
    out = Path(cfg.out)
    if cfg.fmt == "json":
        doc = {
            "kind": "rates",
            "config": cfg.to_dict(),
            "rates": export.rows_to_dicts(export.RATE_COLUMNS, rows),
            "classification": export.verdict_doc(verdict),
        }
        return [export.write_json(out / "rates.json", doc)]
    return [
        export.write_csv(out / "rates.csv", export.RATE_COLUMNS, rows),
        export.write_csv(out / "verdict.csv", export.VERDICT_COLUMNS,
                         [export.verdict_row("theory", verdict)]),
    ]


def cmd_pipeline(cfg: ExperimentConfig) -> list[Path]:
    if cfg.mode == "theory":
        raise ConfigError("mode", "pipeline needs synthetic-experiment or full-pipeline")
    m = cfg.mixture()
    samples = uniform_grid(cfg.samples.t_start, cfg.samples.t_end, cfg.samples.n)
    grid = _grid(cfg)
    points = synthetic_experiment(m, samples, NoiseModel(cfg.sigma, cfg.seed))
    estimates = [estimate_p(pt.state, m.weights, pt.t) for pt in points]
    est_rows = [(e.t, e.p_hat, e.residual, pt.full.fidelity_to_target, pt.system.fidelity_to_target)
                for e, pt in zip(estimates, points)]
    theory = rate_trajectory(m, cfg.grid.t_start, cfg.grid.t_end, cfg.grid.n)
    theory_cls = classify(theory, cfg.tol)

    fit = fitted = fitted_cls = None
    if cfg.mode == "full-pipeline":
        fit = fit_c(estimates)
        fitted = experimental_rates(fit, m.weights, grid)
        fitted_cls = classify_experiment(fitted, cfg.tol)
        log.info("fitted c = %.6g (true %.6g), rss = %.3g", fit.c_hat, cfg.c, fit.rss)

    out = Path(cfg.out)
    if cfg.fmt == "json":
        doc = {
            "kind": "pipeline",
            "config": cfg.to_dict(),
            "estimates": export.rows_to_dicts(export.ESTIMATE_COLUMNS, est_rows),
            "rates_theory": export.rows_to_dicts(export.RATE_COLUMNS, export.rate_rows(theory)),
            "classification": {"theory": export.verdict_doc(theory_cls)},
        }
        if fit is not None:
            doc["fit"] = {"c_hat": fit.c_hat, "rss": fit.rss, "n_points": fit.n_points}
            doc["rates_fitted"] = export.rows_to_dicts(export.RATE_COLUMNS,
                                                       export.rate_rows(fitted))
            doc["classification"]["fitted"] = export.verdict_doc(fitted_cls)
        return [export.write_json(out / "pipeline.json", doc)]

    verdicts = [export.verdict_row("theory", theory_cls)]
    paths = [
        export.write_csv(out / "estimates.csv", export.ESTIMATE_COLUMNS, est_rows),
        export.write_csv(out / "rates_theory.csv", export.RATE_COLUMNS, export.rate_rows(theory)),
    ]
    if fit is not None:
        verdicts.append(export.verdict_row("fitted", fitted_cls))
        paths.append(export.write_csv(out / "fit.csv", export.FIT_COLUMNS,
                                      [(fit.c_hat, fit.rss, fit.n_points)]))
        paths.append(export.write_csv(out / "rates_fitted.csv", export.RATE_COLUMNS,
                                      export.rate_rows(fitted)))
    paths.append(export.write_csv(out / "verdicts.csv", export.VERDICT_COLUMNS, verdicts))
    return paths


def cmd_classify(cfg: ExperimentConfig, stream=None) -> int:
    stream = sys.stdout if stream is None else stream
    m = cfg.mixture()
    cls = classify(rate_trajectory(m, cfg.grid.t_start, cfg.grid.t_end, cfg.grid.n), cfg.tol)
    if cls.is_markovian:
        print(Verdict.MARKOVIAN.value, file=stream)
        return EXIT_MARKOVIAN
    w = cls.witness
    line = f"{Verdict.NON_MARKOVIAN.value} axis={w.axis} t_first={w.t:.6g}"
    # refine the crossing only when the rate starts out positive
    if decay_rates(m, cfg.grid.t_start)[w.axis] > cfg.tol and w.t > cfg.grid.t_start:
        step = (cfg.grid.t_end - cfg.grid.t_start) / (cfg.grid.n - 1)
        t_cross = sign_change_time(m, w.axis, max(cfg.grid.t_start, w.t - step), w.t)
        line += f" t_cross={t_cross:.6f}"
    print(line, file=stream)
    return EXIT_NON_MARKOVIAN


def cmd_tomo_demo(cfg: ExperimentConfig, t: float, stream=None) -> None:
    stream = sys.stdout if stream is None else stream
    m = cfg.mixture()
    ideal = run_dilation_full(circuit_for(m, t), KET0)
    rec = add_noise(pauli_expectations(ideal), NoiseModel(cfg.sigma, cfg.seed))
    res = tomo_reconstruct(rec, target=ideal)
    sys_state = partial_trace_ancilla(res.state)
    est = estimate_p(sys_state, m.weights, t)
    print(f"t = {t:g}, p(t) = {m.p(t):.6f}, p_hat = {est.p_hat:.6f}", file=stream)
    print(f"three-qubit fidelity = {res.fidelity_to_target:.6f}", file=stream)
    with np.printoptions(precision=4, suppress=True):
        print("reconstructed system state:", file=stream)
        print(sys_state, file=stream)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        values = _merge(args)
        if args.command == "pipeline":
            values.setdefault("mode", "full-pipeline")
        cfg = build_config(values)
        if args.command == "rates":
            for path in cmd_rates(cfg):
                print(path)
        elif args.command == "pipeline":
            for path in cmd_pipeline(cfg):
                print(path)
        elif args.command == "classify":
            return cmd_classify(cfg)
        elif args.command == "tomo-demo":
            cmd_tomo_demo(cfg, args.time)
    except ConfigError as exc:
        print(f"paulimix: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError, ArithmeticError) as exc:
        print(f"paulimix: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())
