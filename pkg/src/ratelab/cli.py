"""Command-line front end.

Subcommands:
  run    simulate a scenario file and emit trajectory/report/plot files
  check  analysis only (equilibrium, assumptions, stability margin)
  sweep  repeat the pipeline over a list of values for one parameter

Exit codes: 0 Converged, 10 Oscillating, 11 Saturated, 12 Undetermined;
``check`` exits 0 when certified and 13 when not; errors use 64+
(64 usage, 65 invalid config/data, 66 missing input, 70 runtime failure).
"""

import argparse
import sys
from dataclasses import replace

from .analysis import CERTIFIED, check_stability, solve_equilibrium
from .errors import (
    ConfigError,
    EquilibriumBracketError,
    IntegrationDivergedError,
    RatelabError,
)
from .scenario import (
    auto_margin_range,
    format_report,
    format_sweep_summary,
    load_scenario,
    run_scenario,
    sweep,
)

EX_USAGE = 64
EX_DATAERR = 65
EX_NOINPUT = 66
EX_SOFTWARE = 70
CHECK_NOT_CERTIFIED = 13


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error[usage]: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ratelab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="simulate a scenario and write outputs")
    run_p.add_argument("scenario", help="path to a .scenario file")
    run_p.add_argument("--out", default=None, help="output directory (default out/<name>)")
    run_p.add_argument("--step", type=float, default=None, help="override the step")
    run_p.add_argument("--t-end", type=float, default=None, help="override the horizon")

    check_p = sub.add_parser("check", help="analysis only, no simulation")
    check_p.add_argument("scenario", help="path to a .scenario file")
    check_p.add_argument("--out", default=None, help="also write report.txt here")

    sweep_p = sub.add_parser("sweep", help="run the pipeline over parameter values")
    sweep_p.add_argument("scenario", help="path to a .scenario file")
    sweep_p.add_argument("--param", required=True,
                         help="one of a, b, kappa, tau, T, intercept, slope")
    sweep_p.add_argument("--values", required=True,
                         help="comma- or space-separated list of values")
    sweep_p.add_argument("--out", default=None, help="output directory (default out/sweep-<param>)")
    sweep_p.add_argument("--jobs", type=int, default=1, help="parallel workers")
    sweep_p.add_argument("--step", type=float, default=None, help="override the step")
    sweep_p.add_argument("--t-end", type=float, default=None, help="override the horizon")

    return parser


def _load_with_overrides(path, step=None, t_end=None):
    from .scenario import snap_step

    cfg = load_scenario(path)
    if t_end is not None:
        if not t_end > 0:
            raise ConfigError(f"--t-end must be positive, got {t_end}")
        cfg = replace(cfg, t_end=t_end)
    if step is not None:
        if not step > 0:
            raise ConfigError(f"--step must be positive, got {step}")
        snapped = snap_step(step, cfg.params.tau, cfg.params.T_delay)
        cfg = replace(cfg, step=snapped, step_requested=step)
    return cfg


def _cmd_run(args) -> int:
    cfg = _load_with_overrides(args.scenario, args.step, args.t_end)
    res = run_scenario(cfg, out_dir=args.out)
    sys.stdout.write(format_report(res))
    print(f"outputs: {res.paths['trajectory']}")
    return res.exit_code


def _cmd_check(args) -> int:
    cfg = _load_with_overrides(args.scenario)
    eq = solve_equilibrium(cfg.params, cfg.law)
    x_range = cfg.margin_range or auto_margin_range(cfg, None, eq.x_star)
    report = check_stability(cfg.params, cfg.law, x_range, cfg.grid_n)
    text = format_report(report, cfg)
    sys.stdout.write(text)
    if args.out is not None:
        from pathlib import Path

        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "report.txt", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return 0 if report.verdict == CERTIFIED else CHECK_NOT_CERTIFIED


def _cmd_sweep(args) -> int:
    cfg = _load_with_overrides(args.scenario, args.step, args.t_end)
    values = [float(v) for v in args.values.replace(",", " ").split()]
    out = args.out or f"out/sweep-{args.param}"
    rep = sweep(cfg, args.param, values, out_dir=out, n_jobs=args.jobs)
    sys.stdout.write(format_sweep_summary(rep))
    for r in rep.rows:
        if r.status == "ok":
            print(
                f"  {r.param}={r.value:g}: verdict={r.verdict} "
                f"classification={r.classification} min_margin={r.min_margin:.4g}"
            )
        else:
            print(f"  {r.param}={r.value:g}: error: {r.message}")
    print(f"outputs: {rep.paths.get('sweep_csv', '(not written)')}")
    return 0 if all(r.status == "ok" for r in rep.rows) else EX_SOFTWARE


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "check":
            return _cmd_check(args)
        return _cmd_sweep(args)
    except FileNotFoundError as exc:
        print(f"error[input]: {exc}", file=sys.stderr)
        return EX_NOINPUT
    except (ConfigError, EquilibriumBracketError) as exc:
        print(f"error[config]: {exc}", file=sys.stderr)
        return EX_DATAERR
    except IntegrationDivergedError as exc:
        print(f"error[diverged]: {exc}", file=sys.stderr)
        return EX_SOFTWARE
    except RatelabError as exc:
        print(f"error[runtime]: {exc}", file=sys.stderr)
        return EX_SOFTWARE


if __name__ == "__main__":
    raise SystemExit(main())
