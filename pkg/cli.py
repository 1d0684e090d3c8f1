#!/usr/bin/env python3
"""
Command Line Interface
simulate / sweep / oracle-check / figure 子命令

Exit codes: 0 success, 2 configuration, 3 numerical domain, 4 oracle failure.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from config.settings import OutputFormat, settings
from core.exceptions import ConfigurationError, OscillatorError, exit_code_for
from core.logger import logger
from runner.checks import ensure_passed, run_oracle_suite
from runner.output import render_frame, write_frame, write_metadata
from runner.presets import PRESETS, run_figure
from runner.scenario import SWEEP_VARIABLES, load_scenario, parse_scenario, run_scenario, run_sweep

def _parse_values(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise ConfigurationError(f"--values must be comma-separated numbers, got '{text}'", field="values")

def _emit(frame, args, metadata):
    fmt = args.format
    out = args.out
    if out is None:
        sys.stdout.write(render_frame(frame, fmt or settings.output.format, metadata))
        return
    write_frame(frame, out, fmt, metadata)

def _with_overrides(cfg, args):
    changes = {}
    if args.samples is not None:
        changes["samples"] = args.samples
    if args.t_end is not None:
        changes["t_end"] = args.t_end
    if not changes:
        return cfg
    return parse_scenario({**cfg.model_dump(exclude_unset=True), **changes})

def _scenario_format(args, cfg):
    # --format, then the scenario's own format key, then suffix / OUTPUT_FORMAT
    if args.format is None and "format" in cfg.model_fields_set:
        args.format = cfg.format.value

def cmd_simulate(args) -> int:
    cfg = _with_overrides(load_scenario(args.config), args)
    _scenario_format(args, cfg)
    result = run_scenario(cfg)
    if args.out is None and cfg.output:
        args.out = cfg.output
    _emit(result.frame, args, result.metadata)
    if result.truncated_reason:
        logger.warning(f"Output truncated: {result.truncated_reason}")
    return 0

def cmd_sweep(args) -> int:
    cfg = _with_overrides(load_scenario(args.config), args)
    _scenario_format(args, cfg)
    sweep = run_sweep(cfg, args.var, _parse_values(args.values))
    _emit(sweep.frame, args, sweep.metadata)
    return 0

def cmd_oracle_check(args) -> int:
    presets = list(PRESETS) if args.preset == "all" else [args.preset]
    report = run_oracle_suite(presets, points=args.points)
    _emit(report.to_frame(), args, {**report.metadata, "summary": report.summary()})
    ensure_passed(report)
    return 0

def cmd_figure(args) -> int:
    result = run_figure(args.name, samples=args.samples, t_end=args.t_end)
    directory = Path(args.out or settings.output.directory)
    fmt = OutputFormat(args.format or settings.output.format)
    for key, sweep in result.panels.items():
        write_frame(sweep.frame, directory / f"{key}.{fmt.value}", fmt, sweep.metadata)
    write_metadata(result.metadata, directory / f"{args.name}.meta.json")
    if result.crossing is not None or result.preset.published_crossing is not None:
        print(f"{args.name}: Omega crossing computed={result.crossing} "
              f"published={result.preset.published_crossing}")
    return 0

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oscillators",
                                     description="Entanglement and uncertainty dynamics of coupled oscillators")
    sub = parser.add_subparsers(dest="command", required=True)

    def output_flags(p, out_help="output file (stdout when omitted)"):
        p.add_argument("--out", default=None, help=out_help)
        p.add_argument("--format", choices=[f.value for f in OutputFormat], default=None)

    def grid_flags(p):
        p.add_argument("--samples", type=int, default=None, help="number of time samples")
        p.add_argument("--t-end", dest="t_end", type=float, default=None, help="final time")

    p = sub.add_parser("simulate", help="run one scenario")
    p.add_argument("config", help="scenario file (.json or key = value)")
    output_flags(p)
    grid_flags(p)
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("sweep", help="run a scenario over several values of one variable")
    p.add_argument("config")
    p.add_argument("--var", required=True, choices=SWEEP_VARIABLES)
    p.add_argument("--values", required=True, help="comma-separated, e.g. 0.6,0.9,1.1")
    output_flags(p)
    grid_flags(p)
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("oracle-check", help="compare closed forms against grid numerics")
    p.add_argument("--preset", default="all", choices=["all", *PRESETS])
    p.add_argument("--points", type=int, default=None, help="grid points per axis (odd)")
    output_flags(p)
    p.set_defaults(handler=cmd_oracle_check)

    p = sub.add_parser("figure", help="emit the data tables of a preset")
    p.add_argument("name", choices=list(PRESETS))
    output_flags(p, out_help="output directory")
    grid_flags(p)
    p.set_defaults(handler=cmd_figure)
    return parser

def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except OscillatorError as e:
        print(f"error: {e.message}", file=sys.stderr)
        return exit_code_for(e)

if __name__ == "__main__":
    sys.exit(main())
