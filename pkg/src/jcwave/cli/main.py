"""Command line entry point.

Exit status: 0 success, 2 parse error, 3 validation error, 4 numerical failure.
"""
import argparse
import dataclasses
import os
import sys

from ..errors import ConfigurationError, GridTooSmallError, JCWaveError, NumericalBlowupError
from ..propagator import PropagatorConfig
from .config import ParseError, load_scenario, parse_scenario
from .presets import get_preset, preset_names
from .runner import execute, write_failure

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3, 4


def _override_t_final(scn, t_final):
    """Shorten a scenario; snapshot times past the new end are dropped."""
    if t_final is None:
        return scn
    if not t_final > 0:
        raise ConfigurationError("--t-final must be positive")
    p = scn.propagation
    prop = PropagatorConfig(p.dt, t_final, min(p.record_stride, max(1, int(round(t_final / p.dt)))), p.scheme)
    keep = lambda ts: tuple(t for t in ts if t <= t_final + 1e-12)  # noqa: E731
    return dataclasses.replace(
        scn,
        propagation=prop,
        qfunc_times=keep(scn.qfunc_times),
        amplitude_times=keep(scn.amplitude_times),
        classical_t_final=min(scn.classical_t_final, t_final),
    )


def _execute(scn, outdir, args):
    scn = _override_t_final(scn, args.t_final)
    try:
        summary = execute(scn, outdir, workers=args.workers, dt_check=args.dt_check)
    except (NumericalBlowupError, GridTooSmallError) as exc:
        write_failure(scn, outdir, exc)
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    for key, value in summary:
        print(f"{key} = {value}")
    return EXIT_OK


def _outdir(scn, args, default):
    return args.out or scn.output_dir or default


def cmd_config(args, expected_mode):
    scn = load_scenario(args.config)
    if expected_mode == "sweep" and scn.mode != "sweep":
        raise ConfigurationError("the sweep command needs [scenario] mode = sweep")
    if expected_mode == "run" and scn.mode == "sweep":
        raise ConfigurationError("use the sweep command for sweep scenarios")
    base = os.path.splitext(os.path.basename(args.config))[0]
    return _execute(scn, _outdir(scn, args, os.path.join("output", base)), args)


def cmd_preset(args):
    try:
        parts = get_preset(args.name)
    except KeyError as exc:
        raise ConfigurationError(exc.args[0]) from None
    root = args.out or os.path.join("output", args.name)
    # validate every part before running any of them
    scenarios = [(part, parse_scenario(text, f"preset {args.name}:{part or 'main'}")) for part, text in parts.items()]
    status = EXIT_OK
    for part, scn in scenarios:
        outdir = os.path.join(root, part) if part else root
        print(f"# {args.name} {part}".rstrip() + f" -> {outdir}")
        status = max(status, _execute(scn, outdir, args))
    return status


def cmd_list(args):
    for name in preset_names():
        parts = [p for p in get_preset(name) if p]
        print(name + (f"  ({', '.join(parts)})" if parts else ""))
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="jcwave", description="Wave-packet dynamics of the Rabi and Jaynes-Cummings models.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output directory")
    common.add_argument("--workers", type=int, default=1, help="parallel workers for sweeps")
    common.add_argument("--dt-check", action="store_true", help="re-run at dt/2 and report the inversion difference")
    common.add_argument("--t-final", type=float, default=None, help="override the final time (smoke runs)")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", parents=[common], help="run a scenario file")
    p.add_argument("config")
    p = sub.add_parser("sweep", parents=[common], help="run a fidelity sweep scenario file")
    p.add_argument("config")
    p = sub.add_parser("preset", parents=[common], help="run a bundled figure preset")
    p.add_argument("name")
    sub.add_parser("list-presets", help="list bundled presets")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list-presets":
            return cmd_list(args)
        if args.workers < 1:
            raise ConfigurationError("--workers must be at least 1")
        if args.command == "preset":
            return cmd_preset(args)
        return cmd_config(args, args.command)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ConfigurationError, JCWaveError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
