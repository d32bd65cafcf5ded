"""Command-line entry point: ``lcu-taylor <subcommand> [options]``.

Exit codes: 0 on success, 2 for configuration errors, 3 for guard violations.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .circuit import GuardError, export_qasm, lower_u2x2
from .experiments import ConfigError, RunConfig, default_config, run_experiment, write_csv
from .models import ModelError
from .pauli import read_pauli_sum
from .synth import SynthesisError, synth_lcu, synth_oaa

EXIT_OK, EXIT_CONFIG, EXIT_GUARD = 0, 2, 3

_SUBCOMMANDS = {
    "jc-transition": "jc_transition",
    "rh-overlap": "rh_overlap",
    "resources": "resources",
    "scaling": "scaling",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lcu-taylor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _SUBCOMMANDS:
        p = sub.add_parser(name, help=f"run the {name} experiment and write a CSV")
        p.add_argument("--config", type=Path, help="JSON run configuration (defaults if omitted)")
        p.add_argument("--out", type=Path, help="CSV output path")
        p.add_argument("--seed", type=int, help="sampling seed")
        p.add_argument("--shots", type=int, help="shots per point (0 = exact probabilities)")
        p.add_argument("--oaa", type=int, help="oblivious amplitude amplification rounds")
        p.add_argument("--no-reduction", action="store_true", help="skip merging of parallel terms")
    p = sub.add_parser("synthesize", help="compile a Pauli-sum file into an LCU circuit (OpenQASM 2)")
    p.add_argument("operator", type=Path, help="Pauli-sum text file")
    p.add_argument("--out", type=Path, help="QASM output path (stdout if omitted)")
    p.add_argument("--oaa", type=int, default=0, help="amplification rounds")
    p.add_argument("--config", type=Path, help="unused; accepted for symmetry")
    p.add_argument("--seed", type=int, help="unused; accepted for symmetry")
    return parser


def _resolve(args) -> RunConfig:
    experiment = _SUBCOMMANDS[args.command]
    cfg = RunConfig.from_json(args.config) if args.config else default_config(experiment)
    if cfg.experiment != experiment:
        raise ConfigError(f"config is for {cfg.experiment}, not {experiment}")
    if args.seed is not None:
        cfg.seed = args.seed
    if args.shots is not None:
        cfg.shots = args.shots
    if args.oaa is not None:
        cfg.use_oaa = args.oaa
    if args.no_reduction:
        cfg.use_reduction = False
    if args.out is not None:
        cfg.output_path = str(args.out)
    cfg.__post_init__()
    return cfg


def _synthesize(args) -> int:
    op = read_pauli_sum(args.operator)
    circ = synth_oaa(op, args.oaa) if args.oaa else synth_lcu(op)
    text = export_qasm(lower_u2x2(circ))
    if args.out:
        args.out.write_text(text)
        print(f"wrote {args.out} ({circ.two_qubit_count()} cx)", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "synthesize":
            return _synthesize(args)
        cfg = _resolve(args)
        rows = run_experiment(cfg)
        out = Path(cfg.output_path or f"{cfg.experiment}.csv")
        write_csv(rows, out, cfg)
        print(f"wrote {out} ({len(rows)} rows)", file=sys.stderr)
        return EXIT_OK
    except (ConfigError, ModelError, SynthesisError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GuardError as exc:
        print(f"guard violation: {exc}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
