#!/usr/bin/env python3
# MIT License
#
# Copyright (c) 2025 floqlat developers
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.
import argparse
import sys
from typing import Optional, Sequence

import yaml

from floqlat import __version__
from floqlat.cli.commands import execute
from floqlat.cli.experiment import COMMAND_PRESETS, COMMANDS, OUTPUT_FORMATS, PRESETS, ExperimentConfig
from floqlat.cli.output import print_summary, write_outputs
from floqlat.common.globals import get_globals, init_globals
from floqlat.utils.floqlat_exception import EXIT_FAILURE, EXIT_VALIDATION, FloqlatException

DESCRIPTIONS = {
    "fourier": "Fourier components of the modulated dispersive shift",
    "rabi": "two-cavity swap: full cavity-cavity-qubit model against the bridged hopping",
    "chiral": "phonon circulation in the three-cavity loop",
    "circulator": "three-port transmission versus input detuning",
    "ab": "Aharonov-Bohm transmission through the four-cavity plaquette",
    "ladder": "flux ladder band structure",
}


def _preset_help(name: str) -> str:
    p = PRESETS[name]
    shown = ", ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}" for k, v in p.parameters.items())
    return f"preset: {shown}"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="floqlat",
                                 description="Floquet-engineered synthetic magnetism in phonon-cavity lattices")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--app-config", dest="app_config", default=None,
                    help="application YAML (logging, threads, step factor); default FLOQLAT_CONFIG_PATH")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND", required=True)

    for command, params in COMMANDS.items():
        sp = sub.add_parser(command, help=DESCRIPTIONS[command], description=DESCRIPTIONS[command])
        sp.set_defaults(preset=None)
        presets = sp.add_mutually_exclusive_group()
        for flag, preset in COMMAND_PRESETS[command].items():
            presets.add_argument(f"--{flag}", dest="preset", action="store_const", const=preset,
                                 help=_preset_help(preset))
        for p in params:
            default = "" if p.required or p.default is None else f" (default {p.default})"
            sp.add_argument(p.flag, *p.aliases, dest=p.name, default=None, metavar=p.name.upper(),
                            help=f"{p.help}{default}")
        sp.add_argument("--config", default=None, help="JSON experiment config")
        sp.add_argument("--output", choices=OUTPUT_FORMATS, default=None, help="data file format (default csv)")
        sp.add_argument("--out", default=None, help="data file path (default floqlat-COMMAND.EXT)")
    return ap


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_VALIDATION if e.code not in (0, None) else 0

    try:
        g = init_globals(args.app_config) if args.app_config else get_globals()
    except (OSError, ValueError, yaml.YAMLError) as e:
        print(f"ERROR: cannot load application config: {e}", file=sys.stderr)
        return EXIT_VALIDATION

    try:
        file_data = ExperimentConfig.load_file(args.config) if args.config else None
        flags = {p.name: getattr(args, p.name) for p in COMMANDS[args.command]}
        cfg = ExperimentConfig.resolve(args.command, preset=args.preset, file_data=file_data, flags=flags,
                                       output=args.output, out_path=args.out)
        result = execute(cfg, g.simulation)
        written = write_outputs(result, cfg, g.simulation.output_digits)
        print_summary(result, cfg, written, sys.stdout)
        return 0
    except FloqlatException as e:
        g.log.error("%s failed: %s", args.command, e)
        print(f"ERROR: {e}", file=sys.stderr)
        return e.get_exit_code()
    except OSError as e:
        g.log.error("%s failed: %s", args.command, e)
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_FAILURE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
