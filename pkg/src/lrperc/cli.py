"""Command-line front end.

    lrperc <kind> --config FILE [--threads N] [--out DIR]
    lrperc plot --csv FILE --kind KIND [--out DIR]

Exit codes: 0 success, 2 invalid configuration, 3 resource cap exceeded,
4 I/O failure.  LRPERC_SEED in the environment overrides the config's
master seed.
"""

from __future__ import annotations

import argparse
import sys

from .experiments import KINDS, ConfigError, parse_config, run
from .multiscale import ResourceCapError


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="lrperc", description=__doc__)
    parser.add_argument("kind", choices=KINDS + ("plot",))
    parser.add_argument("--config", help="experiment config file")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--csv", help="CSV input (plot mode)")
    parser.add_argument("--plot-kind", dest="plot_kind",
                        help="schema kind of the CSV (plot mode)")
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return 2 if err.code not in (0, None) else 0

    try:
        if args.kind == "plot":
            from .plots import PlotError, plot

            if not args.csv or not args.plot_kind:
                print("plot mode needs --csv and --plot-kind", file=sys.stderr)
                return 2
            try:
                out = args.out or "."
                from pathlib import Path

                svg = Path(out) / (Path(args.csv).stem + ".svg")
                plot(args.csv, args.plot_kind, svg)
                print(svg)
                return 0
            except PlotError as err:
                print(f"plot error: {err}", file=sys.stderr)
                return 2
        if not args.config:
            print("missing --config", file=sys.stderr)
            return 2
        cfg = parse_config(args.config, kind=args.kind)
        paths = run(cfg, threads=args.threads, out_dir=args.out)
        for p in paths:
            print(p)
        return 0
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except ResourceCapError as err:
        print(f"resource cap: {err}", file=sys.stderr)
        return 3
    except OSError as err:
        print(f"I/O error: {err}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
