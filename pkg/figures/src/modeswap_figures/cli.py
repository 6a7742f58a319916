"""Command-line interface: render protocol and sweep figures from CSVs.

Exit codes: 0 success, 2 bad input file (missing/empty/malformed, with the
offending columns named in the diagnostic).
"""

from __future__ import annotations

import argparse
import sys

from .data import CsvFormatError
from .plots import plot_protocol, plot_sweep

EXIT_BAD_INPUT = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modeswap-figures",
        description="Render figures from modeswap CSV output",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_proto = sub.add_parser("plot-protocol", help="three-panel protocol figure")
    p_proto.add_argument("--in", dest="csv_in", required=True, help="run CSV")
    p_proto.add_argument("--out", required=True, help="output PNG path")
    p_proto.add_argument("--title")

    p_sweep = sub.add_parser("plot-sweep", help="spin-decay sweep figure")
    p_sweep.add_argument("--summary", required=True, help="sweep summary CSV")
    p_sweep.add_argument(
        "--runs", nargs="*", default=[], help="per-rate run CSVs (optional)"
    )
    p_sweep.add_argument("--out", required=True, help="output PNG path")
    p_sweep.add_argument("--title")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "plot-protocol":
            plot_protocol(args.csv_in, args.out, title=args.title)
        else:
            plot_sweep(args.summary, args.out, run_paths=args.runs, title=args.title)
    except CsvFormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
