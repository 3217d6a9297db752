"""plotview command line: sweep CSVs in, one figure out."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .frame import SchemaError
from .plot import STYLES, plot_lifetime


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotview",
        description="Render storage-lifetime sweep CSVs into log-log figures",
    )
    parser.add_argument("csv", nargs="+", help="sweep CSV file(s); multiple overlay")
    parser.add_argument("--style", choices=STYLES, required=True)
    parser.add_argument("--out", required=True, help="output image path (.png/.svg/.pdf)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0,) else 0
    try:
        frames = plot_lifetime(args.csv, args.out, args.style)
    except (SchemaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    total = sum(len(f.rows) for f in frames)
    print(f"wrote {args.out}: {len(frames)} series, {total} points")
    return 0


if __name__ == "__main__":
    sys.exit(main())
