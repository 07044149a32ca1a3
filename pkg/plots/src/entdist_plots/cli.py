"""Command-line figure renderer: one invocation per figure."""

from __future__ import annotations

import argparse
import sys

from .boundaries import DEPOL_EB_THRESHOLD
from .figures import FigureKind, FigureSpec, render

EXIT_OK = 0
EXIT_USAGE = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="entdist-plot", description=__doc__)
    parser.add_argument("--kind", required=True, choices=[k.value for k in FigureKind])
    parser.add_argument("--in", dest="input_csv", required=True, help="input CSV path")
    parser.add_argument("--x", required=True, help="x-axis column")
    parser.add_argument("--y", required=True, help="y-axis column")
    parser.add_argument("--z", default=None, help="value column (heatmap/region)")
    parser.add_argument("--group", default=None, help="group column (lines)")
    parser.add_argument("--overlay", default="none", choices=("none", "depol-pf", "gad"),
                        help="analytic boundary overlay")
    parser.add_argument("--mask-y-above", type=float, default=DEPOL_EB_THRESHOLD,
                        help="heatmap: mask rows with y at or above this value")
    parser.add_argument("--no-mask", action="store_true",
                        help="heatmap: disable the y-band mask")
    parser.add_argument("--title", default=None)
    parser.add_argument("--out", required=True, help="output image path")
    return parser


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    spec = FigureSpec(
        kind=FigureKind(args.kind),
        input_csv=args.input_csv,
        x=args.x,
        y=args.y,
        z=args.z,
        group=args.group,
        overlay=args.overlay,
        mask_y_above=None if args.no_mask else args.mask_y_above,
        title=args.title,
        output=args.out,
    )
    try:
        render(spec)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def main():
    raise SystemExit(run())


if __name__ == "__main__":
    main()
