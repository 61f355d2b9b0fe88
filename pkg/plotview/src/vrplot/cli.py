"""Command-line entry point: vrplot --in DIR [--figs fig2,fig5,...] --out DIR"""

import argparse
import sys

from .figures import FIGURES, RenderError, render_all


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="vrplot",
        description="Render simulator scenario output into the reference "
                    "figure layouts (PNG and SVG).")
    p.add_argument("--in", dest="in_dir", required=True, metavar="DIR",
                   help="scenario output root (contains <scenario>/ dirs)")
    p.add_argument("--figs", default=",".join(FIGURES), metavar="LIST",
                   help=f"comma-separated subset of {','.join(FIGURES)}")
    p.add_argument("--out", dest="out_dir", required=True, metavar="DIR",
                   help="directory for the image files")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    names = [n.strip() for n in args.figs.split(",") if n.strip()]
    bad = [n for n in names if n not in FIGURES]
    if bad:
        print(f"error: unknown figures {bad}; choose from {FIGURES}",
              file=sys.stderr)
        return 1
    try:
        results = render_all(names, args.in_dir, args.out_dir)
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for r in results:
        print(f"{r.name}: " + ", ".join(r.paths))
    return 0


if __name__ == "__main__":
    sys.exit(main())
