"""bal-ingest: file-format bridge between external ML pipelines and the engine."""

import argparse
import sys

from .convert import to_fmat
from .summarize import summarize_run


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="bal-ingest", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("to-fmat", help="convert CSV/.npy/.npz to FMAT")
    s.add_argument("input")
    s.add_argument("output")
    s.add_argument("--label-col", default=None,
                   help="CSV column (name or index) holding integer labels")

    s = sub.add_parser("summarize", help="run directory to per-cycle CSV")
    s.add_argument("run_dir")
    s.add_argument("output")

    args = parser.parse_args(argv)
    try:
        if args.command == "to-fmat":
            to_fmat(args.input, args.output, label_column=args.label_col)
        else:
            n = summarize_run(args.run_dir, args.output)
            print(f"wrote {n} cycles to {args.output}")
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
