"""CLI for sentence-vector extraction.

Exit codes: 0 success, 1 usage error, 2 data/model error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .extract import DEFAULT_MODEL, ExtractOptions, extract


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> "None":
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sentembed", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    p = sub.add_parser("extract", help="embed an id<TAB>text corpus into an EMB1 file")
    p.add_argument("--in", dest="corpus", required=True, help="input corpus TSV")
    p.add_argument("--model", default=DEFAULT_MODEL, help="pretrained encoder name or path")
    p.add_argument("--out", required=True, help="output EMB1 file")
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--exclude-special", action="store_true",
                   help="pool over content tokens only, not sequence-boundary tokens")
    p.add_argument("--max-len", type=int, default=None,
                   help="truncation length (default: the encoder's maximum)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"sentembed: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    options = ExtractOptions(
        model_id=args.model,
        batch_size=args.batch_size,
        exclude_special=args.exclude_special,
        max_len=args.max_len,
    )
    try:
        count = extract(args.corpus, args.out, options)
    except (ValueError, OSError) as exc:
        print(f"sentembed: error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {count} vectors to {args.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
