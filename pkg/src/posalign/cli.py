"""Command-line front end: ``posalign --ref REF.trn --hyp HYP.trn [options]``."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from . import __version__
from .core import CostConfig, PosalignError
from .pipeline import OUTPUT_FORMATS, ConfigError, RunConfig, run
from .pos import WEIGHT_PRESETS, dumps_weights

logger = logging.getLogger("posalign")

EXIT_OK = 0
EXIT_ERRORS = 1
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="posalign",
        description="Align ASR hypotheses to references, score WER/CER/SER and attribute errors to PoS tags.",
    )
    p.add_argument("--ref", required=True, help="reference transcripts (trn)")
    p.add_argument("--hyp", required=True, help="hypothesis transcripts (trn)")
    p.add_argument("--ref-tags", help="PoS tags for the reference (TSV or CoNLL-U)")
    p.add_argument("--hyp-tags", help="PoS tags for the hypothesis, needed to attribute insertions")
    p.add_argument("--pos", action="store_true", help="require PoS analysis (fails without --ref-tags)")
    p.add_argument(
        "--costs",
        default="1,1,1",
        metavar="S,I,D",
        help="substitution, insertion and deletion costs as positive rationals (default: 1,1,1)",
    )
    p.add_argument("--delta", type=int, default=1, metavar="N", help="spaces between columns (default: 1)")
    p.add_argument("--no-merge", action="store_true", help="keep adjacent deletion/insertion pairs unmerged")
    p.add_argument("--strip-punct", action="store_true", help="remove Unicode punctuation before alignment")
    p.add_argument("--lowercase", action="store_true", help="compare words case-insensitively")
    p.add_argument("--repair-sclite", action="store_true", help="drop all-asterisk sclite placeholders")
    p.add_argument("--plain", action="store_true", help="inputs are one utterance per line without ids")
    p.add_argument(
        "--weights",
        metavar="TABLE",
        help=f"tag weight table (JSON path or preset: {', '.join(WEIGHT_PRESETS)})",
    )
    p.add_argument("--weights-out", metavar="PATH", help="also write the token-weight file here")
    p.add_argument("--format", choices=OUTPUT_FORMATS, default="pretty", dest="output_format")
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    try:
        costs = CostConfig.parse(args.costs)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"invalid --costs {args.costs!r}: {exc}") from exc
    if args.weights_out and not args.weights:
        raise ConfigError("--weights-out requires --weights")
    return RunConfig(
        ref_path=args.ref,
        hyp_path=args.hyp,
        ref_tags_path=args.ref_tags,
        hyp_tags_path=args.hyp_tags,
        costs=costs,
        delta=args.delta,
        merge=not args.no_merge,
        strip_punct=args.strip_punct,
        lowercase=args.lowercase,
        repair_sclite=args.repair_sclite,
        plain=args.plain,
        pos=args.pos,
        weights=args.weights,
        output_format=args.output_format,
    )


def _write(path: Optional[str], text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = config_from_args(args)
        config.validate()
    except ConfigError as exc:
        logger.error("%s", exc)
        return EXIT_CONFIG
    try:
        report = run(config)
    except ConfigError as exc:
        logger.error("%s", exc)
        return EXIT_CONFIG
    except (PosalignError, ValueError, OSError) as exc:
        logger.error("%s", exc)
        return EXIT_ERRORS
    _write(args.out, report.format(config.output_format))
    if args.weights_out and report.weights is not None:
        _write(args.weights_out, dumps_weights(report.weights))
    for err in report.errors:
        logger.error("[%s] %s: %s", err["utterance"], err["stage"], err["message"])
    return report.exit_status


if __name__ == "__main__":
    sys.exit(main())
