"""Command-line entry point: ``stigpattern <subcommand> [options]``."""

import argparse
import logging
import sys
from datetime import date
from typing import List, Optional, Tuple

from stigpattern.config import load_config
from stigpattern.errors import PipelineStageError, StigPatternError

logger = logging.getLogger("stigpattern")

EXIT_FAILURE = 2


def parse_range(text: str) -> Tuple[date, date]:
    """``YYYY-MM-DD:YYYY-MM-DD`` (a single date is a one-day range)."""
    start, _, end = text.partition(":")
    try:
        first = date.fromisoformat(start.strip())
        last = date.fromisoformat(end.strip()) if end else first
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid date range {text!r}, expected FROM:TO")
    if last < first:
        raise argparse.ArgumentTypeError(f"empty date range {text!r}")
    return first, last


def _parse_date(text: str) -> date:
    try:
        return date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid date {text!r}, expected YYYY-MM-DD")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="TOML config file")
    common.add_argument("--seed", type=int, default=None, help="base seed of every random draw")
    common.add_argument("--out", type=str, default=None, help="output directory")
    common.add_argument("--log-level", type=str, default="INFO",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--input", type=str, default=None, help="TLC-style trip CSV")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--params", type=str, default=None,
                       help="saved perceptron TOML (skips training)")

    parser = argparse.ArgumentParser(prog="stigpattern",
                                     description="Stigmergic hotspot discovery and unexpected-day detection")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("hotspots", parents=[common, data], help="find hotspots from trip data")

    train = sub.add_parser("train", parents=[common], help="train the stigmergic perceptron")
    train.add_argument("--archetype", type=str, default=None, help="archetype trained from --data")
    train.add_argument("--data", type=str, default=None, help="labeled-window CSV (target,s0,...)")

    characterize = sub.add_parser("characterize", parents=[common, data, model],
                                  help="activity levels of a hotspot, day by day")
    characterize.add_argument("--hotspot", type=str, default=None, help="hotspot id, e.g. A")
    characterize.add_argument("--from", dest="day_from", type=_parse_date, default=None)
    characterize.add_argument("--to", dest="day_to", type=_parse_date, default=None)

    detect = sub.add_parser("detect", parents=[common, data, model], help="flag unexpected days")
    detect.add_argument("--hotspot", type=str, default=None)
    detect.add_argument("--train", dest="train_range", type=parse_range, default=None,
                        help="training days FROM:TO")
    detect.add_argument("--eval", dest="eval_range", type=parse_range, default=None,
                        help="evaluation days FROM:TO")

    sub.add_parser("synth", parents=[common], help="write a synthetic trip CSV with ground truth")
    sub.add_parser("run", parents=[common, data, model], help="full pipeline")
    return parser


def _day_range(args) -> Optional[Tuple[date, date]]:
    if args.day_from is None and args.day_to is None:
        return None
    return args.day_from or date.min, args.day_to or date.max


def _cmd_synth(config) -> int:
    from stigpattern.synthetic import SyntheticSpec, generate_synthetic

    try:
        spec = SyntheticSpec.from_config(config.synthetic, config.study_area)
        result = generate_synthetic(spec, config.seed, config.out_dir)
    except StigPatternError as e:
        raise PipelineStageError("synth", e) from e
    print(f"{result.rows} trips -> {result.csv_path}")
    print(f"ground truth -> {result.manifest_path}")
    return 0


def _cmd_train(system, args) -> int:
    labeled = None
    if args.data or args.archetype:
        if not (args.data and args.archetype):
            raise PipelineStageError("train", ValueError("--archetype and --data go together"))
        from loaders import LabeledWindowLoader

        try:
            labeled = {args.archetype: LabeledWindowLoader().load(args.data)}
        except StigPatternError as e:
            raise PipelineStageError("train", e) from e
    sp = system.train(labeled=labeled)
    print(f"trained {sp.size} receptive fields -> {system.out_dir / 'perceptron.toml'}")
    return 0


def run_command(args) -> int:
    from stigpattern.pipeline import StigPatternSystem

    try:
        config = load_config(args.config).with_overrides(out_dir=args.out, seed=args.seed,
                                                         input_path=getattr(args, "input", None))
    except StigPatternError as e:
        raise PipelineStageError("config", e) from e

    if args.command == "synth":
        return _cmd_synth(config)

    system = StigPatternSystem(config)
    if args.command == "train":
        return _cmd_train(system, args)

    system.ingest()
    hotspots = system.find_hotspots()
    if args.command == "hotspots":
        print(f"{len(hotspots)} hotspot(s) -> {system.out_dir / 'hotspots.csv'}")
        for h in hotspots:
            print(f"  {h.id}: {h.area} cells, intensity {h.intensity:.4g}")
        return 0

    system.train(params_file=args.params)
    if args.command == "characterize":
        levels = system.characterize(args.hotspot, _day_range(args))
        print(f"{len(levels)} day(s) characterized -> {system.out_dir / 'activity_levels.csv'}")
        return 0

    if args.command == "detect":
        system.characterize(args.hotspot)
        reports = system.detect(args.train_range, args.eval_range)
    else:
        system.characterize()
        reports = system.detect()
    system.write_manifest()
    for r in reports:
        mark = "*" if r.flagged else " "
        print(f"{mark} {r.day.isoformat()} {r.day.strftime('%a')} EI={r.ei:.4f} expected={r.expected_cluster}")
    print(f"{sum(r.flagged for r in reports)} unexpected day(s); report -> {system.out_dir / 'ei_report.csv'}")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        return run_command(args)
    except PipelineStageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
