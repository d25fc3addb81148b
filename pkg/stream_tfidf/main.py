#!/usr/bin/env python3
"""
Streaming TF-IDF Benchmark - Main Entry Point
Runs the incremental engine against the batch baseline over a record stream
"""

import argparse
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from . import __version__
from .bench_harness import run_benchmark
from .config_manager import BenchConfig, ConfigManager

logger = logging.getLogger(__name__)


def configure_logging(output_dir: str, verbose: bool = False) -> None:
    """Log to stdout and to <output_dir>/bench.log"""
    log_dir = Path(output_dir)
    log_dir.mkdir(parents=True, exist_ok=True)

    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.StreamHandler(sys.stdout),
            logging.FileHandler(log_dir / 'bench.log')
        ],
        force=True
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Streaming TF-IDF benchmark - incremental cosine similarity vs batch recomputation"
    )

    parser.add_argument('--config', type=str,
                        help='JSON benchmark configuration (flags override its values)')
    parser.add_argument('--input', dest='input_path', type=str,
                        help='Line-delimited JSON corpus (id, content, published)')
    parser.add_argument('--mode', choices=['ods', 'sds'],
                        help='ods: one document per snapshot; sds: records keep their ids (default: ods)')
    parser.add_argument('--warmup-days', dest='warmup_days', type=int,
                        help='Days aggregated into the first snapshot (default: 1)')
    parser.add_argument('--stoplist', dest='stoplist_path', type=str,
                        help='Stoplist file (default: bundled Snowball English)')
    parser.add_argument('--min-token-length', dest='min_token_length', type=int,
                        help='Shortest kept token (default: 2)')
    parser.add_argument('--out', dest='output_dir', type=str,
                        help='Output directory (default: results)')
    parser.add_argument('--reps', dest='repetitions', type=int,
                        help='Repetitions; tables report the median (default: 1)')
    parser.add_argument('--synthetic', dest='synthetic_spec_path', type=str,
                        help='Synthetic corpus spec; the corpus is generated before the run')
    parser.add_argument('--seed', type=int,
                        help='Override the synthetic spec seed')
    parser.add_argument('--refresh-every', dest='refresh_every', type=int,
                        help='Recompute all intersecting pairs every k snapshots (default: never)')
    parser.add_argument('--audit-staleness', dest='audit_staleness', action='store_true', default=None,
                        help='Record the store deviation from the batch oracle per snapshot')
    parser.add_argument('--no-batch', dest='compare_batch', action='store_false', default=None,
                        help='Skip the batch baseline')
    parser.add_argument('--verbose', action='store_true',
                        help='Enable verbose logging')
    return parser


def resolve_config(args: argparse.Namespace) -> BenchConfig:
    """
    Merge the config file (if any) with command-line overrides

    Raises:
        FileNotFoundError, ValueError: From the config file
        ValidationError: If the merged settings are invalid
    """
    values = {}
    if args.config:
        values = ConfigManager().load_bench_config(args.config).model_dump(exclude_unset=True)

    overrides = {
        key: value for key, value in vars(args).items()
        if key not in ('config', 'verbose') and value is not None
    }
    # a source given on the command line replaces the file's source
    if 'input_path' in overrides:
        values.pop('synthetic_spec_path', None)
    if 'synthetic_spec_path' in overrides:
        values.pop('input_path', None)
    values.update(overrides)
    return BenchConfig.model_validate(values)


def main(argv=None) -> int:
    """Main entry point"""
    args = build_parser().parse_args(argv)

    try:
        config = resolve_config(args)
    except (FileNotFoundError, ValueError, ValidationError) as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return 2

    configure_logging(config.output_dir, args.verbose)

    print("=" * 60)
    print(f"Streaming TF-IDF Benchmark v{__version__}")
    print("Incremental cosine similarity vs batch recomputation")
    print("=" * 60)
    print()

    try:
        metrics = run_benchmark(config)
    except Exception as e:
        logger.error(f"Benchmark failed: {e}", exc_info=True)
        return 1

    logger.info(f"Results written to {config.output_dir} ({len(metrics)} snapshots)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
