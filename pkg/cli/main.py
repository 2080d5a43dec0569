"""Command-line entry point: fronttrack solve | compare-flux | nonaut | verify | sweep | campaign."""

import argparse
import sys
from datetime import datetime
from pathlib import Path
from typing import List, Optional

from config import get_settings
from config.experiment import load_experiment
from core import ArtifactError, ConfigError, FrontTrackingError, get_logger, setup_logging
from .manager import SolveManager, cell_count, flux_label

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3

COMMANDS = ('solve', 'compare-flux', 'nonaut', 'verify', 'sweep', 'campaign')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='fronttrack',
        description='Exact wave front tracking for scalar conservation laws with boundary data.',
    )
    parser.add_argument('command', choices=COMMANDS)
    parser.add_argument('--config', help='experiment config (JSON)')
    parser.add_argument('--out', help='output directory (default: config output_dir, then FT_OUTPUT_DIR)')
    parser.add_argument('--seed', type=int, default=None, help='random seed for verification sampling')
    parser.add_argument('--jobs', type=int, default=None, help='worker threads for sweeps and campaigns')
    parser.add_argument('--artifacts', help='directory of solve artifacts for verify (default: --out)')
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command and return its exit code."""
    args = build_parser().parse_args(argv)

    setup_logging()
    logger = get_logger(__name__)

    if args.jobs is not None and args.jobs < 1:
        logger.error("❌ --jobs must be at least 1")
        return EXIT_CONFIG

    try:
        config = load_experiment(args.config) if args.config else None
        if config is None and args.command != 'campaign':
            raise ConfigError(f"{args.command} needs --config")

        manager = SolveManager(get_settings(), jobs=args.jobs)
        out = manager.output_dir(config, args.out)
        seed = args.seed if args.seed is not None else (config.options.seed if config else 0)

        logger.info(f"🚀 Starting fronttrack {args.command}")
        if config is not None:
            logger.info(f"📋 {config.domain.kind} domain, {flux_label(config.flux.to_flux())} flux, "
                        f"eps={config.eps}, T={config.horizon}")
        start_time = datetime.now()

        if args.command == 'solve':
            result = manager.cmd_solve(config, out)
        elif args.command == 'compare-flux':
            result = manager.cmd_compare_flux(config, out)
        elif args.command == 'nonaut':
            result = manager.cmd_nonaut(config, out)
        elif args.command == 'verify':
            result = manager.cmd_verify(config, Path(args.artifacts or out), out, seed)
        elif args.command == 'sweep':
            logger.info(f"🧮 Sweeping {cell_count(config)} cells on {manager.jobs} workers")
            result = manager.cmd_sweep(config, out)
        else:
            result = manager.cmd_campaign(config, out, seed)

        duration = (datetime.now() - start_time).total_seconds()

    except (ConfigError, ArtifactError) as e:
        logger.error(f"❌ {e}")
        return EXIT_CONFIG
    except FrontTrackingError as e:
        logger.error(f"❌ Solver error: {e}")
        return EXIT_SOLVER

    logger.info("=" * 60)
    logger.info(f"🎯 {args.command.upper()} SUMMARY")
    logger.info("=" * 60)
    for key in ('events', 'fronts', 'rows', 'total', 'processed', 'errors', 'violations'):
        if key in result:
            logger.info(f"📊 {key}: {result[key]}")
    if result.get('failures'):
        logger.info(f"❌ Failed checks: {', '.join(result['failures'])}")
    logger.info(f"📁 Artifacts: {out}")
    logger.info(f"⏱️ Duration: {duration:.2f} seconds")
    logger.info(f"{'✅ All checks passed' if result['passed'] else '❌ Bound violation'}")
    logger.info("=" * 60)

    return EXIT_OK if result['passed'] else EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
