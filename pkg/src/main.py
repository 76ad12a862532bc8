"""
Main Command-Line Entry Point

Runs one configured experiment and writes its CSV:

    simulate CONFIG [--out DIR] [--threads N] [--experiment KIND]

Exit codes: 0 success, 2 invalid input, 3 unstable dynamics,
4 numerical self-check failure, 1 anything unexpected.
"""

import argparse
import logging
import sys

from src.cli.controller import load_config, run, with_overrides
from src.configs.settings import settings
from src.contrib.exceptions import ConfigError
from src.contrib.schemas import ExperimentKind


logger = logging.getLogger('src')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='simulate',
        description='Photon-subtraction preparation of single-phonon states in optomechanics',
    )
    parser.add_argument('config', help='TOML run configuration')
    parser.add_argument('--out', help='output directory (overrides [output].directory)')
    parser.add_argument('--threads', type=int, help='worker threads over grid points')
    parser.add_argument(
        '--experiment',
        choices=[kind.value for kind in ExperimentKind],
        help='experiment to run (overrides [experiment].kind)',
    )
    parser.add_argument('--log-level', default=None, help='log level (default from LOG_LEVEL)')
    return parser


def configure_logging(level: str | None = None) -> None:
    level = 'DEBUG' if settings.DEBUG else (level or settings.LOG_LEVEL)
    logging.basicConfig(
        level=level.upper(),
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )


def main(argv: list[str] | None = None) -> int:
    """
    Parse arguments, run the experiment and return the exit code
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    logger.info('🚀 %s %s started', settings.APP_NAME, settings.APP_VERSION)

    try:
        config = with_overrides(
            load_config(args.config),
            out=args.out,
            threads=args.threads,
            experiment=args.experiment,
        )
    except ConfigError as exc:
        logger.error('❌ %s', exc.detail)
        return exc.exit_code

    try:
        outcome = run(config)
    except Exception:
        logger.exception('❌ unexpected failure')
        return 1

    if outcome.exit_code == 0:
        logger.info('✅ wrote %s', outcome.path)
    else:
        logger.info('👋 %s stopped with exit code %d', settings.APP_NAME, outcome.exit_code)
    return outcome.exit_code


if __name__ == '__main__':
    sys.exit(main())
