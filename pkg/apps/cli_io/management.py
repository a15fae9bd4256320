"""
Command-line entry point: ``sgml <command> [flags]``.
"""

import argparse
import logging
import logging.config
import sys
from collections.abc import Sequence

from apps.core.conf import settings
from apps.core.containers import configure_container, container
from apps.core.exceptions import SGMLError, ValidationError

from .forms import RunConfigForm

logger = logging.getLogger(__name__)

INPUT_ERROR = 1


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", help="grid exponent: 2^n + 1 nodes per axis")
    parser.add_argument("--nr", help="relaxations per level cap, or 'inf'")
    parser.add_argument("--tol", help="normalized residual tolerance")
    parser.add_argument("--max-cycles", dest="max_cycles")
    parser.add_argument("--safety", help="pseudo-time step safety factor in (0, 1]")
    parser.add_argument("--a", help="Helmholtz coefficient (deform)")
    parser.add_argument("--r", help="trefoil radius (trifoil)")
    parser.add_argument("--mode", help="high|low conductivity sphere (capacitor)")
    parser.add_argument("--curve", help="CSV of curve points (deform)")
    parser.add_argument("--closed", action="store_true", default=None, help="the CSV curve is closed")
    parser.add_argument("--seeds", help="CSV of streamline seeds (trifoil)")
    parser.add_argument("--t", help="final pseudo-time of the node motion (deform)")
    parser.add_argument("--steps", help="node-motion steps (deform) or streamline steps (trifoil)")
    parser.add_argument("--dim", help="2 or 3 (bench)")
    parser.add_argument("--n-min", dest="n_min", help="smallest grid exponent (bench)")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--threads", help="kernel worker threads")


def build_parser(patterns=None) -> argparse.ArgumentParser:
    if patterns is None:
        from config.commands import commandpatterns

        patterns = commandpatterns
    parser = argparse.ArgumentParser(prog="sgml", description="Single-grid multi-level elliptic solver.")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for pattern in patterns:
        subparser = subparsers.add_parser(pattern.name, help=pattern.command.help)
        add_common_arguments(subparser)
        subparser.set_defaults(command_class=pattern.command)
    return parser


def setup_logging() -> None:
    logging.config.dictConfig(settings.LOGGING)
    dsn = getattr(settings, "SENTRY_DSN", "")
    if dsn:
        import sentry_sdk

        sentry_sdk.init(dsn=dsn)


def execute_from_command_line(argv: Sequence[str] | None = None) -> int:
    args = vars(build_parser().parse_args(argv))
    setup_logging()
    command_class = args.pop("command_class")

    form = RunConfigForm(args, initial=command_class.initial)
    try:
        config = form.save()
    except ValidationError as exc:
        for field, message in exc.errors.items():
            logger.error("--%s: %s", field.replace("_", "-"), message)
        return INPUT_ERROR

    configure_container(threads=config.threads)
    try:
        return command_class(container).handle(config)
    except SGMLError as exc:
        logger.error("%s failed: %s", config.command, exc)
        return INPUT_ERROR
    except OSError as exc:
        logger.error("Cannot write output: %s", exc)
        return INPUT_ERROR
    finally:
        container.shutdown_resources()


def main() -> None:
    sys.exit(execute_from_command_line())
