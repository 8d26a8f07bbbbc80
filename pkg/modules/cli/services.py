# modules/cli/services.py
# -*- coding: utf-8 -*-
"""
Розбір і виконання команд. click розбирає прапорці в Command без виконання,
execute() запускає зворотний виклик підкоманди і переводить винятки в коди виходу.
"""

from __future__ import annotations

import logging
import sys
from typing import Optional, Sequence

import click

from errors import BoundViolationError, DatasetFormatError, DistSigError
from .models import EXIT_FAILURE, EXIT_IO, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, Command

logger = logging.getLogger(__name__)

# прапорці, обов'язкові для --dataset file
_FILE_DATASET_FLAGS = ("graph", "labels")


def _app() -> click.Group:
    from app import create_app
    return create_app()


def parse_args(argv: Sequence[str]) -> Command:
    app = _app()
    root = click.Context(app, info_name=app.name, **app.context_settings)
    argv = list(argv)
    if not argv:
        raise click.UsageError("missing subcommand", ctx=root)
    name = argv[0]
    if name in root.help_option_names:
        click.echo(app.get_help(root))
        raise click.exceptions.Exit(EXIT_OK)
    cmd = app.get_command(root, name)
    if cmd is None:
        raise click.UsageError(f"No such command {name!r}.", ctx=root)

    ctx = cmd.make_context(name, argv[1:], parent=root)
    params = dict(ctx.params)
    if params.get("dataset") == "file":
        missing = [f"--{flag}" for flag in _FILE_DATASET_FLAGS if not params.get(flag)]
        if missing:
            raise click.UsageError(f"--dataset file requires {', '.join(missing)}", ctx=ctx)
    return Command(subcommand=name, params=params)


def execute(cmd: Command) -> int:
    app = _app()
    root = click.Context(app, info_name=app.name, **app.context_settings)
    command = app.get_command(root, cmd.subcommand)
    if command is None:
        logger.error("unknown subcommand %r", cmd.subcommand)
        return EXIT_USAGE
    try:
        result = command.callback(**cmd.params)
    except BoundViolationError as e:
        logger.error("%s: %s", cmd.subcommand, e)
        return EXIT_VIOLATION
    except click.UsageError as e:
        e.show()
        return EXIT_USAGE
    except (OSError, DatasetFormatError) as e:
        logger.error("%s: I/O failure: %s", cmd.subcommand, e)
        return EXIT_IO
    except DistSigError:
        logger.exception("%s failed", cmd.subcommand)
        return EXIT_FAILURE
    except Exception:
        logger.exception("%s crashed", cmd.subcommand)
        return EXIT_FAILURE
    return EXIT_OK if result is None else int(result)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cmd = parse_args(argv)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.UsageError as e:
        e.show()
        return EXIT_USAGE
    return execute(cmd)
