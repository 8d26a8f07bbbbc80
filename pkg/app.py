import sys, os
sys.path.append(os.path.abspath(os.path.dirname(__file__)))

import click

from config import Config
from extensions import init_logging
from register_commands import register_commands


def create_app() -> click.Group:
    init_logging(Config.LOG_LEVEL)

    @click.group(name="distsig", context_settings={"help_option_names": ["-h", "--help"]})
    def app():
        """Розподільні сигнали на графах: спектри, межі повної варіації, GCN з регуляризацією."""

    register_commands(app)
    return app


def main(argv=None) -> int:
    from modules.cli.services import main as cli_main
    return cli_main(argv)


if __name__ == '__main__':
    sys.exit(main())
