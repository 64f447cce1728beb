"""Main command-line application."""
import logging

import click

from kgring.commands.tables import coulomb, scan, spectrum, wavefn
from kgring.commands.verify import verify
from kgring.config import Config


def create_cli():
    """Create and configure the command group."""

    @click.group()
    @click.option('--log-level', default=None, help='Overrides KGRING_LOG_LEVEL')
    def cli(log_level):
        """Bound states of the Klein-Gordon equation with a ring-shaped Kratzer potential."""
        logging.basicConfig(
            level=(log_level or Config.LOG_LEVEL).upper(),
            format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        )

    # Register commands
    for command in (spectrum, coulomb, scan, wavefn, verify):
        cli.add_command(command)

    return cli


cli = create_cli()

if __name__ == '__main__':
    cli()
