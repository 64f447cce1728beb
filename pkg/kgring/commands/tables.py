"""Table commands: spectrum, coulomb, scan and wavefn."""
import logging

import click

from kgring.models.run_config import FORMATS, ConfigError, RunConfig, load_run_config
from kgring.services import tables
from kgring.services.table_writer import OutputError, write_table

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_ALL_FAILED = 2


def load_config(config_path, mode):
    """Read the run configuration for a command, or the defaults when no file is given."""
    config = load_run_config(config_path) if config_path else RunConfig()
    return config.with_mode(mode)


def run_spectrum(config):
    return tables.spectrum_table(config)


def run_coulomb(config):
    return tables.coulomb_table(config)


def run_scan(config):
    if config.scan is None:
        raise ConfigError("The scan command needs a scan block")
    return tables.scan_table(config)


def run_wavefn(config):
    return tables.wavefn_table(config)


RUNNERS = {
    'spectrum': run_spectrum,
    'coulomb': run_coulomb,
    'scan': run_scan,
    'wavefn': run_wavefn,
}


def execute(mode, config_path, out, fmt):
    """
    Build and emit one table.

    Returns:
        Process exit code: 0 when any row succeeded, 1 for configuration
        or output errors, 2 when every row failed
    """
    try:
        config = load_config(config_path, mode)
        table = RUNNERS[mode](config)
        path = out or config.output_path
        text = write_table(table, fmt or config.output_format, path)
    except (ConfigError, OutputError) as e:
        click.echo(f"Configuration error: {e}", err=True)
        return EXIT_CONFIG
    except OSError as e:
        click.echo(f"Could not write output: {e}", err=True)
        return EXIT_CONFIG

    if text is not None and not path:
        click.echo(text, nl=False)
    if table.failed_rows:
        logger.warning("%d of %d rows failed", table.failed_rows, len(table.rows))
    return EXIT_ALL_FAILED if table.all_failed else EXIT_OK


def _table_command(mode, help_text):
    @click.command(name=mode, help=help_text)
    @click.option('--config', 'config_path', type=click.Path(dir_okay=False), help='JSON run configuration')
    @click.option('--out', type=click.Path(dir_okay=False), help='Output file (default: standard output)')
    @click.option('--format', 'fmt', type=click.Choice(FORMATS), help='Output format')
    @click.pass_context
    def command(ctx, config_path, out, fmt):
        ctx.exit(execute(mode, config_path, out, fmt))
    return command


spectrum = _table_command('spectrum', 'Relativistic and nonrelativistic levels per (D, n, n_tilde, m).')
coulomb = _table_command('coulomb', 'Coulomb-limit levels: closed form, charge series and root solve.')
scan = _table_command('scan', 'Sweep one parameter and tabulate the levels.')
wavefn = _table_command('wavefn', 'Sample normalized wavefunctions along r.')
