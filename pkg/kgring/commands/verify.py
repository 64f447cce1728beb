"""The verify command."""
import click

from kgring.commands.tables import EXIT_CONFIG, load_config
from kgring.models.run_config import ConfigError
from kgring.services.table_writer import render_json
from kgring.services.verification import run_checks

EXIT_OK = 0
EXIT_CHECK_FAILED = 3


def run_verify(config):
    return run_checks(config)


@click.command()
@click.option('--config', 'config_path', type=click.Path(dir_okay=False), help='JSON run configuration')
@click.option('--out', type=click.Path(dir_okay=False), help='JSON report file (default: standard output)')
@click.option('--format', 'fmt', type=click.Choice(['json']), default='json', help='Report format')
@click.pass_context
def verify(ctx, config_path, out, fmt):
    """Run the verification suite and emit a JSON report."""
    try:
        config = load_config(config_path, 'verify')
    except ConfigError as e:
        click.echo(f"Configuration error: {e}", err=True)
        ctx.exit(EXIT_CONFIG)

    report = run_verify(config)
    text = render_json(report.as_dict())
    path = out or config.output_path
    if path:
        try:
            with open(path, 'w', encoding='utf-8') as f:
                f.write(text)
        except OSError as e:
            click.echo(f"Could not write report: {e}", err=True)
            ctx.exit(EXIT_CONFIG)
        for line in report.summary_lines():
            click.echo(line)
    else:
        click.echo(text, nl=False)
        for line in report.summary_lines():
            click.echo(line, err=True)

    ctx.exit(EXIT_OK if report.passed else EXIT_CHECK_FAILED)
