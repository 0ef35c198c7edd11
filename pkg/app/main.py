import click

from app.cli import check, construct, deform, info, isotope, octonionify, transport
from app.core.config import settings
from app.core.logging import configure_logging


@click.group()
@click.version_option(settings.VERSION, prog_name=settings.PROJECT_NAME)
@click.option("--log-level", default=None, help="Overrides ALBERT_LOG_LEVEL.")
def cli(log_level):
    """Exact constructions and identity checks for Albert algebras."""
    configure_logging(log_level or settings.LOG_LEVEL)


# Register commands
cli.add_command(construct.construct)
cli.add_command(check.check)
cli.add_command(isotope.isotope)
cli.add_command(deform.deform)
cli.add_command(octonionify.octonionify)
cli.add_command(transport.transport)
cli.add_command(info.info)
