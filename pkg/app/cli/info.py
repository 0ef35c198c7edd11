import click

from app.core.config import settings
from app.services.harness_service import SUITES


@click.command()
def info():
    """Show version, configuration and the registered suites."""
    click.echo(f"{settings.PROJECT_NAME} {settings.VERSION}")
    click.echo("")
    click.echo("configuration:")
    for key, value in sorted(settings.model_dump().items()):
        click.echo(f"  {key} = {value}")
    click.echo("")
    click.echo("suites: " + ", ".join(sorted(SUITES)))
    click.echo("rings: Fp:<p> (p prime < 2^31), Q, Z")
