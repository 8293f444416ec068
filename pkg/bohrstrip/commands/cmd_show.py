import click

from bohrstrip import config_manager
from bohrstrip import io
from bohrstrip import options
from bohrstrip.errors import BohrStripError
from bohrstrip.util import canonical_json, settings_to_sample


@click.command("show")
@options.config_file_option()
@options.seed_option()
@click.option("--sample", is_flag=True, help="Print a commented sample configuration instead.")
@click.pass_context
def cli(ctx, config_file, seed, sample):
    """Show the resolved run configuration.

    aliases: config
    """
    if sample:
        click.echo(settings_to_sample())
        return
    try:
        with config_manager.config_manager(config_file=config_file, seed=seed) as cm:
            click.echo(canonical_json(cm.settings.dict(by_alias=True), indent=4))
    except BohrStripError as exc:
        io.error_json(exc)
        ctx.exit(exc.exit_code)
