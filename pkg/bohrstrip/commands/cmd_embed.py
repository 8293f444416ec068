import click

from bohrstrip import config_manager
from bohrstrip import io
from bohrstrip import options
from bohrstrip.errors import BohrStripError
from bohrstrip.harness import Harness


@click.command("embed")
@options.config_file_option()
@options.out_dir_option()
@options.seed_option()
@click.option("--which", type=click.Choice(["l1", "l2"]), default=None, help="Embedding to build, overrides the config file.")
@click.pass_context
def cli(ctx, config_file, out_dir, seed, which):
    """Build the truncated image of lambda under the l1 or l2 embedding.

    l1 writes series.json and isometry_l1.json; l2 writes series.json, isometry_l2.json and orthonormality.json.
    """
    try:
        with config_manager.config_manager(config_file=config_file, section="embed", seed=seed) as cm:
            if which:
                cm.settings.embed.which = which
            report = Harness(cm.settings, out_dir=out_dir, command="embed").run_embed()
    except BohrStripError as exc:
        io.error_json(exc)
        ctx.exit(exc.exit_code)
    io.report(report)
    ctx.exit(0 if report.passed else 1)
