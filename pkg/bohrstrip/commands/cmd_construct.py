import click

from bohrstrip import config_manager
from bohrstrip import io
from bohrstrip import options
from bohrstrip.errors import BohrStripError
from bohrstrip.harness import Harness


@click.command("construct")
@options.config_file_option()
@options.out_dir_option()
@options.seed_option()
@click.pass_context
def cli(ctx, config_file, out_dir, seed):
    """Build P = Q_1 + ... + Q_K on a progression and certify the growth of its Dirichlet series.

    Writes series.json, growth.json, norms.json, abscissa.json and growth.csv. Exits 0 iff every certificate passes.
    """
    try:
        with config_manager.config_manager(config_file=config_file, section="construct", seed=seed) as cm:
            report = Harness(cm.settings, out_dir=out_dir, command="construct").run_construct()
    except BohrStripError as exc:
        io.error_json(exc)
        ctx.exit(exc.exit_code)
    io.report(report)
    ctx.exit(0 if report.passed else 1)
