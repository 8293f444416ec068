import click

from bohrstrip import config_manager
from bohrstrip import io
from bohrstrip import options
from bohrstrip.errors import BohrStripError
from bohrstrip.harness import Harness


@click.command("algebra")
@options.config_file_option()
@options.out_dir_option()
@options.seed_option()
@click.pass_context
def cli(ctx, config_file, out_dir, seed):
    """Evaluate a polynomial in generators on disjoint progressions and check coefficient disjointness."""
    try:
        with config_manager.config_manager(config_file=config_file, section="algebra", seed=seed) as cm:
            report = Harness(cm.settings, out_dir=out_dir, command="algebra").run_algebra()
    except BohrStripError as exc:
        io.error_json(exc)
        ctx.exit(exc.exit_code)
    io.report(report)
    ctx.exit(0 if report.passed else 1)
