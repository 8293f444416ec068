import click

from bohrstrip import harness
from bohrstrip import io
from bohrstrip import options
from bohrstrip.errors import BohrStripError


@click.command("verify")
@options.required_file_arg("series")
@options.required_file_arg("certificate")
@click.pass_context
def cli(ctx, series, certificate):
    """Recompute CERTIFICATE from SERIES and compare.

    Exits 0 iff the recomputed rows match within tolerance and the verdict is pass.

    aliases: check
    """
    try:
        report = harness.verify(series, certificate)
    except BohrStripError as exc:
        io.error_json(exc)
        ctx.exit(exc.exit_code)
    for mismatch in report.mismatches:
        io.warn(mismatch)
    if report.passed:
        io.info(f"{certificate}: {report.verdict}")
    else:
        io.error(f"{certificate}: verification failed (verdict {report.verdict})")
    ctx.exit(0 if report.passed else 1)
