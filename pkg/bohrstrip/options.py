""" Click definitions for various shared options and arguments.
"""
import click


def debug_option():
    return click.option("-d", "--debug", is_flag=True, help="Enables debug mode.")


def config_file_option():
    return click.option(
        "-c",
        "--config",
        "config_file",
        type=click.Path(exists=True, dir_okay=False, resolve_path=True),
        multiple=True,
        help="YAML or JSON run configuration. May be given more than once, later files override earlier ones.",
    )


def out_dir_option():
    return click.option(
        "-o",
        "--out",
        "out_dir",
        type=click.Path(file_okay=False, writable=True, resolve_path=True),
        default=".",
        show_default=True,
        help="Directory the series, certificates and tables are written to.",
    )


def seed_option():
    return click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=None, help="Seed for all random choices, overrides the config file.")


def required_file_arg(name):
    arg_type = click.Path(
        exists=True,
        file_okay=True,
        dir_okay=False,
        readable=True,
        resolve_path=True,
    )
    return click.argument(name, type=arg_type)
