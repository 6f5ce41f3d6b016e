"""
Command line entry point: ``limitsets <subcommand> [options]``.

Reports go to stdout and artifacts to ``--out``; logging goes to stderr so
stdout stays byte-identical for identical run configurations.
"""

import logging
import sys
from pathlib import Path
from typing import Any, Optional

import click

from app.commands import CommandHandler, CommandParser
from app.config import get_settings
from app.schemas.reports import CommandReport, RunConfig
from app.utils.decorators import handle_errors

logger = logging.getLogger(__name__)


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def make_handler(ctx: click.Context, subcommand: str, inputs: tuple[str, ...] = (), **extra: Any) -> CommandHandler:
    options = ctx.obj
    config = RunConfig(
        subcommand=subcommand,
        inputs=inputs,
        resolution=options["resolution"],
        horizon=options["horizon"],
        grid=options["grid"],
        seed=options["seed"],
        output_dir=str(options["output_dir"]),
        output_format=options["output_format"],
        only=extra.pop("only", None),
        extra={key: str(value) for key, value in extra.items() if value is not None},
    )
    return CommandHandler(config, corpus_dir=options["corpus_dir"])


def echo_report(report: CommandReport) -> None:
    for line in report.lines:
        click.echo(line)
    for artifact in report.artifacts:
        click.echo(f"wrote {artifact}")


@click.group()
@click.option("--res", "resolution", type=int, default=None, help="Resolution k (epsilon = 2^-k).")
@click.option("--horizon", type=int, default=None, help="Witness search horizon N.")
@click.option("--grid", default=None, help="Box grid h or h:fatten for interval analyses.")
@click.option("--seed", type=int, default=None, help="Seed for random pseudo-orbits.")
@click.option("--out", "output_dir", type=click.Path(path_type=Path), default=None, help="Artifact directory.")
@click.option("--format", "output_format", type=click.Choice(["csv", "json", "dot"]), default=None)
@click.option("--corpus", "corpus_dir", type=click.Path(path_type=Path), default=None, help="Input corpus directory.")
@click.option("--log-level", default=None, help="Logging level (default from settings).")
@click.pass_context
def cli(
    ctx: click.Context,
    resolution: Optional[int],
    horizon: Optional[int],
    grid: Optional[str],
    seed: Optional[int],
    output_dir: Optional[Path],
    output_format: Optional[str],
    corpus_dir: Optional[Path],
    log_level: Optional[str],
) -> None:
    """Limit sets, chain transitivity and shadowing in shift spaces and interval maps."""
    settings = get_settings()
    configure_logging((log_level or settings.log_level).upper())
    if resolution is not None and resolution < 0:
        raise click.BadParameter("resolution must be non-negative", param_hint="--res")
    ctx.obj = {
        "resolution": settings.default_resolution if resolution is None else resolution,
        "horizon": horizon,
        "grid": grid,
        "seed": settings.seed if seed is None else seed,
        "output_dir": output_dir or settings.output_dir,
        "output_format": output_format or settings.output_format,
        "corpus_dir": corpus_dir or settings.corpus_dir,
    }


@cli.command()
@click.argument("source")
@click.pass_context
@handle_errors
def sft(ctx: click.Context, source: str) -> None:
    """Language tables and block graph of an SFT file."""
    echo_report(make_handler(ctx, "sft", (source,)).sft(source))


@cli.command()
@click.argument("point")
@click.option("--kinds", default="alpha,omega", help="Comma list of alpha, omega, gamma.")
@click.option("--empirical", is_flag=True, help="Always use the stabilized window scan.")
@click.pass_context
@handle_errors
def limits(ctx: click.Context, point: str, kinds: str, empirical: bool) -> None:
    """Limit window sets of a library point (``library:name`` or ``name``)."""
    parsed = CommandParser.parse_kinds(kinds)
    handler = make_handler(ctx, "limits", (point,), kinds=",".join(parsed), empirical=empirical)
    echo_report(handler.limits_cmd(point, parsed, "empirical" if empirical else "auto"))


@cli.command()
@click.argument("source")
@click.option("--direction", default=None, help="forward, backward or two-sided (default forward).")
@click.option("--length", type=int, default=16, show_default=True)
@click.option("--count", type=int, default=8, show_default=True)
@click.option("--pseudo-orbit", default=None, help="Library pseudo-orbit instead of random ones.")
@click.option("--witness", default=None, help="Library point for orbital witness checks.")
@click.pass_context
@handle_errors
def shadow(
    ctx: click.Context,
    source: str,
    direction: Optional[str],
    length: int,
    count: int,
    pseudo_orbit: Optional[str],
    witness: Optional[str],
) -> None:
    """Shadow pseudo-orbits in an SFT and re-verify every certificate."""
    parsed = CommandParser.parse_direction(direction) if direction else None
    handler = make_handler(
        ctx, "shadow", (source,),
        direction=parsed, length=length, count=count, pseudo_orbit=pseudo_orbit, witness=witness,
    )
    if witness is not None:
        echo_report(handler.witness(witness, parsed))
        return
    parsed = parsed or "forward"
    two_sided = parsed == "two_sided"
    echo_report(
        handler.shadow(
            source, parsed, length=length, count=count, two_sided_metric=two_sided, pseudo_orbit=pseudo_orbit
        )
    )


@cli.command()
@click.argument("source", required=False)
@click.option("--windows", default=None, help="Allowed windows, space separated.")
@click.option("--spikes", default=None, help="Spike set base:symbols, e.g. 0:12.")
@click.option("--two-sided", is_flag=True)
@click.pass_context
@handle_errors
def ict(ctx: click.Context, source: Optional[str], windows: Optional[str], spikes: Optional[str], two_sided: bool) -> None:
    """Chain transitivity and maximal ICT classes."""
    inputs = tuple(v for v in (source,) if v)
    handler = make_handler(ctx, "ict", inputs, windows=windows, spikes=spikes, two_sided=two_sided)
    echo_report(handler.ict(source, windows, spikes, two_sided))


@cli.command()
@click.argument("source", required=False)
@click.option("--windows", default=None)
@click.option("--spikes", default=None)
@click.option("--full", is_flag=True, help="Build a bi-infinite trajectory instead of a limit point.")
@click.option("--length", type=int, default=4096, show_default=True, help="Symbol budget N.")
@click.pass_context
@handle_errors
def construct(
    ctx: click.Context,
    source: Optional[str],
    windows: Optional[str],
    spikes: Optional[str],
    full: bool,
    length: int,
) -> None:
    """Realize a chain transitive set as a limit set."""
    inputs = tuple(v for v in (source,) if v)
    handler = make_handler(ctx, "construct", inputs, windows=windows, spikes=spikes, full=full, length=length)
    echo_report(handler.construct(length=length, full=full, source=source, windows=windows, spikes=spikes))


@cli.command()
@click.argument("source")
@click.argument("operation", type=click.Choice(["eval", "preimages", "a1", "a2", "a3", "omega", "falsify", "chain", "ict"]))
@click.option("--x", "x_text", default=None, help="Exact rational point.")
@click.option("--depth", type=int, default=12, show_default=True)
@click.option("--points", default=None, help="Comma list of rationals for ict.")
@click.option("--epsilon", default="1/3", show_default=True)
@click.option("--delta", default="1/64", show_default=True)
@click.pass_context
@handle_errors
def interval(
    ctx: click.Context,
    source: str,
    operation: str,
    x_text: Optional[str],
    depth: int,
    points: Optional[str],
    epsilon: str,
    delta: str,
) -> None:
    """Exact analyses of a piecewise map on an interval."""
    grid_text = ctx.obj["grid"]
    grid = CommandParser.parse_grid(grid_text) if grid_text else None
    x = CommandParser.parse_rational(x_text, "--x") if x_text is not None else None
    handler = make_handler(
        ctx, "interval", (source,),
        operation=operation, x=x_text, depth=depth, points=points, epsilon=epsilon, delta=delta,
    )
    echo_report(
        handler.interval(
            source,
            operation,
            x=x,
            depth=depth,
            points=CommandParser.parse_points(points) if points else (),
            epsilon=CommandParser.parse_positive_rational(epsilon, "--epsilon"),
            delta=CommandParser.parse_positive_rational(delta, "--delta"),
            grid=grid,
        )
    )


@cli.command("verify-paper")
@click.option("--only", default=None, help="Run only this example id.")
@click.option("--jobs", type=int, default=None, help="Worker threads for independent checks.")
@click.pass_context
@handle_errors
def verify_paper(ctx: click.Context, only: Optional[str], jobs: Optional[int]) -> None:
    """Reproduce every bundled example as a pass/fail table."""
    jobs = jobs or get_settings().jobs
    handler = make_handler(ctx, "verify-paper", only=only, jobs=jobs)
    echo_report(handler.verify_paper(only, jobs))


def main() -> None:
    cli(prog_name="limitsets")


if __name__ == "__main__":
    main()
