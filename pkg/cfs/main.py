"""
Command-line front end of the complete flux solver.

    cfs solve --example ex1 --epsilon 1e-2 --n 101
    cfs convergence --example ex5 --epsilon 1e-2 --format json --output ex5.json
    cfs sweep-epsilon --example ex3 --epsilon-list 1e-1,1e-2,1e-3
    cfs list-examples

``--example`` takes a built-in name or the path of a key-value problem file.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Literal, Optional

import click
from pydantic import BaseModel, Field, ValidationError

from cfs.exceptions import CFSError, GridError, ProblemDefinitionError
from cfs.problems.examples import EXAMPLE_NAMES, get_example
from cfs.problems.loader import load_problem
from cfs.problems.problem import ProblemSpec, grid_from_step
from cfs.scheme.assembly import solve
from cfs.verification.convergence import convergence_study
from cfs.verification.reporting import (
    Table,
    profile_table,
    render_table,
    report_table,
    sweep_table,
    write_atomic,
    write_table,
)
from config.config import CFS_EPSILON_SWEEP, CFS_H_LIST, CFS_OUTPUT_FORMAT, LOGGING_LEVEL
from config.logging_config import setup_logging

logger = logging.getLogger("cfs.main")

Command = Literal["solve", "convergence", "sweep-epsilon", "list-examples"]


# -------------------- Models --------------------
class RunConfig(BaseModel):
    """Validated options of one CLI invocation."""
    command: Command = Field(..., description="Sub-command to run")
    example: Optional[str] = Field(None, description="Built-in example name or problem file path")
    epsilon: Optional[float] = Field(
        None, gt=0, description="Singular perturbation parameter; the problem file's or the default when omitted"
    )
    mu: Optional[float] = Field(None, ge=0, description="Shift parameter; the problem's own when omitted")
    n_points: Optional[int] = Field(None, ge=3, description="Grid size; the problem's own when omitted")
    h_list: List[float] = Field(default_factory=lambda: list(CFS_H_LIST), description="Grid spacings of a study")
    epsilon_list: List[float] = Field(
        default_factory=lambda: list(CFS_EPSILON_SWEEP), description="Perturbation parameters of a sweep"
    )
    output: Optional[Path] = Field(None, description="Output file; stdout when omitted")
    format: Literal["csv", "json"] = Field(CFS_OUTPUT_FORMAT, description="Output format")
    workers: Optional[int] = Field(None, ge=1, description="Threads for independent solves")


# -------------------- Run --------------------
def resolve_problem(example: str, epsilon: Optional[float] = None, mu: Optional[float] = None) -> ProblemSpec:
    """
    Look up a built-in example or load a problem file.

    epsilon and mu override the problem's own values when given.
    """
    if example in EXAMPLE_NAMES:
        return get_example(example, epsilon=epsilon, mu=mu)
    if Path(example).is_file():
        return load_problem(example, epsilon=epsilon, mu=mu)
    raise ProblemDefinitionError(
        f"'{example}' is neither a built-in example ({', '.join(EXAMPLE_NAMES)}) nor a problem file"
    )


def _emit(table: Table, config: RunConfig) -> None:
    if config.output is None:
        click.echo(render_table(table, config.format), nl=False)
    else:
        write_table(table, config.output, config.format)


def _list_examples() -> str:
    lines = []
    for name in EXAMPLE_NAMES:
        spec = get_example(name)
        lines.append(f"{name}  N={spec.default_n_points:<4d} {spec.description}")
    return "\n".join(lines) + "\n"


def run(config: RunConfig) -> int:
    """
    Execute one CLI command.

    Returns:
        int: 0 on success, 1 when the solver reports a failure.
    """
    try:
        if config.command == "list-examples":
            if config.output is None:
                click.echo(_list_examples(), nl=False)
            else:
                write_atomic(config.output, _list_examples())
            return 0

        if config.command == "solve":
            spec = resolve_problem(config.example, config.epsilon, config.mu)
            solution = solve(spec, config.n_points)
            table = profile_table(spec, solution)

        elif config.command == "convergence":
            spec = resolve_problem(config.example, config.epsilon, config.mu)
            report = convergence_study(spec, config.h_list, max_workers=config.workers)
            table = report_table(report)

        else:
            specs = [resolve_problem(config.example, eps, config.mu) for eps in config.epsilon_list]
            if config.workers and config.workers > 1:
                with ThreadPoolExecutor(max_workers=config.workers) as pool:
                    solutions = list(pool.map(lambda spec: solve(spec, config.n_points), specs))
            else:
                solutions = [solve(spec, config.n_points) for spec in specs]
            table = sweep_table(list(zip(specs, solutions)))

        _emit(table, config)
        return 0

    except CFSError as e:
        logger.error(f"{config.command} failed: {e}")
        return 1


# -------------------- Click --------------------
def _float_list(ctx, param, value):
    if value is None:
        return None
    try:
        values = [float(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma separated numbers, got {value!r}")
    if not values or any(v <= 0 for v in values):
        raise click.BadParameter("values must be positive")
    return values


def _check_arguments(ctx: click.Context, config: RunConfig) -> None:
    """Reject arguments that no solve could use before anything runs."""
    if config.example is not None and config.example not in EXAMPLE_NAMES and not Path(config.example).is_file():
        raise click.BadParameter(
            f"'{config.example}' is neither a built-in example ({', '.join(EXAMPLE_NAMES)}) nor a problem file",
            ctx=ctx,
            param_hint="'--example'",
        )
    if config.command == "convergence":
        for h in config.h_list:
            try:
                grid_from_step(h)
            except GridError as e:
                raise click.BadParameter(str(e), ctx=ctx, param_hint="'--h-list'")


def _invoke(ctx: click.Context, **options) -> None:
    options = {key: value for key, value in options.items() if value is not None}
    try:
        config = RunConfig(command=ctx.command.name, **options)
    except ValidationError as e:
        raise click.UsageError(str(e), ctx=ctx)
    _check_arguments(ctx, config)
    ctx.exit(run(config))


_example_option = click.option(
    "--example", "-e", required=True, help="Built-in example (ex1..ex7) or path of a problem file."
)
_mu_option = click.option("--mu", type=click.FloatRange(min=0.0), help="Override the shift parameter.")
_n_option = click.option("--n", "n_points", type=click.IntRange(min=3), help="Number of grid points.")
_output_option = click.option(
    "--output", "-o", type=click.Path(dir_okay=False, path_type=Path), help="Output file (default: stdout)."
)
_format_option = click.option("--format", "format", type=click.Choice(["csv", "json"]), help="Output format.")
_workers_option = click.option("--workers", type=click.IntRange(min=1), help="Threads for independent solves.")
_epsilon_option = click.option(
    "--epsilon", type=click.FloatRange(min=0.0, min_open=True), help="Singular perturbation parameter."
)


@click.group()
@click.option("--log-level", default=LOGGING_LEVEL, show_default=True, help="Logging level.")
def cli(log_level: str):
    """Complete flux scheme for singularly perturbed advection-diffusion-reaction problems."""
    setup_logging(log_level.upper())


@cli.command("solve")
@_example_option
@_epsilon_option
@_mu_option
@_n_option
@_output_option
@_format_option
@click.pass_context
def solve_command(ctx, **options):
    """Solve one problem and write x, phi_numeric[, phi_exact, abs_error]."""
    _invoke(ctx, **options)


@cli.command("convergence")
@_example_option
@_epsilon_option
@_mu_option
@click.option("--h-list", callback=_float_list, help="Comma separated grid spacings.")
@_workers_option
@_output_option
@_format_option
@click.pass_context
def convergence_command(ctx, **options):
    """Run a grid convergence study against the exact solution."""
    _invoke(ctx, **options)


@cli.command("sweep-epsilon")
@_example_option
@click.option("--epsilon-list", callback=_float_list, help="Comma separated perturbation parameters.")
@_mu_option
@_n_option
@_workers_option
@_output_option
@_format_option
@click.pass_context
def sweep_command(ctx, **options):
    """Solve one problem for several epsilon and write a long-format table."""
    _invoke(ctx, **options)


@cli.command("list-examples")
@_output_option
@click.pass_context
def list_command(ctx, **options):
    """List the built-in examples with their parameters."""
    _invoke(ctx, **options)


if __name__ == "__main__":
    cli()
