"""
Main application entry point.
"""

import logging
import sys

import click

from controllers.equiv_controller import EquivController
from controllers.unify_controller import TraceEvent, UnifyController
from models.errors import CapExceeded, NominalError
from models.problem import ProblemFile
from utils.config import Config
from utils.printer import format_solutions
from utils.problem_parser import ProblemParser
from utils.serializer import context_to_dict, proof_to_dict, to_json, unify_result_to_dict

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_CAP_EXCEEDED = 3


def _configure_logging(verbose: int, config: Config) -> None:
    if verbose >= 2 or config.debug_logging:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _load(ctx: click.Context, path: str, judgement: bool) -> ProblemFile:
    try:
        problem = ProblemParser.parse_file(path)
    except (NominalError, FileNotFoundError) as e:
        logger.error(f"Failed to read {path}: {e}")
        click.echo(f"error: {e}", err=True)
        ctx.exit(EXIT_INPUT_ERROR)
    if problem.is_judgement != judgement:
        expected = "a judgement (ctx |- s = t)" if judgement else "a goal (s =? t, ...)"
        logger.error(f"{path} is not {expected}")
        click.echo(f"error: {path} must contain {expected}", err=True)
        ctx.exit(EXIT_INPUT_ERROR)
    return problem


def _fail(ctx: click.Context, error: Exception) -> None:
    logger.error(str(error))
    click.echo(f"error: {error}", err=True)
    ctx.exit(EXIT_CAP_EXCEEDED if isinstance(error, CapExceeded) else EXIT_INPUT_ERROR)


@click.group()
@click.option("-v", "--verbose", count=True, help="Log INFO with -v, DEBUG with -vv.")
@click.option("--max-group-order", type=click.IntRange(min=1), default=None, help="Largest group the membership test enumerates.")
@click.option("--seed", type=int, default=None, help="Seed reserved for randomized tooling.")
@click.pass_context
def cli(ctx: click.Context, verbose: int, max_group_order, seed):
    """Check alpha-equivalence and solve unification problems modulo commutativity."""
    config = Config.from_options(max_group_order=max_group_order)
    _configure_logging(verbose, config)
    if seed is not None:
        logger.info(f"Seed {seed} accepted")
    ctx.obj = config


@cli.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--proof", is_flag=True, help="Print the derivation.")
@click.option("--json", "as_json", is_flag=True, help="Print JSON.")
@click.pass_context
def check(ctx: click.Context, file: str, proof: bool, as_json: bool):
    """Decide whether the judgement in FILE is derivable."""
    problem = _load(ctx, file, judgement=True)
    controller = EquivController(ctx.obj)
    try:
        tree = controller.prove(problem.context, problem.lhs, problem.rhs)
    except NominalError as e:
        _fail(ctx, e)
    logger.info(f"{file}: {'derivable' if tree else 'not derivable'}")
    if as_json:
        payload = {"derivable": tree is not None}
        if proof and tree is not None:
            payload["proof"] = proof_to_dict(tree)
        click.echo(to_json(payload))
    else:
        click.echo("derivable" if tree else "not derivable")
        if proof and tree is not None:
            click.echo(tree.format())
    ctx.exit(EXIT_OK if tree else EXIT_FAILED)


@cli.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--json", "as_json", is_flag=True, help="Print JSON.")
@click.option("--trace", is_flag=True, help="Print every simplification step with its measures.")
@click.pass_context
def unify(ctx: click.Context, file: str, as_json: bool, trace: bool):
    """Compute a complete set of solutions for the goal in FILE."""
    problem = _load(ctx, file, judgement=False)
    controller = UnifyController(ctx.obj)

    def report_step(event: TraceEvent) -> None:
        after = " | ".join(str(m) for m in event.after)
        click.echo(f"{event.step.rule}: {event.step.equation}  {event.before} > {after}", err=as_json)

    try:
        report = controller.solve_report(problem.problem(), report_step if trace else None)
    except NominalError as e:
        _fail(ctx, e)
    if as_json:
        click.echo(to_json(unify_result_to_dict(report.solutions, report.reasons)))
    elif report.solutions:
        click.echo(format_solutions(report.solutions))
    else:
        reasons = ", ".join(sorted(reason.value for reason in report.reasons))
        click.echo(f"unsolvable: {reasons}")
    ctx.exit(EXIT_OK if report.solutions else EXIT_FAILED)


@cli.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--json", "as_json", is_flag=True, help="Print JSON.")
@click.option("--reverse", is_flag=True, help="Use the mirrored merge order.")
@click.pass_context
def normalize(ctx: click.Context, file: str, as_json: bool, reverse: bool):
    """Print the normal form of the context of the judgement in FILE."""
    problem = _load(ctx, file, judgement=True)
    normal = problem.context.normalize(reverse=reverse)
    click.echo(to_json(context_to_dict(normal)) if as_json else str(normal))


def main():
    """Main application entry point."""
    cli(prog_name="nomc")


if __name__ == "__main__":
    main()
