"""Command line of the benchmark harness.

    campc run [SCENARIO] [--n N] [--steps T] [--oracle] [--mode campc|full] [--out FILE]
    campc sweep [SCENARIO] --n 100,200 [--mode both] [--steps T] [--serial] [--out FILE]
    campc check [SCENARIO] [--seed S] [--verify-lp]

CSV goes to standard output unless --out is given, diagnostics go to
standard error.
"""
import functools
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence

import click

from campc.controller import run as run_controller
from common.exc import CampcException
from common.loggers import logger
from hyperthermia.exc import ScenarioRejected
from settings.bench import DEFAULT_SCENARIO, MODES, WORKERS
from settings.solvers import TOL_KKT

from .records import run_rows, sweep_row, write_csv, write_sweep
from .scenario import load_scenario


def reports_errors(command):
    """Domain exceptions end the command with their exit code."""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except CampcException as e:
            click.echo(f'Error: {e}', err=True)
            raise click.exceptions.Exit(int(e.exit_code)) from e

    return wrapper


def _grid_sizes(ctx, param, value: Optional[str]) -> Optional[List[int]]:
    if value is None:
        return None
    try:
        sizes = [int(item) for item in value.split(',') if item.strip()]
    except ValueError as e:
        raise click.BadParameter('expected a comma separated list of integers') from e
    if not sizes:
        raise click.BadParameter('expected at least one grid size')
    return sizes


scenario_argument = click.argument('scenario', required=False, default=DEFAULT_SCENARIO,
                                   type=click.Path(exists=True, dir_okay=False))


@click.group()
def cli():
    """Constraint-adaptive MPC benchmarks on the hyperthermia case study."""


@cli.command()
@scenario_argument
@click.option('--n', 'n', type=click.IntRange(min=3), help='Grid size, overrides the scenario.')
@click.option('--steps', type=click.IntRange(min=0), help='Closed-loop steps, overrides the scenario.')
@click.option('--oracle/--no-oracle', default=None, help='Co-run the full MPC and record input deltas.')
@click.option('--mode', type=click.Choice(MODES), default=MODES[0], show_default=True)
@click.option('--out', type=click.File('w'), default='-', help='CSV destination.')
@reports_errors
def run(scenario, n, steps, oracle, mode, out):
    """Closed-loop run, one CSV row per step."""
    heat = load_scenario(scenario, n)
    steps = heat.steps if steps is None else steps
    oracle = heat.oracle if oracle is None else oracle

    trace = run_controller(heat.setup(), steps, oracle=oracle, mode=mode, tol_kkt=heat.tol_kkt or TOL_KKT)
    write_csv(out, run_rows(heat.n, trace))

    if trace.max_input_delta is not None:
        logger.info(f'Max input delta against the full MPC: {trace.max_input_delta!r}')


def sweep_entry(scenario: str, n: int, modes: Sequence[str], steps: Optional[int]) -> List[dict]:
    """Summary rows of one grid size; runs in a worker process."""
    heat = load_scenario(scenario, n)
    setup = heat.setup()
    steps = heat.steps if steps is None else steps

    rows = []
    for mode in modes:
        trace = run_controller(setup, steps, mode=mode, tol_kkt=heat.tol_kkt or TOL_KKT)
        rows.append(sweep_row(n, mode, trace))
    return rows


@cli.command()
@scenario_argument
@click.option('--n', 'sizes', callback=_grid_sizes, required=True, help='Comma separated grid sizes.')
@click.option('--mode', type=click.Choice(MODES + ('both',)), default='both', show_default=True)
@click.option('--steps', type=click.IntRange(min=0), help='Closed-loop steps, overrides the scenario.')
@click.option('--serial', is_flag=True, help='Run the grid sizes one after another.')
@click.option('--out', type=click.File('w'), default='-', help='CSV destination.')
@reports_errors
def sweep(scenario, sizes, mode, steps, serial, out):
    """Maximum step times per grid size and controller mode."""
    modes = MODES if mode == 'both' else (mode,)

    if serial or len(sizes) == 1 or WORKERS <= 1:
        results = [sweep_entry(scenario, n, modes, steps) for n in sizes]
    else:
        with ProcessPoolExecutor(max_workers=min(WORKERS, len(sizes))) as executor:
            futures = [executor.submit(sweep_entry, scenario, n, modes, steps) for n in sizes]
            results = [future.result() for future in futures]

    rows = sorted((row for rows in results for row in rows), key=lambda row: (row['n'], row['mode']))
    write_sweep(out, rows)


@cli.command()
@scenario_argument
@click.option('--seed', type=click.IntRange(min=0), help='Sampling seed, overrides the scenario.')
@click.option('--verify-lp', is_flag=True, help='Also run the row by row LP checks of the terminal set.')
@reports_errors
def check(scenario, seed, verify_lp):
    """Validate the scenario invariants and report each check."""
    heat = load_scenario(scenario)
    results = heat.checks(seed=seed)
    if verify_lp:
        results += heat.mpc_problem().verify()

    for result in results:
        status = 'PASS' if result.passed else 'FAIL'
        click.echo(f'{result.name}: {status}' + (f' ({result.detail})' if result.detail else ''))

    failed = [result.name for result in results if not result.passed]
    if failed:
        raise ScenarioRejected(f'{len(failed)} checks failed: {", ".join(failed)}')
