"""This module implements the ``gridtree`` command line.

Every command loads a scenario config into a Flask app, sets up a GridTreeManager
and prints delimited text to standard output. Errors go to standard error and
map to exit codes: 2 for config errors, 3 for trace errors, 4 for query errors
and 5 for any other simulation error.
"""

# Copyright (c) 2024 GridTree developers

import functools
import os
import re
import traceback

import click
from flask import Flask

from . import ConfigError, GridTreeError, QueryError, SimulationError, TraceError
from .gridtree_manager import GridTreeManager
from .index_tree import serialize_tree
from .report import format_energy, format_error

EXIT_CODES = (
    (ConfigError, 2),
    (TraceError, 3),
    (QueryError, 4),
    (SimulationError, 5),
)


def exit_code_for(error):
    for error_class, code in EXIT_CODES:
        if isinstance(error, error_class):
            return code
    return 1


SETTING_LINE = re.compile(r'^\s*([A-Za-z_]\w*)\s*=')


def failing_setting(path, error):
    """Return ``(line number, setting name)`` of the config line that raised ``error``.

    Either part is None when it cannot be told.
    """
    lineno = None
    if isinstance(error, SyntaxError) and error.filename == path:
        lineno = error.lineno
    else:
        for frame, frame_lineno in traceback.walk_tb(error.__traceback__):
            if frame.f_code.co_filename == path:
                lineno = frame_lineno
    if lineno is None:
        return None, None
    with open(path) as f:
        lines = f.read().splitlines()
    match = SETTING_LINE.match(lines[lineno - 1]) if 0 < lineno <= len(lines) else None
    return lineno, match.group(1) if match else None


def create_app(config_path, seed=None, trace_path=None):
    """Create a Flask app from a scenario config file and bind a GridTreeManager to it.

    Args:
        config_path(str): A ``KEY = value`` config file, loaded with ``app.config.from_pyfile``.
        seed(int): Overrides ``GRIDTREE_SEED``.
        trace_path(str): Overrides ``GRIDTREE_TRACE_PATH``; resolved against the working directory.
    """
    path = os.path.abspath(config_path)
    if not os.path.isfile(path):
        raise ConfigError('Config file not found: %s' % config_path)

    app = Flask(__name__)
    try:
        app.config.from_pyfile(path)
    except Exception as e:
        lineno, name = failing_setting(path, e)
        if name:
            raise ConfigError('Cannot load config file %s: line %d sets %s: %s. String values need quotes, '
                              'e.g. %s = \'...\'.' % (config_path, lineno, name, e, name))
        raise ConfigError('Cannot load config file %s: %s' % (config_path, e))

    if seed is not None:
        app.config['GRIDTREE_SEED'] = seed
    if trace_path is not None:
        app.config['GRIDTREE_TRACE_PATH'] = os.path.abspath(trace_path)

    GridTreeManager(app, config_dir=os.path.dirname(path))
    return app


def handle_errors(command):
    """Report GridTreeErrors on standard error and exit with their code."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except GridTreeError as e:
            click.echo('Error: %s' % e, err=True)
            raise click.exceptions.Exit(exit_code_for(e))

    return wrapper


class Options(object):
    def __init__(self, config_path, trace_path, seed, out_path):
        self.config_path = config_path
        self.trace_path = trace_path
        self.seed = seed
        self.out_path = out_path

    def manager(self):
        return create_app(self.config_path, self.seed, self.trace_path).gridtree_manager


@click.group()
@click.option('--config', 'config_path', required=True, help='Scenario config file.')
@click.option('--trace', 'trace_path', default=None, help='Trace CSV, overrides GRIDTREE_TRACE_PATH.')
@click.option('--seed', type=int, default=None, help='Overrides GRIDTREE_SEED.')
@click.option('--out', 'out_path', default=None, help='Write a structured report to this path.')
@click.pass_context
def cli(ctx, config_path, trace_path, seed, out_path):
    """Grid-based hierarchical clustering index trees for sensor fields."""
    ctx.obj = Options(config_path, trace_path, seed, out_path)


@cli.command('build-tree')
@click.pass_obj
@handle_errors
def build_tree(options):
    """Print the canonical index tree."""
    manager = options.manager()
    deployment = manager.deploy(manager.load_traces())
    text = serialize_tree(deployment.tree)
    click.echo(text, nl=False)
    if options.out_path:
        with open(options.out_path, 'w') as f:
            f.write(text)


@cli.command('run')
@click.pass_obj
@handle_errors
def run_command(options):
    """Print per-tick energy and accuracy for the configured mode."""
    manager = options.manager()
    result = manager.run(manager.load_traces())
    mode = 'dedup' if manager.scenario.dedup else 'normal'
    report = manager.make_report({mode: result})
    report.check_totals()

    click.echo('tick,energy,error')
    errors = dict(report.accuracy[mode])
    for tick, energy in report.series[mode]:
        click.echo('%d,%s,%s' % (tick, format_energy(energy), format_error(errors[tick])))
    click.echo('total,%s,' % format_energy(report.totals[mode]))
    if options.out_path:
        report.write(options.out_path)


@cli.command('compare-dedup')
@click.pass_obj
@handle_errors
def compare_dedup(options):
    """Run the scenario without and with dedup and print both energy series."""
    manager = options.manager()
    report = manager.make_report(manager.compare_dedup(manager.load_traces()))
    report.check_totals()
    if manager.GRIDTREE_REPORT_NOTE:
        click.echo('# %s' % manager.GRIDTREE_REPORT_NOTE)
    for row in report.comparison_rows():
        click.echo(row)
    if options.out_path:
        report.write(options.out_path)


def parse_counts(ctx, param, value):
    try:
        return [int(token) for token in value.split(',') if token.strip()]
    except ValueError:
        raise click.BadParameter('expected comma-separated integers, got %r' % value)


@cli.command('sweep')
@click.option('--counts', callback=parse_counts, default='1,2,3,4', show_default=True,
              help='Comma-separated cluster counts.')
@click.option('--metric', type=click.Choice(['node', 'aggregate']), default='node', show_default=True)
@click.option('--workers', type=click.IntRange(min=1), default=1, show_default=True,
              help='Runs executed concurrently.')
@click.pass_obj
@handle_errors
def sweep(options, counts, metric, workers):
    """Print the mean accuracy error per cluster count."""
    manager = options.manager()
    rows = manager.sweep(manager.load_traces(), counts, metric=metric, workers=workers)
    click.echo('clusters,error')
    for count, error in rows:
        click.echo('%d,%s' % (count, format_error(error)))
    if options.out_path:
        manager.make_sweep_report(metric, rows).write(options.out_path)


def format_value(value):
    return '%d' % value if float(value).is_integer() else repr(float(value))


@cli.command('query')
@click.argument('query')
@click.option('--exact', is_flag=True, help='Combine raw node readings instead of stored cluster values.')
@click.pass_obj
@handle_errors
def query(options, query, exact):
    """Answer QUERY, given as "x1 y1 x2 y2 t_start t_end fn"."""
    manager = options.manager()
    value, cells = manager.query(manager.load_traces(), query, exact=exact)
    click.echo('value=%s cells=%s' % (format_value(value), ','.join(str(cell) for cell in cells)))
    if options.out_path:
        manager.make_query_report(query, exact, format_value(value), cells).write(options.out_path)


def main(args=None):
    return cli.main(args=args, prog_name='gridtree')


if __name__ == '__main__':
    main()
