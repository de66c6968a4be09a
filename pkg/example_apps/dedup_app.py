# This file contains an example Flask-GridTree application.
# To keep the example simple, we are applying some unusual techniques:
# - Placing everything in one file
# - Using class-based configuration (instead of file-based configuration)
# - Generating a synthetic trace in memory (instead of reading a CSV file)

import random

from flask import Flask

from flask_gridtree import GridTreeManager, TraceTable, transmission_dropped


# Class-based application configuration
class ConfigClass(object):
    """ Flask application config """

    # Flask-GridTree settings
    GRIDTREE_FIELD_WIDTH = 100.0
    GRIDTREE_FIELD_HEIGHT = 100.0
    GRIDTREE_CELL_SIZE = 25.0
    GRIDTREE_BASE_STATION_X = 50.0
    GRIDTREE_BASE_STATION_Y = 50.0
    GRIDTREE_TARGET_CLUSTERS = 4
    GRIDTREE_SPLIT_THRESHOLD = 1000
    GRIDTREE_COVERAGE_RADIUS = 150.0
    GRIDTREE_REPORT_DELTA = 0.5
    GRIDTREE_BOOTSTRAP_TICKS = 1


def make_traces(node_count=60, ticks=20, seed=7):
    """Random node positions with slowly drifting readings."""
    rng = random.Random(seed)
    rows = []
    for node_id in range(1, node_count + 1):
        x, y = rng.uniform(0, 100), rng.uniform(0, 100)
        value = 20.0 + x / 10.0
        for tick in range(ticks):
            value += rng.choice((-1.0, 0.0, 0.0, 1.0))
            rows.append((node_id, x, y, tick, value))
    return TraceTable.from_rows(rows)


def create_app():
    """ Flask application factory """

    # Create Flask app load app.config
    app = Flask(__name__)
    app.config.from_object(__name__ + '.ConfigClass')

    # Setup Flask-GridTree
    GridTreeManager(app)

    @transmission_dropped.connect
    def _on_drop(sender, event, **extra):
        app.logger.warning('report from node %d dropped at tick %d: %s', event.node_id, event.tick, event.reason)

    return app


# Compare normal and dedup energy
if __name__ == '__main__':
    app = create_app()
    manager = app.gridtree_manager
    report = manager.make_report(manager.compare_dedup(make_traces()))
    for row in report.comparison_rows():
        print(row)
