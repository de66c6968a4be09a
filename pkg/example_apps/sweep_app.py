# This file contains an example Flask-GridTree application.
# It runs the bundled two-zone preset once per cluster count
# and prints how the accuracy error falls as clusters are added.

import os

from flask import Flask

from flask_gridtree import GridTreeManager

PRESETS_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
                           'flask_gridtree', 'presets')


def create_app():
    """ Flask application factory """
    app = Flask(__name__)
    app.config.from_pyfile(os.path.join(PRESETS_DIR, 'two_zone.cfg'))
    GridTreeManager(app, config_dir=PRESETS_DIR)
    return app


if __name__ == '__main__':
    app = create_app()
    manager = app.gridtree_manager
    traces = manager.load_traces()
    for metric in ('node', 'aggregate'):
        print('[%s]' % metric)
        for count, error in manager.sweep(traces, [1, 2, 3, 4], metric=metric, workers=2):
            print('%d clusters: %.6f' % (count, error))
