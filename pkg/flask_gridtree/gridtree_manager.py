"""This module implements the main GridTreeManager class for Flask-GridTree.
"""

# Copyright (c) 2024 GridTree developers

import math
import numbers

from flask import Flask

from . import ConfigError
from .gridtree_manager__settings import GridTreeManager__Settings
from .gridtree_manager__utils import GridTreeManager__Utils
from .head_election import HeadPolicy
from .index_tree import ClusterBounds
from .simulation import AGGREGATES, ReportRule, ScenarioConfig

SETTING_PREFIX = 'GRIDTREE_'


# The GridTreeManager is implemented across several source code files.
# Mixins are used to aggregate all member functions into the one GridTreeManager class for ease of customization.
class GridTreeManager(GridTreeManager__Settings, GridTreeManager__Utils):
    """ Scenario configuration, deployment and simulation runs for one Flask app.
    """

    def __init__(self, app=None, config_dir=None):
        """
        Args:
            app(Flask): The Flask application instance holding the ``GRIDTREE_*`` settings.
            config_dir(str): Directory that a relative ``GRIDTREE_TRACE_PATH`` is resolved against.
                Defaults to ``app.root_path``.

        Example:
            ``gridtree_manager = GridTreeManager(app)``
        """
        self.app = app
        if app:
            self.init_app(app, config_dir)

    def init_app(self, app, config_dir=None):
        # Perform Class type checking
        if not isinstance(app, Flask):
            raise TypeError("flask_gridtree.GridTreeManager.init_app(): Parameter 'app' is an instance of class '%s' "
                            "instead of a subclass of class 'flask.Flask'."
                            % app.__class__.__name__)

        # Bind Flask-GridTree to app
        app.gridtree_manager = self
        self.app = app
        self.config_dir = config_dir or app.root_path

        # Reject unknown GRIDTREE_ keys before anything else
        for key in sorted(app.config):
            if key.startswith(SETTING_PREFIX) and not hasattr(GridTreeManager__Settings, key):
                raise ConfigError("Unknown setting '%s'." % key)

        # Load app config settings
        # ------------------------
        # For each 'GridTreeManager.GRIDTREE_...' property: load settings from the app config.
        for attrib_name in self.setting_names():
            default_value = getattr(GridTreeManager__Settings, attrib_name)
            setattr(self, attrib_name, app.config.get(attrib_name, default_value))

        # Allow developers to customize GridTreeManager
        self.customize(app)

        # Make sure the settings are valid -- raise ConfigError if not
        self._check_settings(app)

        self.scenario = self.make_scenario()
        app.logger.debug('Flask-GridTree: scenario loaded, target=%d clusters, dedup=%s, seed=%d',
                         self.GRIDTREE_TARGET_CLUSTERS, self.GRIDTREE_DEDUP, self.GRIDTREE_SEED)

    def customize(self, app):
        """ Override this method to adjust settings before they are validated.

        Example::

            class LowEnergyGridTreeManager(GridTreeManager):

                def customize(self, app):
                    self.GRIDTREE_INITIAL_ENERGY = 500.0

            gridtree_manager = LowEnergyGridTreeManager(app)
        """

    @classmethod
    def setting_names(cls):
        return sorted(name for name in dir(GridTreeManager__Settings) if name.startswith(SETTING_PREFIX))

    def make_scenario(self):
        """Translate the validated settings into a ScenarioConfig."""
        return ScenarioConfig(
            field_width=float(self.GRIDTREE_FIELD_WIDTH),
            field_height=float(self.GRIDTREE_FIELD_HEIGHT),
            cell_size=float(self.GRIDTREE_CELL_SIZE),
            base_station=(float(self.GRIDTREE_BASE_STATION_X), float(self.GRIDTREE_BASE_STATION_Y)),
            bounds=ClusterBounds(self.GRIDTREE_MIN_CLUSTERS, self.GRIDTREE_MAX_CLUSTERS,
                                 self.GRIDTREE_SPLIT_THRESHOLD),
            target_clusters=self.GRIDTREE_TARGET_CLUSTERS,
            head_policy=HeadPolicy(self.GRIDTREE_HEAD_POLICY, float(self.GRIDTREE_DENSITY_RANGE)),
            coverage_radius=float(self.GRIDTREE_COVERAGE_RADIUS),
            comm_range=float(self.GRIDTREE_COMM_RANGE),
            report_rule=ReportRule(float(self.GRIDTREE_REPORT_DELTA)),
            forward_delta=None if self.GRIDTREE_FORWARD_DELTA is None else float(self.GRIDTREE_FORWARD_DELTA),
            unit_cost=float(self.GRIDTREE_UNIT_COST),
            initial_energy=float(self.GRIDTREE_INITIAL_ENERGY),
            transmission_range=float(self.GRIDTREE_TRANSMISSION_RANGE),
            dedup=self.GRIDTREE_DEDUP,
            seed=self.GRIDTREE_SEED,
            ticks=self.GRIDTREE_TICKS,
            bootstrap_ticks=self.GRIDTREE_BOOTSTRAP_TICKS,
            aggregate=self.GRIDTREE_AGGREGATE,
            kmeans_tol=float(self.GRIDTREE_KMEANS_TOL),
            kmeans_max_iter=self.GRIDTREE_KMEANS_MAX_ITER,
            kmeans_restarts=self.GRIDTREE_KMEANS_RESTARTS,
        )

    def _check_settings(self, app):
        """Verify settings. Produce a helpful error message for incorrect settings."""

        def is_int(value):
            return isinstance(value, numbers.Integral) and not isinstance(value, bool)

        def is_real(value):
            return (isinstance(value, numbers.Real) and not isinstance(value, bool)
                    and math.isfinite(value))

        def check(name, is_valid, expected):
            value = getattr(self, name)
            if not is_valid(value):
                raise ConfigError('%s must be %s, got %r.' % (name, expected, value))

        # Check numeric settings
        # ----------------------
        for name in ('GRIDTREE_FIELD_WIDTH', 'GRIDTREE_FIELD_HEIGHT', 'GRIDTREE_CELL_SIZE',
                     'GRIDTREE_DENSITY_RANGE', 'GRIDTREE_TRANSMISSION_RANGE', 'GRIDTREE_INITIAL_ENERGY',
                     'GRIDTREE_UNIT_COST', 'GRIDTREE_COVERAGE_RADIUS', 'GRIDTREE_COMM_RANGE'):
            check(name, lambda v: is_real(v) and v > 0, 'a positive number')
        for name in ('GRIDTREE_BASE_STATION_X', 'GRIDTREE_BASE_STATION_Y'):
            check(name, is_real, 'a number')
        for name in ('GRIDTREE_REPORT_DELTA', 'GRIDTREE_KMEANS_TOL'):
            check(name, lambda v: is_real(v) and v >= 0, 'a number >= 0')
        check('GRIDTREE_FORWARD_DELTA', lambda v: v is None or (is_real(v) and v >= 0), 'None or a number >= 0')

        for name in ('GRIDTREE_MIN_CLUSTERS', 'GRIDTREE_MAX_CLUSTERS', 'GRIDTREE_TARGET_CLUSTERS',
                     'GRIDTREE_SPLIT_THRESHOLD', 'GRIDTREE_KMEANS_MAX_ITER', 'GRIDTREE_KMEANS_RESTARTS'):
            check(name, lambda v: is_int(v) and v >= 1, 'an integer >= 1')
        check('GRIDTREE_BOOTSTRAP_TICKS', lambda v: is_int(v) and v >= 0, 'an integer >= 0')
        check('GRIDTREE_SEED', is_int, 'an integer')
        check('GRIDTREE_TICKS', lambda v: v is None or (is_int(v) and v >= 1), 'None or an integer >= 1')

        # Check choices and flags
        # -----------------------
        check('GRIDTREE_DEDUP', lambda v: isinstance(v, bool), 'True or False')
        check('GRIDTREE_HEAD_POLICY', lambda v: v in (HeadPolicy.WEIGHTED, HeadPolicy.RANDOM_ROTATION),
              "'weighted' or 'random'")
        check('GRIDTREE_AGGREGATE', lambda v: v in AGGREGATES, "'avg', 'min' or 'max'")
        check('GRIDTREE_TRACE_PATH', lambda v: v is None or isinstance(v, str), 'None or a path')
        check('GRIDTREE_REPORT_NOTE', lambda v: isinstance(v, str), 'a string')

        # Check cluster bounds
        # --------------------
        if self.GRIDTREE_MIN_CLUSTERS > self.GRIDTREE_MAX_CLUSTERS:
            raise ConfigError('GRIDTREE_MIN_CLUSTERS (%d) must not exceed GRIDTREE_MAX_CLUSTERS (%d).'
                              % (self.GRIDTREE_MIN_CLUSTERS, self.GRIDTREE_MAX_CLUSTERS))
        if not self.GRIDTREE_MIN_CLUSTERS <= self.GRIDTREE_TARGET_CLUSTERS <= self.GRIDTREE_MAX_CLUSTERS:
            raise ConfigError('GRIDTREE_TARGET_CLUSTERS (%d) must lie within [GRIDTREE_MIN_CLUSTERS, '
                              'GRIDTREE_MAX_CLUSTERS] = [%d, %d].'
                              % (self.GRIDTREE_TARGET_CLUSTERS, self.GRIDTREE_MIN_CLUSTERS,
                                 self.GRIDTREE_MAX_CLUSTERS))
        if self.GRIDTREE_TICKS is not None and self.GRIDTREE_BOOTSTRAP_TICKS >= self.GRIDTREE_TICKS:
            raise ConfigError('GRIDTREE_BOOTSTRAP_TICKS (%d) must be smaller than GRIDTREE_TICKS (%d).'
                              % (self.GRIDTREE_BOOTSTRAP_TICKS, self.GRIDTREE_TICKS))
