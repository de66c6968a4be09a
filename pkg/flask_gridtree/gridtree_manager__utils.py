"""This module implements GridTreeManager utility methods.
"""

# Copyright (c) 2024 GridTree developers

import os

from . import ConfigError
from .query_engine import accuracy_sweep, answer_query, parse_query
from .report import QueryReport, RunReport, SweepReport
from .signals import cluster_split, tree_built
from .simulation import deploy, run
from .traces import read_traces


# This class mixes into the GridTreeManager class.
# Mixins allow for maintaining code and docs across several files.
class GridTreeManager__Utils(object):
    """Flask-GridTree utility methods."""

    def echo_config(self):
        """Render every setting as a ``KEY = repr(value)`` line, sorted by key.

        The result is itself a valid config file.
        """
        return ''.join('%s = %r\n' % (name, getattr(self, name)) for name in self.setting_names())

    def trace_path(self):
        """Resolve ``GRIDTREE_TRACE_PATH`` against the config directory."""
        if not self.GRIDTREE_TRACE_PATH:
            raise ConfigError('GRIDTREE_TRACE_PATH is not set. Set it in the config file or pass --trace.')
        return os.path.join(self.config_dir, self.GRIDTREE_TRACE_PATH)

    def load_traces(self, path=None):
        path = path or self.trace_path()
        traces = read_traces(path)
        self.app.logger.debug('Flask-GridTree: read %d nodes x %d ticks from %s',
                              len(traces.positions), traces.ticks, path)
        return traces

    def deploy(self, traces, scenario=None):
        """Build the deployment for ``traces`` and announce its tree and splits."""
        scenario = scenario or self.scenario
        deployment = deploy(scenario, traces)
        for cluster in deployment.clusters:
            if cluster.is_split:
                subclusters = [deployment.tree.clusters[sub_id] for sub_id in cluster.children]
                self.app.logger.info('Flask-GridTree: cluster %d split into %d sub-clusters',
                                     cluster.id, len(subclusters))
                cluster_split.send(self.app, cluster=cluster, subclusters=subclusters)
        tree_built.send(self.app, deployment=deployment)
        return deployment

    def run(self, traces, **overrides):
        """Run the scenario, with ``overrides`` applied to the ScenarioConfig."""
        scenario = self.scenario.replace(**overrides) if overrides else self.scenario
        result = run(scenario, traces, self.deploy(traces, scenario))
        self.app.logger.info('Flask-GridTree: %s run finished, %d ticks, total energy %.2f',
                             'dedup' if scenario.dedup else 'normal', len(result.states), result.total_energy())
        return result

    def compare_dedup(self, traces):
        """Run the identical scenario without and with dedup. Returns ``{'normal': ..., 'dedup': ...}``."""
        return {
            'normal': self.run(traces, dedup=False),
            'dedup': self.run(traces, dedup=True),
        }

    def sweep(self, traces, counts, metric='node', workers=1):
        return accuracy_sweep(self.scenario, counts, traces, metric=metric, workers=workers)

    def query(self, traces, text, exact=False):
        query = parse_query(text)
        result = self.run(traces)
        return answer_query(query, result.deployment.tree, result.states, exact=exact)

    def make_report(self, results):
        return RunReport.from_results(self.echo_config(), results, note=self.GRIDTREE_REPORT_NOTE)

    def make_sweep_report(self, metric, rows):
        return SweepReport(self.echo_config(), metric, tuple(rows), note=self.GRIDTREE_REPORT_NOTE)

    def make_query_report(self, text, exact, value, cells):
        return QueryReport(self.echo_config(), text, exact, value, tuple(cells), note=self.GRIDTREE_REPORT_NOTE)
