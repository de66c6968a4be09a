import math
import os

import numpy as np
import pytest

from flask_gridtree import (ClusterBounds, ConfigError, QueryError, Rect, RegionQuery, ReportRule,
                            ScenarioConfig, accuracy_sweep, answer_query, build_clusters, build_index_tree,
                            node_accuracy, parse_query, read_traces, route_query, run)
from flask_gridtree.tests.tst_app import PRESETS_DIR

from .tst_utils import brute_force_cells, constant_traces, make_field, random_field, random_traces


def test_parse_query():
    query = parse_query('0 0 20 10 1 3 min')
    assert query == RegionQuery(Rect(0.0, 0.0, 20.0, 10.0), 1, 3, 'min')
    # Corners may come in any order
    assert parse_query(' 20 10  0 0 1 1 avg ').region == Rect(0.0, 0.0, 20.0, 10.0)

    for text in ('0 0 20 10 1 3', '0 0 20 10 1 3 median', '0 0 x 10 1 3 avg', '0 0 0 10 1 3 avg',
                 '0 0 20 10 3 1 avg', '0 0 20 10 1.5 3 avg', ''):
        with pytest.raises(QueryError):
            parse_query(text)


def four_by_four():
    positions = [(col * 10 + 5, row * 10 + 5) for row in range(4) for col in range(4)]
    field = make_field(positions, width=40.0, height=40.0)
    clusters = build_clusters(field, ClusterBounds(1, 4), 4)
    return build_index_tree(clusters, field), field


def test_route_query_examples():
    tree, field = four_by_four()
    assert route_query(tree, field, Rect(0, 0, 40, 40)) == frozenset(range(16))
    assert route_query(tree, field, Rect(50, 50, 60, 60)) == frozenset()
    # Touching an edge is not an intersection
    assert route_query(tree, field, Rect(40, 0, 50, 40)) == frozenset()
    assert route_query(tree, field, Rect(12, 2, 28, 8)) == frozenset([1, 2])


def test_route_query_matches_brute_force():
    rng = np.random.default_rng(1)
    field = random_field(rng, occupancy=0.6)
    clusters = build_clusters(field, ClusterBounds(1, 6), 6)
    tree = build_index_tree(clusters, field)
    mismatches = 0
    for _ in range(1000):
        x0, x1 = sorted(rng.uniform(-10, 110, size=2))
        y0, y1 = sorted(rng.uniform(-10, 110, size=2))
        if x0 == x1 or y0 == y1:
            continue
        region = Rect(x0, y0, x1, y1)
        if route_query(tree, field, region) != brute_force_cells(field, region):
            mismatches += 1
    assert mismatches == 0


def witness_result(aggregate='avg'):
    positions = [(5, 5), (12, 5), (15, 5), (18, 5)]
    traces = constant_traces(positions, [2.0, 22.0, 22.0, 22.0], 3)
    config = ScenarioConfig(field_width=20.0, field_height=10.0, cell_size=10.0, base_station=(10.0, 5.0),
                            bounds=ClusterBounds(1, 2, 10), target_clusters=2, coverage_radius=6.0,
                            comm_range=50.0, aggregate=aggregate)
    return run(config, traces)


def test_single_cell_single_tick_is_the_stored_value():
    result = witness_result()
    tree = result.deployment.tree
    value, cells = answer_query(parse_query('11 1 19 9 0 0 avg'), tree, result.states)
    assert cells == (1,)
    assert value == result.states[0].stored[tree.cell_owner[1]] == 22.0


def test_min_over_two_cells():
    result = witness_result()
    value, cells = answer_query(parse_query('0 0 20 10 0 2 min'), result.deployment.tree, result.states)
    assert (value, cells) == (2.0, (0, 1))


def test_whole_field_avg_is_an_average_of_averages():
    result = witness_result()
    tree = result.deployment.tree
    value, _ = answer_query(parse_query('0 0 20 10 0 2 avg'), tree, result.states)
    assert value == 12.0
    # Raw leaf readings recover the true mean
    value, _ = answer_query(parse_query('0 0 20 10 0 2 avg'), tree, result.states, exact=True)
    assert value == 17.0


def test_min_and_max_ignore_tree_shape():
    rng = np.random.default_rng(2)
    traces = random_traces(rng, 40, 5, width=40.0, height=40.0)
    answers = {}
    for target in (1, 2, 4):
        config = ScenarioConfig(field_width=40.0, field_height=40.0, cell_size=10.0, base_station=(20.0, 20.0),
                                bounds=ClusterBounds(1, 4, 1000), target_clusters=target,
                                coverage_radius=60.0, comm_range=100.0)
        for fn in ('min', 'max'):
            result = run(config.replace(aggregate=fn), traces)
            value, _ = answer_query(parse_query('0 0 40 40 0 4 %s' % fn), result.deployment.tree, result.states)
            answers.setdefault(fn, set()).add(value)
    assert len(answers['min']) == 1
    assert len(answers['max']) == 1


def test_flat_tree_avg_matches_ground_truth():
    rng = np.random.default_rng(3)
    traces = random_traces(rng, 30, 1, width=40.0, height=40.0)
    config = ScenarioConfig(field_width=40.0, field_height=40.0, cell_size=10.0, base_station=(20.0, 20.0),
                            bounds=ClusterBounds(1, 1, 1000), target_clusters=1, coverage_radius=60.0,
                            comm_range=100.0, report_rule=ReportRule(0.0))
    result = run(config, traces)
    value, _ = answer_query(parse_query('0 0 40 40 0 0 avg'), result.deployment.tree, result.states)
    truth = math.fsum(traces.value(node_id, 0) for node_id in traces.node_ids) / len(traces.node_ids)
    assert abs(value - truth) <= 1e-9


def test_answer_query_errors():
    result = witness_result()
    tree = result.deployment.tree
    with pytest.raises(QueryError):
        answer_query(parse_query('30 30 40 40 0 0 avg'), tree, result.states)    # no cells matched
    with pytest.raises(QueryError):
        answer_query(parse_query('0 0 20 10 0 7 avg'), tree, result.states)      # window too long


def test_no_stored_values_in_window():
    positions = [(5, 5)]
    traces = constant_traces(positions, [1.0], 2)
    # The only node cannot afford a single transmission
    config = ScenarioConfig(field_width=20.0, field_height=10.0, cell_size=10.0, base_station=(15.0, 5.0),
                            bounds=ClusterBounds(1, 1, 10), coverage_radius=6.0, comm_range=50.0,
                            initial_energy=10.0)
    result = run(config, traces)
    assert result.ledger.drops
    with pytest.raises(QueryError):
        answer_query(parse_query('0 0 10 10 0 1 avg'), result.deployment.tree, result.states)


def two_zone():
    traces = read_traces(os.path.join(PRESETS_DIR, 'two_zone_trace.csv'))
    config = ScenarioConfig(field_width=40.0, field_height=10.0, cell_size=10.0, base_station=(20.0, 5.0),
                            bounds=ClusterBounds(1, 4, 10), coverage_radius=50.0)
    return config, traces


def test_more_clusters_are_more_accurate():
    config, traces = two_zone()
    errors = dict(accuracy_sweep(config, [1, 2, 3, 4], traces))
    assert errors[4] < errors[1]
    assert errors[1] == 10.0
    assert errors[4] == 0.0


def test_aggregate_metric():
    config, traces = two_zone()
    errors = dict(accuracy_sweep(config, [1, 4], traces, metric='aggregate'))
    assert errors == {1: 0.0, 4: 0.0}
    with pytest.raises(ConfigError):
        accuracy_sweep(config, [1], traces, metric='median')


def test_homogeneous_field_has_no_error():
    config, traces = two_zone()
    flat = constant_traces([traces.positions[n] for n in traces.node_ids], [21.5] * len(traces.node_ids), 3)
    for _, error in accuracy_sweep(config, [1, 2, 3, 4], flat):
        assert error == 0.0


def test_sweep_counts_must_lie_within_bounds():
    config, traces = two_zone()
    with pytest.raises(ConfigError):
        accuracy_sweep(config, [1, 5], traces)


def test_parallel_sweep_keeps_count_order():
    config, traces = two_zone()
    serial = accuracy_sweep(config, [4, 1, 3, 2], traces)
    parallel = accuracy_sweep(config, [4, 1, 3, 2], traces, workers=3)
    assert parallel == serial
    assert [count for count, _ in parallel] == [4, 1, 3, 2]


def test_node_accuracy_of_the_witness():
    # Every node reads exactly what its own cluster stored
    assert node_accuracy(witness_result()) == 0.0
