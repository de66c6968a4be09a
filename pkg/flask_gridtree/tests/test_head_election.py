import numpy as np
import pytest

from flask_gridtree import (ConfigError, DeadNodeError, HeadPolicy, NoAliveMemberError, elect_head,
                            node_density)
from flask_gridtree.head_election import elect_cell_heads

from .tst_utils import make_field, random_field


def test_head_policy_validation():
    with pytest.raises(ConfigError):
        HeadPolicy('fastest')
    with pytest.raises(ConfigError):
        HeadPolicy(HeadPolicy.WEIGHTED, density_range=0.0)


def test_node_density():
    field = make_field([(1, 1), (50, 50), (52, 50), (54, 50)])
    nodes = field.nodes
    # Isolated node counts itself only
    assert node_density(nodes[1], nodes, within=5.0) == 1
    # Every alive node within range
    assert node_density(nodes[2], nodes, within=1000.0) == 4
    assert node_density(nodes[3], nodes, within=2.0) == 3

    dead = nodes[1].with_energy(0.0)
    with pytest.raises(DeadNodeError):
        node_density(dead, nodes)


def test_weighted_prefers_density_times_energy():
    # Node 2 has two neighbours, nodes 1 and 3 have one each
    field = make_field([(1, 1), (3, 1), (5, 1)], cell_size=10.0)
    cell = field.cells[0]
    assert elect_head(cell, field.nodes, HeadPolicy(density_range=2.5), rng_seed=0) == 2

    # Energy outweighs density
    nodes = dict(field.nodes)
    nodes[3] = nodes[3].with_energy(50000.0)
    assert elect_head(cell, nodes, HeadPolicy(density_range=2.5), rng_seed=0) == 3


def test_weighted_tie_goes_to_lowest_id():
    field = make_field([(1, 1), (9, 9)])
    cell = field.cells[0]
    assert elect_head(cell, field.nodes, HeadPolicy(density_range=1.0), rng_seed=0) == 1


def test_elect_head_needs_an_alive_member():
    field = make_field([(1, 1)])
    nodes = {1: field.nodes[1].with_energy(0.0)}
    with pytest.raises(NoAliveMemberError):
        elect_head(field.cells[0], nodes, HeadPolicy(), rng_seed=0)


def test_random_rotation_is_seeded():
    policy = HeadPolicy(HeadPolicy.RANDOM_ROTATION)
    field = make_field([(1, 1), (2, 2), (3, 3), (4, 4), (5, 5)])
    cell = field.cells[0]
    first = elect_head(cell, field.nodes, policy, rng_seed=7)
    assert first in cell.members
    assert elect_head(cell, field.nodes, policy, rng_seed=7) == first


def test_random_rotation_skips_dead_members():
    policy = HeadPolicy(HeadPolicy.RANDOM_ROTATION)
    field = make_field([(1, 1), (2, 2), (3, 3)])
    cell = field.cells[0]
    nodes = dict(field.nodes)
    nodes[1] = nodes[1].with_energy(0.0)
    nodes[3] = nodes[3].with_energy(0.0)
    for seed in range(10):
        assert elect_head(cell, nodes, policy, rng_seed=seed) == 2


def test_seed_changes_random_heads_but_not_weighted_heads():
    field = random_field(np.random.default_rng(3), max_per_cell=5, occupancy=0.5)

    random_policy = HeadPolicy(HeadPolicy.RANDOM_ROTATION)
    heads_0 = [cell.head for cell in elect_cell_heads(field, random_policy, 0).cells]
    heads_1 = [cell.head for cell in elect_cell_heads(field, random_policy, 1).cells]
    assert heads_0 != heads_1

    weighted = HeadPolicy()
    heads_0 = [cell.head for cell in elect_cell_heads(field, weighted, 0).cells]
    heads_1 = [cell.head for cell in elect_cell_heads(field, weighted, 1).cells]
    assert heads_0 == heads_1


def test_every_nonempty_cell_gets_a_member_as_head():
    field = random_field(np.random.default_rng(5))
    for cell in field.cells:
        if cell.members:
            assert cell.head in cell.members
        else:
            assert cell.head is None


def test_weighted_head_ignores_a_common_energy_scale():
    rng = np.random.default_rng(8)
    for _ in range(20):
        field = random_field(rng, max_per_cell=6, occupancy=0.5)
        energies = {node_id: float(rng.uniform(1.0, 100.0)) for node_id in field.nodes}
        nodes = {node_id: node.with_energy(energies[node_id]) for node_id, node in field.nodes.items()}
        for factor in (0.5, 2.0, 1024.0):
            scaled = {node_id: node.with_energy(energies[node_id] * factor) for node_id, node in field.nodes.items()}
            for cell in field.nonempty_cells:
                assert (elect_head(cell, scaled, HeadPolicy(), rng_seed=0)
                        == elect_head(cell, nodes, HeadPolicy(), rng_seed=0))
