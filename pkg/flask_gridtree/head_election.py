"""This module implements cluster-head election policies.

Two policies are available: a LEACH-style seeded rotation, and a weighted
election where denser nodes with more remaining energy weigh more.
"""

# Copyright (c) 2024 GridTree developers

from __future__ import annotations

import dataclasses
from typing import Mapping, Optional

import numpy as np

from . import ConfigError, DeadNodeError, NoAliveMemberError, UnknownNodeError
from .field import Field, GridCell, SensorNode


@dataclasses.dataclass(frozen=True)
class HeadPolicy(object):
    """Head election policy.

    ``variant`` is ``HeadPolicy.RANDOM_ROTATION`` or ``HeadPolicy.WEIGHTED``.
    ``density_range`` is the neighbourhood radius used by the weighted variant.
    """
    RANDOM_ROTATION = 'random'
    WEIGHTED = 'weighted'

    variant: str = WEIGHTED
    density_range: float = 30.0

    def __post_init__(self):
        if self.variant not in (self.RANDOM_ROTATION, self.WEIGHTED):
            raise ConfigError("Head policy must be 'random' or 'weighted', got %r." % (self.variant,))
        if self.variant == self.WEIGHTED and not self.density_range > 0:
            raise ConfigError('Head policy density_range must be positive.')


def node_density(node: SensorNode, nodes: Mapping[int, SensorNode],
                 within: Optional[float] = None) -> int:
    """Count alive nodes within ``within`` meters of ``node``, the node itself included.

    ``within`` defaults to the node's own transmission range. An isolated node
    has density 1; when every alive node is in range the density is n.
    """
    if not node.alive:
        raise DeadNodeError('Node %d is dead and has no density.' % node.id)
    radius = node.transmission_range if within is None else within
    density = 0
    for other in nodes.values():
        if other.alive and node.distance_to(other.x, other.y) <= radius:
            density += 1
    return density


def elect_head(cell: GridCell, nodes: Mapping[int, SensorNode], policy: HeadPolicy,
               rng_seed: int) -> int:
    """Elect the head of ``cell`` among its alive members.

    Args:
        cell: The grid cell.
        nodes: All nodes of the field, keyed by id.
        policy: The election policy.
        rng_seed: Seed for the random rotation variant.

    Returns:
        The id of the elected node.
    """
    alive = []
    for node_id in sorted(cell.members):
        node = nodes.get(node_id)
        if node is None:
            raise UnknownNodeError('Cell %d lists unknown member %r.' % (cell.id, node_id))
        if node.alive:
            alive.append(node)
    if not alive:
        raise NoAliveMemberError('Cell %d has no alive member to elect.' % cell.id)

    if policy.variant == HeadPolicy.RANDOM_ROTATION:
        # Heads are elected once per deployment, so no member has served yet this epoch
        rng = np.random.default_rng([rng_seed % 2 ** 32, cell.id])
        return alive[int(rng.integers(len(alive)))].id

    best_id, best_weight = None, None
    for node in alive:
        weight = node_density(node, nodes, policy.density_range) * node.residual_energy
        if best_weight is None or weight > best_weight:
            best_id, best_weight = node.id, weight
    return best_id


def elect_cell_heads(field: Field, policy: HeadPolicy, rng_seed: int) -> Field:
    """Return a copy of ``field`` where every nonempty cell has an elected head."""
    cells = []
    for cell in field.cells:
        if cell.members and any(field.nodes[node_id].alive for node_id in cell.members):
            cell = dataclasses.replace(cell, head=elect_head(cell, field.nodes, policy, rng_seed))
        cells.append(cell)
    return field.replace_cells(cells)
