"""This module implements overlap detection between cluster coverage disks and
the exclusive node-to-cluster assignment used in dedup mode.
"""

# Copyright (c) 2024 GridTree developers

from __future__ import annotations

import dataclasses
import math
from types import MappingProxyType
from typing import Dict, Iterable, Mapping, Tuple

from . import CoverageError
from .field import Field
from .index_tree import Cluster


@dataclasses.dataclass(frozen=True, eq=False)
class CoverageMap(object):
    """Clusters covering every alive node.

    A cluster covers a node when the node lies within ``coverage_radius`` of the
    cluster centroid. ``positions`` keeps the node positions the map was built from.
    """
    coverage_radius: float
    covers: Mapping[int, frozenset]
    positions: Mapping[int, Tuple[float, float]]

    @property
    def overlaps(self) -> frozenset:
        """Nodes covered by two clusters or more."""
        return frozenset(node_id for node_id, ids in self.covers.items() if len(ids) >= 2)


def detect_overlaps(field: Field, clusters: Iterable[Cluster], coverage_radius: float) -> CoverageMap:
    if not coverage_radius > 0:
        raise CoverageError('coverage_radius must be positive, got %r.' % (coverage_radius,))
    clusters = list(clusters)

    covers = {}
    positions = {}
    for node in field.alive_nodes:
        ids = frozenset(cluster.id for cluster in clusters
                        if node.distance_to(*cluster.centroid) <= coverage_radius)
        if not ids:
            raise CoverageError('Node %d at (%s, %s) is not covered by any cluster within %s m.'
                                % (node.id, node.x, node.y, coverage_radius))
        covers[node.id] = ids
        positions[node.id] = node.position

    return CoverageMap(coverage_radius=float(coverage_radius),
                       covers=MappingProxyType(covers),
                       positions=MappingProxyType(positions))


def assign_exclusive(coverage: CoverageMap, clusters: Iterable[Cluster]) -> Dict[int, int]:
    """Map every node to its nearest covering centroid, lowest cluster id on ties."""
    centroids = {cluster.id: cluster.centroid for cluster in clusters}
    assignment = {}
    for node_id in sorted(coverage.covers):
        x, y = coverage.positions[node_id]

        def key(cluster_id):
            cx, cy = centroids[cluster_id]
            return (math.hypot(x - cx, y - cy), cluster_id)

        assignment[node_id] = min(coverage.covers[node_id], key=key)
    return assignment


def report_targets(coverage: CoverageMap, clusters: Iterable[Cluster],
                   dedup: bool) -> Dict[int, Tuple[int, ...]]:
    """Clusters each node reports to: the exclusive one in dedup mode, every covering one otherwise."""
    if dedup:
        return {node_id: (cluster_id,)
                for node_id, cluster_id in assign_exclusive(coverage, clusters).items()}
    return {node_id: tuple(sorted(ids)) for node_id, ids in sorted(coverage.covers.items())}
