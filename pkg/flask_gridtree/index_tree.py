"""This module implements the hierarchical clustering index tree.

Grid cells are merged into clusters by proximity, clusters holding too many
nodes are broken into sub-clusters with K-Means, and the result is arranged
as a tree: base station -> cluster headers -> (sub-cluster headers) -> grid cells.
"""

# Copyright (c) 2024 GridTree developers

from __future__ import annotations

import dataclasses
import logging
import math
from types import MappingProxyType
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import ConfigError, TreeError
from .field import Field, Rect
from .head_election import HeadPolicy, elect_head
from .kmeans import kmeans

logger = logging.getLogger(__name__)

# Tree node kinds
BASE = 'base'
CLUSTER = 'cluster'
SUBCLUSTER = 'subcluster'
CELL = 'cell'

ROOT = (BASE, 0)


@dataclasses.dataclass(frozen=True)
class ClusterBounds(object):
    """``m`` and ``M`` bound the number of top-level clusters; ``split_threshold``
    is the largest node count a cluster may hold before it is broken."""
    m: int = 1
    M: int = 4
    split_threshold: int = 10

    def __post_init__(self):
        if not 1 <= self.m <= self.M:
            raise ConfigError('Cluster bounds must satisfy 1 <= m <= M, got m=%r, M=%r.' % (self.m, self.M))
        if self.split_threshold < 1:
            raise ConfigError('split_threshold must be >= 1, got %r.' % (self.split_threshold,))


@dataclasses.dataclass(frozen=True)
class Cluster(object):
    id: int
    cells: frozenset
    centroid: Tuple[float, float]
    header: int
    children: Tuple[int, ...] = ()
    parent: Optional[int] = None

    @property
    def is_split(self) -> bool:
        return bool(self.children)

    def with_children(self, subclusters: Iterable['Cluster']) -> 'Cluster':
        return dataclasses.replace(self, children=tuple(sub.id for sub in subclusters))


def cells_centroid(field: Field, cell_ids: Iterable[int]) -> Tuple[float, float]:
    centers = np.array([field.cell(cell_id).center for cell_id in sorted(cell_ids)], dtype=float)
    x, y = centers.mean(axis=0)
    return (float(x), float(y))


def alive_count(field: Field, cell_ids: Iterable[int]) -> int:
    count = 0
    for cell_id in cell_ids:
        for node_id in field.cell(cell_id).members:
            if field.node(node_id).alive:
                count += 1
    return count


def _elect_header(field: Field, cell_ids: Iterable[int], policy: HeadPolicy, seed: int) -> int:
    # The header comes from the heaviest member cell, lowest cell id on ties
    candidates = [field.cell(cell_id) for cell_id in sorted(cell_ids)
                  if any(field.node(n).alive for n in field.cell(cell_id).members)]
    if not candidates:
        raise TreeError('Cluster has no alive node to serve as header.')
    heaviest = max(candidates, key=lambda cell: (cell.weight, -cell.id))
    return elect_head(heaviest, field.nodes, policy, seed)


def build_clusters(field: Field, bounds: ClusterBounds, target: int,
                   policy: HeadPolicy = HeadPolicy(), seed: int = 0) -> List[Cluster]:
    """Merge nonempty cells into exactly ``target`` clusters by centroid proximity.

    Every nonempty cell starts as its own cluster. The pair of clusters with the
    smallest centroid distance is merged until ``target`` clusters remain; ties go
    to the lexicographically smallest pair of ids. A merged cluster keeps the
    smaller id, and the final clusters are renumbered 0.. in order of their
    smallest cell id.
    """
    nonempty = [cell.id for cell in field.nonempty_cells]
    if not nonempty:
        raise TreeError('The field has no nonempty cell to cluster.')
    if not bounds.m <= target <= bounds.M:
        raise TreeError('Target cluster count %d lies outside [m, M] = [%d, %d].'
                        % (target, bounds.m, bounds.M))
    if target > len(nonempty):
        raise TreeError('Target cluster count %d exceeds the %d nonempty cells.'
                        % (target, len(nonempty)))

    groups = {cell_id: [cell_id] for cell_id in nonempty}
    centroids = {cell_id: field.cell(cell_id).center for cell_id in nonempty}

    while len(groups) > target:
        ids = sorted(groups)
        points = np.array([centroids[i] for i in ids], dtype=float)
        distances = np.sqrt(((points[:, None, :] - points[None, :, :]) ** 2).sum(axis=2))
        distances[np.tril_indices(len(ids))] = np.inf
        # Row-major argmin picks the lexicographically smallest pair among equal distances
        i, j = np.unravel_index(int(np.argmin(distances)), distances.shape)
        keep, drop = ids[i], ids[j]
        groups[keep].extend(groups.pop(drop))
        del centroids[drop]
        centroids[keep] = cells_centroid(field, groups[keep])
        logger.debug('build_clusters: merged cluster %d into %d', drop, keep)

    clusters = []
    for new_id, old_id in enumerate(sorted(groups)):
        cells = frozenset(groups[old_id])
        clusters.append(Cluster(
            id=new_id,
            cells=cells,
            centroid=centroids[old_id],
            header=_elect_header(field, cells, policy, seed),
        ))
    return clusters


def should_split(cluster: Cluster, field: Field, split_threshold: int) -> bool:
    """True if the alive node count across the cluster's cells strictly exceeds ``split_threshold``."""
    return alive_count(field, cluster.cells) > split_threshold


def split_cluster(cluster: Cluster, field: Field, split_threshold: int, seed: int,
                  policy: HeadPolicy = HeadPolicy(), first_id: Optional[int] = None,
                  tol: float = 1e-9, max_iter: int = 100, restarts: int = 1) -> List[Cluster]:
    """Break ``cluster`` into ``ceil(n / split_threshold)`` sub-clusters with K-Means
    over its cell centers.

    Sub-cluster ids are ``first_id, first_id + 1, ...`` in order of their smallest
    cell id. ``first_id`` defaults to a block reserved for this cluster,
    ``len(field.cells) * (cluster.id + 1)``, which never collides with top-level
    ids or with the blocks of other clusters.
    """
    n = alive_count(field, cluster.cells)
    if n <= split_threshold:
        raise TreeError('Cluster %d holds %d nodes and does not exceed the split threshold %d.'
                        % (cluster.id, n, split_threshold))
    k = int(math.ceil(n / float(split_threshold)))
    cell_ids = sorted(cluster.cells)
    if k > len(cell_ids):
        raise TreeError('Cluster %d cannot be split into %d sub-clusters: it has only %d cells.'
                        % (cluster.id, k, len(cell_ids)))

    points = [field.cell(cell_id).center for cell_id in cell_ids]
    result = kmeans(points, k, seed=seed, tol=tol, max_iter=max_iter, restarts=restarts)

    groups = {}
    for cell_id, label in zip(cell_ids, result.assignments):
        groups.setdefault(label, []).append(cell_id)
    ordered = sorted(groups.values(), key=min)

    if first_id is None:
        first_id = len(field.cells) * (cluster.id + 1)

    subclusters = []
    for index, cells in enumerate(ordered):
        subclusters.append(Cluster(
            id=first_id + index,
            cells=frozenset(cells),
            centroid=cells_centroid(field, cells),
            header=_elect_header(field, cells, policy, seed),
            parent=cluster.id,
        ))
    logger.debug('split_cluster: cluster %d (%d nodes) -> %d sub-clusters', cluster.id, n, k)
    return subclusters


TreeKey = Tuple[str, int]


@dataclasses.dataclass(frozen=True, eq=False)
class IndexTree(object):
    """Rooted index tree with parent and child links in both directions.

    Keys are ``(kind, id)`` tuples where kind is one of
    ``'base'``, ``'cluster'``, ``'subcluster'`` and ``'cell'``.
    """
    field: Field
    clusters: Mapping[int, Cluster]
    parent: Mapping[TreeKey, TreeKey]
    children: Mapping[TreeKey, Tuple[TreeKey, ...]]
    boxes: Mapping[TreeKey, Rect]
    cell_owner: Mapping[int, int]
    root: TreeKey = ROOT

    def leaves(self) -> Tuple[int, ...]:
        return tuple(sorted(key[1] for key in self.parent if key[0] == CELL))

    def path_to_root(self, key: TreeKey) -> Tuple[TreeKey, ...]:
        path = [key]
        while path[-1] != self.root:
            path.append(self.parent[path[-1]])
        return tuple(path)

    def depth(self, key: TreeKey) -> int:
        return len(self.path_to_root(key)) - 1

    def top_level(self) -> Tuple[Cluster, ...]:
        return tuple(self.clusters[key[1]] for key in self.children.get(self.root, ()))

    def reporting_clusters(self) -> Tuple[Cluster, ...]:
        """Clusters whose headers receive node reports: unsplit clusters and sub-clusters."""
        return tuple(self.clusters[cluster_id] for cluster_id in sorted(set(self.cell_owner.values())))

    def header_of(self, cluster_id: int) -> int:
        return self.clusters[cluster_id].header


def build_index_tree(clusters: Sequence[Cluster], field: Field) -> IndexTree:
    """Arrange top-level clusters and their sub-clusters into an index tree.

    ``clusters`` holds the top-level clusters and the sub-clusters of every split
    cluster. Every top-level cluster hangs directly under the root; a split
    cluster's sub-clusters hang under its header, and grid cells are the leaves.
    """
    if not clusters:
        raise TreeError('Cannot build an index tree from zero clusters.')
    by_id = {}
    for cluster in clusters:
        if cluster.id in by_id:
            raise TreeError('Duplicate cluster id %d.' % cluster.id)
        by_id[cluster.id] = cluster

    parent = {}
    children = {ROOT: []}
    cell_owner = {}

    def attach_cells(key, owner):
        children[key] = []
        for cell_id in sorted(owner.cells):
            field.cell(cell_id)
            if cell_id in cell_owner:
                raise TreeError('Cell %d is claimed by more than one cluster.' % cell_id)
            cell_owner[cell_id] = owner.id
            parent[(CELL, cell_id)] = key
            children[key].append((CELL, cell_id))

    for cluster in sorted((c for c in clusters if c.parent is None), key=lambda c: c.id):
        key = (CLUSTER, cluster.id)
        parent[key] = ROOT
        children[ROOT].append(key)
        if not cluster.is_split:
            attach_cells(key, cluster)
            continue

        children[key] = []
        covered = set()
        for sub_id in sorted(cluster.children):
            sub = by_id.get(sub_id)
            if sub is None or sub.parent != cluster.id:
                raise TreeError('Cluster %d lists unknown sub-cluster %r.' % (cluster.id, sub_id))
            if covered & sub.cells:
                raise TreeError('Sub-clusters of cluster %d overlap.' % cluster.id)
            covered |= sub.cells
            sub_key = (SUBCLUSTER, sub.id)
            parent[sub_key] = key
            children[key].append(sub_key)
            attach_cells(sub_key, sub)
        if covered != set(cluster.cells):
            raise TreeError('Sub-clusters of cluster %d do not cover its cells.' % cluster.id)

    for cell in field.nonempty_cells:
        if cell.id not in cell_owner:
            raise TreeError('Cell %d is claimed by zero clusters.' % cell.id)

    # Bounding boxes, computed bottom-up, drive query pruning
    boxes = {}

    def box_of(key):
        if key[0] == CELL:
            boxes[key] = field.cell(key[1]).bounds
        else:
            box = None
            for child in children[key]:
                child_box = box_of(child)
                box = child_box if box is None else box.union(child_box)
            boxes[key] = box
        return boxes[key]

    box_of(ROOT)

    return IndexTree(
        field=field,
        clusters=MappingProxyType(by_id),
        parent=MappingProxyType(parent),
        children=MappingProxyType({key: tuple(value) for key, value in children.items()}),
        boxes=MappingProxyType(boxes),
        cell_owner=MappingProxyType(cell_owner),
    )


def serialize_tree(tree: IndexTree) -> str:
    """Render the canonical line format ``depth<TAB>kind<TAB>id<TAB>parent_id``.

    Nodes are listed depth first with children sorted by id; the root's id is
    ``base`` and its parent is ``-``.
    """
    lines = []

    def visit(key, depth):
        kind, ident = key
        if key == tree.root:
            lines.append('%d\t%s\t%s\t%s' % (depth, BASE, BASE, '-'))
        else:
            parent = tree.parent[key]
            parent_id = BASE if parent == tree.root else str(parent[1])
            lines.append('%d\t%s\t%d\t%s' % (depth, kind, ident, parent_id))
        for child in sorted(tree.children.get(key, ()), key=lambda k: k[1]):
            visit(child, depth + 1)

    visit(tree.root, 0)
    return '\n'.join(lines) + '\n'
