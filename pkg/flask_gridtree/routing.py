"""This module implements header-to-base-station routing over the index tree.
"""

# Copyright (c) 2024 GridTree developers

from __future__ import annotations

import logging
import math
from typing import Dict, Tuple

import networkx as nx

from . import ConfigError, RoutingError
from .field import Field
from .index_tree import BASE, IndexTree

logger = logging.getLogger(__name__)


def _vertex_key(vertex):
    return (1, 0) if vertex == BASE else (0, vertex)


def _path_length(graph: nx.Graph, path) -> float:
    return math.fsum(graph[a][b]['weight'] for a, b in zip(path, path[1:]))


def header_graph(tree: IndexTree, field: Field, comm_range: float, subclusters: bool = False) -> nx.Graph:
    """Undirected graph over the top-level headers plus ``'base'``.

    With ``subclusters`` the sub-cluster headers become vertices too.
    Two vertices are linked when their Euclidean distance is at most ``comm_range``;
    edges carry that distance as ``weight``.
    """
    positions = {BASE: tuple(field.base_station)}
    clusters = tree.top_level() + (tree.reporting_clusters() if subclusters else ())
    for cluster in clusters:
        positions[cluster.header] = field.node(cluster.header).position

    graph = nx.Graph()
    graph.add_nodes_from(positions)
    vertices = sorted(positions, key=_vertex_key)
    for i, a in enumerate(vertices):
        for b in vertices[i + 1:]:
            distance = math.hypot(positions[a][0] - positions[b][0], positions[a][1] - positions[b][1])
            if distance <= comm_range:
                graph.add_edge(a, b, weight=distance)
    return graph


def _best_path(graph: nx.Graph, source, target) -> Tuple:
    candidates = list(nx.all_shortest_paths(graph, source, target))
    return tuple(min(candidates, key=lambda path: (_path_length(graph, path), [_vertex_key(v) for v in path])))


def shortest_route(tree: IndexTree, field: Field, comm_range: float) -> Dict[int, Tuple]:
    """Return, for every top-level header, its path to the base station.

    Paths are tuples of node ids ending with ``'base'``; the number of hops is
    ``len(path) - 1``. Among minimum-hop paths the one with the smaller total
    distance wins, then the lexicographically smaller one.

    Raises:
        ConfigError: ``comm_range`` is not positive.
        RoutingError: a header cannot reach the base station.
    """
    if not comm_range > 0:
        raise ConfigError('comm_range must be positive, got %r.' % (comm_range,))
    graph = header_graph(tree, field, comm_range)

    routes = {}
    for cluster in tree.top_level():
        header = cluster.header
        if header in routes:
            continue
        try:
            routes[header] = _best_path(graph, header, BASE)
        except nx.NetworkXNoPath:
            raise RoutingError('Header %d of cluster %d has no path to the base station within %s m.'
                               % (header, cluster.id, comm_range))
        logger.debug('shortest_route: header %d -> %d hops', header, len(routes[header]) - 1)
    return routes


def reporting_routes(tree: IndexTree, field: Field, comm_range: float) -> Dict[int, Tuple]:
    """Return the path of every reporting cluster, keyed by cluster id.

    A sub-cluster header reaches the header of its split cluster over links no
    longer than ``comm_range`` (without passing the base station), then follows
    that header's route.

    Raises:
        RoutingError: a sub-cluster header cannot reach its split cluster's header.
    """
    header_routes = shortest_route(tree, field, comm_range)
    relay_graph = None
    routes = {}
    for cluster in tree.reporting_clusters():
        if cluster.parent is None:
            routes[cluster.id] = header_routes[cluster.header]
            continue
        split_header = tree.clusters[cluster.parent].header
        relay = header_routes[split_header]
        if cluster.header == split_header:
            routes[cluster.id] = relay
            continue
        if relay_graph is None:
            relay_graph = header_graph(tree, field, comm_range, subclusters=True)
            relay_graph.remove_node(BASE)
        try:
            leg = _best_path(relay_graph, cluster.header, split_header)
        except nx.NetworkXNoPath:
            raise RoutingError('Sub-cluster header %d of cluster %d cannot reach header %d within %s m.'
                               % (cluster.header, cluster.id, split_header, comm_range))
        routes[cluster.id] = leg[:-1] + relay
        logger.debug('reporting_routes: sub-header %d -> %d hops', cluster.header, len(routes[cluster.id]) - 1)
    return routes


def hops(path: Tuple) -> int:
    return len(path) - 1
