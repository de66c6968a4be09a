import math

import numpy as np
import pytest

from flask_gridtree import (Cluster, ClusterBounds, ConfigError, TreeError, build_clusters,
                            build_index_tree, serialize_tree, should_split, split_cluster)
from flask_gridtree.index_tree import CELL, ROOT

from .tst_utils import make_field, random_field


def cell_sets(clusters):
    return sorted(sorted(cluster.cells) for cluster in clusters)


def test_cluster_bounds_validation():
    with pytest.raises(ConfigError):
        ClusterBounds(m=0, M=3)
    with pytest.raises(ConfigError):
        ClusterBounds(m=4, M=3)
    with pytest.raises(ConfigError):
        ClusterBounds(m=1, M=3, split_threshold=0)


def test_target_one_merges_everything():
    field = make_field([(5, 5), (55, 5), (95, 95), (35, 65)])
    clusters = build_clusters(field, ClusterBounds(1, 4), 1)
    assert len(clusters) == 1
    assert clusters[0].cells == frozenset(cell.id for cell in field.nonempty_cells)
    assert clusters[0].header in field.nodes


def test_corner_pairs_merge():
    # Four corner cells, each with a neighbour cell right next to it
    positions = [(5, 5), (15, 5), (95, 5), (85, 5), (5, 95), (15, 95), (95, 95), (85, 95)]
    field = make_field(positions)
    clusters = build_clusters(field, ClusterBounds(1, 4), 4)
    assert cell_sets(clusters) == [[0, 1], [8, 9], [90, 91], [98, 99]]
    assert [cluster.id for cluster in clusters] == [0, 1, 2, 3]


def test_centroid_is_mean_of_cell_centers():
    field = make_field([(5, 5), (15, 5), (25, 5)])
    (cluster,) = build_clusters(field, ClusterBounds(1, 2), 1)
    assert cluster.centroid == pytest.approx((15.0, 5.0))


def test_header_comes_from_heaviest_cell():
    field = make_field([(5, 5), (55, 5), (56, 6)])
    (cluster,) = build_clusters(field, ClusterBounds(1, 2), 1)
    assert cluster.header in field.cell_at(55, 5).members


def test_build_clusters_errors():
    field = make_field([(5, 5), (55, 5)])
    with pytest.raises(TreeError):
        build_clusters(field, ClusterBounds(1, 4), 3)     # more clusters than nonempty cells
    with pytest.raises(TreeError):
        build_clusters(field, ClusterBounds(2, 4), 1)     # below m

    empty = make_field([(5, 5)], energy=0.0)
    with pytest.raises(TreeError):
        build_clusters(empty, ClusterBounds(1, 4), 1)


def test_merging_is_nested():
    field = random_field(np.random.default_rng(8))
    bounds = ClusterBounds(1, 8)
    for target in range(1, 8):
        coarse = [set(c.cells) for c in build_clusters(field, bounds, target)]
        fine = [set(c.cells) for c in build_clusters(field, bounds, target + 1)]
        for group in fine:
            assert any(group <= parent for parent in coarse)


def test_should_split():
    positions = [(1 + i, 1) for i in range(10)]
    field = make_field(positions, cell_size=50.0)
    (cluster,) = build_clusters(field, ClusterBounds(1, 1), 1)
    assert should_split(cluster, field, 4)
    assert not should_split(cluster, field, 10)

    field = make_field([(1, 1), (2, 1), (3, 1), (4, 1)], cell_size=50.0)
    (cluster,) = build_clusters(field, ClusterBounds(1, 1), 1)
    assert not should_split(cluster, field, 4)

    empty = Cluster(id=0, cells=frozenset([3]), centroid=(0.0, 0.0), header=1)
    assert not should_split(empty, field, 1)

    unknown = Cluster(id=0, cells=frozenset([999]), centroid=(0.0, 0.0), header=1)
    with pytest.raises(TreeError):
        should_split(unknown, field, 1)


def test_split_into_ceil_n_over_threshold():
    # 10 nodes over 5 cells
    positions = [(x + dx, 5) for x in (5, 25, 45, 65, 85) for dx in (-1, 1)]
    field = make_field(positions)
    (cluster,) = build_clusters(field, ClusterBounds(1, 1), 1)
    subclusters = split_cluster(cluster, field, 4, seed=0)
    assert len(subclusters) == math.ceil(10 / 4)
    union = set()
    for sub in subclusters:
        assert not union & sub.cells
        union |= sub.cells
        assert sub.parent == cluster.id
        assert sub.header in {n for c in sub.cells for n in field.cell(c).members}
    assert union == set(cluster.cells)
    assert [sub.id for sub in subclusters] == [len(field.cells) + i for i in range(3)]


def test_split_follows_spatial_groups():
    positions = [(5, 5), (15, 5), (5, 15), (85, 85), (95, 85), (85, 95)]
    field = make_field(positions)
    (cluster,) = build_clusters(field, ClusterBounds(1, 1), 1)
    subclusters = split_cluster(cluster, field, 3, seed=0)
    assert cell_sets(subclusters) == [[0, 1, 10], [88, 89, 98]]


def test_split_errors():
    # 6 nodes in one cell cannot be split into 2 sub-clusters
    field = make_field([(1 + i, 1) for i in range(6)])
    (cluster,) = build_clusters(field, ClusterBounds(1, 1), 1)
    with pytest.raises(TreeError):
        split_cluster(cluster, field, 3, seed=0)
    with pytest.raises(TreeError):
        split_cluster(cluster, field, 6, seed=0)


def test_unsplit_tree_shape():
    field = make_field([(5, 5), (15, 5), (25, 5)])
    clusters = build_clusters(field, ClusterBounds(1, 1), 1)
    tree = build_index_tree(clusters, field)
    assert tree.leaves() == (0, 1, 2)
    for leaf in tree.leaves():
        assert tree.depth((CELL, leaf)) == 2
    assert serialize_tree(tree) == (
        '0\tbase\tbase\t-\n'
        '1\tcluster\t0\tbase\n'
        '2\tcell\t0\t0\n'
        '2\tcell\t1\t0\n'
        '2\tcell\t2\t0\n'
    )


def test_split_tree_shape():
    positions = [(5, 5), (15, 5), (5, 15), (85, 85), (95, 85), (85, 95)]
    field = make_field(positions)
    (cluster,) = build_clusters(field, ClusterBounds(1, 1), 1)
    subclusters = split_cluster(cluster, field, 3, seed=0)
    tree = build_index_tree([cluster.with_children(subclusters)] + subclusters, field)

    assert tree.children[ROOT] == (('cluster', 0),)
    assert tree.children[('cluster', 0)] == (('subcluster', 100), ('subcluster', 101))
    for leaf in tree.leaves():
        assert tree.depth((CELL, leaf)) == 3
    assert [c.id for c in tree.reporting_clusters()] == [100, 101]
    assert serialize_tree(tree).splitlines()[:3] == ['0\tbase\tbase\t-', '1\tcluster\t0\tbase',
                                                    '2\tsubcluster\t100\t0']


def test_parent_child_links_agree():
    field = random_field(np.random.default_rng(9))
    clusters = build_clusters(field, ClusterBounds(1, 4), 3)
    tree = build_index_tree(clusters, field)
    for parent, children in tree.children.items():
        for child in children:
            assert tree.parent[child] == parent


def test_build_index_tree_errors():
    field = make_field([(5, 5), (15, 5)])
    with pytest.raises(TreeError):
        build_index_tree([], field)

    only_first = Cluster(id=0, cells=frozenset([0]), centroid=(5.0, 5.0), header=1)
    with pytest.raises(TreeError):
        build_index_tree([only_first], field)

    overlapping = Cluster(id=1, cells=frozenset([0, 1]), centroid=(10.0, 5.0), header=2)
    with pytest.raises(TreeError):
        build_index_tree([only_first, overlapping], field)


def test_serialization_is_deterministic():
    field = random_field(np.random.default_rng(10))
    texts = set()
    for _ in range(3):
        clusters = build_clusters(field, ClusterBounds(1, 4), 4)
        texts.add(serialize_tree(build_index_tree(clusters, field)))
    assert len(texts) == 1


def test_random_tree_invariants():
    rng = np.random.default_rng(11)
    for _ in range(100):
        field = random_field(rng, occupancy=float(rng.uniform(0.05, 0.3)))
        nonempty = [cell.id for cell in field.nonempty_cells]
        bounds = ClusterBounds(1, min(5, len(nonempty)), int(rng.integers(2, 9)))
        target = int(rng.integers(bounds.m, bounds.M + 1))

        clusters = []
        for cluster in build_clusters(field, bounds, target):
            if should_split(cluster, field, bounds.split_threshold):
                n = sum(len(field.cell(c).members) for c in cluster.cells)
                subclusters = split_cluster(cluster, field, bounds.split_threshold, seed=0)
                assert len(subclusters) == math.ceil(n / bounds.split_threshold)
                union = set()
                for sub in subclusters:
                    assert not union & sub.cells
                    union |= sub.cells
                assert union == set(cluster.cells)
                clusters.append(cluster.with_children(subclusters))
                clusters.extend(subclusters)
            else:
                clusters.append(cluster)

        tree = build_index_tree(clusters, field)
        assert list(tree.leaves()) == nonempty
        for leaf in tree.leaves():
            assert len(tree.path_to_root((CELL, leaf))) - 1 in (2, 3)
