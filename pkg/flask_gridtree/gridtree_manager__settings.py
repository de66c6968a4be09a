"""This module defines GridTreeManager settings and their defaults.
"""

# Copyright (c) 2024 GridTree developers

# This class mixes into the GridTreeManager class.
# Mixins allow for maintaining code and docs across several files.
class GridTreeManager__Settings(object):
    """Flask-GridTree settings and their defaults.

    .. This hack shows a header above the _next_ section
    .. code-block:: none

        Field geometry
    """

    #: | Field width in meters. The field spans ``[0, width) x [0, height)``.
    GRIDTREE_FIELD_WIDTH = 100.0

    #: | Field height in meters.
    GRIDTREE_FIELD_HEIGHT = 100.0

    #: | Side of a square grid cell in meters.
    GRIDTREE_CELL_SIZE = 25.0

    GRIDTREE_BASE_STATION_X = 50.0

    #: | Base station position.
    #:
    #: .. This hack shows a header above the _next_ section
    #: .. code-block:: none
    #:
    #:     Clustering settings
    GRIDTREE_BASE_STATION_Y = 50.0

    #: | Smallest allowed number of top-level clusters (m).
    GRIDTREE_MIN_CLUSTERS = 1

    #: | Largest allowed number of top-level clusters (M).
    GRIDTREE_MAX_CLUSTERS = 4

    #: | Number of top-level clusters to build. Must lie within [m, M].
    GRIDTREE_TARGET_CLUSTERS = 1

    #: | A cluster holding more alive nodes than this is broken into sub-clusters.
    GRIDTREE_SPLIT_THRESHOLD = 10

    #: | Head election policy: ``'weighted'`` (density x residual energy)
    #: | or ``'random'`` (seeded rotation).
    GRIDTREE_HEAD_POLICY = 'weighted'

    #: | Neighbourhood radius used by the weighted head policy.
    GRIDTREE_DENSITY_RANGE = 30.0

    GRIDTREE_KMEANS_TOL = 1e-9
    GRIDTREE_KMEANS_MAX_ITER = 100

    #: | Number of seeded K-Means starts; the smallest WCSS wins.
    #:
    #: .. This hack shows a header above the _next_ section
    #: .. code-block:: none
    #:
    #:     Radio and energy settings
    GRIDTREE_KMEANS_RESTARTS = 10

    GRIDTREE_TRANSMISSION_RANGE = 30.0

    #: | Energy units every node starts with.
    GRIDTREE_INITIAL_ENERGY = 10000.0

    #: | Energy units charged per transmission hop.
    GRIDTREE_UNIT_COST = 30.0

    #: | A cluster covers every node within this distance of its centroid.
    GRIDTREE_COVERAGE_RADIUS = 50.0

    #: | Headers within this distance of each other (or of the base station) are linked.
    #:
    #: .. This hack shows a header above the _next_ section
    #: .. code-block:: none
    #:
    #:     Reporting settings
    GRIDTREE_COMM_RANGE = 150.0

    #: | A node reports only when its reading moved by more than this delta.
    GRIDTREE_REPORT_DELTA = 0.0

    #: | A header forwards only when its filtered value moved by more than this delta.
    #: | None: always forward.
    GRIDTREE_FORWARD_DELTA = None

    #: | Send every report to one covering cluster only.
    GRIDTREE_DEDUP = True

    #: | Filter applied by headers and by queries: ``'avg'``, ``'min'`` or ``'max'``.
    #:
    #: .. This hack shows a header above the _next_ section
    #: .. code-block:: none
    #:
    #:     Run settings
    GRIDTREE_AGGREGATE = 'avg'

    GRIDTREE_SEED = 0

    #: | Number of ticks to simulate. None: every tick of the trace.
    GRIDTREE_TICKS = None

    #: | Warm-up ticks, numbered -B..-1, simulated but left out of reported energy series.
    GRIDTREE_BOOTSTRAP_TICKS = 0

    #: | Trace CSV path, relative to the config file.
    GRIDTREE_TRACE_PATH = None

    #: | Free text printed in report headers.
    GRIDTREE_REPORT_NOTE = ''
