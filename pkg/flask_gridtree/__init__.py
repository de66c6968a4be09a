__title__       = 'Flask-GridTree'
__description__ = 'Energy-efficient grid-based hierarchical clustering index trees for sensor fields.'
__version__     = '1.0.0'
__url__         = 'https://github.com/gridtree/Flask-GridTree'
__author__      = 'GridTree developers'
__author_email__= 'gridtree-dev@example.com'
__maintainer__  = 'GridTree developers'
__license__     = 'MIT'
__copyright__   = '(c) 2024 GridTree developers'

# Define Flask-GridTree Exceptions early on
class GridTreeError(Exception):
    pass

class ConfigError(GridTreeError):
    pass

class TraceError(GridTreeError):
    pass

class QueryError(GridTreeError):
    pass

class SimulationError(GridTreeError):
    pass


# Field and head-election errors
class FieldError(SimulationError):
    pass

class InvalidCellSizeError(FieldError):
    pass

class NodeOutOfBoundsError(FieldError):
    pass

class DuplicateNodeError(FieldError):
    pass

class UnknownNodeError(FieldError):
    pass

class DeadNodeError(FieldError):
    pass

class NoAliveMemberError(FieldError):
    pass


# Clustering, routing and coverage errors
class TreeError(SimulationError):
    pass

class KMeansError(SimulationError):
    pass

class CoverageError(SimulationError):
    pass

class RoutingError(SimulationError):
    pass

class AggregateError(SimulationError):
    pass


from .field import Field, GridCell, Rect, SensorNode, compute_cell_weight, partition_field
from .head_election import HeadPolicy, elect_head, node_density
from .kmeans import KMeansResult, kmeans
from .index_tree import (Cluster, ClusterBounds, IndexTree, build_clusters, build_index_tree,
                         serialize_tree, should_split, split_cluster)
from .routing import shortest_route
from .dedup import CoverageMap, assign_exclusive, detect_overlaps
from .energy_ledger import DropEvent, EnergyLedger, charge_transmission
from .traces import TraceTable, read_traces
from .simulation import (Deployment, ReportRule, ScenarioConfig, SimulationResult, TickState,
                         deploy, filter_at_head, run, step, threshold_report)
from .query_engine import (RegionQuery, accuracy_sweep, answer_query, node_accuracy, parse_query,
                           route_query)
from .gridtree_manager import GridTreeManager

# Export Flask-GridTree signals
from .signals import *
