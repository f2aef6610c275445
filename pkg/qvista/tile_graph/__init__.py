from .errors import TileGraphError, UnknownVertex, TripleBudgetExceeded
from .graph import TileGraph, build_tile_graph, gromov_product
from .hyperbolicity import ScanMode, HyperbolicityResult, hyperbolicity_constant
from .comparison import GromovComparison, extended_proximity, extended_proximity_matrix, \
    extended_triangle_constant, compare_m_gromov, hyperbolicity_bound
from .clusters import GraphMapCheck, cluster, cluster_cover_sequence, graph_map_check
from .service import TileGraphService
